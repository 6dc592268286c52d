#pragma once
// Finite truncations of the coproduct groupoid of a quotient chain: the
// bundle of level groups, its action groupoid on the compatible-sequence
// space, shadow basic sets, equicontinuity certificates, and the forced-pair
// witnesses showing no diagonal-containing open subgroupoid stays fiberwise
// finite as the ball radius grows.

#include <optional>
#include <string>
#include <vector>

#include "ample/gpd.hpp"
#include "ample/grp.hpp"

namespace ample::hls {

// Group bundle over levels 0..depth: arrow (k, g) with g in the level-k group.
struct HlsTruncation {
  grp::QuotientChain chain;
  int depth = 0;
  bool hasTop = false;  // extra top fiber carrying a copy of the deepest group
  gpd::FiniteGroupoid G;
  std::vector<int> levelOffset;  // level -> first arrow id (top fiber last)
  int arrowId(int level, int element) const;
  int levelOf(int arrow) const;
  int elementOf(int arrow) const;
  int numLevels() const { return depth + 1 + (hasTop ? 1 : 0); }
};
HlsTruncation buildHls(const grp::GroupPtr& chainGroup, int depth,
                                 bool withTopFiber = false);

// Left-translation action groupoid over levels 0..depth: arrows (k, g, x)
// with point x in the level-k group, acting x -> g x.
struct AfsTruncation {
  grp::QuotientChain chain;
  int depth = 0;
  gpd::FiniteGroupoid G;
  std::vector<int> levelArrowOffset;  // level -> first arrow id
  std::vector<int> levelPointOffset;  // level -> first point index
  int numPoints = 0;
  int pointIndex(int level, int element) const;
  int pointUnit(int level, int element) const;  // unit arrow id of a point
  std::pair<int, int> pointOf(int unitArrow) const;  // (level, element)
  int arrowId(int level, int g, int x) const;
  // (level, g, x) of an arrow.
  struct Arrow {
    int level, g, x;
  };
  Arrow arrowOf(int arrow) const;
};
AfsTruncation buildAfs(const grp::GroupPtr& chainGroup, int depth);

// Shadow of a level-k element: all points at levels k..depth factoring onto
// it. Returned as (level, element) pairs in level order.
std::vector<std::pair<int, int>> shadow(const grp::QuotientChain& chain, int k,
                                        int element, int depth);

// --- equicontinuity -------------------------------------------------------------
struct ShadowRef {
  int level = 0;
  int element = 0;
};

struct EquicontinuityCertificate {
  bool ok = false;
  std::string failure;
  // The single verified neighborhood: the shadow of the basepoint component
  // at the deepest cover level. Reused for every ball element.
  ShadowRef V;
  std::vector<std::pair<int, int>> vPoints;
  struct Trace {
    grp::Word gamma;
    int coverIndex = -1;  // shadow of `cover` absorbing gamma * ({x0} x V)
  };
  std::vector<Trace> trace;
};

// Verifies the chain is coherent, that the level-wise squares of `cover`
// contain the deepest-level diagonal, and that for every gamma in the
// radius-`radius` ball over S the translate of {x0} x V lands inside one
// cover shadow, with V independent of gamma. `basepoint` is a compatible
// element sequence (levels 0..depth).
EquicontinuityCertificate equicontinuityCertificate(
    const grp::GroupPtr& chainGroup, int depth, const std::vector<grp::Word>& S,
    int radius, const std::vector<int>& basepoint,
    const std::vector<ShadowRef>& cover);

// --- forced-pair witness -----------------------------------------------------------
// Pair of action arrows: a finite-level arrow (level, g, x) and a symbolic
// deep-layer arrow (gamma, y) over canonical words. Deep-layer arrows only
// ever compose with each other, via word arithmetic.
struct SymbolicArrow {
  grp::Word gamma;
  grp::Word basePoint;
};

struct ForcedPair {
  AfsTruncation::Arrow finite;
  SymbolicArrow deep;
  // Generator-step factorization whose componentwise product replays to the
  // forced pair.
  std::vector<AfsTruncation::Arrow> finiteSteps;
  std::vector<SymbolicArrow> deepSteps;
};

struct DeltaViolationCertificate {
  int level = 0;       // the finite level n
  int radius = 0;
  std::vector<grp::Word> ball;  // canonical ball elements
  std::vector<ForcedPair> pairs;
  std::size_t fiberLowerBound = 0;  // = ball size; all pairs share one source
};

// Builds the certificate for the chain's action truncation: pairs
// ((n, image of gamma, identity), (gamma, identity sequence)) for gamma in
// the radius-`radius` ball over S, each justified by its generator steps.
DeltaViolationCertificate deltaViolationWitness(const grp::GroupPtr& chainGroup,
                                                const std::vector<grp::Word>& S,
                                                int radius, int level);
// Replays every forced pair through the truncation tables and word
// arithmetic; returns the first discrepancy, or nullopt when the certificate
// checks out (distinct pairs, common source, step products, count).
std::optional<std::string> verifyDeltaViolation(
    const DeltaViolationCertificate& cert, const grp::GroupPtr& chainGroup);

// --- locally finite subgroupoid -----------------------------------------------------
struct LocallyFiniteReport {
  HlsTruncation trunc;
  gpd::PairSet H;
  bool subgroupoid = false;
  bool diagonal = false;
  std::string violation;
  // Bookkeeping mirroring the compact-piece decomposition: for each level n,
  // the least m >= n whose quotient map is injective on F_n (-1 when the
  // truncation is too shallow), plus the fiber count of H against the full
  // arrow set.
  std::vector<int> injectivityLevel;
  int fibFull = 0;
};

// H = union over n <= depth and gamma in F_n of squares of the basic sets
// N(n, gamma) restricted to the truncation. Requires each F_n (word list in
// the chain base) to contain the identity and be closed under product and
// inverse, and F_n within F_{n+1}; surjectivity of F_n onto level n shows up
// as the diagonal audit.
LocallyFiniteReport locallyFiniteDeltaBarH(
    const grp::GroupPtr& chainGroup,
    const std::vector<std::vector<grp::Word>>& fChain, int depth);

// --- group bundle vs trivial partial action ------------------------------------------
struct BundleActionIso {
  gpd::IsoStatus status = gpd::IsoStatus::NonIsomorphic;
  std::string reason;
  int leftArrows = 0;
  int rightArrows = 0;
  std::vector<int> arrowMap;  // when found
};
// For a chain with elementary-abelian 2-group levels: compares the level
// bundle (with a top fiber copying the deepest level) against the
// transformation groupoid of the canonical trivial action of the bit-vector
// group on {0..actionDepth, top}. actionDepth defaults to depth; a mismatch
// yields a certified non-isomorphism via the unit invariants.
BundleActionIso hlsVsPartialActionIso(const grp::GroupPtr& chainGroup,
                                         int depth, int actionDepth = -1);

}  // namespace ample::hls
