#pragma once
// Partial actions of a group on a finite point set: per-element clopen
// domains with bijections, the transformation groupoid they generate, and
// the correspondence with pure word-valued cocycles on ample groupoids.

#include <optional>
#include <string>
#include <vector>

#include "ample/gpd.hpp"
#include "ample/grp.hpp"

namespace ample::pact {

// Support entry for a group element gamma: the domain of gamma's action is
// dom (the set conventionally written with the inverse index), and
// img[i] is where gamma sends dom[i].
struct PactEntry {
  grp::Word gamma;
  std::vector<int> dom;
  std::vector<int> img;
};

struct PartialActionSpec {
  grp::GroupPtr group;
  int numPoints = 0;
  std::vector<std::string> pointLabels;  // optional
  std::vector<PactEntry> entries;
};

struct PactValidation {
  bool ok = false;
  std::string axiom;      // which requirement failed
  std::string witness;    // concrete failing data
  // On success: entries sorted canonically, domains sorted, empty non-identity
  // entries dropped. On a missing-product failure: the same spec with the
  // forced entries appended, offered to the caller instead of silently used.
  std::optional<PartialActionSpec> normalized;
  std::optional<PartialActionSpec> completion;
};

// Checks: identity entry acts as the identity on all points; entries are
// inverse-closed with inverse maps; for every pair (eta, gamma) the points
// moved by gamma into dom(eta) are inside dom(eta*gamma) and the maps
// compose there. A forced-but-missing product entry is rejected with a
// completion suggestion.
PactValidation validatePartialAction(const PartialActionSpec& spec);

// Arrow of the transformation groupoid: group element by entry, point acted on.
struct TransArrow {
  int entry = 0;  // index into spec.entries (normalized order)
  int point = 0;  // x in dom of that entry; the arrow is x -> gamma(x)
};

struct TransformationGroupoid {
  PartialActionSpec spec;            // normalized
  gpd::FiniteGroupoid G;
  std::vector<TransArrow> arrows;    // arrow id -> (entry, point)
  std::vector<int> unitOfPoint;      // point -> unit arrow id
  gpd::WordCocycle cocycle;          // canonical cocycle (gamma per arrow)
  int arrowId(int entry, int point) const;  // -1 when absent
};

// Builds the groupoid with arrows (gamma, x): s = x, r = gamma(x),
// (eta, gamma x) * (gamma, x) = (eta gamma, x). Throws on an invalid spec.
TransformationGroupoid buildTransformationGroupoid(const PartialActionSpec& spec);

// --- pure cocycles ------------------------------------------------------------
enum class PurityStatus { Pure, Impure, Malformed };
struct PurityReport {
  PurityStatus status = PurityStatus::Malformed;
  std::string witness;  // failing arrow / pair description
  int witnessArrow = -1;
};
// Malformed (not a cocycle) is distinguished from impure (a non-unit arrow
// with identity value).
PurityReport checkPureCocycle(const gpd::WordCocycle& c);

struct CocycleAction {
  PartialActionSpec spec;
  // Isomorphism from the input groupoid onto the rebuilt transformation
  // groupoid of `spec`.
  std::vector<int> isoMap;
};
// Inverts the construction: domains r(c^{-1}(gamma)), maps s(g) -> r(g).
// Verifies each fiber is a bisection and that the rebuilt groupoid is
// isomorphic to the input via g -> (c(g), s(g)). Throws when c is not pure.
CocycleAction cocycleToPartialAction(const gpd::WordCocycle& c);

// --- property Delta witnesses ----------------------------------------------------
struct CanonicalDeltaH {
  TransformationGroupoid trans;
  gpd::PairSet H;  // pairs of arrows carrying the same group element
};
// The canonical open subgroupoid H = {((gamma,x),(gamma,y))} of G x G.
CanonicalDeltaH canonicalDeltaH(const PartialActionSpec& spec);

struct DeltaAuditReport {
  bool subgroupoid = false;
  bool diagonal = false;
  // Action graphs on a finite discrete set are always closed, so the audit
  // can certify the stronger fiberwise-finite property unconditionally.
  bool closedGraphs = true;
  std::string violation;
  int fibKByC = 0;          // #fib of H n (G(K) x C)
  int fibCByK = 0;          // #fib of H n (C x G(K))
  int measured = 0;         // max of the two
  std::size_t movedElements = 0;  // |pr_Gamma(C)| when a cocycle is supplied
  int bound = 0;            // 2 * movedElements
  bool boundHolds = false;  // measured <= bound (only when cocycle supplied)
};
// Audits an H in G x G (pair representation) against a compact piece: K a
// unit subset, C an arrow subset of G(K). When `c` is supplied, also checks
// the 2*|pr(C)| bound satisfied by the canonical H of a partial action.
DeltaAuditReport deltaAudit(const gpd::FiniteGroupoid& G, const gpd::PairSet& H,
                            const std::vector<int>& unitArrowsK,
                            const gpd::ArrowSubset& C,
                            const gpd::WordCocycle* c = nullptr);

}  // namespace ample::pact
