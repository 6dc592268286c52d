#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ample/gpd.hpp"
#include "ample/grp.hpp"

namespace ample::coarse {

using PairSet = gpd::PairSet;

// A coarse structure on a finite labeled point set, presented by generating
// relations.  The structure itself is the downward closure of the maximal
// entourage generated from them.
struct FiniteCoarseSpace {
  int numPoints = 0;
  std::vector<std::string> pointLabels;  // optional; sized numPoints when set
  std::vector<PairSet> generators;
};

std::optional<std::string> validateSpace(const FiniteCoarseSpace&);
void requireValidSpace(const FiniteCoarseSpace&);

// Closure of the diagonal and the generators under inverses, composition and
// union, run to a fixed point.  Sorted pair list.
PairSet maximalEntourage(const FiniteCoarseSpace&);

// Membership test for the generated structure: E is an entourage exactly when
// it sits inside the maximal one.
bool entourageMember(const FiniteCoarseSpace&, const PairSet& E);

// Uniform local finiteness data: the largest section size of each symmetrized
// generator (with the diagonal added) and of the maximal entourage.
struct UlfProfile {
  std::vector<int> generatorBounds;
  int maxBound = 0;
};
UlfProfile ulfProfile(const FiniteCoarseSpace&);

// A point map into a group, one word per point.
struct PointMap {
  grp::GroupPtr target;
  std::vector<grp::Word> image;
};

std::optional<std::string> validatePointMap(const FiniteCoarseSpace&,
                                            const PointMap&);

// Difference-label sets S(E) = { f(x) f(y)^{-1} : (x, y) in E } per generator.
// Bounded label sets are the evidence that f transports the structure.
struct LabelSetReport {
  bool bounded = true;
  int budget = 0;
  std::vector<std::vector<std::string>> labels;  // per generator, sorted
  int blownGenerator = -1;  // first generator whose label set exceeds budget
};
LabelSetReport coarseMapCheck(const FiniteCoarseSpace&, const PointMap& f,
                              int labelBudget);

// The pair groupoid of the maximal entourage together with the difference
// labeling c(x, y) = f(x) f(y)^{-1}.  Purity of c is exactly injectivity of f
// on each component; the first violating pair is reported.
struct MapCocycle {
  gpd::FiniteGroupoid G;
  PairSet arrows;  // arrow id -> point pair (x, y); arrow runs y -> x
  std::vector<std::string> pointLabels;
  grp::GroupPtr target;
  std::vector<grp::Word> values;
  bool pure = false;
  std::string witness;  // labels of an off-diagonal pair with equal images
};
MapCocycle mapToCocycle(const FiniteCoarseSpace&, const PointMap& f);

// Rebuild a point map from a difference labeling: f(x) = c(x, basepoint) on
// the basepoint's component.  Points outside it are reported, not invented.
struct RecoveredMap {
  bool total = false;
  std::vector<char> covered;
  PointMap f;  // identity word on uncovered points
  std::vector<std::string> skipped;
};
RecoveredMap cocycleToMap(const MapCocycle&, int basepoint);

// A difference labeling on a growing finite window {0, ..., numPoints-1},
// given as an explicit value table.
struct WindowCocycle {
  grp::GroupPtr target;
  int numPoints = 0;
  std::vector<std::vector<grp::Word>> value;  // value[x][y]
};

std::optional<std::string> validateWindowCocycle(const WindowCocycle&);

// Fiber growth of c^{-1}(gamma) across a window family, with an evidence tag
// per gamma: "diagonal" for the identity, "non-proper evidence" for
// nondecreasing growth, "proper evidence" for constant counts, otherwise
// "inconclusive".
struct FiberGrowth {
  std::string gamma;
  std::vector<int> counts;  // one per window
  std::string evidence;
};
struct PropernessProfile {
  std::vector<int> windowSizes;
  std::vector<FiberGrowth> rows;
};
PropernessProfile propernessProfile(const std::vector<WindowCocycle>& windows,
                                    const std::vector<grp::Word>& gammas);

// Greedy refuter: walk the points in order, pairing point k with the least
// later index carrying a difference label not seen before.  An injective map
// into an infinite group never runs out of fresh labels, so on a finite
// window the walk ends by exhaustion, never by closure; the pair list is the
// escaping set.
struct RefuterResult {
  bool exhausted = false;
  PairSet pairs;                 // (k, n_k), 0-based point indices
  std::vector<grp::Word> labels;  // distinct by construction, re-verified
  std::string error;  // set when f is not injective or the target is too small
};
RefuterResult maximalRefuter(const PointMap& f);

}  // namespace ample::coarse
