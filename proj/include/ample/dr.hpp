#pragma once
// Directed graphs and rank-k colored graphs with unique square factorization,
// finite path enumeration, a cylinder-set calculus, the truncated two-sided
// bisection groupoid with its edge-word cocycle, purity and local-properness
// certificates, and the same-degree pair subgroupoid.

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ample/gpd.hpp"
#include "ample/grp.hpp"

namespace ample::dr {

// Edge with designated range (`to`) and source (`from`) vertices. Paths chain
// to(e_{i+1}) == from(e_i): a path reads left to right starting at its range.
struct Edge {
  int to = 0;
  int from = 0;
};

struct DirectedGraph {
  int numVertices = 0;
  std::vector<Edge> edges;
  std::vector<std::string> vertexLabels;  // defaulted v0, v1, ...
  std::vector<std::string> edgeLabels;    // defaulted e0, e1, ...
};

// Every vertex is the range of at least one edge, so paths of every length
// start at every vertex.
bool isSourceFree(const DirectedGraph&);
// Checks index ranges, label counts, and source-freeness.
std::optional<std::string> validateGraph(const DirectedGraph&);
void requireValidGraph(const DirectedGraph&);
// A[v][w] = number of edges with range v and source w.
std::vector<std::vector<int>> adjacency(const DirectedGraph&);

// Finite path; `vertex` is the range, and the empty edge list is the vertex
// itself. Valid iff the edges chain and the first edge's range is `vertex`.
struct GPath {
  int vertex = 0;
  std::vector<int> edges;
  friend bool operator==(const GPath&, const GPath&) = default;
  friend auto operator<=>(const GPath&, const GPath&) = default;
};

GPath vertexPath(int vertex);
bool validPath(const DirectedGraph&, const GPath&);
int pathSource(const DirectedGraph&, const GPath&);
std::string pathName(const DirectedGraph&, const GPath&);
// Shorter-first, then lexicographic in edge ids, then by range vertex.
bool pathBefore(const GPath&, const GPath&);
// All paths of length <= maxLen, sorted by pathBefore.
std::vector<GPath> enumeratePaths(const DirectedGraph&, int maxLen);
// head followed by tail; requires pathSource(head) == tail.vertex.
GPath concatPath(const DirectedGraph&, const GPath& head, const GPath& tail);

// --- cylinder calculus ------------------------------------------------------
// A compact open subset of the infinite path space: a finite union of
// cylinders, kept pairwise disjoint and canonically merged by
// normalizeCompactOpen (maximal antichain form).
using CompactOpen = std::vector<GPath>;

// Two cylinders meet iff one path extends the other; the meet is the deeper
// cylinder. nullopt = disjoint.
std::optional<GPath> cylinderMeet(const GPath&, const GPath&);
// Z(mu) minus Z(nu) as pairwise-disjoint cylinders via sibling expansion;
// the result is re-verified extensionally on the depth-(|mu|+|nu|) paths.
CompactOpen cylinderDiff(const DirectedGraph&, const GPath& mu,
                         const GPath& nu);

CompactOpen normalizeCompactOpen(const DirectedGraph&, CompactOpen parts);
CompactOpen meetCompactOpen(const DirectedGraph&, const CompactOpen&,
                            const CompactOpen&);
CompactOpen uniteCompactOpen(const DirectedGraph&, const CompactOpen&,
                             const CompactOpen&);
CompactOpen diffCompactOpen(const DirectedGraph&, const CompactOpen&,
                            const CompactOpen&);
bool sameCompactOpen(const DirectedGraph&, const CompactOpen&,
                     const CompactOpen&);
// Image of O under the prefix-replacement bijection Z(mu)->Z(lambda) of the
// bisection (lambda, mu); requires O within Z(mu).
CompactOpen transportCompactOpen(const DirectedGraph&, const GPath& lambda,
                                 const GPath& mu, const CompactOpen& O);

// --- truncated bisection groupoid -------------------------------------------
// Arrows are source-compatible path pairs (lambda, mu) with both lengths
// <= maxLen; composition is defined exactly on a shared middle path, making
// the table the union over vertices of the pair groupoid on same-source
// paths. Overlapping products live in composeComparable, capped at maxLen.
struct DrTruncation {
  DirectedGraph graph;
  int maxLen = 0;
  std::vector<GPath> paths;                     // index space, pathBefore order
  std::vector<std::pair<int, int>> bisections;  // arrow -> (lambda, mu) ids
  gpd::FiniteGroupoid G;
  int pathIndex(const GPath&) const;         // -1 when absent
  int arrowIndex(int lambda, int mu) const;  // -1 when not source-compatible
};
DrTruncation buildDrTruncation(const DirectedGraph&, int maxLen);

// Z(lambda,mu)·Z(alpha,nu) when one of mu, alpha extends the other:
// alpha = mu.xi gives Z(lambda.xi, nu); mu = alpha.xi gives Z(lambda, nu.xi).
// nullopt when the pair is not comparable or the product exceeds maxLen.
std::optional<int> composeComparable(const DrTruncation&, int a, int b);

// The edge-word cocycle: value at (lambda, mu) is the reduced word
// letters(lambda) · letters(mu)^{-1} in the free group on the edge set.
gpd::WordCocycle flamCocycle(const DrTruncation&);
// Length difference |lambda| - |mu| (the degree of the arrow).
int degreeDiff(const DrTruncation&, int arrow);

// --- purity and properness ----------------------------------------------------
enum class TriState { Yes, No, Unknown };

struct PurityCertificate {
  TriState pure = TriState::Unknown;
  // "edge-words" (exact: distinct positive words never cancel), "degree"
  // (every non-unit arrow has nonzero degree), or a witness/budget note.
  std::string evidence;
  int maxLen = 0;
  int checkedArrows = 0;
};
// Exact purity over the depth-maxLen truncation of a validated graph: the
// cocycle value reduces to the identity only on units. A failure indicates a
// reduction bug and throws logic_error.
PurityCertificate purityCheckGraph(const DirectedGraph&, int maxLen);

struct LocalPropernessCertificate {
  bool ok = false;
  int maxLen = 0;
  int window = 0;  // length of the finite stand-in paths (2*maxLen, min 1)
  int bisectionsChecked = 0;
  std::string failure;
};
// For every bisection (lambda, mu) at depth <= maxLen, checks extensionally
// on window-length paths that the elements with range in Z(lambda), source in
// Z(mu) and cocycle value letters(lambda)·letters(mu)^{-1} are exactly the
// pairs (lambda.z, mu.z).
LocalPropernessCertificate localPropernessCertificate(const DirectedGraph&,
                                                      int maxLen);

// --- same-degree pair subgroupoid ---------------------------------------------
struct SameDegreeReport {
  gpd::PairSet H;  // pairs of arrows with equal degree
  bool subgroupoid = false;
  bool diagonal = false;
  std::string violation;
  int fibFull = 0;  // fiber count of H against the full arrow set
  std::vector<std::pair<int, int>> classSizes;  // (degree, arrow count)
  int cap = 0;                                  // recorded truncation depth
};
SameDegreeReport sameDegreeDeltaBarH(const DrTruncation&);

// --- rank-k colored graphs ------------------------------------------------------
struct KEdge {
  int to = 0;
  int from = 0;
  int color = 0;
};

// The two-edge paths a.b and c.d are declared equal; the colors of (a, b)
// swap across to (c, d).
struct KSquare {
  int a = 0;
  int b = 0;
  int c = 0;
  int d = 0;
};

struct KGraph {
  int rank = 1;
  int numVertices = 0;
  std::vector<KEdge> edges;
  std::vector<KSquare> squares;
  std::vector<std::string> vertexLabels;
  std::vector<std::string> edgeLabels;
};

// Index ranges, per-color source-freeness, endpoint/color compatibility of
// every square, the exactly-one-square-per-mixed-color-pair rule (in both
// orientations), and for rank >= 3 the associativity of square rewriting on
// every composable tricolored triple.
std::optional<std::string> validateKGraph(const KGraph&);
void requireValidKGraph(const KGraph&);

// Paths reuse GPath with edge ids into KGraph::edges.
bool validKPath(const KGraph&, const GPath&);
int kPathSource(const KGraph&, const GPath&);
std::vector<int> kPathDegree(const KGraph&, const GPath&);  // per color
std::string kPathName(const KGraph&, const GPath&);

// Swap the mixed-color edges at positions i, i+1 via the square table;
// nullopt when the pair is same-colored.
std::optional<GPath> applySquare(const KGraph&, const GPath&, int i);
// Full equivalence class under square swaps, or nullopt when it would exceed
// `budget` members.
std::optional<std::vector<GPath>> squareClass(const KGraph&, const GPath&,
                                              int budget);
// Least class member under (color sequence, edge ids); nullopt on budget.
std::optional<GPath> kNormalForm(const KGraph&, const GPath&, int budget);
// Three-valued path equality: No on degree/endpoint mismatch, Yes/No by
// class membership when the class closes within budget, Unknown otherwise.
TriState kPathEqual(const KGraph&, const GPath&, const GPath&, int budget);

// Truncated bisection groupoid over normal-form morphisms of total degree
// <= maxDegree; same table shape as DrTruncation.
struct KTruncation {
  KGraph graph;
  int maxDegree = 0;
  std::vector<GPath> paths;  // normal forms
  std::vector<std::pair<int, int>> bisections;
  gpd::FiniteGroupoid G;
  int pathIndex(const GPath&) const;
  int arrowIndex(int lambda, int mu) const;
};
// nullopt when a normal form exceeds the rewrite budget.
std::optional<KTruncation> buildKTruncation(const KGraph&, int maxDegree,
                                            int budget);

gpd::WordCocycle flamCocycleK(const KTruncation&);
std::vector<int> degreeDiffK(const KTruncation&, int arrow);
// Signed per-color letter count of a free edge word.
std::vector<int> colorCount(const KGraph&, const grp::Word& w);

// Rank-1 inputs delegate to the exact graph check. Otherwise: every non-unit
// arrow killed by a degree mismatch gives a pure-up-to-maxDegree certificate
// with "degree" evidence; surviving equal-degree candidates (or a blown
// rewrite budget) yield Unknown with the first witness.
PurityCertificate purityCheckKGraph(const KGraph&, int maxDegree, int budget);

// A rank-1 KGraph as a DirectedGraph (used by the delegation above).
DirectedGraph asDirectedGraph(const KGraph&);

// --- loop structure -----------------------------------------------------------
// First-return loops at a vertex: paths with range = source = v whose proper
// tails never pass through v. Distinct first-return loops are never
// prefix-comparable.
struct LoopSearch {
  bool ok = false;
  int failingVertex = -1;
  // Two shortest (length, then edge-lex) first-return loops per vertex when
  // ok; indexed by vertex.
  std::vector<std::pair<GPath, GPath>> loops;
};
// Requires a validated graph. Search explores paths by length with
// reachability pruning; `nodeBudget` caps explored states defensively.
LoopSearch independentLoopsCheck(const DirectedGraph&,
                                 int nodeBudget = 200000);

}  // namespace ample::dr
