#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ample/dr.hpp"

namespace ample::kzero {

// Class-group oracle for a finite graph: Smith form of I - A^T over exact
// 64-bit integers, with the unimodular change-of-basis pair kept and the
// factorization re-verified by multiplication.
struct K0Group {
  int numVertices = 0;
  std::vector<std::vector<long long>> relation;  // I - A^T
  std::vector<std::vector<long long>> U, V;      // U * relation * V = diag
  std::vector<long long> diag;                   // divisor-chained, nonnegative
  std::vector<long long> torsion;                // diagonal entries > 1
  int freeRank = 0;                              // zero diagonal entries
  std::vector<int> torsionPos, freePos;          // rows of U per coordinate
};

K0Group snfOracle(const dr::DirectedGraph&);

// Reduced coordinates of a vertex vector: torsion entries mod their modulus,
// then the free entries, unit factors dropped.
std::vector<long long> classOf(const K0Group&,
                               const std::vector<long long>& vertexVector);
// Class of a compact open set: one source-vertex unit per cylinder part.
std::vector<long long> classOfSet(const K0Group&, const dr::DirectedGraph&,
                                  const dr::CompactOpen&);
// Arithmetic directly on reduced coordinates.
std::vector<long long> addClass(const K0Group&, std::vector<long long> a,
                                const std::vector<long long>& b);
std::vector<long long> negClass(const K0Group&, std::vector<long long> a);
bool zeroClass(const std::vector<long long>&);

// A compact open bisection list moving sU onto rU, one (range, source)
// cylinder pair per part.
struct BisectionWitness {
  std::vector<std::pair<dr::GPath, dr::GPath>> bisections;
  dr::CompactOpen sU, rU;
  std::string role;
};

// Two bisections with source O and disjoint ranges inside O, built from the
// two least first-return loops at each part's source vertex.  Everything is
// re-verified with the cylinder calculus.  O must be nonempty.
struct ParadoxicalPair {
  BisectionWitness U1, U2;
};
ParadoxicalPair paradoxicalWitness(const dr::DirectedGraph&,
                                   const dr::CompactOpen& O);

// Witness for [O1] + [O2]: the plain union when the sets are disjoint,
// otherwise both are relocated into disjoint loop corners first.
struct AddResult {
  dr::CompactOpen result;
  BisectionWitness U1, U2;
  bool disjoint = false;  // no relocation was needed
};
AddResult addWitness(const dr::DirectedGraph&, const K0Group&,
                     const dr::CompactOpen& O1, const dr::CompactOpen& O2);

// Witness for -[O]: two disjoint copies of O are carved out of O itself and
// the leftover O' = O minus both copies satisfies [O'] = -[O].
struct NegResult {
  dr::CompactOpen result;
  ParadoxicalPair used;
};
NegResult negWitness(const dr::DirectedGraph&, const K0Group&,
                     const dr::CompactOpen& O);

// Breadth-first search for the shortest nonempty signed-sum expression of the
// target over vertex classes (depth capped at 3 * (numVertices + sum of
// |target coordinates|), reported when exceeded), then a concrete witness:
// the positive and negative summands are folded with addWitness separately
// and joined through one negWitness.
struct RealizeStep {
  std::string op;  // "+v" / "-v" with the vertex label, then "combine"
  dr::CompactOpen state;
  std::vector<long long> classNow;
};
struct RealizeResult {
  bool ok = false;
  std::string reason;
  std::vector<RealizeStep> steps;
  dr::CompactOpen witness;
};
RealizeResult realizeClass(const dr::DirectedGraph&, const K0Group&,
                           const std::vector<long long>& target);

// Realize every class of the oracle group: all of them when it is finite,
// a coordinate window when free coordinates are present.
struct ClosureReport {
  bool ok = false;
  int realized = 0;
  int window = 0;
  std::string failure;
};
ClosureReport realizedClassClosure(const dr::DirectedGraph&, int window = 1);

}  // namespace ample::kzero
