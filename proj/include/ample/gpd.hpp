#pragma once
// Finite groupoids as explicit arrow tables. Units are arrows; source and
// range land in the units; composition g*h is defined exactly when
// s(g) = r(h) and is read right-to-left (h first, then g).

#include <complex>
#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "ample/grp.hpp"

namespace ample::gpd {

struct FiniteGroupoid {
  int n = 0;                    // number of arrows
  std::vector<int> src;         // arrow -> unit arrow id
  std::vector<int> rng;         // arrow -> unit arrow id
  std::vector<int> inv;         // arrow -> arrow
  std::vector<char> isUnit;     // arrow -> is an identity arrow
  std::vector<int> units;      // sorted ids of identity arrows
  std::unordered_map<std::int64_t, int> comp;  // (g,h) with s(g)=r(h) -> g*h
  std::vector<std::string> labels;             // optional, size n or empty

  std::int64_t key(int g, int h) const {
    return static_cast<std::int64_t>(g) * n + h;
  }
  bool composable(int g, int h) const { return src[g] == rng[h]; }
  int compose(int g, int h) const;  // throws when not composable
  std::vector<std::vector<int>> sourceFibers() const;  // unit idx -> arrows
  std::vector<std::vector<int>> rangeFibers() const;
  int unitIndex(int unitArrow) const;  // position in `units`
};

// Checks every axiom on the raw tables and returns the first violation, or
// nullopt: units are self-sourced identities, s/r land in units, inv is an
// involution swapping s and r, comp is defined exactly on {s(g)=r(h)}, unit
// laws, inverse laws, and associativity over all composable triples.
std::optional<std::string> validateGroupoid(const FiniteGroupoid& G);
// Same checks, throwing std::invalid_argument on the first violation.
void requireValid(const FiniteGroupoid& G);

// --- builders ----------------------------------------------------------------
FiniteGroupoid pairGroupoid(int points);
FiniteGroupoid groupAsGroupoid(const grp::GroupPtr& finiteGroup);
FiniteGroupoid disjointUnion(const FiniteGroupoid& A, const FiniteGroupoid& B);
FiniteGroupoid productGroupoid(const FiniteGroupoid& A, const FiniteGroupoid& B);

// Full subgroupoid over a subset of units (unit arrow ids). `arrowMap`, when
// given, receives old arrow id per new arrow.
FiniteGroupoid reduction(const FiniteGroupoid& G, const std::vector<int>& unitArrows,
                         std::vector<int>* arrowMap = nullptr);

// --- arrow subsets -----------------------------------------------------------
using ArrowSubset = std::vector<int>;  // sorted, deduplicated arrow ids

struct SubsetAudit {
  bool ok = true;
  std::string violation;  // first failure, empty when ok
};

// Closed under inverse and composition, and contains s(a), r(a) for a in A.
SubsetAudit isSubgroupoid(const FiniteGroupoid& G, const ArrowSubset& A);
// sup over units u of |A n G_u| + |A n G^u| (source plus range fiber), with
// one witnessing unit.
struct FibCount {
  int value = 0;
  int argmaxUnit = -1;
};
FibCount fibCount(const FiniteGroupoid& G, const ArrowSubset& A);
// s and r both injective on A.
bool isBisection(const FiniteGroupoid& G, const ArrowSubset& A);

// Arrows of the full subgroupoid over a unit subset ("G(K)").
ArrowSubset arrowsOverUnits(const FiniteGroupoid& G, const std::vector<int>& unitArrows);

// --- pair subsets of G x G ---------------------------------------------------
// Product arrows represented as component pairs, avoiding materializing the
// product table for large audits. All operations agree with running the
// plain subset operations on productGroupoid(G, G).
using PairSet = std::vector<std::pair<int, int>>;

SubsetAudit isSubgroupoidPairs(const FiniteGroupoid& G, const PairSet& H);
// Diagonal containment: (g, g) in H for every arrow g.
SubsetAudit containsDiagonal(const FiniteGroupoid& G, const PairSet& H);
struct PairFibCount {
  int value = 0;
  std::pair<int, int> argmaxUnit{-1, -1};
};
PairFibCount fibCountPairs(const FiniteGroupoid& G, const PairSet& H);

// --- homomorphisms -----------------------------------------------------------
struct GroupoidHom {
  const FiniteGroupoid* dom = nullptr;
  const FiniteGroupoid* cod = nullptr;
  std::vector<int> map;  // arrow -> arrow
};
// Units to units, compatible with s, r, inv and all defined compositions.
std::optional<std::string> validateHom(const GroupoidHom& h);

// --- positive type functions ---------------------------------------------------
struct PositiveTypeFn {
  const FiniteGroupoid* G = nullptr;
  std::vector<std::complex<double>> values;  // one per arrow
};

struct PositiveTypeReport {
  bool positive = false;
  int failingUnit = -1;          // unit arrow id of the first failing fiber
  double minEigenvalue = 0.0;    // over all fibers
  double tolerance = 0.0;        // absolute bound actually applied
  std::string reason;            // "hermitian" / "eigenvalue" when failing
};

// For every unit u with source fiber {g_1..g_m}, forms the Gram matrix
// M_ij = phi(g_i * g_j^{-1}) and checks it is Hermitian and has min eigenvalue
// >= -tol * max(1, max-row-sum norm of M).
PositiveTypeReport positiveTypeCheck(const PositiveTypeFn& phi, double tol = 1e-9);

// phi(h(.)) along a validated homomorphism; throws on an invalid hom.
PositiveTypeFn pullbackPositiveType(const PositiveTypeFn& phi, const GroupoidHom& h);

// Support profile of a function on G x G (values indexed a*n+b): sizes of
// supp n (G(K) x C) and supp n (C x G(K)).
struct SupportProfile {
  std::size_t kByC = 0;
  std::size_t cByK = 0;
};
SupportProfile properSupportProfile(const FiniteGroupoid& G,
                                    const std::vector<std::complex<double>>& productValues,
                                    const std::vector<int>& unitArrowsK,
                                    const ArrowSubset& C);

// --- isomorphism search --------------------------------------------------------
enum class IsoStatus { Found, NonIsomorphic, Exhausted };
struct IsoResult {
  IsoStatus status = IsoStatus::NonIsomorphic;
  std::vector<int> arrowMap;  // when Found: arrow of A -> arrow of B
  std::string reason;         // invariant mismatch or search note
};
// Backtracking over unit assignments then arrows, pruned by per-unit degree
// and isotropy-order invariants. `budget` caps visited search nodes.
IsoResult findIsomorphism(const FiniteGroupoid& A, const FiniteGroupoid& B,
                          long long budget = 2'000'000);

// --- word-valued cocycles ------------------------------------------------------
// A function to a group with decidable word problem, one value per arrow.
struct WordCocycle {
  const FiniteGroupoid* G = nullptr;
  grp::GroupPtr target;
  std::vector<grp::Word> values;
};
// Identity on units and multiplicative on all composable pairs; returns the
// first violation ("unit g", "pair (g,h)") or nullopt.
std::optional<std::string> validateCocycle(const WordCocycle& c);

}  // namespace ample::gpd
