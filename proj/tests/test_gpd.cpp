#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <algorithm>
#include <complex>
#include <random>
#include <set>
#include <vector>

#include "ample/fixtures.hpp"
#include "ample/gpd.hpp"
#include "ample/hls.hpp"
#include "ample/pact.hpp"
#include "doctest.h"

using namespace ample;

namespace {

gpd::ArrowSubset randomSubset(std::mt19937& rng, int n) {
  gpd::ArrowSubset out;
  for (int a = 0; a < n; ++a)
    if (std::uniform_int_distribution<int>(0, 1)(rng)) out.push_back(a);
  return out;
}

// Positive-type by construction: phi(g) = <v_{r(g)}, v_{s(g)}> for random
// complex unit vectors attached to the units.
gpd::PositiveTypeFn gramFunction(std::mt19937& rng, const gpd::FiniteGroupoid& G,
                                 int dim = 3) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::vector<std::vector<std::complex<double>>> vec(G.units.size());
  for (auto& v : vec) {
    v.resize(dim);
    for (auto& z : v) z = {gauss(rng), gauss(rng)};
  }
  gpd::PositiveTypeFn phi{&G, {}};
  phi.values.resize(G.n);
  for (int a = 0; a < G.n; ++a) {
    const auto& vr = vec[G.unitIndex(G.rng[a])];
    const auto& vs = vec[G.unitIndex(G.src[a])];
    std::complex<double> dot = 0.0;
    for (int i = 0; i < dim; ++i) dot += vr[i] * std::conj(vs[i]);
    phi.values[a] = dot;
  }
  return phi;
}

}  // namespace

TEST_CASE("pair groupoid tables satisfy every axiom") {
  for (int n = 1; n <= 5; ++n) {
    auto G = gpd::pairGroupoid(n);
    CHECK(G.n == n * n);
    CHECK(static_cast<int>(G.units.size()) == n);
    CHECK(!gpd::validateGroupoid(G).has_value());
  }
}

TEST_CASE("finite groups become one-unit groupoids") {
  auto G = gpd::groupAsGroupoid(fixtures::cyclicGroup(6));
  CHECK(G.n == 6);
  CHECK(G.units.size() == 1);
  CHECK(!gpd::validateGroupoid(G).has_value());
  // Every pair is composable through the single unit.
  CHECK(G.comp.size() == 36);
}

TEST_CASE("disjoint unions and products compose sizes") {
  auto P2 = gpd::pairGroupoid(2);
  auto Z2 = gpd::groupAsGroupoid(fixtures::cyclicGroup(2));

  auto U = gpd::disjointUnion(P2, Z2);
  CHECK(U.n == 4 + 2);
  CHECK(U.units.size() == 2 + 1);
  CHECK(!gpd::validateGroupoid(U).has_value());

  auto Z2xZ2 = gpd::productGroupoid(Z2, Z2);
  CHECK(Z2xZ2.n == 4);
  CHECK(Z2xZ2.units.size() == 1);
  CHECK(!gpd::validateGroupoid(Z2xZ2).has_value());

  auto P2xP2 = gpd::productGroupoid(P2, P2);
  CHECK(P2xP2.n == 16);
  CHECK(!gpd::validateGroupoid(P2xP2).has_value());

  auto point = gpd::pairGroupoid(1);
  auto GxPt = gpd::productGroupoid(P2, point);
  CHECK(GxPt.n == P2.n);
  CHECK(gpd::findIsomorphism(GxPt, P2).status == gpd::IsoStatus::Found);
}

TEST_CASE("validation pinpoints corrupted tables") {
  auto G = gpd::pairGroupoid(3);
  auto brokenInv = G;
  brokenInv.inv[1] = 1;  // arrow 0->1 declared self-inverse
  CHECK(gpd::validateGroupoid(brokenInv).has_value());

  auto brokenComp = G;
  REQUIRE(!brokenComp.comp.empty());
  // Redirect one defined composition to a wrong arrow.
  for (auto& [k, v] : brokenComp.comp) {
    v = (v + 1) % brokenComp.n;
    break;
  }
  CHECK(gpd::validateGroupoid(brokenComp).has_value());

  auto brokenUnit = G;
  brokenUnit.isUnit[1] = 1;  // non-identity arrow flagged as unit
  CHECK(gpd::validateGroupoid(brokenUnit).has_value());

  CHECK_THROWS_AS(gpd::requireValid(brokenInv), std::invalid_argument);
}

TEST_CASE("reduction keeps exactly the arrows between kept units") {
  std::mt19937 rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = std::uniform_int_distribution<int>(2, 5)(rng);
    auto G = trial % 2 == 0
                 ? gpd::pairGroupoid(n)
                 : gpd::disjointUnion(gpd::pairGroupoid(n),
                                      gpd::groupAsGroupoid(
                                          fixtures::cyclicGroup(3)));
    std::vector<int> keep;
    for (int u : G.units)
      if (std::uniform_int_distribution<int>(0, 1)(rng)) keep.push_back(u);
    std::vector<int> arrowMap;
    auto R = gpd::reduction(G, keep, &arrowMap);
    CHECK(!gpd::validateGroupoid(R).has_value());
    std::set<int> kept(keep.begin(), keep.end());
    int expected = 0;
    for (int a = 0; a < G.n; ++a)
      if (kept.count(G.src[a]) && kept.count(G.rng[a])) ++expected;
    CHECK(R.n == expected);
    for (int a = 0; a < R.n; ++a) {
      CHECK(kept.count(G.src[arrowMap[a]]));
      CHECK(kept.count(G.rng[arrowMap[a]]));
    }
  }
}

TEST_CASE("subgroupoid and bisection judgements on the pair groupoid") {
  auto G = gpd::pairGroupoid(3);
  gpd::ArrowSubset units(G.units.begin(), G.units.end());
  CHECK(gpd::isSubgroupoid(G, units).ok);
  CHECK(gpd::isBisection(G, units));

  gpd::ArrowSubset all(G.n);
  for (int a = 0; a < G.n; ++a) all[a] = a;
  CHECK(gpd::isSubgroupoid(G, all).ok);
  CHECK(!gpd::isBisection(G, all));
  CHECK(gpd::fibCount(G, all).value == 6);  // 3 in plus 3 out per unit
  CHECK(gpd::fibCount(G, units).value == 2);

  // A single non-unit arrow is not closed.
  int offDiag = -1;
  for (int a = 0; a < G.n; ++a)
    if (!G.isUnit[a]) {
      offDiag = a;
      break;
    }
  REQUIRE(offDiag >= 0);
  CHECK(!gpd::isSubgroupoid(G, {offDiag}).ok);
  CHECK(gpd::isBisection(G, {offDiag}));
}

TEST_CASE("full-group subsets at one unit are never bisections") {
  auto G = gpd::groupAsGroupoid(fixtures::cyclicGroup(2));
  gpd::ArrowSubset all = {0, 1};
  CHECK(!gpd::isBisection(G, all));
  CHECK(gpd::fibCount(G, all).value == 4);
}

TEST_CASE("bisections have fiber count at most two") {
  std::mt19937 rng(13);
  for (int trial = 0; trial < 50; ++trial) {
    auto G = gpd::pairGroupoid(std::uniform_int_distribution<int>(1, 5)(rng));
    auto A = randomSubset(rng, G.n);
    if (gpd::isBisection(G, A) && !A.empty())
      CHECK(gpd::fibCount(G, A).value <= 2);
  }
}

TEST_CASE("arrows over a unit set form the full subgroupoid") {
  auto G = gpd::pairGroupoid(4);
  std::vector<int> K = {G.units[0], G.units[2]};
  auto A = gpd::arrowsOverUnits(G, K);
  CHECK(A.size() == 4);  // pair groupoid over two points
  CHECK(gpd::isSubgroupoid(G, A).ok);
}

TEST_CASE("pair-set audits agree with the materialized product groupoid") {
  std::mt19937 rng(17);
  for (int trial = 0; trial < 15; ++trial) {
    const int n = std::uniform_int_distribution<int>(2, 3)(rng);
    auto G = trial % 2 == 0 ? gpd::pairGroupoid(n)
                            : gpd::groupAsGroupoid(fixtures::cyclicGroup(n + 1));
    auto GG = gpd::productGroupoid(G, G);

    gpd::PairSet H;
    gpd::ArrowSubset flat;
    for (int a = 0; a < G.n; ++a)
      for (int b = 0; b < G.n; ++b)
        if (std::uniform_int_distribution<int>(0, 2)(rng) == 0) {
          H.push_back({a, b});
          flat.push_back(a * G.n + b);
        }
    std::sort(flat.begin(), flat.end());

    CHECK(gpd::isSubgroupoidPairs(G, H).ok == gpd::isSubgroupoid(GG, flat).ok);
    CHECK(gpd::fibCountPairs(G, H).value == gpd::fibCount(GG, flat).value);

    gpd::PairSet diag;
    gpd::ArrowSubset diagFlat;
    for (int a = 0; a < G.n; ++a) {
      diag.push_back({a, a});
      diagFlat.push_back(a * G.n + a);
    }
    CHECK(gpd::containsDiagonal(G, diag).ok);
    CHECK(gpd::isSubgroupoidPairs(G, diag).ok);
    CHECK(gpd::isSubgroupoid(GG, diagFlat).ok);
    if (!H.empty() && H != diag) {
      auto missing = gpd::containsDiagonal(G, H);
      bool hasAll = true;
      std::set<std::pair<int, int>> in(H.begin(), H.end());
      for (int a = 0; a < G.n; ++a) hasAll = hasAll && in.count({a, a});
      CHECK(missing.ok == hasAll);
    }
  }
}

TEST_CASE("product fiber counts obey the mixed bound") {
  std::mt19937 rng(19);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = std::uniform_int_distribution<int>(2, 3)(rng);
    auto G = gpd::pairGroupoid(n);
    auto GG = gpd::productGroupoid(G, G);
    auto A = randomSubset(rng, G.n);
    auto B = randomSubset(rng, G.n);
    gpd::ArrowSubset AxB;
    for (int a : A)
      for (int b : B) AxB.push_back(a * G.n + b);
    std::sort(AxB.begin(), AxB.end());
    const int lhs = gpd::fibCount(GG, AxB).value;
    const long long rhs =
        static_cast<long long>(gpd::fibCount(G, A).value) * B.size() +
        static_cast<long long>(A.size()) * gpd::fibCount(G, B).value;
    CHECK(lhs <= rhs);
  }
}

TEST_CASE("homomorphism validation accepts collapses and rejects breakage") {
  auto P2 = gpd::pairGroupoid(2);
  auto point = gpd::pairGroupoid(1);

  gpd::GroupoidHom collapse{&P2, &point, std::vector<int>(P2.n, 0)};
  CHECK(!gpd::validateHom(collapse).has_value());

  gpd::GroupoidHom identity{&P2, &P2, {}};
  identity.map.resize(P2.n);
  for (int a = 0; a < P2.n; ++a) identity.map[a] = a;
  CHECK(!gpd::validateHom(identity).has_value());

  auto swapped = identity;
  // Send a non-unit arrow to a unit without fixing sources: breaks s/r.
  for (int a = 0; a < P2.n; ++a)
    if (!P2.isUnit[a]) {
      swapped.map[a] = P2.units[0];
      break;
    }
  CHECK(gpd::validateHom(swapped).has_value());

  gpd::GroupoidHom sizeMismatch{&P2, &P2, {0}};
  CHECK(gpd::validateHom(sizeMismatch).has_value());
}

TEST_CASE("constant one is positive type on any finite groupoid") {
  for (auto G : {gpd::pairGroupoid(4),
                 gpd::groupAsGroupoid(fixtures::elementaryAbelian2(2))}) {
    gpd::PositiveTypeFn one{&G, std::vector<std::complex<double>>(G.n, 1.0)};
    auto rep = gpd::positiveTypeCheck(one);
    CHECK(rep.positive);
  }
}

TEST_CASE("unit indicator is positive type on a finite group") {
  auto G = gpd::groupAsGroupoid(fixtures::cyclicGroup(4));
  gpd::PositiveTypeFn delta{&G, std::vector<std::complex<double>>(G.n, 0.0)};
  for (int a = 0; a < G.n; ++a)
    if (G.isUnit[a]) delta.values[a] = 1.0;
  CHECK(gpd::positiveTypeCheck(delta).positive);
}

TEST_CASE("negative unit value fails with a one-by-one Gram block") {
  auto G = gpd::pairGroupoid(2);
  gpd::PositiveTypeFn bad{&G, std::vector<std::complex<double>>(G.n, 0.0)};
  for (int a = 0; a < G.n; ++a)
    if (G.isUnit[a]) bad.values[a] = -1.0;
  auto rep = gpd::positiveTypeCheck(bad);
  CHECK(!rep.positive);
  CHECK(rep.minEigenvalue < 0.0);
}

TEST_CASE("off-diagonal weight beyond the diagonal fails the Gram test") {
  auto G = gpd::groupAsGroupoid(fixtures::cyclicGroup(2));
  gpd::PositiveTypeFn phi{&G, {1.0, -2.0}};  // Gram [[1,-2],[-2,1]]
  auto rep = gpd::positiveTypeCheck(phi);
  CHECK(!rep.positive);
  CHECK(rep.minEigenvalue == doctest::Approx(-1.0).epsilon(1e-6));
}

TEST_CASE("random Gram functions are positive and survive pullback") {
  std::mt19937 rng(23);
  for (int trial = 0; trial < 20; ++trial) {
    auto G = trial % 2 == 0
                 ? gpd::pairGroupoid(std::uniform_int_distribution<int>(2, 4)(rng))
                 : gpd::groupAsGroupoid(fixtures::cyclicGroup(
                       std::uniform_int_distribution<int>(2, 5)(rng)));
    auto phi = gramFunction(rng, G);
    CHECK(gpd::positiveTypeCheck(phi).positive);

    gpd::GroupoidHom identity{&G, &G, {}};
    identity.map.resize(G.n);
    for (int a = 0; a < G.n; ++a) identity.map[a] = a;
    auto back = gpd::pullbackPositiveType(phi, identity);
    CHECK(gpd::positiveTypeCheck(back).positive);
  }
}

TEST_CASE("pullback along a collapse stays positive") {
  std::mt19937 rng(29);
  auto P3 = gpd::pairGroupoid(3);
  auto point = gpd::pairGroupoid(1);
  gpd::GroupoidHom collapse{&P3, &point, std::vector<int>(P3.n, 0)};
  for (int trial = 0; trial < 10; ++trial) {
    auto phi = gramFunction(rng, point);
    auto back = gpd::pullbackPositiveType(phi, collapse);
    CHECK(gpd::positiveTypeCheck(back).positive);
  }
  gpd::GroupoidHom broken{&P3, &point, std::vector<int>(P3.n - 1, 0)};
  gpd::PositiveTypeFn one{&point, {1.0}};
  CHECK_THROWS_AS(gpd::pullbackPositiveType(one, broken),
                  std::invalid_argument);
}

TEST_CASE("support profiles count both box intersections") {
  auto G = gpd::pairGroupoid(2);
  std::vector<std::complex<double>> values(
      static_cast<std::size_t>(G.n) * G.n, 0.0);
  // Support exactly on the diagonal of G x G.
  for (int a = 0; a < G.n; ++a)
    values[static_cast<std::size_t>(a) * G.n + a] = 1.0;
  gpd::ArrowSubset all(G.n);
  for (int a = 0; a < G.n; ++a) all[a] = a;
  std::vector<int> K(G.units.begin(), G.units.end());
  auto prof = gpd::properSupportProfile(G, values, K, all);
  CHECK(prof.kByC == static_cast<std::size_t>(G.n));
  CHECK(prof.cByK == static_cast<std::size_t>(G.n));

  std::vector<std::complex<double>> ones(
      static_cast<std::size_t>(G.n) * G.n, 1.0);
  auto full = gpd::properSupportProfile(G, ones, K, all);
  CHECK(full.kByC == static_cast<std::size_t>(G.n) * G.n);
  CHECK(full.cByK == static_cast<std::size_t>(G.n) * G.n);
}

TEST_CASE("isomorphism search finds, refutes, and reports exhaustion") {
  auto A = gpd::pairGroupoid(3);
  auto B = gpd::pairGroupoid(3);
  auto found = gpd::findIsomorphism(A, B);
  REQUIRE(found.status == gpd::IsoStatus::Found);
  gpd::GroupoidHom h{&A, &B, found.arrowMap};
  CHECK(!gpd::validateHom(h).has_value());
  std::set<int> image(found.arrowMap.begin(), found.arrowMap.end());
  CHECK(static_cast<int>(image.size()) == B.n);

  // Same arrow count, different shape: Z/4 against the Klein group.
  auto C4 = gpd::groupAsGroupoid(fixtures::cyclicGroup(4));
  auto V4 = gpd::groupAsGroupoid(fixtures::elementaryAbelian2(2));
  CHECK(gpd::findIsomorphism(C4, V4).status == gpd::IsoStatus::NonIsomorphic);

  // Unit-count mismatch refutes immediately.
  CHECK(gpd::findIsomorphism(A, C4).status == gpd::IsoStatus::NonIsomorphic);

  // A zero budget cannot finish a nontrivial search.
  auto exhausted = gpd::findIsomorphism(A, B, 0);
  CHECK(exhausted.status == gpd::IsoStatus::Exhausted);
}

TEST_CASE("cocycle validation separates malformed from valid") {
  auto T = pact::buildTransformationGroupoid(fixtures::shiftOnThreePoints());
  CHECK(!gpd::validateCocycle(T.cocycle).has_value());

  auto broken = T.cocycle;
  // Give a unit a non-identity value.
  for (int a = 0; a < T.G.n; ++a)
    if (T.G.isUnit[a]) {
      broken.values[a] = grp::generatorWord(broken.target, 0);
      break;
    }
  CHECK(gpd::validateCocycle(broken).has_value());

  auto mism = T.cocycle;
  mism.values.pop_back();
  CHECK(gpd::validateCocycle(mism).has_value());
}
