#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <algorithm>
#include <random>
#include <set>
#include <vector>

#include "ample/fixtures.hpp"
#include "ample/gpd.hpp"
#include "ample/grp.hpp"
#include "ample/hls.hpp"
#include "doctest.h"

using namespace ample;

namespace {

grp::GroupPtr zChain(int depth) {
  return grp::Group::makeQuotientChain(fixtures::integersMod2kChain(depth));
}
grp::GroupPtr d2Chain(int depth) {
  return grp::Group::makeQuotientChain(fixtures::directSum2Chain(depth));
}
grp::GroupPtr f2Chain(int depth) {
  return grp::Group::makeQuotientChain(fixtures::freeTwoAbelianizedChain(depth));
}

std::vector<hls::ShadowRef> singletonCover(const grp::GroupPtr& chainGroup,
                                           int level) {
  std::vector<hls::ShadowRef> cover;
  const auto& L = *chainGroup->chain->levels[level].group;
  for (int e = 0; e < static_cast<int>(L.labels.size()); ++e)
    cover.push_back({level, e});
  return cover;
}

}  // namespace

TEST_CASE("level bundle truncations have one group fiber per level") {
  auto z = zChain(2);
  auto T = hls::buildHls(z, 2);
  CHECK(T.G.n == 7);  // 1 + 2 + 4
  CHECK(T.G.units.size() == 3);
  CHECK(!gpd::validateGroupoid(T.G).has_value());
  CHECK(T.numLevels() == 3);
  for (int a = 0; a < T.G.n; ++a) {
    const int k = T.levelOf(a);
    CHECK(T.arrowId(k, T.elementOf(a)) == a);
    // Arrows at one level form an isotropy group over a single unit.
    CHECK(T.G.src[a] == T.G.rng[a]);
    CHECK(T.G.src[a] == T.G.src[T.levelOffset[k]]);
  }

  CHECK(hls::buildHls(z, 0).G.n == 1);

  auto top = hls::buildHls(d2Chain(2), 2, true);
  CHECK(top.G.n == 11);  // 1 + 2 + 4 + top copy of 4
  CHECK(top.G.units.size() == 4);
  CHECK(top.numLevels() == 4);
  CHECK(!gpd::validateGroupoid(top.G).has_value());
}

TEST_CASE("action truncations translate points by the level groups") {
  auto z = zChain(2);
  auto A = hls::buildAfs(z, 2);
  CHECK(A.G.n == 21);  // 1 + 4 + 16
  CHECK(A.numPoints == 7);
  CHECK(A.G.units.size() == 7);
  CHECK(!gpd::validateGroupoid(A.G).has_value());

  const auto& chain = *z->chain;
  for (int a = 0; a < A.G.n; ++a) {
    auto ar = A.arrowOf(a);
    CHECK(A.arrowId(ar.level, ar.g, ar.x) == a);
    const auto& L = *chain.levels[ar.level].group;
    CHECK(A.G.src[a] == A.pointUnit(ar.level, ar.x));
    CHECK(A.G.rng[a] == A.pointUnit(ar.level, L.table[ar.g][ar.x]));
  }

  auto A3 = hls::buildAfs(zChain(3), 3);
  CHECK(A3.G.n == 85);  // 1 + 4 + 16 + 64
  CHECK(A3.numPoints == 15);
}

TEST_CASE("shadows collect exactly the points factoring onto an element") {
  auto chain = fixtures::integersMod2kChain(2);
  auto sh = hls::shadow(chain, 1, 1, 2);
  std::vector<std::pair<int, int>> expected = {{1, 1}, {2, 1}, {2, 3}};
  CHECK(sh == expected);

  for (int e = 0; e < 4; ++e) {
    auto leaf = hls::shadow(chain, 2, e, 2);
    REQUIRE(leaf.size() == 1);
    CHECK(leaf.front() == std::pair<int, int>{2, e});
  }
  CHECK(hls::shadow(chain, 0, 0, 2).size() == 7);

  CHECK_THROWS_AS(hls::shadow(chain, 3, 0, 2), std::invalid_argument);
  CHECK_THROWS_AS(hls::shadow(chain, 1, 9, 2), std::invalid_argument);
}

TEST_CASE("shadows are nested along the factor maps") {
  std::mt19937 rng(31);
  for (auto chain : {fixtures::integersMod2kChain(3),
                     fixtures::directSum2Chain(3),
                     fixtures::freeTwoAbelianizedChain(2)}) {
    const int depth = static_cast<int>(chain.levels.size()) - 1;
    for (int trial = 0; trial < 20; ++trial) {
      const int k = std::uniform_int_distribution<int>(0, depth - 1)(rng);
      const int size =
          static_cast<int>(chain.levels[k + 1].group->labels.size());
      const int e = std::uniform_int_distribution<int>(0, size - 1)(rng);
      auto fine = hls::shadow(chain, k + 1, e, depth);
      auto coarse =
          hls::shadow(chain, k, grp::factorImage(chain, k, k + 1, e), depth);
      std::set<std::pair<int, int>> coarseSet(coarse.begin(), coarse.end());
      for (const auto& p : fine) CHECK(coarseSet.count(p));
      // Every shadow member factors back onto the defining element.
      for (const auto& [n, h] : fine)
        CHECK(grp::factorImage(chain, k + 1, n, h) == e);
    }
  }
}

TEST_CASE("equicontinuity holds for the cyclic tower with one shared V") {
  auto z = zChain(3);
  std::vector<grp::Word> S = {grp::generatorWord(z, 0)};
  std::vector<int> basepoint = {0, 0, 0, 0};
  auto cert = hls::equicontinuityCertificate(z, 3, S, 4, basepoint,
                                             singletonCover(z, 3));
  REQUIRE(cert.ok);
  CHECK(cert.failure.empty());
  CHECK(cert.V.level == 3);
  CHECK(cert.V.element == 0);
  CHECK(cert.trace.size() == 9);  // radius-4 ball in Z
  for (const auto& t : cert.trace) {
    CHECK(t.coverIndex >= 0);
    CHECK(t.coverIndex < 8);
  }
  // V is the basepoint's deepest shadow: a single leaf.
  CHECK(cert.vPoints.size() == 1);
}

TEST_CASE("equicontinuity holds for the bit-vector tower") {
  auto d2 = d2Chain(2);
  std::vector<grp::Word> S = {grp::generatorWord(d2, 1),
                              grp::generatorWord(d2, 2)};
  std::vector<int> basepoint = {0, 0, 0};
  auto cert = hls::equicontinuityCertificate(d2, 2, S, 3, basepoint,
                                             singletonCover(d2, 2));
  REQUIRE(cert.ok);
  CHECK(cert.V.level == 2);
  CHECK(!cert.trace.empty());
}

TEST_CASE("a level-zero cover absorbs everything") {
  auto z = zChain(2);
  std::vector<grp::Word> S = {grp::generatorWord(z, 0)};
  auto cert = hls::equicontinuityCertificate(z, 2, S, 3, {0, 0, 0},
                                             {hls::ShadowRef{0, 0}});
  REQUIRE(cert.ok);
  CHECK(cert.V.level == 0);
  CHECK(cert.vPoints.size() == 7);  // shadow of the root: every point
}

TEST_CASE("equicontinuity failures are reported, not thrown") {
  auto z = zChain(2);
  std::vector<grp::Word> S = {grp::generatorWord(z, 0)};

  auto partial = singletonCover(z, 2);
  partial.erase(partial.begin());  // drop element 0: diagonal escapes
  auto missing = hls::equicontinuityCertificate(z, 2, S, 2, {0, 0, 0}, partial);
  CHECK(!missing.ok);
  CHECK(missing.failure.find("cover") != std::string::npos);

  auto badBase = hls::equicontinuityCertificate(z, 2, S, 2, {0, 1, 2},
                                                singletonCover(z, 2));
  CHECK(!badBase.ok);
  CHECK(badBase.failure.find("compatible") != std::string::npos);

  auto corrupt = fixtures::integersMod2kChain(2);
  corrupt.levels[1].factorMap[0] = 1;  // identity no longer maps to identity
  auto broken = grp::Group::makeQuotientChainUnchecked(corrupt);
  auto cohere = hls::equicontinuityCertificate(broken, 2, S, 2, {0, 0, 0},
                                               singletonCover(broken, 2));
  CHECK(!cohere.ok);
  CHECK(cohere.failure.find("coherence") != std::string::npos);

  CHECK_THROWS_AS(
      hls::equicontinuityCertificate(z, 2, S, 2, {0, 0}, singletonCover(z, 2)),
      std::invalid_argument);
  CHECK_THROWS_AS(hls::equicontinuityCertificate(z, 2, S, 2, {0, 0, 0},
                                                 {hls::ShadowRef{5, 0}}),
                  std::invalid_argument);
}

TEST_CASE("forced-pair witnesses grow with the free ball and verify") {
  auto f2 = f2Chain(3);
  std::vector<grp::Word> S = {grp::generatorWord(f2, 0),
                              grp::generatorWord(f2, 1)};
  const std::size_t expected[] = {1, 5, 17, 53};  // free balls 2*3^l - 1
  for (int radius = 0; radius <= 3; ++radius) {
    auto cert = hls::deltaViolationWitness(f2, S, radius, 3);
    CHECK(cert.fiberLowerBound == expected[radius]);
    CHECK(cert.pairs.size() == expected[radius]);
    CHECK(!hls::verifyDeltaViolation(cert, f2).has_value());
    // All forced pairs share the common identity source.
    for (const auto& p : cert.pairs) {
      CHECK(p.finite.x == 0);
      CHECK(grp::isIdentity(p.deep.basePoint));
    }
  }
}

TEST_CASE("tampered witnesses are rejected with a discrepancy") {
  auto f2 = f2Chain(2);
  std::vector<grp::Word> S = {grp::generatorWord(f2, 0),
                              grp::generatorWord(f2, 1)};
  auto cert = hls::deltaViolationWitness(f2, S, 2, 2);
  REQUIRE(!hls::verifyDeltaViolation(cert, f2).has_value());

  auto fewer = cert;
  fewer.pairs.pop_back();
  auto err1 = hls::verifyDeltaViolation(fewer, f2);
  REQUIRE(err1.has_value());
  CHECK(err1->find("count") != std::string::npos);

  auto wrongFinite = cert;
  REQUIRE(wrongFinite.pairs.size() > 1);
  wrongFinite.pairs[1].finite.g =
      (wrongFinite.pairs[1].finite.g + 1) % 4;
  CHECK(hls::verifyDeltaViolation(wrongFinite, f2).has_value());

  auto wrongDeep = cert;
  wrongDeep.pairs[1].deep.gamma =
      grp::mulWords(wrongDeep.pairs[1].deep.gamma, S[0]);
  CHECK(hls::verifyDeltaViolation(wrongDeep, f2).has_value());

  auto wrongStep = cert;
  for (auto& p : wrongStep.pairs)
    if (!p.deepSteps.empty()) {
      p.deepSteps.back().gamma = grp::invWord(p.deepSteps.back().gamma);
      break;
    }
  CHECK(hls::verifyDeltaViolation(wrongStep, f2).has_value());
}

TEST_CASE("whole-base level sets give a locally finite diagonal subgroupoid") {
  auto d2 = d2Chain(2);
  std::vector<grp::Word> base = {grp::identityWord(d2)};
  for (int e = 1; e < 4; ++e)
    base.push_back(grp::wordFromLetters(d2, {{e, 1}}));
  std::vector<std::vector<grp::Word>> fChain = {base, base, base};

  auto rep = hls::locallyFiniteDeltaBarH(d2, fChain, 2);
  CHECK(rep.subgroupoid);
  CHECK(rep.diagonal);
  CHECK(rep.violation.empty());
  CHECK(rep.injectivityLevel == std::vector<int>{2, 2, 2});
  CHECK(rep.fibFull > 0);
  CHECK(!rep.H.empty());
  CHECK(gpd::isSubgroupoidPairs(rep.trunc.G, rep.H).ok);
  CHECK(gpd::containsDiagonal(rep.trunc.G, rep.H).ok);
}

TEST_CASE("identity-only level sets miss the diagonal") {
  auto d2 = d2Chain(2);
  std::vector<grp::Word> tiny = {grp::identityWord(d2)};
  auto rep = hls::locallyFiniteDeltaBarH(d2, {tiny, tiny, tiny}, 2);
  CHECK(rep.subgroupoid);
  CHECK(!rep.diagonal);
  CHECK(!rep.violation.empty());
}

TEST_CASE("malformed level sets are rejected up front") {
  auto d2 = d2Chain(2);
  std::vector<grp::Word> base = {grp::identityWord(d2)};
  for (int e = 1; e < 4; ++e)
    base.push_back(grp::wordFromLetters(d2, {{e, 1}}));

  std::vector<grp::Word> noId = {grp::wordFromLetters(d2, {{1, 1}})};
  CHECK_THROWS_AS(hls::locallyFiniteDeltaBarH(d2, {noId, base, base}, 2),
                  std::invalid_argument);

  std::vector<grp::Word> notClosed = {grp::identityWord(d2),
                                      grp::wordFromLetters(d2, {{1, 1}}),
                                      grp::wordFromLetters(d2, {{2, 1}})};
  CHECK_THROWS_AS(hls::locallyFiniteDeltaBarH(d2, {notClosed, base, base}, 2),
                  std::invalid_argument);

  // F_n must grow with n.
  std::vector<grp::Word> tiny = {grp::identityWord(d2)};
  CHECK_THROWS_AS(hls::locallyFiniteDeltaBarH(d2, {base, tiny, base}, 2),
                  std::invalid_argument);
}

TEST_CASE("bundle with top fiber matches the trivial bit-vector action") {
  auto d2 = d2Chain(2);
  auto iso = hls::hlsVsPartialActionIso(d2, 2);
  REQUIRE(iso.status == gpd::IsoStatus::Found);
  CHECK(iso.leftArrows == 11);
  CHECK(iso.rightArrows == 11);
  CHECK(iso.arrowMap.size() == 11);

  auto mism = hls::hlsVsPartialActionIso(d2, 2, 1);
  CHECK(mism.status == gpd::IsoStatus::NonIsomorphic);
  CHECK(!mism.reason.empty());
  CHECK(mism.leftArrows != mism.rightArrows);
}
