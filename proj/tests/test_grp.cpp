#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <random>
#include <set>
#include <vector>

#include "ample/fixtures.hpp"
#include "ample/grp.hpp"
#include "doctest.h"

using namespace ample;

namespace {

grp::Word randomWord(std::mt19937& rng, const grp::GroupPtr& g, int maxLen) {
  const int len = std::uniform_int_distribution<int>(0, maxLen)(rng);
  std::vector<grp::Letter> letters;
  for (int i = 0; i < len; ++i)
    letters.push_back(
        {std::uniform_int_distribution<int>(0, g->numGenerators() - 1)(rng),
         std::uniform_int_distribution<int>(0, 1)(rng) ? 1 : -1});
  return grp::wordFromLetters(g, std::move(letters));
}

}  // namespace

TEST_CASE("free reduction cancels adjacent inverse letters") {
  auto f = grp::Group::makeFree(2, {"a", "b"});
  auto w = grp::wordFromString(f, "a b b^-1 a^-1");
  CHECK(grp::isIdentity(w));
  CHECK(grp::wordToString(w) == "1");
  auto u = grp::wordFromString(f, "a b b a^-1 a b^-1");
  auto r = grp::reduceWord(u);
  CHECK(grp::isReduced(r));
  CHECK(grp::equalWords(u, r));
  CHECK(grp::wordToString(grp::mulWords(u, grp::invWord(u))) == "1");
}

TEST_CASE("reduction is idempotent and a congruence") {
  std::mt19937 rng(7);
  std::vector<grp::GroupPtr> groups = {
      grp::Group::makeFree(2, {"a", "b"}),
      grp::Group::makeFreeAbelian(2, {"x", "y"}), fixtures::cyclicGroup(6),
      fixtures::elementaryAbelian2(3)};
  for (const auto& g : groups)
    for (int trial = 0; trial < 200; ++trial) {
      auto u = randomWord(rng, g, 6);
      auto v = randomWord(rng, g, 6);
      CHECK(grp::equalWords(grp::reduceWord(grp::reduceWord(u)),
                            grp::reduceWord(u)));
      auto direct = grp::reduceWord(grp::mulWords(u, v));
      auto viaCanon =
          grp::reduceWord(grp::mulWords(grp::reduceWord(u), grp::reduceWord(v)));
      CHECK(grp::equalWords(direct, viaCanon));
      CHECK(grp::isIdentity(grp::mulWords(u, grp::invWord(u))));
    }
}

TEST_CASE("free abelian words commute and sort into exponent form") {
  auto z2 = grp::Group::makeFreeAbelian(2, {"x", "y"});
  auto a = grp::wordFromString(z2, "y x y");
  auto b = grp::wordFromString(z2, "x y^2");
  CHECK(grp::equalWords(a, b));
  CHECK(grp::wordToString(grp::reduceWord(a)) == "x y^2");
  CHECK(grp::wordToString(grp::mulWords(a, grp::invWord(b))) == "1");
}

TEST_CASE("finite group words reduce to a single element") {
  auto c4 = fixtures::cyclicGroup(4);
  auto w = grp::wordFromString(c4, "1 2 3");  // 1+2+3 = 6 = 2 mod 4
  auto r = grp::reduceWord(w);
  REQUIRE(r.letters.size() == 1);
  CHECK(r.letters[0].gen == 2);
  CHECK(grp::isIdentity(grp::mulWords(w, grp::wordFromString(c4, "2"))));
  CHECK(grp::isIdentity(grp::wordFromString(c4, "0")));
}

TEST_CASE("identity rendering stays injective when an element is named 1") {
  auto e4 = fixtures::elementaryAbelian2(2);  // labels 0,1,2,3
  auto id = grp::identityWord(e4);
  auto one = grp::wordFromLetters(e4, {grp::Letter{1, 1}});
  CHECK(grp::wordToString(id) == "0");
  CHECK(grp::wordToString(one) == "1");
  CHECK(grp::equalWords(grp::wordFromString(e4, "1"), one));
  CHECK(grp::isIdentity(grp::wordFromString(e4, "0")));
  CHECK(grp::canonicalKey(id) != grp::canonicalKey(one));
  CHECK(grp::canonicalKey(id) == grp::canonicalKey(grp::mulWords(one, one)));
}

TEST_CASE("multiplication table validation rejects broken tables") {
  CHECK_THROWS_AS(grp::Group::makeFinite({{0, 1}, {1, 1}}),
                  std::invalid_argument);  // no inverse for 1
  CHECK_THROWS_AS(grp::Group::makeFinite({{1, 0}, {0, 0}}),
                  std::invalid_argument);  // no identity row
  // A non-associative quasigroup table on 5 elements.
  CHECK_THROWS_AS(grp::Group::makeFinite({{0, 1, 2, 3, 4},
                                          {1, 0, 3, 4, 2},
                                          {2, 4, 0, 1, 3},
                                          {3, 2, 4, 0, 1},
                                          {4, 3, 1, 2, 0}}),
                  std::invalid_argument);
  CHECK_THROWS_AS(grp::Group::makeFinite({{0, 1}, {1, 2}}),
                  std::invalid_argument);  // out of range
}

TEST_CASE("word parsing and rendering are inverse on canonical forms") {
  std::mt19937 rng(11);
  std::vector<grp::GroupPtr> groups = {grp::Group::makeFree(2, {"a", "b"}),
                                       grp::Group::makeFreeAbelian(3),
                                       fixtures::cyclicGroup(5)};
  for (const auto& g : groups)
    for (int trial = 0; trial < 100; ++trial) {
      auto w = grp::reduceWord(randomWord(rng, g, 5));
      auto back = grp::wordFromString(g, grp::wordToString(w));
      CHECK(grp::equalWords(w, back));
    }
  CHECK_THROWS_AS(
      grp::wordFromString(grp::Group::makeFree(1, {"a"}), "a^x"),
      std::invalid_argument);
  CHECK_THROWS_AS(
      grp::wordFromString(grp::Group::makeFree(1, {"a"}), "zz"),
      std::invalid_argument);
}

TEST_CASE("word order is total, antisymmetric, and length-first") {
  auto f = grp::Group::makeFree(2, {"a", "b"});
  std::mt19937 rng(3);
  for (int trial = 0; trial < 100; ++trial) {
    auto u = randomWord(rng, f, 4);
    auto v = randomWord(rng, f, 4);
    const int uv = grp::cmpWords(u, v), vu = grp::cmpWords(v, u);
    CHECK(uv == -vu);
    CHECK((uv == 0) == grp::equalWords(u, v));
    if (grp::reduceWord(u).letters.size() < grp::reduceWord(v).letters.size())
      CHECK(uv < 0);
  }
}

TEST_CASE("stock quotient chains are coherent") {
  CHECK(!grp::validateChain(fixtures::integersMod2kChain(4)).has_value());
  CHECK(!grp::validateChain(fixtures::freeTwoAbelianizedChain(3)).has_value());
  CHECK(!grp::validateChain(fixtures::directSum2Chain(3)).has_value());
}

TEST_CASE("chain validation pinpoints corrupted factor maps and images") {
  auto chain = fixtures::integersMod2kChain(3);
  auto broken = chain;
  broken.levels[2].factorMap[1] = 0;  // no longer a homomorphism onto level 1
  auto err = grp::validateChain(broken);
  REQUIRE(err.has_value());
  CHECK(err->find("factor") != std::string::npos);

  auto badImage = chain;
  badImage.levels[2].genImages[0] = 2;  // 2 does not generate Z/4
  CHECK(grp::validateChain(badImage).has_value());

  CHECK_THROWS_AS(grp::Group::makeQuotientChain(broken), std::invalid_argument);
  // The unchecked constructor defers the failure to downstream re-checks.
  auto g = grp::Group::makeQuotientChainUnchecked(broken);
  CHECK(g->kind == grp::GroupKind::QuotientChain);
}

TEST_CASE("quotient images are homomorphisms compatible with factoring") {
  std::mt19937 rng(19);
  std::vector<grp::QuotientChain> chains = {fixtures::integersMod2kChain(3),
                                            fixtures::freeTwoAbelianizedChain(2),
                                            fixtures::directSum2Chain(3)};
  for (const auto& chain : chains) {
    const int depth = static_cast<int>(chain.levels.size()) - 1;
    for (int trial = 0; trial < 100; ++trial) {
      auto u = randomWord(rng, chain.base, 5);
      auto v = randomWord(rng, chain.base, 5);
      for (int k = 0; k <= depth; ++k) {
        const auto& lvl = chain.levels[k].group;
        const int pu = grp::quotientImage(chain, k, u);
        const int pv = grp::quotientImage(chain, k, v);
        const int puv = grp::quotientImage(chain, k, grp::mulWords(u, v));
        CHECK(puv == lvl->table[pu][pv]);
        for (int n = k; n <= depth; ++n)
          CHECK(grp::factorImage(chain, k, n, grp::quotientImage(chain, n, u)) ==
                pu);
      }
    }
  }
}

TEST_CASE("ball sizes over two free generators follow the exact curve") {
  auto f2 = grp::Group::makeFree(2, {"a", "b"});
  std::vector<grp::Word> S = {grp::generatorWord(f2, 0),
                              grp::generatorWord(f2, 1)};
  long long expected = 1;  // 2*3^l - 1
  for (int l = 0; l <= 6; ++l) {
    CHECK(static_cast<long long>(grp::ballEnumerate(f2, S, l).size()) ==
          expected);
    expected = expected * 3 + 2;
  }
}

TEST_CASE("ball sizes in abelian and finite groups match direct counts") {
  auto z2 = grp::Group::makeFreeAbelian(2, {"x", "y"});
  std::vector<grp::Word> S2 = {grp::generatorWord(z2, 0),
                               grp::generatorWord(z2, 1)};
  for (int l = 0; l <= 4; ++l)  // |{(i,j) : |i|+|j| <= l}| = 2l^2+2l+1
    CHECK(static_cast<int>(grp::ballEnumerate(z2, S2, l).size()) ==
          2 * l * l + 2 * l + 1);

  auto c6 = fixtures::cyclicGroup(6);
  std::vector<grp::Word> S6 = {grp::wordFromString(c6, "1")};
  CHECK(grp::ballEnumerate(c6, S6, 0).size() == 1);
  CHECK(grp::ballEnumerate(c6, S6, 1).size() == 3);  // {0,1,5}
  CHECK(grp::ballEnumerate(c6, S6, 2).size() == 5);
  CHECK(grp::ballEnumerate(c6, S6, 3).size() == 6);
  CHECK(grp::ballEnumerate(c6, S6, 9).size() == 6);  // saturated
}

TEST_CASE("ball enumeration agrees with brute-force closure") {
  std::mt19937 rng(23);
  for (int trial = 0; trial < 20; ++trial) {
    auto g = trial % 2 == 0 ? fixtures::cyclicGroup(
                                  std::uniform_int_distribution<int>(2, 8)(rng))
                            : fixtures::elementaryAbelian2(
                                  std::uniform_int_distribution<int>(1, 3)(rng));
    std::vector<grp::Word> S;
    const int nGen = std::uniform_int_distribution<int>(1, 2)(rng);
    for (int i = 0; i < nGen; ++i) S.push_back(randomWord(rng, g, 3));
    const int radius = std::uniform_int_distribution<int>(0, 4)(rng);

    std::set<std::string> frontier = {grp::canonicalKey(grp::identityWord(g))};
    std::set<std::string> seen = frontier;
    std::vector<grp::Word> layer = {grp::identityWord(g)};
    std::vector<grp::Word> all = layer;
    for (int step = 0; step < radius; ++step) {
      std::vector<grp::Word> next;
      for (const auto& w : layer)
        for (const auto& s : S)
          for (const auto& t : {s, grp::invWord(s)}) {
            auto prod = grp::reduceWord(grp::mulWords(w, t));
            if (seen.insert(grp::canonicalKey(prod)).second) {
              next.push_back(prod);
              all.push_back(prod);
            }
          }
      layer = std::move(next);
    }
    auto ball = grp::ballEnumerate(g, S, radius);
    CHECK(ball.size() == all.size());
    std::set<std::string> ballKeys;
    for (const auto& w : ball) ballKeys.insert(grp::canonicalKey(w));
    CHECK(ballKeys == seen);
  }
}

TEST_CASE("ball entries carry a verifiable factorization") {
  auto f2 = grp::Group::makeFree(2, {"a", "b"});
  std::vector<grp::Word> S = {grp::generatorWord(f2, 0),
                              grp::generatorWord(f2, 1)};
  auto entries = grp::ballEnumerateWithPaths(f2, S, 3);
  auto plain = grp::ballEnumerate(f2, S, 3);
  REQUIRE(entries.size() == plain.size());
  for (const auto& e : entries) {
    CHECK(e.factors.size() <= 3);
    auto prod = grp::identityWord(f2);
    for (const auto& f : e.factors) prod = grp::mulWords(prod, f);
    CHECK(grp::equalWords(prod, e.element));
  }
}

TEST_CASE("element images multiply along words") {
  auto c6 = fixtures::cyclicGroup(6);
  auto f = grp::Group::makeFree(2, {"a", "b"});
  std::vector<int> images = {2, 3};  // a -> 2, b -> 3
  std::mt19937 rng(29);
  for (int trial = 0; trial < 100; ++trial) {
    auto u = randomWord(rng, f, 5);
    auto v = randomWord(rng, f, 5);
    const int iu = grp::finiteWordImage(*c6, images, u);
    const int iv = grp::finiteWordImage(*c6, images, v);
    CHECK(grp::finiteWordImage(*c6, images, grp::mulWords(u, v)) ==
          c6->table[iu][iv]);
  }
}
