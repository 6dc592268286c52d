#include "ample/fixtures.hpp"

#include <stdexcept>
#include <string>
#include <vector>

namespace ample::fixtures {

namespace {

std::vector<std::string> decimalLabels(int n) {
  std::vector<std::string> out;
  out.reserve(n);
  for (int i = 0; i < n; ++i) out.push_back(std::to_string(i));
  return out;
}

// k-fold power of a single generator as a word (k may be negative).
grp::Word genPower(const grp::GroupPtr& g, int gen, int k) {
  std::vector<grp::Letter> letters;
  const int sign = k < 0 ? -1 : 1;
  for (int i = 0; i < (k < 0 ? -k : k); ++i) letters.push_back({gen, sign});
  return grp::reduceWord(grp::wordFromLetters(g, std::move(letters)));
}

// (Z/m)^2 with element id i*m + j.
grp::GroupPtr squareCyclic(int m) {
  const int n = m * m;
  std::vector<std::vector<int>> table(n, std::vector<int>(n));
  std::vector<std::string> labels(n);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) {
      labels[i * m + j] = "(" + std::to_string(i) + "," + std::to_string(j) + ")";
      for (int p = 0; p < m; ++p)
        for (int q = 0; q < m; ++q)
          table[i * m + j][p * m + q] = ((i + p) % m) * m + (j + q) % m;
    }
  return grp::Group::makeFinite(std::move(table), std::move(labels));
}

}  // namespace

grp::GroupPtr cyclicGroup(int n) {
  if (n < 1) throw std::invalid_argument("cyclic group order must be positive");
  std::vector<std::vector<int>> table(n, std::vector<int>(n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) table[i][j] = (i + j) % n;
  return grp::Group::makeFinite(std::move(table), decimalLabels(n));
}

grp::GroupPtr elementaryAbelian2(int m) {
  if (m < 0) throw std::invalid_argument("exponent must be nonnegative");
  const int n = 1 << m;
  std::vector<std::vector<int>> table(n, std::vector<int>(n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) table[i][j] = i ^ j;
  return grp::Group::makeFinite(std::move(table), decimalLabels(n));
}

grp::QuotientChain integersMod2kChain(int depth) {
  if (depth < 0) throw std::invalid_argument("depth must be nonnegative");
  grp::QuotientChain chain;
  chain.base = grp::Group::makeFreeAbelian(1, {"a"});
  chain.assumesTrivialIntersection = true;
  for (int k = 0; k <= depth; ++k) {
    const int m = 1 << k;
    grp::ChainLevel level;
    level.group = cyclicGroup(m);
    level.genImages = {1 % m};
    if (k < depth) {
      level.factorMap.resize(2 * m);
      for (int x = 0; x < 2 * m; ++x) level.factorMap[x] = x % m;
    }
    chain.levels.push_back(std::move(level));
  }
  return chain;
}

grp::QuotientChain freeTwoAbelianizedChain(int depth) {
  if (depth < 0) throw std::invalid_argument("depth must be nonnegative");
  grp::QuotientChain chain;
  chain.base = grp::Group::makeFree(2, {"a", "b"});
  chain.assumesTrivialIntersection = false;  // commutators die at every level
  for (int k = 0; k <= depth; ++k) {
    const int m = 1 << k;
    grp::ChainLevel level;
    level.group = squareCyclic(m);
    level.genImages = {m > 1 ? m : 0, m > 1 ? 1 : 0};  // a -> (1,0), b -> (0,1)
    if (k < depth) {
      const int m2 = 2 * m;
      level.factorMap.resize(m2 * m2);
      for (int i = 0; i < m2; ++i)
        for (int j = 0; j < m2; ++j)
          level.factorMap[i * m2 + j] = (i % m) * m + (j % m);
    }
    chain.levels.push_back(std::move(level));
  }
  return chain;
}

grp::QuotientChain directSum2Chain(int depth) {
  if (depth < 0) throw std::invalid_argument("depth must be nonnegative");
  grp::QuotientChain chain;
  chain.base = elementaryAbelian2(depth);
  chain.assumesTrivialIntersection = true;  // the top level keeps every bit
  for (int k = 0; k <= depth; ++k) {
    const int mask = (1 << k) - 1;
    grp::ChainLevel level;
    level.group = elementaryAbelian2(k);
    level.genImages.resize(1 << depth);
    for (int e = 0; e < (1 << depth); ++e) level.genImages[e] = e & mask;
    if (k < depth) {
      level.factorMap.resize(1 << (k + 1));
      for (int x = 0; x < (1 << (k + 1)); ++x) level.factorMap[x] = x & mask;
    }
    chain.levels.push_back(std::move(level));
  }
  return chain;
}

pact::PartialActionSpec shiftOnThreePoints() {
  pact::PartialActionSpec spec;
  spec.group = grp::Group::makeFreeAbelian(1, {"t"});
  spec.numPoints = 3;
  spec.pointLabels = {"0", "1", "2"};
  spec.entries.push_back({grp::identityWord(spec.group), {0, 1, 2}, {0, 1, 2}});
  spec.entries.push_back({genPower(spec.group, 0, 1), {0, 1}, {1, 2}});
  spec.entries.push_back({genPower(spec.group, 0, -1), {1, 2}, {0, 1}});
  spec.entries.push_back({genPower(spec.group, 0, 2), {0}, {2}});
  spec.entries.push_back({genPower(spec.group, 0, -2), {2}, {0}});
  return spec;
}

pact::PartialActionSpec shiftOnThreePointsBroken() {
  pact::PartialActionSpec spec = shiftOnThreePoints();
  spec.entries.resize(3);  // drop the forced square entries
  return spec;
}

pact::PartialActionSpec directSum2TrivialAction(int m) {
  if (m < 0) throw std::invalid_argument("exponent must be nonnegative");
  pact::PartialActionSpec spec;
  spec.group = elementaryAbelian2(m);
  spec.numPoints = m + 2;
  for (int n = 0; n <= m; ++n) spec.pointLabels.push_back(std::to_string(n));
  spec.pointLabels.push_back("top");
  for (int g = 0; g < (1 << m); ++g) {
    pact::PactEntry entry;
    entry.gamma = g == 0 ? grp::identityWord(spec.group)
                         : grp::wordFromLetters(spec.group, {{g, 1}});
    for (int n = 0; n <= m; ++n)
      if (g < (1 << n)) entry.dom.push_back(n);
    entry.dom.push_back(m + 1);
    entry.img = entry.dom;
    spec.entries.push_back(std::move(entry));
  }
  return spec;
}

dr::DirectedGraph loopGraph(int n) {
  if (n < 1) throw std::invalid_argument("need at least one loop");
  dr::DirectedGraph g;
  g.numVertices = 1;
  g.vertexLabels = {"v"};
  for (int i = 0; i < n; ++i) {
    g.edges.push_back({0, 0});
    g.edgeLabels.push_back("e" + std::to_string(i + 1));
  }
  return g;
}

dr::DirectedGraph binaryGraph() {
  dr::DirectedGraph g = loopGraph(2);
  g.edgeLabels = {"0", "1"};
  return g;
}

dr::KGraph oneSquareKGraph() {
  dr::KGraph g;
  g.rank = 2;
  g.numVertices = 1;
  g.vertexLabels = {"v"};
  g.edges = {{0, 0, 0}, {0, 0, 1}};
  g.edgeLabels = {"f", "g"};
  g.squares = {{0, 1, 1, 0}};  // f.g = g.f with colors swapped
  return g;
}

coarse::FiniteCoarseSpace chainSpace(int n) {
  if (n < 1) throw std::invalid_argument("need at least one point");
  coarse::FiniteCoarseSpace space;
  space.numPoints = n;
  space.pointLabels = decimalLabels(n);
  coarse::PairSet successor;
  for (int i = 0; i + 1 < n; ++i) successor.push_back({i, i + 1});
  space.generators.push_back(std::move(successor));
  return space;
}

coarse::WindowCocycle zWindowCocycle(int N) {
  if (N < 0) throw std::invalid_argument("window end must be nonnegative");
  coarse::WindowCocycle c;
  c.target = grp::Group::makeFreeAbelian(1, {"a"});
  c.numPoints = N + 1;
  c.value.assign(c.numPoints, std::vector<grp::Word>(c.numPoints));
  for (int x = 0; x <= N; ++x)
    for (int y = 0; y <= N; ++y) c.value[x][y] = genPower(c.target, 0, x - y);
  return c;
}

coarse::WindowCocycle fWindowCocycle(int N) {
  if (N < 0) throw std::invalid_argument("window end must be nonnegative");
  coarse::WindowCocycle c;
  c.target = grp::Group::makeFree(2, {"a", "b"});
  c.numPoints = N + 1;
  c.value.assign(c.numPoints, std::vector<grp::Word>(c.numPoints));
  for (int x = 0; x <= N; ++x)
    for (int y = 0; y <= N; ++y)
      c.value[x][y] = grp::reduceWord(grp::mulWords(
          grp::mulWords(genPower(c.target, 1, -x), genPower(c.target, 0, x - y)),
          genPower(c.target, 1, y)));
  return c;
}

}  // namespace ample::fixtures
