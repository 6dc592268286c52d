#pragma once
// Deterministic randomized input corpora shared by the unit tests and the
// acceptance suite. Every generator produces specs that satisfy the partial
// action axioms by construction (restriction of a global action), so the
// validator must accept them; tests then exercise roundtrips and audits.

#include <algorithm>
#include <random>
#include <vector>

#include "ample/fixtures.hpp"
#include "ample/grp.hpp"
#include "ample/pact.hpp"

namespace corpus {

// Restriction of the global shift of the integers to a point set X inside a
// window of span <= 4. Every shift amount with nonempty domain is listed, so
// forced products (which need a witness inside X) are always present.
inline ample::pact::PartialActionSpec randomShiftAction(std::mt19937& rng) {
  namespace grp = ample::grp;
  namespace pact = ample::pact;
  const int window = 5;
  std::vector<int> pos;
  while (pos.empty()) {
    pos.clear();
    for (int v = 0; v < window; ++v)
      if (std::uniform_int_distribution<int>(0, 1)(rng)) pos.push_back(v);
  }
  auto indexOf = [&](int v) {
    auto it = std::find(pos.begin(), pos.end(), v);
    return it == pos.end() ? -1 : static_cast<int>(it - pos.begin());
  };

  pact::PartialActionSpec spec;
  spec.group = grp::Group::makeFree(1, {"t"});
  spec.numPoints = static_cast<int>(pos.size());
  for (int k = -(window - 1); k <= window - 1; ++k) {
    pact::PactEntry e;
    e.gamma = k == 0 ? grp::identityWord(spec.group)
                     : grp::wordFromLetters(
                           spec.group,
                           std::vector<grp::Letter>(
                               static_cast<std::size_t>(k > 0 ? k : -k),
                               grp::Letter{0, k > 0 ? 1 : -1}));
    for (std::size_t i = 0; i < pos.size(); ++i) {
      const int target = indexOf(pos[i] + k);
      if (target < 0) continue;
      e.dom.push_back(static_cast<int>(i));
      e.img.push_back(target);
    }
    if (!e.dom.empty()) spec.entries.push_back(std::move(e));
  }
  return spec;
}

// Restriction of the left regular action of a small finite group to a random
// nonempty subset. All group elements are listed, so the support is closed
// under every forced product.
inline ample::pact::PartialActionSpec randomRegularRestriction(
    std::mt19937& rng) {
  namespace grp = ample::grp;
  namespace pact = ample::pact;
  grp::GroupPtr g;
  switch (std::uniform_int_distribution<int>(0, 5)(rng)) {
    case 0: g = ample::fixtures::cyclicGroup(2); break;
    case 1: g = ample::fixtures::cyclicGroup(3); break;
    case 2: g = ample::fixtures::cyclicGroup(4); break;
    case 3: g = ample::fixtures::cyclicGroup(5); break;
    case 4: g = ample::fixtures::cyclicGroup(6); break;
    default: g = ample::fixtures::elementaryAbelian2(2); break;
  }
  const auto& table = g->table;
  const int order = static_cast<int>(table.size());

  std::vector<int> pos;
  while (pos.empty()) {
    pos.clear();
    for (int v = 0; v < order; ++v)
      if (std::uniform_int_distribution<int>(0, 1)(rng)) pos.push_back(v);
  }
  auto indexOf = [&](int v) {
    auto it = std::find(pos.begin(), pos.end(), v);
    return it == pos.end() ? -1 : static_cast<int>(it - pos.begin());
  };

  pact::PartialActionSpec spec;
  spec.group = g;
  spec.numPoints = static_cast<int>(pos.size());
  for (int gamma = 0; gamma < order; ++gamma) {
    pact::PactEntry e;
    e.gamma = grp::wordFromLetters(g, {grp::Letter{gamma, 1}});
    for (std::size_t i = 0; i < pos.size(); ++i) {
      const int target = indexOf(table[gamma][pos[i]]);
      if (target < 0) continue;
      e.dom.push_back(static_cast<int>(i));
      e.img.push_back(target);
    }
    if (!e.dom.empty()) spec.entries.push_back(std::move(e));
  }
  return spec;
}

// Mixed corpus: both random families plus the stock examples.
inline std::vector<ample::pact::PartialActionSpec> partialActionCorpus(
    int count, unsigned seed) {
  std::mt19937 rng(seed);
  std::vector<ample::pact::PartialActionSpec> out;
  out.push_back(ample::fixtures::shiftOnThreePoints());
  out.push_back(ample::fixtures::directSum2TrivialAction(2));
  while (static_cast<int>(out.size()) < count)
    out.push_back(out.size() % 2 == 0 ? randomShiftAction(rng)
                                      : randomRegularRestriction(rng));
  return out;
}

}  // namespace corpus
