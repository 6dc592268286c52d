#include "ample/pact.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>
#include <stdexcept>

namespace ample::pact {

namespace {

std::string pointName(const PartialActionSpec& spec, int x) {
  if (x >= 0 && x < static_cast<int>(spec.pointLabels.size()) &&
      !spec.pointLabels[x].empty())
    return spec.pointLabels[x];
  return std::to_string(x);
}

struct EntryView {
  grp::Word gamma;                 // canonical
  std::map<int, int> map;          // x -> gamma(x)
};

PactValidation fail(std::string axiom, std::string witness) {
  PactValidation v;
  v.ok = false;
  v.axiom = std::move(axiom);
  v.witness = std::move(witness);
  return v;
}

}  // namespace

PactValidation validatePartialAction(const PartialActionSpec& spec) {
  if (!spec.group) return fail("well-formed", "missing group");
  if (spec.numPoints < 0) return fail("well-formed", "negative point count");
  if (!spec.pointLabels.empty() &&
      static_cast<int>(spec.pointLabels.size()) != spec.numPoints)
    return fail("well-formed", "point label count mismatch");

  // Collect entries by canonical word; reject duplicates and malformed tables.
  std::map<std::string, EntryView> byWord;
  auto wordKey = [](const grp::Word& w) { return grp::wordToString(w); };
  auto canonKey = [](const grp::Word& w) { return grp::canonicalKey(w); };
  for (const PactEntry& e : spec.entries) {
    if (!e.gamma.owner || !e.gamma.owner->sameAs(*spec.group))
      return fail("well-formed", "entry word in wrong group");
    grp::Word g = grp::reduceWord(e.gamma);
    if (e.dom.size() != e.img.size())
      return fail("well-formed",
                  "entry " + wordKey(g) + " domain/image size mismatch");
    EntryView view{g, {}};
    std::set<int> imgSeen;
    for (size_t i = 0; i < e.dom.size(); ++i) {
      const int x = e.dom[i], y = e.img[i];
      if (x < 0 || x >= spec.numPoints || y < 0 || y >= spec.numPoints)
        return fail("well-formed", "entry " + wordKey(g) + " point out of range");
      if (view.map.count(x))
        return fail("well-formed",
                    "entry " + wordKey(g) + " repeats domain point " +
                        pointName(spec, x));
      if (!imgSeen.insert(y).second)
        return fail("bijection", "entry " + wordKey(g) + " is not injective at " +
                                     pointName(spec, y));
      view.map[x] = y;
    }
    if (view.map.empty() && !g.letters.empty()) continue;  // empty entries are noise
    auto [it, fresh] = byWord.emplace(canonKey(g), std::move(view));
    if (!fresh)
      return fail("well-formed", "duplicate entry for " + wordKey(g));
  }

  // Identity entry: defined on all points, acting as the identity.
  {
    const std::string idKey = canonKey(grp::identityWord(spec.group));
    auto it = byWord.find(idKey);
    if (it == byWord.end())
      return fail("(1) identity", "missing identity entry");
    if (static_cast<int>(it->second.map.size()) != spec.numPoints)
      return fail("(1) identity", "identity entry is not defined on every point");
    for (const auto& [x, y] : it->second.map)
      if (x != y)
        return fail("(1) identity", "identity entry moves point " + pointName(spec, x));
  }

  // Inverse closure with inverse maps.
  for (const auto& [key, e] : byWord) {
    (void)key;
    const grp::Word ginv = grp::invWord(e.gamma);
    auto it = byWord.find(canonKey(ginv));
    if (it == byWord.end())
      return fail("inverse-closure", "missing entry for " + wordKey(ginv));
    for (const auto& [x, y] : e.map) {
      auto back = it->second.map.find(y);
      if (back == it->second.map.end() || back->second != x)
        return fail("inverse-closure",
                    "entry " + wordKey(ginv) + " does not invert " +
                        wordKey(e.gamma) + " at point " + pointName(spec, x));
    }
    if (e.map.size() != it->second.map.size())
      return fail("inverse-closure",
                  "entries " + wordKey(e.gamma) + " and " + wordKey(ginv) +
                      " have different domain sizes");
  }

  // Product axioms: points gamma moves into dom(eta) must lie in
  // dom(eta*gamma), where the maps must compose.
  std::vector<PactEntry> forced;
  for (const auto& [gKey, eg] : byWord) {
    (void)gKey;
    const std::string gName = wordKey(eg.gamma);
    for (const auto& [hKey, eh] : byWord) {
      (void)hKey;
      const std::string hName = wordKey(eh.gamma);
      const grp::Word prod = grp::mulWords(eh.gamma, eg.gamma);
      auto pit = byWord.find(canonKey(prod));
      PactEntry force{prod, {}, {}};
      for (const auto& [x, gx] : eg.map) {
        auto mid = eh.map.find(gx);
        if (mid == eh.map.end()) continue;  // gamma(x) outside dom(eta)
        const int hgx = mid->second;
        if (pit == byWord.end()) {
          force.dom.push_back(x);
          force.img.push_back(hgx);
          continue;
        }
        auto comb = pit->second.map.find(x);
        if (comb == pit->second.map.end())
          return fail("(2) product domain",
                      "gamma=" + gName + ", eta=" + hName + ", x=" +
                          pointName(spec, x) + " not in dom(" + wordKey(prod) + ")");
        if (comb->second != hgx)
          return fail("(3) product compatibility",
                      "gamma=" + gName + ", eta=" + hName + ", x=" +
                          pointName(spec, x) + ": maps disagree");
      }
      if (!force.dom.empty()) {
        PactValidation v = fail("(2) product domain",
                                "gamma=" + gName + ", eta=" + hName + ", x=" +
                                    pointName(spec, force.dom.front()) +
                                    ": missing entry for " + wordKey(prod));
        PartialActionSpec suggestion = spec;
        suggestion.entries.push_back(force);
        PactEntry forceInv{grp::invWord(prod), force.img, force.dom};
        if (byWord.find(canonKey(forceInv.gamma)) == byWord.end())
          suggestion.entries.push_back(forceInv);
        v.completion = std::move(suggestion);
        return v;
      }
    }
  }

  // Normalized spec: canonical entry order, sorted domains.
  PartialActionSpec norm;
  norm.group = spec.group;
  norm.numPoints = spec.numPoints;
  norm.pointLabels = spec.pointLabels;
  std::vector<grp::Word> order;
  for (const auto& [key, e] : byWord) order.push_back(e.gamma);
  std::sort(order.begin(), order.end(),
            [](const grp::Word& a, const grp::Word& b) {
              return grp::cmpWords(a, b) < 0;
            });
  for (const grp::Word& g : order) {
    const EntryView& e = byWord.at(canonKey(g));
    PactEntry out{e.gamma, {}, {}};
    for (const auto& [x, y] : e.map) {
      out.dom.push_back(x);
      out.img.push_back(y);
    }
    norm.entries.push_back(std::move(out));
  }
  PactValidation v;
  v.ok = true;
  v.normalized = std::move(norm);
  return v;
}

// --- transformation groupoid ---------------------------------------------------

int TransformationGroupoid::arrowId(int entry, int point) const {
  int base = 0;
  for (int e = 0; e < entry; ++e)
    base += static_cast<int>(spec.entries[e].dom.size());
  const auto& dom = spec.entries[entry].dom;
  auto it = std::lower_bound(dom.begin(), dom.end(), point);
  if (it == dom.end() || *it != point) return -1;
  return base + static_cast<int>(it - dom.begin());
}

TransformationGroupoid buildTransformationGroupoid(const PartialActionSpec& rawSpec) {
  PactValidation v = validatePartialAction(rawSpec);
  if (!v.ok)
    throw std::invalid_argument("invalid partial action (" + v.axiom + "): " +
                                v.witness);
  TransformationGroupoid T;
  T.spec = std::move(*v.normalized);
  const PartialActionSpec& spec = T.spec;

  std::map<std::string, int> entryOf;
  for (size_t e = 0; e < spec.entries.size(); ++e)
    entryOf[grp::canonicalKey(spec.entries[e].gamma)] = static_cast<int>(e);

  std::vector<std::map<int, int>> maps(spec.entries.size());
  for (size_t e = 0; e < spec.entries.size(); ++e)
    for (size_t i = 0; i < spec.entries[e].dom.size(); ++i)
      maps[e][spec.entries[e].dom[i]] = spec.entries[e].img[i];

  for (size_t e = 0; e < spec.entries.size(); ++e)
    for (int x : spec.entries[e].dom)
      T.arrows.push_back({static_cast<int>(e), x});

  gpd::FiniteGroupoid& G = T.G;
  G.n = static_cast<int>(T.arrows.size());
  G.src.resize(G.n);
  G.rng.resize(G.n);
  G.inv.resize(G.n);
  G.isUnit.assign(G.n, 0);
  G.labels.resize(G.n);

  // The identity entry is first in canonical order, so its arrows are the
  // units and unit ids coincide with point ids.
  T.unitOfPoint.assign(spec.numPoints, -1);
  for (int a = 0; a < G.n; ++a) {
    if (T.arrows[a].entry != 0) break;
    T.unitOfPoint[T.arrows[a].point] = a;
  }
  for (int x = 0; x < spec.numPoints; ++x)
    if (T.unitOfPoint[x] < 0)
      throw std::logic_error("identity entry does not cover every point");

  for (int a = 0; a < G.n; ++a) {
    const auto& [e, x] = T.arrows[a];
    const int gx = maps[e].at(x);
    G.src[a] = T.unitOfPoint[x];
    G.rng[a] = T.unitOfPoint[gx];
    G.isUnit[a] = e == 0;
    const int einv = entryOf.at(grp::canonicalKey(grp::invWord(spec.entries[e].gamma)));
    G.inv[a] = T.arrowId(einv, gx);
    G.labels[a] = "(" + grp::wordToString(spec.entries[e].gamma) + "," +
                  pointName(spec, x) + ")";
  }
  for (int a = 0; a < G.n; ++a)
    for (int b = 0; b < G.n; ++b) {
      if (G.src[a] != G.rng[b]) continue;
      const auto& [ea, xa] = T.arrows[a];
      const auto& [eb, xb] = T.arrows[b];
      const grp::Word prod =
          grp::mulWords(spec.entries[ea].gamma, spec.entries[eb].gamma);
      auto it = entryOf.find(grp::canonicalKey(prod));
      if (it == entryOf.end())
        throw std::logic_error("validated spec is not product-closed");
      const int ab = T.arrowId(it->second, xb);
      if (ab < 0) throw std::logic_error("validated spec misses a product point");
      G.comp[G.key(a, b)] = ab;
    }
  for (int a = 0; a < G.n; ++a)
    if (G.isUnit[a]) G.units.push_back(a);

  T.cocycle.G = &T.G;
  T.cocycle.target = spec.group;
  for (int a = 0; a < G.n; ++a)
    T.cocycle.values.push_back(spec.entries[T.arrows[a].entry].gamma);
  return T;
}

// --- pure cocycles ---------------------------------------------------------------

PurityReport checkPureCocycle(const gpd::WordCocycle& c) {
  PurityReport rep;
  if (auto err = gpd::validateCocycle(c)) {
    rep.status = PurityStatus::Malformed;
    rep.witness = *err;
    return rep;
  }
  for (int a = 0; a < c.G->n; ++a)
    if (!c.G->isUnit[a] && grp::isIdentity(c.values[a])) {
      rep.status = PurityStatus::Impure;
      rep.witnessArrow = a;
      rep.witness = "non-unit arrow #" + std::to_string(a) + " has identity value";
      return rep;
    }
  rep.status = PurityStatus::Pure;
  return rep;
}

CocycleAction cocycleToPartialAction(const gpd::WordCocycle& c) {
  PurityReport purity = checkPureCocycle(c);
  if (purity.status != PurityStatus::Pure)
    throw std::invalid_argument("cocycle is not pure: " + purity.witness);
  const gpd::FiniteGroupoid& G = *c.G;

  // Points are the units of G, in unit order.
  std::map<std::string, std::vector<int>> fibers;  // canonical key -> arrows
  std::vector<std::string> keyOf(G.n);
  for (int a = 0; a < G.n; ++a) {
    keyOf[a] = grp::canonicalKey(c.values[a]);
    fibers[keyOf[a]].push_back(a);
  }

  PartialActionSpec spec;
  spec.group = c.target;
  spec.numPoints = static_cast<int>(G.units.size());
  for (const auto& [key, arrows] : fibers) {
    (void)key;
    PactEntry e{grp::reduceWord(c.values[arrows.front()]), {}, {}};
    std::set<int> srcSeen, rngSeen;
    for (int a : arrows) {
      const int x = G.unitIndex(G.src[a]);
      const int y = G.unitIndex(G.rng[a]);
      if (!srcSeen.insert(x).second || !rngSeen.insert(y).second)
        throw std::logic_error("pure cocycle fiber is not a bisection at " +
                               grp::wordToString(e.gamma));
      e.dom.push_back(x);
      e.img.push_back(y);
    }
    spec.entries.push_back(std::move(e));
  }

  CocycleAction out;
  TransformationGroupoid rebuilt = buildTransformationGroupoid(spec);
  out.spec = rebuilt.spec;

  std::map<std::string, int> entryOf;
  for (size_t e = 0; e < rebuilt.spec.entries.size(); ++e)
    entryOf[grp::canonicalKey(rebuilt.spec.entries[e].gamma)] = static_cast<int>(e);
  out.isoMap.assign(G.n, -1);
  std::vector<char> hit(rebuilt.G.n, 0);
  for (int a = 0; a < G.n; ++a) {
    const int target = rebuilt.arrowId(entryOf.at(keyOf[a]), G.unitIndex(G.src[a]));
    if (target < 0 || hit[target])
      throw std::logic_error("cocycle correspondence is not bijective");
    hit[target] = 1;
    out.isoMap[a] = target;
  }
  gpd::GroupoidHom iso{&G, &rebuilt.G, out.isoMap};
  if (auto err = gpd::validateHom(iso))
    throw std::logic_error("cocycle correspondence is not an isomorphism: " + *err);
  return out;
}

// --- property Delta witnesses ------------------------------------------------------

CanonicalDeltaH canonicalDeltaH(const PartialActionSpec& spec) {
  CanonicalDeltaH out{buildTransformationGroupoid(spec), {}};
  const auto& arrows = out.trans.arrows;
  for (int a = 0; a < static_cast<int>(arrows.size()); ++a)
    for (int b = 0; b < static_cast<int>(arrows.size()); ++b)
      if (arrows[a].entry == arrows[b].entry) out.H.push_back({a, b});
  return out;
}

DeltaAuditReport deltaAudit(const gpd::FiniteGroupoid& G, const gpd::PairSet& H,
                            const std::vector<int>& unitArrowsK,
                            const gpd::ArrowSubset& C,
                            const gpd::WordCocycle* c) {
  DeltaAuditReport rep;
  const gpd::ArrowSubset gk = gpd::arrowsOverUnits(G, unitArrowsK);
  std::set<int> gkSet(gk.begin(), gk.end());
  for (int a : C)
    if (!gkSet.count(a))
      throw std::invalid_argument("C must be a subset of G(K)");

  gpd::SubsetAudit sub = gpd::isSubgroupoidPairs(G, H);
  rep.subgroupoid = sub.ok;
  if (!sub.ok) rep.violation = sub.violation;
  gpd::SubsetAudit diag = gpd::containsDiagonal(G, H);
  rep.diagonal = diag.ok;
  if (rep.violation.empty() && !diag.ok) rep.violation = diag.violation;

  std::set<int> cSet(C.begin(), C.end());
  gpd::PairSet kByC, cByK;
  for (const auto& p : H) {
    if (gkSet.count(p.first) && cSet.count(p.second)) kByC.push_back(p);
    if (cSet.count(p.first) && gkSet.count(p.second)) cByK.push_back(p);
  }
  rep.fibKByC = gpd::fibCountPairs(G, kByC).value;
  rep.fibCByK = gpd::fibCountPairs(G, cByK).value;
  rep.measured = std::max(rep.fibKByC, rep.fibCByK);
  if (c) {
    if (c->G != &G) throw std::invalid_argument("cocycle lives on a different groupoid");
    std::set<std::string> moved;
    for (int a : C) moved.insert(grp::wordToString(c->values[a]));
    rep.movedElements = moved.size();
    rep.bound = 2 * static_cast<int>(rep.movedElements);
    rep.boundHolds = rep.measured <= rep.bound;
  }
  return rep;
}

}  // namespace ample::pact
