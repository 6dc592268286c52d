#include "ample/hls.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <stdexcept>

#include "ample/fixtures.hpp"
#include "ample/pact.hpp"

namespace ample::hls {

namespace {

const grp::QuotientChain& chainOf(const grp::GroupPtr& g) {
  if (!g || g->kind != grp::GroupKind::QuotientChain)
    throw std::invalid_argument("need a quotient-chain group");
  return *g->chain;
}

void requireCoherent(const grp::QuotientChain& chain) {
  if (auto err = grp::validateChain(chain))
    throw std::invalid_argument("chain coherence failure: " + *err);
}

int levelSize(const grp::QuotientChain& chain, int k) {
  return chain.levels[k].group->numGenerators();
}

void requireDepth(const grp::QuotientChain& chain, int depth) {
  if (depth < 0 || depth >= static_cast<int>(chain.levels.size()))
    throw std::invalid_argument("truncation depth outside the chain");
}

}  // namespace

// --- group bundle truncation --------------------------------------------------

int HlsTruncation::arrowId(int level, int element) const {
  return levelOffset.at(level) + element;
}

int HlsTruncation::levelOf(int arrow) const {
  for (int k = numLevels() - 1; k >= 0; --k)
    if (arrow >= levelOffset[k]) return k;
  throw std::invalid_argument("arrow out of range");
}

int HlsTruncation::elementOf(int arrow) const {
  return arrow - levelOffset[levelOf(arrow)];
}

HlsTruncation buildHls(const grp::GroupPtr& chainGroup, int depth,
                                 bool withTopFiber) {
  const grp::QuotientChain& chain = chainOf(chainGroup);
  requireCoherent(chain);
  requireDepth(chain, depth);
  HlsTruncation T;
  T.chain = chain;
  T.depth = depth;
  T.hasTop = withTopFiber;
  int total = 0;
  for (int k = 0; k < T.numLevels(); ++k) {
    T.levelOffset.push_back(total);
    total += levelSize(chain, std::min(k, depth));
  }
  gpd::FiniteGroupoid& G = T.G;
  G.n = total;
  G.src.resize(total);
  G.rng.resize(total);
  G.inv.resize(total);
  G.isUnit.assign(total, 0);
  G.labels.resize(total);
  for (int k = 0; k < T.numLevels(); ++k) {
    const grp::Group& L = *chain.levels[std::min(k, depth)].group;
    const int m = L.numGenerators();
    const int unit = T.arrowId(k, L.identity);
    const std::string lvl =
        T.hasTop && k == T.numLevels() - 1 ? "top" : std::to_string(k);
    for (int x = 0; x < m; ++x) {
      const int a = T.arrowId(k, x);
      G.src[a] = unit;
      G.rng[a] = unit;
      G.inv[a] = T.arrowId(k, L.inverseOf[x]);
      G.isUnit[a] = x == L.identity;
      G.labels[a] = "(" + lvl + "," + L.labels[x] + ")";
      for (int y = 0; y < m; ++y)
        G.comp[G.key(a, T.arrowId(k, y))] = T.arrowId(k, L.table[x][y]);
    }
  }
  for (int a = 0; a < G.n; ++a)
    if (G.isUnit[a]) G.units.push_back(a);
  return T;
}

// --- action truncation ----------------------------------------------------------

int AfsTruncation::pointIndex(int level, int element) const {
  return levelPointOffset.at(level) + element;
}

int AfsTruncation::pointUnit(int level, int element) const {
  const grp::Group& L = *chain.levels[level].group;
  return arrowId(level, L.identity, element);
}

std::pair<int, int> AfsTruncation::pointOf(int unitArrow) const {
  const Arrow a = arrowOf(unitArrow);
  return {a.level, a.x};
}

int AfsTruncation::arrowId(int level, int g, int x) const {
  const int m = levelSize(chain, level);
  return levelArrowOffset.at(level) + g * m + x;
}

AfsTruncation::Arrow AfsTruncation::arrowOf(int arrow) const {
  for (int k = depth; k >= 0; --k)
    if (arrow >= levelArrowOffset[k]) {
      const int m = levelSize(chain, k);
      const int rel = arrow - levelArrowOffset[k];
      return {k, rel / m, rel % m};
    }
  throw std::invalid_argument("arrow out of range");
}

AfsTruncation buildAfs(const grp::GroupPtr& chainGroup, int depth) {
  const grp::QuotientChain& chain = chainOf(chainGroup);
  requireCoherent(chain);
  requireDepth(chain, depth);
  AfsTruncation T;
  T.chain = chain;
  T.depth = depth;
  int arrows = 0, points = 0;
  for (int k = 0; k <= depth; ++k) {
    T.levelArrowOffset.push_back(arrows);
    T.levelPointOffset.push_back(points);
    const int m = levelSize(chain, k);
    arrows += m * m;
    points += m;
  }
  T.numPoints = points;
  gpd::FiniteGroupoid& G = T.G;
  G.n = arrows;
  G.src.resize(arrows);
  G.rng.resize(arrows);
  G.inv.resize(arrows);
  G.isUnit.assign(arrows, 0);
  G.labels.resize(arrows);
  for (int k = 0; k <= depth; ++k) {
    const grp::Group& L = *chain.levels[k].group;
    const int m = L.numGenerators();
    for (int g = 0; g < m; ++g)
      for (int x = 0; x < m; ++x) {
        const int a = T.arrowId(k, g, x);
        G.src[a] = T.pointUnit(k, x);
        G.rng[a] = T.pointUnit(k, L.table[g][x]);
        G.inv[a] = T.arrowId(k, L.inverseOf[g], L.table[g][x]);
        G.isUnit[a] = g == L.identity;
        G.labels[a] = "(" + std::to_string(k) + "," + L.labels[g] + "," +
                      L.labels[x] + ")";
      }
    for (int g = 0; g < m; ++g)
      for (int h = 0; h < m; ++h)
        for (int x = 0; x < m; ++x)
          G.comp[G.key(T.arrowId(k, g, L.table[h][x]), T.arrowId(k, h, x))] =
              T.arrowId(k, L.table[g][h], x);
  }
  for (int a = 0; a < G.n; ++a)
    if (G.isUnit[a]) G.units.push_back(a);
  return T;
}

std::vector<std::pair<int, int>> shadow(const grp::QuotientChain& chain, int k,
                                        int element, int depth) {
  requireDepth(chain, depth);
  if (k < 0 || k > depth) throw std::invalid_argument("shadow level out of range");
  if (element < 0 || element >= levelSize(chain, k))
    throw std::invalid_argument("shadow element out of range");
  std::vector<std::pair<int, int>> out;
  for (int n = k; n <= depth; ++n)
    for (int h = 0; h < levelSize(chain, n); ++h)
      if (grp::factorImage(chain, k, n, h) == element) out.push_back({n, h});
  return out;
}

// --- equicontinuity ---------------------------------------------------------------

EquicontinuityCertificate equicontinuityCertificate(
    const grp::GroupPtr& chainGroup, int depth, const std::vector<grp::Word>& S,
    int radius, const std::vector<int>& basepoint,
    const std::vector<ShadowRef>& cover) {
  EquicontinuityCertificate cert;
  const grp::QuotientChain& chain = chainOf(chainGroup);
  if (auto err = grp::validateChain(chain)) {
    cert.failure = "chain coherence failure: " + *err;
    return cert;
  }
  requireDepth(chain, depth);
  if (static_cast<int>(basepoint.size()) != depth + 1)
    throw std::invalid_argument("basepoint must list one element per level");
  for (int k = 0; k <= depth; ++k) {
    if (basepoint[k] < 0 || basepoint[k] >= levelSize(chain, k))
      throw std::invalid_argument("basepoint element out of range");
    if (k < depth &&
        grp::factorImage(chain, k, k + 1, basepoint[k + 1]) != basepoint[k]) {
      cert.failure = "basepoint sequence is not compatible at level " +
                     std::to_string(k);
      return cert;
    }
  }
  if (cover.empty()) {
    cert.failure = "empty shadow cover";
    return cert;
  }
  int kmax = 0;
  for (const ShadowRef& s : cover) {
    if (s.level < 0 || s.level > depth ||
        s.element < 0 || s.element >= levelSize(chain, s.level))
      throw std::invalid_argument("cover shadow out of range");
    kmax = std::max(kmax, s.level);
  }
  // Squares of the cover must contain the deepest-level diagonal.
  for (int h = 0; h < levelSize(chain, depth); ++h) {
    bool hit = false;
    for (const ShadowRef& s : cover)
      if (grp::factorImage(chain, s.level, depth, h) == s.element) {
        hit = true;
        break;
      }
    if (!hit) {
      cert.failure = "cover misses deepest-level element " +
                     chain.levels[depth].group->labels[h];
      return cert;
    }
  }

  cert.V = ShadowRef{kmax, basepoint[kmax]};
  cert.vPoints = shadow(chain, kmax, basepoint[kmax], depth);

  for (const grp::Word& gamma : grp::ballEnumerate(chainGroup, S, radius)) {
    // Deep-layer membership: the translated basepoint's level component.
    int chosen = -1;
    for (size_t i = 0; i < cover.size(); ++i) {
      const grp::Group& L = *chain.levels[cover[i].level].group;
      const int img = grp::quotientImage(chain, cover[i].level, gamma);
      if (L.table[img][basepoint[cover[i].level]] == cover[i].element) {
        chosen = static_cast<int>(i);
        break;
      }
    }
    if (chosen < 0) {
      cert.failure = "translated basepoint escapes the cover at gamma = " +
                     grp::wordToString(gamma);
      return cert;
    }
    const ShadowRef& tgt = cover[chosen];
    for (const auto& [n, h] : cert.vPoints) {
      const grp::Group& L = *chain.levels[n].group;
      const int moved = L.table[grp::quotientImage(chain, n, gamma)][h];
      if (grp::factorImage(chain, tgt.level, n, moved) != tgt.element) {
        cert.failure = "translate of V escapes the cover at gamma = " +
                       grp::wordToString(gamma) + ", level " + std::to_string(n);
        return cert;
      }
    }
    cert.trace.push_back({gamma, chosen});
  }
  cert.ok = true;
  return cert;
}

// --- forced-pair witness -------------------------------------------------------------

DeltaViolationCertificate deltaViolationWitness(const grp::GroupPtr& chainGroup,
                                                const std::vector<grp::Word>& S,
                                                int radius, int level) {
  const grp::QuotientChain& chain = chainOf(chainGroup);
  requireCoherent(chain);
  requireDepth(chain, level);
  const grp::Group& L = *chain.levels[level].group;

  DeltaViolationCertificate cert;
  cert.level = level;
  cert.radius = radius;
  for (const grp::BallEntry& entry :
       grp::ballEnumerateWithPaths(chainGroup, S, radius)) {
    cert.ball.push_back(entry.element);
    ForcedPair pair;
    pair.finite = {level, grp::quotientImage(chain, level, entry.element),
                   L.identity};
    pair.deep = {entry.element, grp::identityWord(chainGroup)};
    grp::Word suffix = grp::identityWord(chainGroup);
    std::vector<grp::Word> suffixes(entry.factors.size() + 1,
                                    grp::identityWord(chainGroup));
    for (int j = static_cast<int>(entry.factors.size()) - 1; j >= 0; --j)
      suffixes[j] = grp::mulWords(entry.factors[j], suffixes[j + 1]);
    for (size_t j = 0; j < entry.factors.size(); ++j) {
      pair.finiteSteps.push_back(
          {level, grp::quotientImage(chain, level, entry.factors[j]),
           grp::quotientImage(chain, level, suffixes[j + 1])});
      pair.deepSteps.push_back({entry.factors[j], suffixes[j + 1]});
    }
    cert.pairs.push_back(std::move(pair));
  }
  cert.fiberLowerBound = cert.pairs.size();
  if (auto err = verifyDeltaViolation(cert, chainGroup))
    throw std::logic_error("generated certificate failed replay: " + *err);
  return cert;
}

std::optional<std::string> verifyDeltaViolation(
    const DeltaViolationCertificate& cert, const grp::GroupPtr& chainGroup) {
  const grp::QuotientChain& chain = chainOf(chainGroup);
  if (auto err = grp::validateChain(chain))
    return "chain coherence failure: " + *err;
  if (cert.level < 0 || cert.level >= static_cast<int>(chain.levels.size()))
    return "certificate level outside the chain";
  const AfsTruncation T = buildAfs(chainGroup, cert.level);
  const grp::Group& L = *chain.levels[cert.level].group;

  if (cert.pairs.size() != cert.ball.size() ||
      cert.fiberLowerBound != cert.pairs.size())
    return "pair count does not match the ball";
  std::set<std::string> seen;
  for (size_t i = 0; i < cert.pairs.size(); ++i) {
    const ForcedPair& p = cert.pairs[i];
    const std::string gname = grp::wordToString(p.deep.gamma);
    if (!seen.insert(gname).second) return "duplicate forced pair at " + gname;
    if (!grp::equalWords(p.deep.gamma, cert.ball[i]))
      return "pair " + gname + " does not match its ball element";
    if (!grp::isIdentity(p.deep.basePoint))
      return "pair " + gname + " is not anchored at the identity sequence";
    if (p.finite.level != cert.level || p.finite.x != L.identity ||
        p.finite.g != grp::quotientImage(chain, cert.level, p.deep.gamma))
      return "finite component mismatch at " + gname;
    if (p.finiteSteps.size() != p.deepSteps.size())
      return "step lists disagree at " + gname;

    // Replay the finite steps through the composition table.
    if (p.finiteSteps.empty()) {
      if (!grp::isIdentity(p.deep.gamma))
        return "missing factorization for " + gname;
    } else {
      int acc = -1;
      for (int j = static_cast<int>(p.finiteSteps.size()) - 1; j >= 0; --j) {
        const auto& st = p.finiteSteps[j];
        if (st.level != cert.level) return "step at wrong level for " + gname;
        const int arrow = T.arrowId(st.level, st.g, st.x);
        acc = acc < 0 ? arrow : T.G.compose(arrow, acc);
      }
      if (acc != T.arrowId(cert.level, p.finite.g, p.finite.x))
        return "finite steps do not compose to the forced arrow at " + gname;
    }
    // Replay the deep steps symbolically.
    grp::Word accGamma = grp::identityWord(chainGroup);
    grp::Word expectedSource = grp::identityWord(chainGroup);
    for (int j = static_cast<int>(p.deepSteps.size()) - 1; j >= 0; --j) {
      const SymbolicArrow& st = p.deepSteps[j];
      if (!grp::equalWords(st.basePoint, expectedSource))
        return "deep step sources do not chain at " + gname;
      expectedSource = grp::mulWords(st.gamma, st.basePoint);
      accGamma = grp::mulWords(st.gamma, accGamma);
      // Cross-check against the finite image of the same step.
      if (grp::quotientImage(chain, cert.level, st.gamma) !=
          p.finiteSteps[j].g)
        return "step image mismatch at " + gname;
      if (grp::quotientImage(chain, cert.level, st.basePoint) !=
          p.finiteSteps[j].x)
        return "step basepoint image mismatch at " + gname;
    }
    if (!grp::equalWords(accGamma, p.deep.gamma))
      return "deep steps do not multiply to gamma at " + gname;
  }
  return std::nullopt;
}

// --- locally finite subgroupoid ---------------------------------------------------------

LocallyFiniteReport locallyFiniteDeltaBarH(
    const grp::GroupPtr& chainGroup,
    const std::vector<std::vector<grp::Word>>& fChain, int depth) {
  const grp::QuotientChain& chain = chainOf(chainGroup);
  requireCoherent(chain);
  requireDepth(chain, depth);
  if (static_cast<int>(fChain.size()) != depth + 1)
    throw std::invalid_argument("need one word list per level 0..depth");

  // Canonicalize and check the subgroup-list requirements.
  std::vector<std::vector<grp::Word>> F(fChain.size());
  std::vector<std::set<std::string>> keys(fChain.size());
  for (size_t n = 0; n < fChain.size(); ++n) {
    for (const grp::Word& w : fChain[n]) {
      grp::Word r = grp::reduceWord(w);
      if (keys[n].insert(grp::canonicalKey(r)).second) F[n].push_back(r);
    }
    const std::string at = "F_" + std::to_string(n) + " ";
    if (!keys[n].count(grp::canonicalKey(grp::identityWord(chainGroup))))
      throw std::invalid_argument(at + "does not contain the identity");
    for (const grp::Word& a : F[n]) {
      if (!keys[n].count(grp::canonicalKey(grp::invWord(a))))
        throw std::invalid_argument(at + "is not inverse-closed at " +
                                    grp::wordToString(a));
      for (const grp::Word& b : F[n])
        if (!keys[n].count(grp::canonicalKey(grp::mulWords(a, b))))
          throw std::invalid_argument(at + "is not product-closed at " +
                                      grp::wordToString(a) + " * " +
                                      grp::wordToString(b));
    }
    if (n > 0)
      for (const std::string& k : keys[n - 1])
        if (!keys[n].count(k))
          throw std::invalid_argument("F_" + std::to_string(n - 1) +
                                      " is not contained in F_" + std::to_string(n));
  }

  LocallyFiniteReport rep;
  rep.trunc = buildHls(chainGroup, depth);
  const HlsTruncation& T = rep.trunc;

  std::set<std::pair<int, int>> H;
  for (int n = 0; n <= depth; ++n)
    for (const grp::Word& gamma : F[n]) {
      std::vector<int> basic;
      for (int j = n; j <= depth; ++j)
        basic.push_back(T.arrowId(j, grp::quotientImage(chain, j, gamma)));
      for (int a : basic)
        for (int b : basic) H.insert({a, b});
    }
  rep.H.assign(H.begin(), H.end());

  gpd::SubsetAudit sub = gpd::isSubgroupoidPairs(T.G, rep.H);
  rep.subgroupoid = sub.ok;
  gpd::SubsetAudit diag = gpd::containsDiagonal(T.G, rep.H);
  rep.diagonal = diag.ok;
  rep.violation = !sub.ok ? sub.violation : (!diag.ok ? diag.violation : "");
  rep.fibFull = gpd::fibCountPairs(T.G, rep.H).value;

  for (int n = 0; n <= depth; ++n) {
    int found = -1;
    for (int m = n; m <= depth && found < 0; ++m) {
      std::set<int> images;
      bool injective = true;
      for (const grp::Word& gamma : F[n])
        if (!images.insert(grp::quotientImage(chain, m, gamma)).second) {
          injective = false;
          break;
        }
      if (injective) found = m;
    }
    rep.injectivityLevel.push_back(found);
  }
  return rep;
}

// --- group bundle vs trivial partial action ----------------------------------------------

BundleActionIso hlsVsPartialActionIso(const grp::GroupPtr& chainGroup,
                                         int depth, int actionDepth) {
  const grp::QuotientChain& chain = chainOf(chainGroup);
  requireCoherent(chain);
  requireDepth(chain, depth);
  if (actionDepth < 0) actionDepth = depth;
  for (int k = 0; k <= depth; ++k) {
    const grp::Group& L = *chain.levels[k].group;
    for (int x = 0; x < L.numGenerators(); ++x)
      if (L.table[x][x] != L.identity)
        throw std::invalid_argument(
            "chain level " + std::to_string(k) +
            " is not an elementary abelian 2-group");
  }
  const HlsTruncation left = buildHls(chainGroup, depth, true);
  const pact::TransformationGroupoid right = pact::buildTransformationGroupoid(
      fixtures::directSum2TrivialAction(actionDepth));

  BundleActionIso out;
  out.leftArrows = left.G.n;
  out.rightArrows = right.G.n;
  gpd::IsoResult iso = gpd::findIsomorphism(left.G, right.G);
  out.status = iso.status;
  out.reason = iso.reason;
  out.arrowMap = std::move(iso.arrowMap);
  return out;
}

}  // namespace ample::hls
