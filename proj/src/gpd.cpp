#include "ample/gpd.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <map>
#include <set>
#include <stdexcept>

namespace ample::gpd {

int FiniteGroupoid::compose(int g, int h) const {
  auto it = comp.find(key(g, h));
  if (it == comp.end())
    throw std::invalid_argument("composition undefined: s(g) != r(h)");
  return it->second;
}

std::vector<std::vector<int>> FiniteGroupoid::sourceFibers() const {
  std::vector<std::vector<int>> fibers(units.size());
  for (int a = 0; a < n; ++a) fibers[unitIndex(src[a])].push_back(a);
  return fibers;
}

std::vector<std::vector<int>> FiniteGroupoid::rangeFibers() const {
  std::vector<std::vector<int>> fibers(units.size());
  for (int a = 0; a < n; ++a) fibers[unitIndex(rng[a])].push_back(a);
  return fibers;
}

int FiniteGroupoid::unitIndex(int unitArrow) const {
  auto it = std::lower_bound(units.begin(), units.end(), unitArrow);
  if (it == units.end() || *it != unitArrow)
    throw std::invalid_argument("arrow is not a unit");
  return static_cast<int>(it - units.begin());
}

std::optional<std::string> validateGroupoid(const FiniteGroupoid& G) {
  auto arrowName = [&](int a) {
    return (a >= 0 && a < static_cast<int>(G.labels.size()) && !G.labels[a].empty())
               ? G.labels[a]
               : "#" + std::to_string(a);
  };
  if (G.n < 0) return "negative arrow count";
  if (static_cast<int>(G.src.size()) != G.n ||
      static_cast<int>(G.rng.size()) != G.n ||
      static_cast<int>(G.inv.size()) != G.n ||
      static_cast<int>(G.isUnit.size()) != G.n)
    return "table sizes do not match arrow count";
  {
    std::vector<int> expected;
    for (int a = 0; a < G.n; ++a)
      if (G.isUnit[a]) expected.push_back(a);
    if (expected != G.units) return "units list does not match unit flags";
    if (expected.empty() && G.n > 0) return "nonempty groupoid with no units";
  }
  for (int a = 0; a < G.n; ++a) {
    if (G.src[a] < 0 || G.src[a] >= G.n || !G.isUnit[G.src[a]])
      return "s(" + arrowName(a) + ") is not a unit";
    if (G.rng[a] < 0 || G.rng[a] >= G.n || !G.isUnit[G.rng[a]])
      return "r(" + arrowName(a) + ") is not a unit";
    if (G.inv[a] < 0 || G.inv[a] >= G.n) return "inv out of range";
  }
  for (int u : G.units)
    if (G.src[u] != u || G.rng[u] != u)
      return "unit " + arrowName(u) + " is not self-sourced";
  for (int a = 0; a < G.n; ++a) {
    if (G.inv[G.inv[a]] != a)
      return "inv is not an involution at " + arrowName(a);
    if (G.src[G.inv[a]] != G.rng[a] || G.rng[G.inv[a]] != G.src[a])
      return "inv does not swap s and r at " + arrowName(a);
  }
  // comp defined exactly on composable pairs.
  std::size_t composablePairs = 0;
  for (int g = 0; g < G.n; ++g)
    for (int h = 0; h < G.n; ++h)
      if (G.composable(g, h)) {
        ++composablePairs;
        auto it = G.comp.find(G.key(g, h));
        if (it == G.comp.end())
          return "composition missing for composable pair (" + arrowName(g) +
                 ", " + arrowName(h) + ")";
        const int gh = it->second;
        if (gh < 0 || gh >= G.n) return "composition out of range";
        if (G.src[gh] != G.src[h] || G.rng[gh] != G.rng[g])
          return "composition has wrong endpoints at (" + arrowName(g) + ", " +
                 arrowName(h) + ")";
      }
  if (G.comp.size() != composablePairs)
    return "composition defined on non-composable pairs";
  for (int a = 0; a < G.n; ++a) {
    if (G.comp.at(G.key(G.rng[a], a)) != a || G.comp.at(G.key(a, G.src[a])) != a)
      return "unit law fails at " + arrowName(a);
    if (G.comp.at(G.key(a, G.inv[a])) != G.rng[a] ||
        G.comp.at(G.key(G.inv[a], a)) != G.src[a])
      return "inverse law fails at " + arrowName(a);
  }
  for (int g = 0; g < G.n; ++g)
    for (int h = 0; h < G.n; ++h) {
      if (!G.composable(g, h)) continue;
      const int gh = G.comp.at(G.key(g, h));
      for (int k = 0; k < G.n; ++k) {
        if (!G.composable(h, k)) continue;
        const int hk = G.comp.at(G.key(h, k));
        if (G.comp.at(G.key(gh, k)) != G.comp.at(G.key(g, hk)))
          return "associativity fails at (" + arrowName(g) + ", " +
                 arrowName(h) + ", " + arrowName(k) + ")";
      }
    }
  return std::nullopt;
}

void requireValid(const FiniteGroupoid& G) {
  if (auto err = validateGroupoid(G))
    throw std::invalid_argument("invalid groupoid: " + *err);
}

// --- builders ----------------------------------------------------------------

namespace {

void finalizeUnits(FiniteGroupoid& G) {
  G.units.clear();
  for (int a = 0; a < G.n; ++a)
    if (G.isUnit[a]) G.units.push_back(a);
}

}  // namespace

FiniteGroupoid pairGroupoid(int points) {
  if (points < 0) throw std::invalid_argument("negative point count");
  FiniteGroupoid G;
  G.n = points * points;
  auto id = [&](int x, int y) { return x * points + y; };  // arrow y -> x
  G.src.resize(G.n);
  G.rng.resize(G.n);
  G.inv.resize(G.n);
  G.isUnit.assign(G.n, 0);
  for (int x = 0; x < points; ++x)
    for (int y = 0; y < points; ++y) {
      G.src[id(x, y)] = id(y, y);
      G.rng[id(x, y)] = id(x, x);
      G.inv[id(x, y)] = id(y, x);
      if (x == y) G.isUnit[id(x, y)] = 1;
    }
  for (int x = 0; x < points; ++x)
    for (int y = 0; y < points; ++y)
      for (int z = 0; z < points; ++z)
        G.comp[G.key(id(x, y), id(y, z))] = id(x, z);
  finalizeUnits(G);
  return G;
}

FiniteGroupoid groupAsGroupoid(const grp::GroupPtr& finiteGroup) {
  if (!finiteGroup || finiteGroup->kind != grp::GroupKind::Finite)
    throw std::invalid_argument("need a finite group");
  const auto& T = finiteGroup->table;
  FiniteGroupoid G;
  G.n = static_cast<int>(T.size());
  const int e = finiteGroup->identity;
  G.src.assign(G.n, e);
  G.rng.assign(G.n, e);
  G.inv = finiteGroup->inverseOf;
  G.isUnit.assign(G.n, 0);
  G.isUnit[e] = 1;
  for (int x = 0; x < G.n; ++x)
    for (int y = 0; y < G.n; ++y) G.comp[G.key(x, y)] = T[x][y];
  G.labels = finiteGroup->labels;
  finalizeUnits(G);
  return G;
}

FiniteGroupoid disjointUnion(const FiniteGroupoid& A, const FiniteGroupoid& B) {
  FiniteGroupoid G;
  G.n = A.n + B.n;
  auto shift = [&](int b) { return b + A.n; };
  G.src = A.src;
  G.rng = A.rng;
  G.inv = A.inv;
  G.isUnit = A.isUnit;
  for (int b = 0; b < B.n; ++b) {
    G.src.push_back(shift(B.src[b]));
    G.rng.push_back(shift(B.rng[b]));
    G.inv.push_back(shift(B.inv[b]));
    G.isUnit.push_back(B.isUnit[b]);
  }
  for (const auto& [k, v] : A.comp) {
    const int g = static_cast<int>(k / A.n), h = static_cast<int>(k % A.n);
    G.comp[G.key(g, h)] = v;
  }
  for (const auto& [k, v] : B.comp) {
    const int g = static_cast<int>(k / B.n), h = static_cast<int>(k % B.n);
    G.comp[G.key(shift(g), shift(h))] = shift(v);
  }
  if (!A.labels.empty() || !B.labels.empty()) {
    G.labels.resize(G.n);
    for (int a = 0; a < A.n; ++a)
      G.labels[a] = a < static_cast<int>(A.labels.size()) ? A.labels[a] : "";
    for (int b = 0; b < B.n; ++b)
      G.labels[shift(b)] = b < static_cast<int>(B.labels.size()) ? B.labels[b] : "";
  }
  finalizeUnits(G);
  return G;
}

FiniteGroupoid productGroupoid(const FiniteGroupoid& A, const FiniteGroupoid& B) {
  FiniteGroupoid G;
  G.n = A.n * B.n;
  auto id = [&](int a, int b) { return a * B.n + b; };
  G.src.resize(G.n);
  G.rng.resize(G.n);
  G.inv.resize(G.n);
  G.isUnit.assign(G.n, 0);
  for (int a = 0; a < A.n; ++a)
    for (int b = 0; b < B.n; ++b) {
      const int x = id(a, b);
      G.src[x] = id(A.src[a], B.src[b]);
      G.rng[x] = id(A.rng[a], B.rng[b]);
      G.inv[x] = id(A.inv[a], B.inv[b]);
      G.isUnit[x] = A.isUnit[a] && B.isUnit[b];
    }
  for (const auto& [ka, va] : A.comp) {
    const int g = static_cast<int>(ka / A.n), h = static_cast<int>(ka % A.n);
    for (const auto& [kb, vb] : B.comp) {
      const int p = static_cast<int>(kb / B.n), q = static_cast<int>(kb % B.n);
      G.comp[G.key(id(g, p), id(h, q))] = id(va, vb);
    }
  }
  finalizeUnits(G);
  return G;
}

FiniteGroupoid reduction(const FiniteGroupoid& G, const std::vector<int>& unitArrows,
                         std::vector<int>* arrowMap) {
  std::set<int> keep(unitArrows.begin(), unitArrows.end());
  for (int u : keep)
    if (u < 0 || u >= G.n || !G.isUnit[u])
      throw std::invalid_argument("reduction set contains a non-unit");
  std::vector<int> oldIds;
  std::vector<int> newId(G.n, -1);
  for (int a = 0; a < G.n; ++a)
    if (keep.count(G.src[a]) && keep.count(G.rng[a])) {
      newId[a] = static_cast<int>(oldIds.size());
      oldIds.push_back(a);
    }
  FiniteGroupoid R;
  R.n = static_cast<int>(oldIds.size());
  for (int a : oldIds) {
    R.src.push_back(newId[G.src[a]]);
    R.rng.push_back(newId[G.rng[a]]);
    R.inv.push_back(newId[G.inv[a]]);
    R.isUnit.push_back(G.isUnit[a]);
    if (!G.labels.empty()) R.labels.push_back(G.labels[a]);
  }
  for (int g : oldIds)
    for (int h : oldIds)
      if (G.composable(g, h))
        R.comp[R.key(newId[g], newId[h])] = newId[G.comp.at(G.key(g, h))];
  finalizeUnits(R);
  if (arrowMap) *arrowMap = oldIds;
  return R;
}

// --- arrow subsets -----------------------------------------------------------

namespace {

std::string arrowName(const FiniteGroupoid& G, int a) {
  return (a >= 0 && a < static_cast<int>(G.labels.size()) && !G.labels[a].empty())
             ? G.labels[a]
             : "#" + std::to_string(a);
}

}  // namespace

SubsetAudit isSubgroupoid(const FiniteGroupoid& G, const ArrowSubset& A) {
  std::set<int> in(A.begin(), A.end());
  for (int a : A) {
    if (a < 0 || a >= G.n) return {false, "arrow id out of range"};
    if (!in.count(G.inv[a]))
      return {false, "not closed under inverse at " + arrowName(G, a)};
    if (!in.count(G.src[a]) || !in.count(G.rng[a]))
      return {false, "missing unit of " + arrowName(G, a)};
  }
  for (int g : A)
    for (int h : A)
      if (G.composable(g, h) && !in.count(G.comp.at(G.key(g, h))))
        return {false, "not closed under composition at (" + arrowName(G, g) +
                           ", " + arrowName(G, h) + ")"};
  return {};
}

FibCount fibCount(const FiniteGroupoid& G, const ArrowSubset& A) {
  std::vector<int> bySrc(G.units.size(), 0), byRng(G.units.size(), 0);
  for (int a : A) {
    ++bySrc[G.unitIndex(G.src[a])];
    ++byRng[G.unitIndex(G.rng[a])];
  }
  FibCount out;
  for (size_t i = 0; i < G.units.size(); ++i) {
    const int v = bySrc[i] + byRng[i];
    if (v > out.value) {
      out.value = v;
      out.argmaxUnit = G.units[i];
    }
  }
  return out;
}

bool isBisection(const FiniteGroupoid& G, const ArrowSubset& A) {
  std::set<int> s, r;
  for (int a : A)
    if (!s.insert(G.src[a]).second || !r.insert(G.rng[a]).second) return false;
  return true;
}

ArrowSubset arrowsOverUnits(const FiniteGroupoid& G,
                            const std::vector<int>& unitArrows) {
  std::set<int> keep(unitArrows.begin(), unitArrows.end());
  ArrowSubset out;
  for (int a = 0; a < G.n; ++a)
    if (keep.count(G.src[a]) && keep.count(G.rng[a])) out.push_back(a);
  return out;
}

// --- pair subsets --------------------------------------------------------------

SubsetAudit isSubgroupoidPairs(const FiniteGroupoid& G, const PairSet& H) {
  std::set<std::pair<int, int>> in(H.begin(), H.end());
  auto name = [&](const std::pair<int, int>& p) {
    return "(" + arrowName(G, p.first) + ", " + arrowName(G, p.second) + ")";
  };
  for (const auto& [a, b] : H) {
    if (a < 0 || a >= G.n || b < 0 || b >= G.n)
      return {false, "pair component out of range"};
    if (!in.count({G.inv[a], G.inv[b]}))
      return {false, "not closed under inverse at " + name({a, b})};
    if (!in.count({G.src[a], G.src[b]}) || !in.count({G.rng[a], G.rng[b]}))
      return {false, "missing unit pair of " + name({a, b})};
  }
  // Componentwise composability means src(g) = rng(h) in both slots, so only
  // pairs sharing that unit pair can compose; bucket instead of scanning H².
  std::map<std::pair<int, int>, std::vector<std::pair<int, int>>> byRngUnits;
  for (const auto& h : H) byRngUnits[{G.rng[h.first], G.rng[h.second]}].push_back(h);
  for (const auto& g : H) {
    auto it = byRngUnits.find({G.src[g.first], G.src[g.second]});
    if (it == byRngUnits.end()) continue;
    for (const auto& h : it->second) {
      std::pair<int, int> gh{G.comp.at(G.key(g.first, h.first)),
                             G.comp.at(G.key(g.second, h.second))};
      if (!in.count(gh))
        return {false,
                "not closed under composition at " + name(g) + "*" + name(h)};
    }
  }
  return {};
}

SubsetAudit containsDiagonal(const FiniteGroupoid& G, const PairSet& H) {
  std::set<std::pair<int, int>> in(H.begin(), H.end());
  for (int a = 0; a < G.n; ++a)
    if (!in.count({a, a}))
      return {false, "diagonal pair missing at " + arrowName(G, a)};
  return {};
}

PairFibCount fibCountPairs(const FiniteGroupoid& G, const PairSet& H) {
  std::map<std::pair<int, int>, int> bySrc, byRng;
  for (const auto& [a, b] : H) {
    ++bySrc[{G.src[a], G.src[b]}];
    ++byRng[{G.rng[a], G.rng[b]}];
  }
  PairFibCount out;
  std::set<std::pair<int, int>> unitPairs;
  for (const auto& [u, c] : bySrc) unitPairs.insert(u);
  for (const auto& [u, c] : byRng) unitPairs.insert(u);
  for (const auto& u : unitPairs) {
    int v = 0;
    if (auto it = bySrc.find(u); it != bySrc.end()) v += it->second;
    if (auto it = byRng.find(u); it != byRng.end()) v += it->second;
    if (v > out.value) {
      out.value = v;
      out.argmaxUnit = u;
    }
  }
  return out;
}

// --- homomorphisms --------------------------------------------------------------

std::optional<std::string> validateHom(const GroupoidHom& h) {
  if (!h.dom || !h.cod) return "missing domain or codomain";
  const FiniteGroupoid& D = *h.dom;
  const FiniteGroupoid& C = *h.cod;
  if (static_cast<int>(h.map.size()) != D.n) return "map size mismatch";
  for (int a = 0; a < D.n; ++a) {
    const int fa = h.map[a];
    if (fa < 0 || fa >= C.n) return "map value out of range";
    if (D.isUnit[a] && !C.isUnit[fa])
      return "unit " + arrowName(D, a) + " does not map to a unit";
    if (C.src[fa] != h.map[D.src[a]] || C.rng[fa] != h.map[D.rng[a]])
      return "source/range not preserved at " + arrowName(D, a);
    if (h.map[D.inv[a]] != C.inv[fa])
      return "inverse not preserved at " + arrowName(D, a);
  }
  for (const auto& [k, gh] : D.comp) {
    const int g = static_cast<int>(k / D.n), x = static_cast<int>(k % D.n);
    if (C.comp.at(C.key(h.map[g], h.map[x])) != h.map[gh])
      return "composition not preserved at (" + arrowName(D, g) + ", " +
             arrowName(D, x) + ")";
  }
  return std::nullopt;
}

// --- positive type ---------------------------------------------------------------

PositiveTypeReport positiveTypeCheck(const PositiveTypeFn& phi, double tol) {
  if (!phi.G) throw std::invalid_argument("positive type function has no groupoid");
  const FiniteGroupoid& G = *phi.G;
  if (static_cast<int>(phi.values.size()) != G.n)
    throw std::invalid_argument("value count does not match arrow count");
  PositiveTypeReport rep;
  rep.positive = true;
  rep.minEigenvalue = std::numeric_limits<double>::infinity();
  const auto fibers = G.sourceFibers();
  for (size_t ui = 0; ui < fibers.size(); ++ui) {
    const auto& fiber = fibers[ui];
    const int m = static_cast<int>(fiber.size());
    Eigen::MatrixXcd M(m, m);
    double norm = 0.0;
    for (int i = 0; i < m; ++i) {
      double rowSum = 0.0;
      for (int j = 0; j < m; ++j) {
        const int a = G.comp.at(G.key(fiber[i], G.inv[fiber[j]]));
        M(i, j) = phi.values[a];
        rowSum += std::abs(M(i, j));
      }
      norm = std::max(norm, rowSum);
    }
    const double bound = tol * std::max(1.0, norm);
    rep.tolerance = bound;
    for (int i = 0; i < m; ++i)
      for (int j = i; j < m; ++j)
        if (std::abs(M(i, j) - std::conj(M(j, i))) > bound) {
          rep.positive = false;
          rep.failingUnit = G.units[ui];
          rep.reason = "hermitian";
          return rep;
        }
    if (m == 0) continue;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(M);
    const double lo = solver.eigenvalues().minCoeff();
    rep.minEigenvalue = std::min(rep.minEigenvalue, lo);
    if (lo < -bound) {
      rep.positive = false;
      rep.failingUnit = G.units[ui];
      rep.reason = "eigenvalue";
      return rep;
    }
  }
  if (!std::isfinite(rep.minEigenvalue)) rep.minEigenvalue = 0.0;
  return rep;
}

PositiveTypeFn pullbackPositiveType(const PositiveTypeFn& phi, const GroupoidHom& h) {
  if (auto err = validateHom(h))
    throw std::invalid_argument("invalid homomorphism: " + *err);
  if (h.cod != phi.G)
    throw std::invalid_argument("homomorphism codomain does not carry the function");
  PositiveTypeFn out;
  out.G = h.dom;
  out.values.reserve(h.dom->n);
  for (int a = 0; a < h.dom->n; ++a) out.values.push_back(phi.values[h.map[a]]);
  return out;
}

SupportProfile properSupportProfile(const FiniteGroupoid& G,
                                    const std::vector<std::complex<double>>& productValues,
                                    const std::vector<int>& unitArrowsK,
                                    const ArrowSubset& C) {
  if (productValues.size() != static_cast<std::size_t>(G.n) * G.n)
    throw std::invalid_argument("product value table has wrong size");
  const ArrowSubset gk = arrowsOverUnits(G, unitArrowsK);
  std::vector<char> inC(G.n, 0), inK(G.n, 0);
  for (int c : C) inC.at(c) = 1;
  for (int a : gk) inK[a] = 1;
  SupportProfile out;
  for (int a = 0; a < G.n; ++a)
    for (int b = 0; b < G.n; ++b) {
      if (productValues[static_cast<std::size_t>(a) * G.n + b] == 0.0) continue;
      if (inK[a] && inC[b]) ++out.kByC;
      if (inC[a] && inK[b]) ++out.cByK;
    }
  return out;
}

// --- isomorphism search -----------------------------------------------------------

namespace {

// Per-unit invariant: counts and isotropy element-order multiset.
struct UnitSignature {
  int out = 0;   // |G_u|
  int in = 0;    // |G^u|
  int iso = 0;   // |G_u^u|
  std::vector<int> isoOrders;
  auto tie() const { return std::tie(out, in, iso, isoOrders); }
  bool operator<(const UnitSignature& o) const { return tie() < o.tie(); }
  bool operator==(const UnitSignature& o) const { return tie() == o.tie(); }
};

int elementOrder(const FiniteGroupoid& G, int a) {
  int x = a, order = 1;
  while (!G.isUnit[x]) {
    x = G.comp.at(G.key(a, x));
    ++order;
    if (order > G.n) throw std::logic_error("order computation diverged");
  }
  return order;
}

std::vector<UnitSignature> unitSignatures(const FiniteGroupoid& G) {
  std::vector<UnitSignature> sig(G.units.size());
  for (int a = 0; a < G.n; ++a) {
    const int si = G.unitIndex(G.src[a]);
    const int ri = G.unitIndex(G.rng[a]);
    ++sig[si].out;
    ++sig[ri].in;
    if (G.src[a] == G.rng[a]) {
      ++sig[si].iso;
      sig[si].isoOrders.push_back(elementOrder(G, a));
    }
  }
  for (auto& s : sig) std::sort(s.isoOrders.begin(), s.isoOrders.end());
  return sig;
}

struct IsoSearch {
  const FiniteGroupoid& A;
  const FiniteGroupoid& B;
  std::vector<UnitSignature> sigA, sigB;
  std::vector<int> unitMap;      // A unit idx -> B unit arrow id, -1 unset
  std::vector<int> arrowMap;     // A arrow -> B arrow, -1 unset
  std::vector<char> usedB;
  long long budget;
  bool exhausted = false;

  bool consistent(int a, int b) {
    // endpoints
    const int su = A.unitIndex(A.src[a]), ru = A.unitIndex(A.rng[a]);
    if (unitMap[su] != B.src[b] || unitMap[ru] != B.rng[b]) return false;
    // inverse
    if (arrowMap[A.inv[a]] >= 0 && arrowMap[A.inv[a]] != B.inv[b]) return false;
    // compositions with already-assigned arrows
    for (int x = 0; x < A.n; ++x) {
      const int fx = arrowMap[x];
      if (fx < 0) continue;
      if (A.composable(a, x)) {
        const int ax = A.comp.at(A.key(a, x));
        if (!B.composable(b, fx)) return false;
        const int img = B.comp.at(B.key(b, fx));
        if (arrowMap[ax] >= 0 && arrowMap[ax] != img) return false;
        if (arrowMap[ax] < 0 && usedB[img] && img != b) {
          // image already taken by a different arrow
          bool taken = false;
          for (int y = 0; y < A.n && !taken; ++y)
            if (arrowMap[y] == img && y != ax) taken = true;
          if (taken) return false;
        }
      }
      if (A.composable(x, a)) {
        const int xa = A.comp.at(A.key(x, a));
        if (!B.composable(fx, b)) return false;
        const int img = B.comp.at(B.key(fx, b));
        if (arrowMap[xa] >= 0 && arrowMap[xa] != img) return false;
      }
    }
    return true;
  }

  bool assignArrows(int a) {
    while (a < A.n && arrowMap[a] >= 0) ++a;
    if (a == A.n) return true;
    if (--budget < 0) {
      exhausted = true;
      return false;
    }
    for (int b = 0; b < B.n; ++b) {
      if (usedB[b] || B.isUnit[b] != A.isUnit[a]) continue;
      if (!consistent(a, b)) continue;
      arrowMap[a] = b;
      usedB[b] = 1;
      const int ia = A.inv[a], ib = B.inv[b];
      bool setInv = false;
      if (arrowMap[ia] < 0 && !usedB[ib]) {
        arrowMap[ia] = ib;
        usedB[ib] = 1;
        setInv = true;
      }
      if (assignArrows(a + 1)) return true;
      if (exhausted) return false;
      if (setInv) {
        arrowMap[ia] = -1;
        usedB[ib] = 0;
      }
      arrowMap[a] = -1;
      usedB[b] = 0;
    }
    return false;
  }

  bool assignUnits(size_t ui, std::vector<char>& usedUnitB) {
    if (ui == A.units.size()) {
      for (size_t i = 0; i < A.units.size(); ++i) {
        arrowMap[A.units[i]] = unitMap[i];
        usedB[unitMap[i]] = 1;
      }
      if (assignArrows(0)) return true;
      if (exhausted) return false;
      for (size_t i = 0; i < A.units.size(); ++i) {
        arrowMap[A.units[i]] = -1;
        usedB[unitMap[i]] = 0;
      }
      return false;
    }
    if (--budget < 0) {
      exhausted = true;
      return false;
    }
    for (size_t vi = 0; vi < B.units.size(); ++vi) {
      if (usedUnitB[vi] || !(sigA[ui] == sigB[vi])) continue;
      unitMap[ui] = B.units[vi];
      usedUnitB[vi] = 1;
      if (assignUnits(ui + 1, usedUnitB)) return true;
      if (exhausted) return false;
      usedUnitB[vi] = 0;
      unitMap[ui] = -1;
    }
    return false;
  }
};

}  // namespace

IsoResult findIsomorphism(const FiniteGroupoid& A, const FiniteGroupoid& B,
                          long long budget) {
  if (A.n != B.n)
    return {IsoStatus::NonIsomorphic, {}, "arrow counts differ"};
  if (A.units.size() != B.units.size())
    return {IsoStatus::NonIsomorphic, {}, "unit counts differ"};
  auto sigA = unitSignatures(A), sigB = unitSignatures(B);
  {
    auto sa = sigA;
    auto sb = sigB;
    std::sort(sa.begin(), sa.end());
    std::sort(sb.begin(), sb.end());
    if (!(sa == sb))
      return {IsoStatus::NonIsomorphic, {},
              "unit degree / isotropy-order profiles differ"};
  }
  IsoSearch search{A, B, std::move(sigA), std::move(sigB),
                   std::vector<int>(A.units.size(), -1),
                   std::vector<int>(A.n, -1), std::vector<char>(B.n, 0),
                   budget};
  std::vector<char> usedUnitB(B.units.size(), 0);
  if (search.assignUnits(0, usedUnitB))
    return {IsoStatus::Found, search.arrowMap, ""};
  if (search.exhausted)
    return {IsoStatus::Exhausted, {}, "search budget exhausted"};
  return {IsoStatus::NonIsomorphic, {}, "exhaustive search found no isomorphism"};
}

// --- word-valued cocycles ----------------------------------------------------------

std::optional<std::string> validateCocycle(const WordCocycle& c) {
  if (!c.G || !c.target) return "missing groupoid or target group";
  const FiniteGroupoid& G = *c.G;
  if (static_cast<int>(c.values.size()) != G.n) return "value count mismatch";
  for (const auto& w : c.values)
    if (!w.owner || !w.owner->sameAs(*c.target))
      return "value in wrong target group";
  for (int u : G.units)
    if (!grp::isIdentity(c.values[u]))
      return "unit " + arrowName(G, u) + " has non-identity value";
  for (const auto& [k, gh] : G.comp) {
    const int g = static_cast<int>(k / G.n), h = static_cast<int>(k % G.n);
    if (!grp::equalWords(grp::mulWords(c.values[g], c.values[h]), c.values[gh]))
      return "not multiplicative at pair (" + arrowName(G, g) + ", " +
             arrowName(G, h) + ")";
  }
  return std::nullopt;
}

}  // namespace ample::gpd
