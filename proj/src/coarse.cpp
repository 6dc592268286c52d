#include "ample/coarse.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <stdexcept>

namespace ample::coarse {

namespace {

std::string pointLabel(const FiniteCoarseSpace& s, int x) {
  if (x >= 0 && x < static_cast<int>(s.pointLabels.size()))
    return s.pointLabels[x];
  return "x" + std::to_string(x);
}

}  // namespace

std::optional<std::string> validateSpace(const FiniteCoarseSpace& s) {
  if (s.numPoints < 0) return "negative point count";
  if (!s.pointLabels.empty() &&
      static_cast<int>(s.pointLabels.size()) != s.numPoints)
    return "point label count mismatch";
  for (std::size_t i = 0; i < s.generators.size(); ++i)
    for (const auto& [x, y] : s.generators[i])
      if (x < 0 || x >= s.numPoints || y < 0 || y >= s.numPoints)
        return "generator " + std::to_string(i) +
               " contains a point out of range";
  return std::nullopt;
}

void requireValidSpace(const FiniteCoarseSpace& s) {
  if (auto err = validateSpace(s)) throw std::invalid_argument(*err);
}

PairSet maximalEntourage(const FiniteCoarseSpace& s) {
  requireValidSpace(s);
  std::set<std::pair<int, int>> E;
  for (int x = 0; x < s.numPoints; ++x) E.insert({x, x});
  for (const PairSet& g : s.generators)
    for (const auto& [x, y] : g) {
      E.insert({x, y});
      E.insert({y, x});
    }
  bool grew = true;
  while (grew) {
    grew = false;
    std::vector<std::pair<int, int>> fresh;
    for (const auto& [x, y] : E)
      for (const auto& [y2, z] : E)
        if (y == y2 && !E.count({x, z})) fresh.push_back({x, z});
    for (const auto& p : fresh) grew |= E.insert(p).second;
  }
  return PairSet(E.begin(), E.end());
}

bool entourageMember(const FiniteCoarseSpace& s, const PairSet& E) {
  requireValidSpace(s);
  for (const auto& [x, y] : E)
    if (x < 0 || x >= s.numPoints || y < 0 || y >= s.numPoints)
      throw std::invalid_argument("pair out of range");
  const PairSet emax = maximalEntourage(s);
  const std::set<std::pair<int, int>> inside(emax.begin(), emax.end());
  for (const auto& p : E)
    if (!inside.count(p)) return false;
  return true;
}

UlfProfile ulfProfile(const FiniteCoarseSpace& s) {
  requireValidSpace(s);
  UlfProfile out;
  const auto sectionBound = [&](const std::set<std::pair<int, int>>& E) {
    int best = 0;
    for (int x = 0; x < s.numPoints; ++x) {
      int size = 0;
      for (int y = 0; y < s.numPoints; ++y) size += E.count({x, y});
      best = std::max(best, size);
    }
    return best;
  };
  for (const PairSet& g : s.generators) {
    std::set<std::pair<int, int>> E;
    for (int x = 0; x < s.numPoints; ++x) E.insert({x, x});
    for (const auto& [x, y] : g) {
      E.insert({x, y});
      E.insert({y, x});
    }
    out.generatorBounds.push_back(sectionBound(E));
  }
  const PairSet emax = maximalEntourage(s);
  out.maxBound =
      sectionBound(std::set<std::pair<int, int>>(emax.begin(), emax.end()));
  return out;
}

std::optional<std::string> validatePointMap(const FiniteCoarseSpace& s,
                                            const PointMap& f) {
  if (!f.target) return "missing target group";
  if (static_cast<int>(f.image.size()) != s.numPoints)
    return "image count mismatch";
  for (const grp::Word& w : f.image)
    if (!w.owner || !w.owner->wordGroup().sameAs(f.target->wordGroup()))
      return "image word in the wrong group";
  return std::nullopt;
}

namespace {

grp::Word diffLabel(const PointMap& f, int x, int y) {
  return grp::mulWords(f.image[x], grp::invWord(f.image[y]));
}

}  // namespace

LabelSetReport coarseMapCheck(const FiniteCoarseSpace& s, const PointMap& f,
                              int labelBudget) {
  requireValidSpace(s);
  if (auto err = validatePointMap(s, f)) throw std::invalid_argument(*err);
  if (labelBudget < 1) throw std::invalid_argument("label budget must be positive");
  LabelSetReport rep;
  rep.budget = labelBudget;
  for (std::size_t i = 0; i < s.generators.size(); ++i) {
    std::set<std::string> labels;
    for (const auto& [x, y] : s.generators[i]) {
      labels.insert(grp::wordToString(diffLabel(f, x, y)));
      labels.insert(grp::wordToString(diffLabel(f, y, x)));
      if (static_cast<int>(labels.size()) > labelBudget) {
        rep.bounded = false;
        rep.blownGenerator = static_cast<int>(i);
        break;
      }
    }
    rep.labels.emplace_back(labels.begin(), labels.end());
    if (!rep.bounded) break;
  }
  return rep;
}

MapCocycle mapToCocycle(const FiniteCoarseSpace& s, const PointMap& f) {
  requireValidSpace(s);
  if (auto err = validatePointMap(s, f)) throw std::invalid_argument(*err);
  MapCocycle M;
  M.arrows = maximalEntourage(s);
  for (int x = 0; x < s.numPoints; ++x) M.pointLabels.push_back(pointLabel(s, x));
  M.target = f.target;

  const int n = static_cast<int>(M.arrows.size());
  std::map<std::pair<int, int>, int> id;
  for (int a = 0; a < n; ++a) id[M.arrows[a]] = a;
  M.G.n = n;
  M.G.src.resize(n);
  M.G.rng.resize(n);
  M.G.inv.resize(n);
  M.G.isUnit.assign(n, 0);
  M.G.labels.resize(n);
  for (int a = 0; a < n; ++a) {
    const auto [x, y] = M.arrows[a];
    M.G.src[a] = id.at({y, y});
    M.G.rng[a] = id.at({x, x});
    M.G.inv[a] = id.at({y, x});
    M.G.isUnit[a] = x == y;
    if (M.G.isUnit[a]) M.G.units.push_back(a);
    M.G.labels[a] = "(" + pointLabel(s, x) + "," + pointLabel(s, y) + ")";
  }
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      const auto [x, y] = M.arrows[a];
      const auto [y2, z] = M.arrows[b];
      if (y == y2) M.G.comp[M.G.key(a, b)] = id.at({x, z});
    }
  gpd::requireValid(M.G);

  for (int a = 0; a < n; ++a) {
    const auto [x, y] = M.arrows[a];
    M.values.push_back(diffLabel(f, x, y));
  }
  gpd::WordCocycle c{&M.G, M.target, M.values};
  if (auto err = gpd::validateCocycle(c))
    throw std::logic_error("difference labeling broke multiplicativity: " +
                           *err);

  M.pure = true;
  for (int a = 0; a < n; ++a)
    if (!M.G.isUnit[a] && grp::isIdentity(M.values[a])) {
      M.pure = false;
      M.witness = M.G.labels[a];
      break;
    }
  return M;
}

RecoveredMap cocycleToMap(const MapCocycle& M, int basepoint) {
  const int numPoints = static_cast<int>(M.G.units.size());
  if (basepoint < 0 || basepoint >= numPoints)
    throw std::invalid_argument("basepoint out of range");
  std::map<std::pair<int, int>, int> id;
  for (int a = 0; a < static_cast<int>(M.arrows.size()); ++a)
    id[M.arrows[a]] = a;
  RecoveredMap out;
  out.covered.assign(numPoints, 0);
  out.f.target = M.target;
  for (int x = 0; x < numPoints; ++x) {
    const auto it = id.find({x, basepoint});
    if (it == id.end()) {
      out.f.image.push_back(grp::identityWord(M.target));
      out.skipped.push_back(x < static_cast<int>(M.pointLabels.size())
                                ? M.pointLabels[x]
                                : "x" + std::to_string(x));
    } else {
      out.f.image.push_back(M.values[it->second]);
      out.covered[x] = 1;
    }
  }
  out.total = out.skipped.empty();
  return out;
}

std::optional<std::string> validateWindowCocycle(const WindowCocycle& c) {
  if (!c.target) return "missing target group";
  if (c.numPoints < 0) return "negative point count";
  if (static_cast<int>(c.value.size()) != c.numPoints)
    return "value table has the wrong number of rows";
  for (const auto& row : c.value)
    if (static_cast<int>(row.size()) != c.numPoints)
      return "value table is not square";
  for (int x = 0; x < c.numPoints; ++x)
    if (!grp::isIdentity(c.value[x][x]))
      return "nonidentity value on the diagonal at " + std::to_string(x);
  for (int x = 0; x < c.numPoints; ++x)
    for (int y = 0; y < c.numPoints; ++y)
      for (int z = 0; z < c.numPoints; ++z)
        if (!grp::equalWords(grp::mulWords(c.value[x][y], c.value[y][z]),
                             c.value[x][z]))
          return "labels fail the triangle identity at (" +
                 std::to_string(x) + "," + std::to_string(y) + "," +
                 std::to_string(z) + ")";
  return std::nullopt;
}

PropernessProfile propernessProfile(const std::vector<WindowCocycle>& windows,
                                    const std::vector<grp::Word>& gammas) {
  if (windows.empty()) throw std::invalid_argument("no windows given");
  for (const WindowCocycle& w : windows)
    if (auto err = validateWindowCocycle(w)) throw std::invalid_argument(*err);
  PropernessProfile out;
  for (const WindowCocycle& w : windows) out.windowSizes.push_back(w.numPoints);
  for (const grp::Word& gammaRaw : gammas) {
    const grp::Word gamma = grp::reduceWord(gammaRaw);
    FiberGrowth row;
    row.gamma = grp::wordToString(gamma);
    for (const WindowCocycle& w : windows) {
      int count = 0;
      for (int x = 0; x < w.numPoints; ++x)
        for (int y = 0; y < w.numPoints; ++y)
          count += grp::equalWords(w.value[x][y], gamma);
      row.counts.push_back(count);
    }
    const bool nondecreasing =
        std::is_sorted(row.counts.begin(), row.counts.end());
    const bool constant =
        std::all_of(row.counts.begin(), row.counts.end(),
                    [&](int c) { return c == row.counts.front(); });
    if (grp::isIdentity(gamma))
      row.evidence = "diagonal";
    else if (constant)
      row.evidence = "proper evidence";
    else if (nondecreasing && row.counts.back() > row.counts.front())
      row.evidence = "non-proper evidence";
    else
      row.evidence = "inconclusive";
    out.rows.push_back(std::move(row));
  }
  return out;
}

RefuterResult maximalRefuter(const PointMap& f) {
  RefuterResult out;
  if (!f.target) throw std::invalid_argument("missing target group");
  const int n = static_cast<int>(f.image.size());
  if (n == 0) throw std::invalid_argument("empty point list");
  for (const grp::Word& w : f.image)
    if (!w.owner || !w.owner->wordGroup().sameAs(f.target->wordGroup()))
      throw std::invalid_argument("image word in the wrong group");
  if (f.target->kind == grp::GroupKind::Finite &&
      static_cast<int>(f.target->table.size()) < n) {
    out.error = "the target group has fewer elements than the point list";
    return out;
  }
  std::map<std::string, int> seenImage;
  for (int i = 0; i < n; ++i) {
    const std::string key = grp::wordToString(grp::reduceWord(f.image[i]));
    const auto [it, fresh] = seenImage.insert({key, i});
    if (!fresh) {
      out.error = "map is not injective: points " + std::to_string(it->second) +
                  " and " + std::to_string(i) + " share the image " + key;
      return out;
    }
  }

  std::set<std::string> seenLabels;
  int prev = 0;
  for (int k = 0; k < n; ++k) {
    bool placed = false;
    const int lo = k == 0 ? 0 : prev + 1;
    for (int cand = lo; cand < n && !placed; ++cand) {
      const grp::Word label =
          grp::mulWords(f.image[k], grp::invWord(f.image[cand]));
      const std::string key = grp::wordToString(label);
      if (seenLabels.insert(key).second) {
        out.pairs.push_back({k, cand});
        out.labels.push_back(label);
        prev = cand;
        placed = true;
      }
    }
    if (!placed) {
      out.exhausted = true;
      break;
    }
  }
  std::set<std::string> verify;
  for (const grp::Word& w : out.labels)
    if (!verify.insert(grp::wordToString(w)).second)
      throw std::logic_error("refuter produced a repeated label");
  return out;
}

}  // namespace ample::coarse
