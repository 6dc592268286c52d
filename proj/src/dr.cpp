#include "ample/dr.hpp"

#include <algorithm>
#include <array>
#include <deque>
#include <map>
#include <set>
#include <stdexcept>
#include <unordered_map>

namespace ample::dr {

namespace {

std::string vertexLabel(const DirectedGraph& g, int v) {
  if (v >= 0 && v < static_cast<int>(g.vertexLabels.size()))
    return g.vertexLabels[v];
  return "v" + std::to_string(v);
}

std::string edgeLabel(const DirectedGraph& g, int e) {
  if (e >= 0 && e < static_cast<int>(g.edgeLabels.size()))
    return g.edgeLabels[e];
  return "e" + std::to_string(e);
}

std::string joinLabels(const std::vector<std::string>& parts) {
  bool allSingle = true;
  for (const std::string& p : parts) allSingle = allSingle && p.size() == 1;
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i && !allSingle) out += ".";
    out += parts[i];
  }
  return out;
}

}  // namespace

bool isSourceFree(const DirectedGraph& g) {
  std::vector<char> receives(g.numVertices, 0);
  for (const Edge& e : g.edges)
    if (e.to >= 0 && e.to < g.numVertices) receives[e.to] = 1;
  for (char r : receives)
    if (!r) return false;
  return true;
}

std::optional<std::string> validateGraph(const DirectedGraph& g) {
  if (g.numVertices < 0) return "negative vertex count";
  for (std::size_t i = 0; i < g.edges.size(); ++i) {
    const Edge& e = g.edges[i];
    if (e.to < 0 || e.to >= g.numVertices || e.from < 0 ||
        e.from >= g.numVertices)
      return "edge " + std::to_string(i) + " has an endpoint out of range";
  }
  if (!g.vertexLabels.empty() &&
      static_cast<int>(g.vertexLabels.size()) != g.numVertices)
    return "vertex label count mismatch";
  if (!g.edgeLabels.empty() && g.edgeLabels.size() != g.edges.size())
    return "edge label count mismatch";
  for (int v = 0; v < g.numVertices; ++v) {
    bool receives = false;
    for (const Edge& e : g.edges) receives = receives || e.to == v;
    if (!receives)
      return "vertex " + vertexLabel(g, v) + " receives no edge";
  }
  return std::nullopt;
}

void requireValidGraph(const DirectedGraph& g) {
  if (auto err = validateGraph(g)) throw std::invalid_argument(*err);
}

std::vector<std::vector<int>> adjacency(const DirectedGraph& g) {
  std::vector<std::vector<int>> A(g.numVertices,
                                  std::vector<int>(g.numVertices, 0));
  for (const Edge& e : g.edges) ++A[e.to][e.from];
  return A;
}

GPath vertexPath(int vertex) { return GPath{vertex, {}}; }

bool validPath(const DirectedGraph& g, const GPath& p) {
  if (p.vertex < 0 || p.vertex >= g.numVertices) return false;
  int at = p.vertex;
  for (int e : p.edges) {
    if (e < 0 || e >= static_cast<int>(g.edges.size())) return false;
    if (g.edges[e].to != at) return false;
    at = g.edges[e].from;
  }
  return true;
}

int pathSource(const DirectedGraph& g, const GPath& p) {
  return p.edges.empty() ? p.vertex : g.edges[p.edges.back()].from;
}

std::string pathName(const DirectedGraph& g, const GPath& p) {
  if (p.edges.empty()) return vertexLabel(g, p.vertex);
  std::vector<std::string> parts;
  for (int e : p.edges) parts.push_back(edgeLabel(g, e));
  return joinLabels(parts);
}

bool pathBefore(const GPath& a, const GPath& b) {
  if (a.edges.size() != b.edges.size())
    return a.edges.size() < b.edges.size();
  if (a.edges != b.edges) return a.edges < b.edges;
  return a.vertex < b.vertex;
}

std::vector<GPath> enumeratePaths(const DirectedGraph& g, int maxLen) {
  requireValidGraph(g);
  if (maxLen < 0) throw std::invalid_argument("negative path length");
  std::vector<GPath> out;
  std::vector<GPath> level;
  for (int v = 0; v < g.numVertices; ++v) level.push_back(vertexPath(v));
  out = level;
  for (int l = 1; l <= maxLen; ++l) {
    std::vector<GPath> next;
    for (const GPath& p : level) {
      const int src = pathSource(g, p);
      for (int e = 0; e < static_cast<int>(g.edges.size()); ++e)
        if (g.edges[e].to == src) {
          GPath q = p;
          q.edges.push_back(e);
          next.push_back(std::move(q));
        }
    }
    std::sort(next.begin(), next.end(),
              [](const GPath& a, const GPath& b) { return pathBefore(a, b); });
    out.insert(out.end(), next.begin(), next.end());
    level = std::move(next);
  }
  return out;
}

GPath concatPath(const DirectedGraph& g, const GPath& head, const GPath& tail) {
  if (pathSource(g, head) != tail.vertex)
    throw std::invalid_argument("paths do not chain");
  GPath out = head;
  out.edges.insert(out.edges.end(), tail.edges.begin(), tail.edges.end());
  return out;
}

// --- cylinder calculus ------------------------------------------------------

std::optional<GPath> cylinderMeet(const GPath& a, const GPath& b) {
  if (a.vertex != b.vertex) return std::nullopt;
  const GPath& shorter = a.edges.size() <= b.edges.size() ? a : b;
  const GPath& longer = a.edges.size() <= b.edges.size() ? b : a;
  for (std::size_t i = 0; i < shorter.edges.size(); ++i)
    if (shorter.edges[i] != longer.edges[i]) return std::nullopt;
  return longer;
}

namespace {

bool isPrefix(const GPath& p, const GPath& q) {
  if (p.vertex != q.vertex || p.edges.size() > q.edges.size()) return false;
  return std::equal(p.edges.begin(), p.edges.end(), q.edges.begin());
}

// All length-`len` paths extending p (depth-first, edge order).
void extendAll(const DirectedGraph& g, const GPath& p, int len,
               std::vector<GPath>& out) {
  if (static_cast<int>(p.edges.size()) == len) {
    out.push_back(p);
    return;
  }
  const int src = pathSource(g, p);
  for (int e = 0; e < static_cast<int>(g.edges.size()); ++e)
    if (g.edges[e].to == src) {
      GPath q = p;
      q.edges.push_back(e);
      extendAll(g, q, len, out);
    }
}

}  // namespace

CompactOpen cylinderDiff(const DirectedGraph& g, const GPath& mu,
                         const GPath& nu) {
  if (!validPath(g, mu) || !validPath(g, nu))
    throw std::invalid_argument("invalid path");
  CompactOpen out;
  const auto meet = cylinderMeet(mu, nu);
  if (!meet) {
    out.push_back(mu);
  } else if (isPrefix(nu, mu)) {
    // Z(mu) inside Z(nu): empty difference.
  } else {
    GPath cur = mu;
    for (std::size_t d = mu.edges.size(); d < nu.edges.size(); ++d) {
      const int src = pathSource(g, cur);
      for (int e = 0; e < static_cast<int>(g.edges.size()); ++e)
        if (g.edges[e].to == src && e != nu.edges[d]) {
          GPath q = cur;
          q.edges.push_back(e);
          out.push_back(std::move(q));
        }
      cur.edges.push_back(nu.edges[d]);
    }
  }
  // Extensional re-check on the depth-(|mu|+|nu|) paths.
  const int P = static_cast<int>(mu.edges.size() + nu.edges.size());
  std::vector<GPath> window;
  extendAll(g, vertexPath(mu.vertex), P, window);
  for (const GPath& x : window) {
    const bool want = isPrefix(mu, x) && !isPrefix(nu, x);
    int hits = 0;
    for (const GPath& part : out) hits += isPrefix(part, x);
    if (hits != (want ? 1 : 0))
      throw std::logic_error("cylinder difference disagrees at " +
                             pathName(g, x));
  }
  std::sort(out.begin(), out.end(),
            [](const GPath& a, const GPath& b) { return pathBefore(a, b); });
  return out;
}

CompactOpen normalizeCompactOpen(const DirectedGraph& g, CompactOpen parts) {
  for (const GPath& p : parts)
    if (!validPath(g, p))
      throw std::invalid_argument("invalid cylinder path");
  // Keep only prefix-minimal parts (drop anything refined by another part).
  bool changed = true;
  while (changed) {
    changed = false;
    CompactOpen kept;
    for (std::size_t i = 0; i < parts.size(); ++i) {
      bool dominated = false;
      for (std::size_t j = 0; j < parts.size() && !dominated; ++j)
        if (i != j && (isPrefix(parts[j], parts[i]) &&
                       !(parts[j] == parts[i] && j > i)))
          dominated = true;
      if (!dominated) kept.push_back(parts[i]);
    }
    parts = std::move(kept);
    // Merge complete sibling families into their parent.
    std::map<GPath, std::vector<int>> byParent;
    for (std::size_t i = 0; i < parts.size(); ++i) {
      if (parts[i].edges.empty()) continue;
      GPath parent = parts[i];
      parent.edges.pop_back();
      byParent[parent].push_back(static_cast<int>(i));
    }
    for (const auto& [parent, members] : byParent) {
      int family = 0;
      const int src = pathSource(g, parent);
      for (const Edge& e : g.edges) family += e.to == src;
      if (static_cast<int>(members.size()) == family && family > 0) {
        CompactOpen next;
        std::set<int> drop(members.begin(), members.end());
        for (std::size_t i = 0; i < parts.size(); ++i)
          if (!drop.count(static_cast<int>(i))) next.push_back(parts[i]);
        next.push_back(parent);
        parts = std::move(next);
        changed = true;
        break;
      }
    }
  }
  std::sort(parts.begin(), parts.end(),
            [](const GPath& a, const GPath& b) { return pathBefore(a, b); });
  parts.erase(std::unique(parts.begin(), parts.end()), parts.end());
  return parts;
}

CompactOpen meetCompactOpen(const DirectedGraph& g, const CompactOpen& A,
                            const CompactOpen& B) {
  CompactOpen out;
  for (const GPath& a : A)
    for (const GPath& b : B)
      if (auto m = cylinderMeet(a, b)) out.push_back(*m);
  return normalizeCompactOpen(g, std::move(out));
}

CompactOpen uniteCompactOpen(const DirectedGraph& g, const CompactOpen& A,
                             const CompactOpen& B) {
  CompactOpen out = A;
  out.insert(out.end(), B.begin(), B.end());
  return normalizeCompactOpen(g, std::move(out));
}

CompactOpen diffCompactOpen(const DirectedGraph& g, const CompactOpen& A,
                            const CompactOpen& B) {
  CompactOpen out;
  for (const GPath& a : A) {
    CompactOpen remaining{a};
    for (const GPath& b : B) {
      CompactOpen next;
      for (const GPath& r : remaining) {
        CompactOpen d = cylinderDiff(g, r, b);
        next.insert(next.end(), d.begin(), d.end());
      }
      remaining = std::move(next);
    }
    out.insert(out.end(), remaining.begin(), remaining.end());
  }
  return normalizeCompactOpen(g, std::move(out));
}

bool sameCompactOpen(const DirectedGraph& g, const CompactOpen& A,
                     const CompactOpen& B) {
  return normalizeCompactOpen(g, A) == normalizeCompactOpen(g, B);
}

CompactOpen transportCompactOpen(const DirectedGraph& g, const GPath& lambda,
                                 const GPath& mu, const CompactOpen& O) {
  if (!validPath(g, lambda) || !validPath(g, mu) ||
      pathSource(g, lambda) != pathSource(g, mu))
    throw std::invalid_argument("not a bisection pair");
  CompactOpen inside = normalizeCompactOpen(g, O);
  if (!diffCompactOpen(g, inside, CompactOpen{mu}).empty())
    throw std::invalid_argument("set extends outside the bisection source");
  CompactOpen out;
  for (const GPath& p : inside) {
    GPath q = lambda;
    q.edges.insert(q.edges.end(), p.edges.begin() + mu.edges.size(),
                   p.edges.end());
    out.push_back(std::move(q));
  }
  return normalizeCompactOpen(g, std::move(out));
}

// --- truncated bisection groupoid -------------------------------------------

int DrTruncation::pathIndex(const GPath& p) const {
  const auto it = std::lower_bound(
      paths.begin(), paths.end(), p,
      [](const GPath& a, const GPath& b) { return pathBefore(a, b); });
  if (it == paths.end() || !(*it == p)) return -1;
  return static_cast<int>(it - paths.begin());
}

int DrTruncation::arrowIndex(int lambda, int mu) const {
  const auto it = std::lower_bound(bisections.begin(), bisections.end(),
                                   std::make_pair(lambda, mu));
  if (it == bisections.end() || *it != std::make_pair(lambda, mu)) return -1;
  return static_cast<int>(it - bisections.begin());
}

namespace {

// Shared table builder: arrows are same-source path pairs composing on an
// exact middle match (per-source pair groupoid).
void buildPairTable(const std::vector<int>& sourceOf,
                    const std::vector<std::string>& names,
                    std::vector<std::pair<int, int>>& bisections,
                    gpd::FiniteGroupoid& G) {
  const int m = static_cast<int>(sourceOf.size());
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      if (sourceOf[i] == sourceOf[j]) bisections.push_back({i, j});
  std::sort(bisections.begin(), bisections.end());
  const int n = static_cast<int>(bisections.size());
  std::map<std::pair<int, int>, int> id;
  for (int a = 0; a < n; ++a) id[bisections[a]] = a;
  G.n = n;
  G.src.resize(n);
  G.rng.resize(n);
  G.inv.resize(n);
  G.isUnit.assign(n, 0);
  G.labels.resize(n);
  for (int a = 0; a < n; ++a) {
    const auto [i, j] = bisections[a];
    G.src[a] = id.at({j, j});
    G.rng[a] = id.at({i, i});
    G.inv[a] = id.at({j, i});
    G.isUnit[a] = i == j;
    G.labels[a] = "(" + names[i] + "," + names[j] + ")";
    if (G.isUnit[a]) G.units.push_back(a);
  }
  // Group path ids by source once, then fill the comp table per group.
  std::map<int, std::vector<int>> bySource;
  for (int i = 0; i < m; ++i) bySource[sourceOf[i]].push_back(i);
  for (const auto& [v, group] : bySource) {
    for (int i : group)
      for (int j : group)
        for (int k : group)
          G.comp[G.key(id.at({i, j}), id.at({j, k}))] = id.at({i, k});
  }
}

}  // namespace

DrTruncation buildDrTruncation(const DirectedGraph& g, int maxLen) {
  requireValidGraph(g);
  if (maxLen < 0) throw std::invalid_argument("negative truncation depth");
  DrTruncation T;
  T.graph = g;
  T.maxLen = maxLen;
  T.paths = enumeratePaths(g, maxLen);
  std::vector<int> sourceOf;
  std::vector<std::string> names;
  for (const GPath& p : T.paths) {
    sourceOf.push_back(pathSource(g, p));
    names.push_back(pathName(g, p));
  }
  buildPairTable(sourceOf, names, T.bisections, T.G);
  return T;
}

std::optional<int> composeComparable(const DrTruncation& T, int a, int b) {
  if (a < 0 || a >= T.G.n || b < 0 || b >= T.G.n)
    throw std::invalid_argument("arrow out of range");
  const GPath& lambda = T.paths[T.bisections[a].first];
  const GPath& mu = T.paths[T.bisections[a].second];
  const GPath& alpha = T.paths[T.bisections[b].first];
  const GPath& nu = T.paths[T.bisections[b].second];
  if (isPrefix(mu, alpha)) {
    GPath left = lambda;
    left.edges.insert(left.edges.end(), alpha.edges.begin() + mu.edges.size(),
                      alpha.edges.end());
    if (static_cast<int>(left.edges.size()) > T.maxLen) return std::nullopt;
    const int li = T.pathIndex(left);
    const int ni = T.pathIndex(nu);
    const int arrow = li < 0 ? -1 : T.arrowIndex(li, ni);
    return arrow < 0 ? std::nullopt : std::optional<int>(arrow);
  }
  if (isPrefix(alpha, mu)) {
    GPath right = nu;
    right.edges.insert(right.edges.end(), mu.edges.begin() + alpha.edges.size(),
                       mu.edges.end());
    if (static_cast<int>(right.edges.size()) > T.maxLen) return std::nullopt;
    const int li = T.pathIndex(lambda);
    const int ri = T.pathIndex(right);
    const int arrow = ri < 0 ? -1 : T.arrowIndex(li, ri);
    return arrow < 0 ? std::nullopt : std::optional<int>(arrow);
  }
  return std::nullopt;
}

namespace {

grp::Word pathPairWord(const grp::GroupPtr& target, const GPath& lambda,
                       const GPath& mu) {
  std::vector<grp::Letter> letters;
  for (int e : lambda.edges) letters.push_back({e, 1});
  for (auto it = mu.edges.rbegin(); it != mu.edges.rend(); ++it)
    letters.push_back({*it, -1});
  return grp::reduceWord(grp::wordFromLetters(target, std::move(letters)));
}

}  // namespace

gpd::WordCocycle flamCocycle(const DrTruncation& T) {
  std::vector<std::string> labels;
  for (std::size_t e = 0; e < T.graph.edges.size(); ++e)
    labels.push_back(edgeLabel(T.graph, static_cast<int>(e)));
  gpd::WordCocycle c;
  c.G = &T.G;
  c.target = grp::Group::makeFree(static_cast<int>(T.graph.edges.size()),
                                  std::move(labels));
  for (const auto& [li, mi] : T.bisections)
    c.values.push_back(pathPairWord(c.target, T.paths[li], T.paths[mi]));
  return c;
}

int degreeDiff(const DrTruncation& T, int arrow) {
  if (arrow < 0 || arrow >= T.G.n)
    throw std::invalid_argument("arrow out of range");
  return static_cast<int>(T.paths[T.bisections[arrow].first].edges.size()) -
         static_cast<int>(T.paths[T.bisections[arrow].second].edges.size());
}

// --- purity and properness ----------------------------------------------------

PurityCertificate purityCheckGraph(const DirectedGraph& g, int maxLen) {
  const DrTruncation T = buildDrTruncation(g, maxLen);
  const gpd::WordCocycle c = flamCocycle(T);
  if (auto err = gpd::validateCocycle(c))
    throw std::logic_error("edge-word cocycle broke multiplicativity: " + *err);
  for (int a = 0; a < T.G.n; ++a)
    if (!T.G.isUnit[a] && grp::isIdentity(c.values[a]))
      throw std::logic_error("identity cocycle value on the non-unit arrow " +
                             T.G.labels[a]);
  PurityCertificate cert;
  cert.pure = TriState::Yes;
  cert.evidence = "edge-words";
  cert.maxLen = maxLen;
  cert.checkedArrows = T.G.n;
  return cert;
}

namespace {

// A window element: paths x, y with minimal shift witness (m, l) whose tails
// agree on the whole overlap.
struct WindowElement {
  int x = 0, m = 0, l = 0, y = 0;
};

}  // namespace

LocalPropernessCertificate localPropernessCertificate(const DirectedGraph& g,
                                                      int maxLen) {
  requireValidGraph(g);
  if (maxLen < 0) throw std::invalid_argument("negative truncation depth");
  LocalPropernessCertificate cert;
  cert.maxLen = maxLen;
  cert.window = std::max(1, 2 * maxLen);
  const int P = cert.window;

  std::vector<GPath> window;
  for (int v = 0; v < g.numVertices; ++v)
    extendAll(g, vertexPath(v), P, window);
  std::map<GPath, int> windowIndex;
  for (std::size_t i = 0; i < window.size(); ++i)
    windowIndex[window[i]] = static_cast<int>(i);

  // Enumerate minimal-witness elements, bucketed by the shift pair (m, l).
  const int W = static_cast<int>(window.size());
  std::vector<std::vector<WindowElement>> byShift((maxLen + 1) * (maxLen + 1));
  const auto bucket = [&](int m, int l) { return m * (maxLen + 1) + l; };
  for (int xi = 0; xi < W; ++xi)
    for (int yi = 0; yi < W; ++yi) {
      const GPath& x = window[xi];
      const GPath& y = window[yi];
      if (pathSource(g, x) != pathSource(g, y)) continue;
      for (int m = 0; m <= maxLen; ++m)
        for (int l = 0; l <= maxLen; ++l) {
          if (m > 0 && l > 0 && x.edges[m - 1] == y.edges[l - 1])
            continue;  // not the minimal witness
          bool match = true;
          const int overlap = P - std::max(m, l);
          for (int i = 0; i < overlap && match; ++i)
            match = x.edges[m + i] == y.edges[l + i];
          if (match)
            byShift[bucket(m, l)].push_back(WindowElement{xi, m, l, yi});
        }
    }

  const grp::GroupPtr target =
      grp::Group::makeFree(static_cast<int>(g.edges.size()), {});
  const std::vector<GPath> paths = enumeratePaths(g, maxLen);
  for (const GPath& lambda : paths)
    for (const GPath& mu : paths) {
      if (pathSource(g, lambda) != pathSource(g, mu)) continue;
      ++cert.bisectionsChecked;
      const int a = static_cast<int>(lambda.edges.size());
      const int b = static_cast<int>(mu.edges.size());

      // Germ set, built directly: x and y share the tail w beyond the pair.
      std::set<std::array<int, 4>> germs;
      std::vector<GPath> tails;
      extendAll(g, vertexPath(pathSource(g, lambda)), P - std::min(a, b),
                tails);
      for (const GPath& w : tails) {
        GPath x = lambda;
        x.edges.insert(x.edges.end(), w.edges.begin(),
                       w.edges.begin() + (P - a));
        GPath y = mu;
        y.edges.insert(y.edges.end(), w.edges.begin(),
                       w.edges.begin() + (P - b));
        int m = a, l = b;
        while (m > 0 && l > 0 && x.edges[m - 1] == y.edges[l - 1]) {
          --m;
          --l;
        }
        germs.insert({windowIndex.at(x), m, l, windowIndex.at(y)});
      }

      // Preimage set, from the reduced bisection word: split it into its
      // positive prefix and negative suffix, then match elements whose
      // reduced value has exactly that shape.
      const grp::Word value = pathPairWord(target, lambda, mu);
      std::vector<int> pos, neg;
      for (const grp::Letter& letter : value.letters) {
        if (letter.sign > 0) {
          if (!neg.empty())
            throw std::logic_error("cocycle word is not in pair shape");
          pos.push_back(letter.gen);
        } else {
          neg.push_back(letter.gen);
        }
      }
      std::reverse(neg.begin(), neg.end());
      const int m0 = static_cast<int>(pos.size());
      const int l0 = static_cast<int>(neg.size());
      std::set<std::array<int, 4>> preimage;
      if (m0 <= maxLen && l0 <= maxLen) {
        for (const WindowElement& e : byShift[bucket(m0, l0)]) {
          const GPath& x = window[e.x];
          const GPath& y = window[e.y];
          if (x.vertex != lambda.vertex || y.vertex != mu.vertex) continue;
          if (!std::equal(lambda.edges.begin(), lambda.edges.end(),
                          x.edges.begin()) ||
              !std::equal(mu.edges.begin(), mu.edges.end(), y.edges.begin()))
            continue;
          if (!std::equal(pos.begin(), pos.end(), x.edges.begin()) ||
              !std::equal(neg.begin(), neg.end(), y.edges.begin()))
            continue;
          preimage.insert({e.x, e.m, e.l, e.y});
        }
      }
      if (germs != preimage)
        throw std::logic_error("preimage box of (" + pathName(g, lambda) +
                               "," + pathName(g, mu) +
                               ") is not the bisection");
    }
  cert.ok = true;
  return cert;
}

// --- same-degree pair subgroupoid ---------------------------------------------

SameDegreeReport sameDegreeDeltaBarH(const DrTruncation& T) {
  SameDegreeReport rep;
  rep.cap = T.maxLen;
  std::map<int, std::vector<int>> byDegree;
  for (int a = 0; a < T.G.n; ++a) byDegree[degreeDiff(T, a)].push_back(a);
  for (const auto& [deg, arrows] : byDegree) {
    rep.classSizes.push_back({deg, static_cast<int>(arrows.size())});
    for (int a : arrows)
      for (int b : arrows) rep.H.push_back({a, b});
  }
  std::sort(rep.H.begin(), rep.H.end());
  gpd::SubsetAudit sub = gpd::isSubgroupoidPairs(T.G, rep.H);
  rep.subgroupoid = sub.ok;
  gpd::SubsetAudit diag = gpd::containsDiagonal(T.G, rep.H);
  rep.diagonal = diag.ok;
  rep.violation = !sub.ok ? sub.violation : (!diag.ok ? diag.violation : "");
  rep.fibFull = gpd::fibCountPairs(T.G, rep.H).value;
  return rep;
}

// --- rank-k colored graphs ------------------------------------------------------

namespace {

std::string kEdgeLabel(const KGraph& kg, int e) {
  if (e >= 0 && e < static_cast<int>(kg.edgeLabels.size()))
    return kg.edgeLabels[e];
  return "e" + std::to_string(e);
}

std::string kVertexLabel(const KGraph& kg, int v) {
  if (v >= 0 && v < static_cast<int>(kg.vertexLabels.size()))
    return kg.vertexLabels[v];
  return "v" + std::to_string(v);
}

// Square lookup: composable mixed-color ordered pair -> rewritten pair.
using SquareMap = std::map<std::pair<int, int>, std::pair<int, int>>;

std::optional<std::string> buildSquareMap(const KGraph& kg, SquareMap& out) {
  for (std::size_t i = 0; i < kg.squares.size(); ++i) {
    const KSquare& s = kg.squares[i];
    const std::string at = "square " + std::to_string(i);
    for (int e : {s.a, s.b, s.c, s.d})
      if (e < 0 || e >= static_cast<int>(kg.edges.size()))
        return at + " references a missing edge";
    const KEdge &a = kg.edges[s.a], &b = kg.edges[s.b], &c = kg.edges[s.c],
                &d = kg.edges[s.d];
    if (a.from != b.to || c.from != d.to) return at + " edges do not chain";
    if (a.color == b.color) return at + " pairs edges of one color";
    if (c.color != b.color || d.color != a.color)
      return at + " does not swap the colors";
    if (c.to != a.to || d.from != b.from) return at + " moves the endpoints";
    if (!out.insert({{s.a, s.b}, {s.c, s.d}}).second)
      return "two squares rewrite the pair (" + kEdgeLabel(kg, s.a) + "," +
             kEdgeLabel(kg, s.b) + ")";
    if (!out.insert({{s.c, s.d}, {s.a, s.b}}).second)
      return "two squares rewrite the pair (" + kEdgeLabel(kg, s.c) + "," +
             kEdgeLabel(kg, s.d) + ")";
  }
  for (std::size_t e = 0; e < kg.edges.size(); ++e)
    for (std::size_t f = 0; f < kg.edges.size(); ++f) {
      if (kg.edges[e].color == kg.edges[f].color) continue;
      if (kg.edges[e].from != kg.edges[f].to) continue;
      if (!out.count({static_cast<int>(e), static_cast<int>(f)}))
        return "no square rewrites the pair (" +
               kEdgeLabel(kg, static_cast<int>(e)) + "," +
               kEdgeLabel(kg, static_cast<int>(f)) + ")";
    }
  return std::nullopt;
}

// Sort a word into ascending color order with the given swap strategy;
// `leftmost` picks the first out-of-order adjacent pair, else the last.
std::vector<int> colorSort(const KGraph& kg, const SquareMap& sq,
                           std::vector<int> word, bool leftmost) {
  while (true) {
    int pick = -1;
    for (int i = 0; i + 1 < static_cast<int>(word.size()); ++i)
      if (kg.edges[word[i]].color > kg.edges[word[i + 1]].color) {
        pick = i;
        if (leftmost) break;
      }
    if (pick < 0) return word;
    const auto [c, d] = sq.at({word[pick], word[pick + 1]});
    word[pick] = c;
    word[pick + 1] = d;
  }
}

}  // namespace

std::optional<std::string> validateKGraph(const KGraph& kg) {
  if (kg.rank < 1) return "rank must be at least 1";
  if (kg.numVertices < 0) return "negative vertex count";
  for (std::size_t i = 0; i < kg.edges.size(); ++i) {
    const KEdge& e = kg.edges[i];
    if (e.to < 0 || e.to >= kg.numVertices || e.from < 0 ||
        e.from >= kg.numVertices)
      return "edge " + std::to_string(i) + " has an endpoint out of range";
    if (e.color < 0 || e.color >= kg.rank)
      return "edge " + std::to_string(i) + " has color out of range";
  }
  if (!kg.vertexLabels.empty() &&
      static_cast<int>(kg.vertexLabels.size()) != kg.numVertices)
    return "vertex label count mismatch";
  if (!kg.edgeLabels.empty() && kg.edgeLabels.size() != kg.edges.size())
    return "edge label count mismatch";
  for (int v = 0; v < kg.numVertices; ++v)
    for (int color = 0; color < kg.rank; ++color) {
      bool receives = false;
      for (const KEdge& e : kg.edges)
        receives = receives || (e.to == v && e.color == color);
      if (!receives)
        return "vertex " + kVertexLabel(kg, v) + " receives no color-" +
               std::to_string(color) + " edge";
    }
  SquareMap sq;
  if (auto err = buildSquareMap(kg, sq)) return err;
  if (kg.rank >= 3) {
    // Associativity of the rewrites on every composable tricolored triple.
    for (std::size_t e = 0; e < kg.edges.size(); ++e)
      for (std::size_t f = 0; f < kg.edges.size(); ++f)
        for (std::size_t h = 0; h < kg.edges.size(); ++h) {
          if (kg.edges[e].from != kg.edges[f].to ||
              kg.edges[f].from != kg.edges[h].to)
            continue;
          const int c1 = kg.edges[e].color, c2 = kg.edges[f].color,
                    c3 = kg.edges[h].color;
          if (c1 == c2 || c1 == c3 || c2 == c3) continue;
          const std::vector<int> word{static_cast<int>(e),
                                      static_cast<int>(f),
                                      static_cast<int>(h)};
          if (colorSort(kg, sq, word, true) != colorSort(kg, sq, word, false))
            return "square rewrites disagree on the triple (" +
                   kEdgeLabel(kg, static_cast<int>(e)) + "," +
                   kEdgeLabel(kg, static_cast<int>(f)) + "," +
                   kEdgeLabel(kg, static_cast<int>(h)) + ")";
        }
  }
  return std::nullopt;
}

void requireValidKGraph(const KGraph& kg) {
  if (auto err = validateKGraph(kg)) throw std::invalid_argument(*err);
}

bool validKPath(const KGraph& kg, const GPath& p) {
  if (p.vertex < 0 || p.vertex >= kg.numVertices) return false;
  int at = p.vertex;
  for (int e : p.edges) {
    if (e < 0 || e >= static_cast<int>(kg.edges.size())) return false;
    if (kg.edges[e].to != at) return false;
    at = kg.edges[e].from;
  }
  return true;
}

int kPathSource(const KGraph& kg, const GPath& p) {
  return p.edges.empty() ? p.vertex : kg.edges[p.edges.back()].from;
}

std::vector<int> kPathDegree(const KGraph& kg, const GPath& p) {
  std::vector<int> deg(kg.rank, 0);
  for (int e : p.edges) ++deg[kg.edges[e].color];
  return deg;
}

std::string kPathName(const KGraph& kg, const GPath& p) {
  if (p.edges.empty()) return kVertexLabel(kg, p.vertex);
  std::vector<std::string> parts;
  for (int e : p.edges) parts.push_back(kEdgeLabel(kg, e));
  return joinLabels(parts);
}

std::optional<GPath> applySquare(const KGraph& kg, const GPath& p, int i) {
  if (i < 0 || i + 1 >= static_cast<int>(p.edges.size()))
    throw std::invalid_argument("swap position out of range");
  if (kg.edges[p.edges[i]].color == kg.edges[p.edges[i + 1]].color)
    return std::nullopt;
  SquareMap sq;
  if (auto err = buildSquareMap(kg, sq)) throw std::invalid_argument(*err);
  GPath q = p;
  const auto [c, d] = sq.at({p.edges[i], p.edges[i + 1]});
  q.edges[i] = c;
  q.edges[i + 1] = d;
  return q;
}

namespace {

std::optional<std::vector<GPath>> squareClassWithMap(const KGraph& kg,
                                                     const SquareMap& sq,
                                                     const GPath& start,
                                                     int budget) {
  std::set<std::vector<int>> seen{start.edges};
  std::deque<std::vector<int>> queue{start.edges};
  while (!queue.empty()) {
    const std::vector<int> w = queue.front();
    queue.pop_front();
    for (int i = 0; i + 1 < static_cast<int>(w.size()); ++i) {
      if (kg.edges[w[i]].color == kg.edges[w[i + 1]].color) continue;
      std::vector<int> next = w;
      const auto [c, d] = sq.at({w[i], w[i + 1]});
      next[i] = c;
      next[i + 1] = d;
      if (seen.insert(next).second) {
        if (static_cast<int>(seen.size()) > budget) return std::nullopt;
        queue.push_back(std::move(next));
      }
    }
  }
  std::vector<GPath> out;
  for (const auto& w : seen) out.push_back(GPath{start.vertex, w});
  return out;
}

bool kColorBefore(const KGraph& kg, const GPath& a, const GPath& b) {
  std::vector<int> ca, cb;
  for (int e : a.edges) ca.push_back(kg.edges[e].color);
  for (int e : b.edges) cb.push_back(kg.edges[e].color);
  if (ca != cb) return ca < cb;
  return a.edges < b.edges;
}

}  // namespace

std::optional<std::vector<GPath>> squareClass(const KGraph& kg,
                                              const GPath& start, int budget) {
  if (!validKPath(kg, start)) throw std::invalid_argument("invalid path");
  SquareMap sq;
  if (auto err = buildSquareMap(kg, sq)) throw std::invalid_argument(*err);
  return squareClassWithMap(kg, sq, start, budget);
}

std::optional<GPath> kNormalForm(const KGraph& kg, const GPath& p,
                                 int budget) {
  auto cls = squareClass(kg, p, budget);
  if (!cls) return std::nullopt;
  const GPath* best = &(*cls)[0];
  for (const GPath& q : *cls)
    if (kColorBefore(kg, q, *best)) best = &q;
  return *best;
}

TriState kPathEqual(const KGraph& kg, const GPath& a, const GPath& b,
                    int budget) {
  if (!validKPath(kg, a) || !validKPath(kg, b))
    throw std::invalid_argument("invalid path");
  if (a.vertex != b.vertex || kPathSource(kg, a) != kPathSource(kg, b))
    return TriState::No;
  if (kPathDegree(kg, a) != kPathDegree(kg, b)) return TriState::No;
  auto cls = squareClass(kg, a, budget);
  if (!cls) return TriState::Unknown;
  for (const GPath& q : *cls)
    if (q == b) return TriState::Yes;
  return TriState::No;
}

int KTruncation::pathIndex(const GPath& p) const {
  for (std::size_t i = 0; i < paths.size(); ++i)
    if (paths[i] == p) return static_cast<int>(i);
  return -1;
}

int KTruncation::arrowIndex(int lambda, int mu) const {
  const auto it = std::lower_bound(bisections.begin(), bisections.end(),
                                   std::make_pair(lambda, mu));
  if (it == bisections.end() || *it != std::make_pair(lambda, mu)) return -1;
  return static_cast<int>(it - bisections.begin());
}

std::optional<KTruncation> buildKTruncation(const KGraph& kg, int maxDegree,
                                            int budget) {
  requireValidKGraph(kg);
  if (maxDegree < 0) throw std::invalid_argument("negative truncation depth");
  SquareMap sq;
  if (auto err = buildSquareMap(kg, sq)) throw std::invalid_argument(*err);

  KTruncation T;
  T.graph = kg;
  T.maxDegree = maxDegree;
  std::set<GPath> seen;
  std::vector<GPath> frontier;
  for (int v = 0; v < kg.numVertices; ++v) {
    frontier.push_back(vertexPath(v));
    seen.insert(vertexPath(v));
  }
  T.paths = frontier;
  for (int deg = 1; deg <= maxDegree; ++deg) {
    std::vector<GPath> next;
    for (const GPath& p : frontier) {
      const int src = kPathSource(kg, p);
      for (int e = 0; e < static_cast<int>(kg.edges.size()); ++e)
        if (kg.edges[e].to == src) {
          GPath q = p;
          q.edges.push_back(e);
          auto nf = kNormalForm(kg, q, budget);
          if (!nf) return std::nullopt;
          if (seen.insert(*nf).second) next.push_back(*nf);
        }
    }
    std::sort(next.begin(), next.end(), [&](const GPath& a, const GPath& b) {
      return kColorBefore(kg, a, b);
    });
    T.paths.insert(T.paths.end(), next.begin(), next.end());
    frontier = std::move(next);
  }

  std::vector<int> sourceOf;
  std::vector<std::string> names;
  for (const GPath& p : T.paths) {
    sourceOf.push_back(kPathSource(kg, p));
    names.push_back(kPathName(kg, p));
  }
  buildPairTable(sourceOf, names, T.bisections, T.G);
  return T;
}

gpd::WordCocycle flamCocycleK(const KTruncation& T) {
  std::vector<std::string> labels;
  for (std::size_t e = 0; e < T.graph.edges.size(); ++e)
    labels.push_back(kEdgeLabel(T.graph, static_cast<int>(e)));
  gpd::WordCocycle c;
  c.G = &T.G;
  c.target = grp::Group::makeFree(static_cast<int>(T.graph.edges.size()),
                                  std::move(labels));
  for (const auto& [li, mi] : T.bisections)
    c.values.push_back(pathPairWord(c.target, T.paths[li], T.paths[mi]));
  return c;
}

std::vector<int> degreeDiffK(const KTruncation& T, int arrow) {
  if (arrow < 0 || arrow >= T.G.n)
    throw std::invalid_argument("arrow out of range");
  std::vector<int> d = kPathDegree(T.graph, T.paths[T.bisections[arrow].first]);
  const std::vector<int> e =
      kPathDegree(T.graph, T.paths[T.bisections[arrow].second]);
  for (int i = 0; i < T.graph.rank; ++i) d[i] -= e[i];
  return d;
}

std::vector<int> colorCount(const KGraph& kg, const grp::Word& w) {
  std::vector<int> count(kg.rank, 0);
  for (const grp::Letter& l : grp::reduceWord(w).letters) {
    if (l.gen < 0 || l.gen >= static_cast<int>(kg.edges.size()))
      throw std::invalid_argument("letter is not an edge");
    count[kg.edges[l.gen].color] += l.sign;
  }
  return count;
}

DirectedGraph asDirectedGraph(const KGraph& kg) {
  if (kg.rank != 1) throw std::invalid_argument("rank is not 1");
  DirectedGraph g;
  g.numVertices = kg.numVertices;
  for (const KEdge& e : kg.edges) g.edges.push_back({e.to, e.from});
  g.vertexLabels = kg.vertexLabels;
  g.edgeLabels = kg.edgeLabels;
  return g;
}

PurityCertificate purityCheckKGraph(const KGraph& kg, int maxDegree,
                                    int budget) {
  requireValidKGraph(kg);
  if (kg.rank == 1) return purityCheckGraph(asDirectedGraph(kg), maxDegree);
  PurityCertificate cert;
  cert.maxLen = maxDegree;
  auto T = buildKTruncation(kg, maxDegree, budget);
  if (!T) {
    cert.pure = TriState::Unknown;
    cert.evidence = "rewrite budget exceeded";
    return cert;
  }
  cert.checkedArrows = T->G.n;
  for (int a = 0; a < T->G.n; ++a) {
    if (T->G.isUnit[a]) continue;
    const std::vector<int> d = degreeDiffK(*T, a);
    if (std::all_of(d.begin(), d.end(), [](int x) { return x == 0; })) {
      cert.pure = TriState::Unknown;
      cert.evidence = "zero-degree non-unit " + T->G.labels[a] +
                      " undecided by the degree test";
      return cert;
    }
  }
  cert.pure = TriState::Yes;
  cert.evidence = "degree";
  return cert;
}

// --- loop structure -----------------------------------------------------------

LoopSearch independentLoopsCheck(const DirectedGraph& g, int nodeBudget) {
  requireValidGraph(g);
  LoopSearch result;
  result.loops.assign(g.numVertices, {});
  const int maxLen =
      static_cast<int>(g.edges.size()) * std::max(1, g.numVertices) + 1;
  long long explored = 0;
  for (int v = 0; v < g.numVertices; ++v) {
    // States that can still close a loop at v (never passing v en route).
    std::vector<char> canClose(g.numVertices, 0);
    canClose[v] = 1;
    bool grew = true;
    while (grew) {
      grew = false;
      for (const Edge& e : g.edges)
        if (e.to != v && canClose[e.from] && !canClose[e.to]) {
          canClose[e.to] = 1;
          grew = true;
        }
    }
    std::vector<GPath> found;
    std::vector<GPath> frontier{vertexPath(v)};
    for (int len = 1; len <= maxLen && found.size() < 2 && !frontier.empty();
         ++len) {
      std::vector<GPath> next;
      for (const GPath& p : frontier) {
        const int src = pathSource(g, p);
        for (int e = 0; e < static_cast<int>(g.edges.size()); ++e) {
          if (g.edges[e].to != src) continue;
          if (++explored > nodeBudget)
            throw std::runtime_error("loop search budget exhausted");
          GPath q = p;
          q.edges.push_back(e);
          if (g.edges[e].from == v) {
            found.push_back(std::move(q));
            if (found.size() >= 2) break;
          } else if (canClose[g.edges[e].from]) {
            next.push_back(std::move(q));
          }
        }
        if (found.size() >= 2) break;
      }
      frontier = std::move(next);
    }
    if (found.size() < 2) {
      result.failingVertex = v;
      return result;
    }
    result.loops[v] = {found[0], found[1]};
  }
  result.ok = true;
  return result;
}

}  // namespace ample::dr
