#include "ample/kzero.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <deque>
#include <map>
#include <set>
#include <stdexcept>

namespace ample::kzero {

namespace {

using Mat = std::vector<std::vector<long long>>;

Mat identityMat(int n) {
  Mat m(n, std::vector<long long>(n, 0));
  for (int i = 0; i < n; ++i) m[i][i] = 1;
  return m;
}

Mat mulMat(const Mat& A, const Mat& B) {
  const int r = static_cast<int>(A.size());
  const int mid = r ? static_cast<int>(A[0].size()) : 0;
  const int c = mid ? static_cast<int>(B[0].size()) : 0;
  Mat out(r, std::vector<long long>(c, 0));
  for (int i = 0; i < r; ++i)
    for (int k = 0; k < mid; ++k)
      for (int j = 0; j < c; ++j) out[i][j] += A[i][k] * B[k][j];
  return out;
}

// Fraction-free determinant (Bareiss); exact for the small matrices here.
long long detMat(Mat m) {
  const int n = static_cast<int>(m.size());
  if (n == 0) return 1;
  long long sign = 1, prev = 1;
  for (int k = 0; k + 1 < n; ++k) {
    if (m[k][k] == 0) {
      int swap = -1;
      for (int i = k + 1; i < n && swap < 0; ++i)
        if (m[i][k] != 0) swap = i;
      if (swap < 0) return 0;
      std::swap(m[k], m[swap]);
      sign = -sign;
    }
    for (int i = k + 1; i < n; ++i)
      for (int j = k + 1; j < n; ++j)
        m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) / prev;
    prev = m[k][k];
  }
  return sign * m[n - 1][n - 1];
}

std::string vertexLabel(const dr::DirectedGraph& g, int v) {
  if (v >= 0 && v < static_cast<int>(g.vertexLabels.size()))
    return g.vertexLabels[v];
  return "v" + std::to_string(v);
}

std::string classString(const std::vector<long long>& c) {
  std::string out = "[";
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (i) out += ",";
    out += std::to_string(c[i]);
  }
  return out + "]";
}

}  // namespace

K0Group snfOracle(const dr::DirectedGraph& g) {
  dr::requireValidGraph(g);
  K0Group out;
  out.numVertices = g.numVertices;
  const auto A = dr::adjacency(g);
  const int n = g.numVertices;
  out.relation.assign(n, std::vector<long long>(n, 0));
  for (int v = 0; v < n; ++v)
    for (int w = 0; w < n; ++w)
      out.relation[v][w] = (v == w ? 1 : 0) - A[w][v];

  Mat D = out.relation;
  Mat U = identityMat(n);
  Mat V = identityMat(n);
  const auto addRow = [&](Mat& m, int dst, int src, long long q) {
    for (std::size_t j = 0; j < m[dst].size(); ++j) m[dst][j] += q * m[src][j];
  };
  const auto addCol = [&](Mat& m, int dst, int src, long long q) {
    for (std::size_t i = 0; i < m.size(); ++i) m[i][dst] += q * m[i][src];
  };
  const auto swapCol = [&](Mat& m, int a, int b) {
    for (std::size_t i = 0; i < m.size(); ++i) std::swap(m[i][a], m[i][b]);
  };

  for (int t = 0; t < n; ++t) {
    while (true) {
      int pi = -1, pj = -1;
      for (int i = t; i < n; ++i)
        for (int j = t; j < n; ++j)
          if (D[i][j] != 0 &&
              (pi < 0 || std::llabs(D[i][j]) < std::llabs(D[pi][pj]))) {
            pi = i;
            pj = j;
          }
      if (pi < 0) {
        t = n;  // the remaining block is zero
        break;
      }
      if (pi != t) {
        std::swap(D[pi], D[t]);
        std::swap(U[pi], U[t]);
      }
      if (pj != t) {
        swapCol(D, pj, t);
        swapCol(V, pj, t);
      }
      bool residue = false;
      for (int i = t + 1; i < n; ++i)
        if (D[i][t] != 0) {
          const long long q = D[i][t] / D[t][t];
          addRow(D, i, t, -q);
          addRow(U, i, t, -q);
          residue = residue || D[i][t] != 0;
        }
      for (int j = t + 1; j < n; ++j)
        if (D[t][j] != 0) {
          const long long q = D[t][j] / D[t][t];
          addCol(D, j, t, -q);
          addCol(V, j, t, -q);
          residue = residue || D[t][j] != 0;
        }
      if (residue) continue;
      int bi = -1;
      for (int i = t + 1; i < n && bi < 0; ++i)
        for (int j = t + 1; j < n && bi < 0; ++j)
          if (D[i][j] % D[t][t] != 0) bi = i;
      if (bi >= 0) {
        addRow(D, t, bi, 1);
        addRow(U, t, bi, 1);
        continue;
      }
      break;
    }
    if (t >= n) break;
  }
  for (int t = 0; t < n; ++t)
    if (D[t][t] < 0) {
      for (int j = 0; j < n; ++j) {
        D[t][j] = -D[t][j];
        U[t][j] = -U[t][j];
      }
    }

  // Re-verify the factorization and unimodularity before trusting it.
  const Mat check = mulMat(mulMat(U, out.relation), V);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (check[i][j] != (i == j ? D[i][i] : 0))
        throw std::logic_error("smith factorization failed to verify");
  if (std::llabs(detMat(U)) != 1 || std::llabs(detMat(V)) != 1)
    throw std::logic_error("change of basis is not unimodular");
  for (int i = 0; i + 1 < n; ++i)
    if (D[i][i] != 0 && D[i + 1][i + 1] % D[i][i] != 0)
      throw std::logic_error("diagonal is not divisor-chained");
  out.U = U;
  out.V = V;
  for (int i = 0; i < n; ++i) {
    out.diag.push_back(D[i][i]);
    if (D[i][i] == 0) {
      out.freePos.push_back(i);
      ++out.freeRank;
    } else if (D[i][i] > 1) {
      out.torsion.push_back(D[i][i]);
      out.torsionPos.push_back(i);
    }
  }
  return out;
}

std::vector<long long> classOf(const K0Group& K,
                               const std::vector<long long>& vertexVector) {
  if (static_cast<int>(vertexVector.size()) != K.numVertices)
    throw std::invalid_argument("vertex vector has the wrong length");
  std::vector<long long> r(K.numVertices, 0);
  for (int i = 0; i < K.numVertices; ++i)
    for (int j = 0; j < K.numVertices; ++j)
      r[i] += K.U[i][j] * vertexVector[j];
  std::vector<long long> out;
  for (std::size_t k = 0; k < K.torsionPos.size(); ++k) {
    const long long d = K.torsion[k];
    out.push_back(((r[K.torsionPos[k]] % d) + d) % d);
  }
  for (int pos : K.freePos) out.push_back(r[pos]);
  return out;
}

std::vector<long long> classOfSet(const K0Group& K, const dr::DirectedGraph& g,
                                  const dr::CompactOpen& O) {
  std::vector<long long> vec(K.numVertices, 0);
  for (const dr::GPath& p : O) {
    if (!dr::validPath(g, p)) throw std::invalid_argument("invalid cylinder");
    ++vec[dr::pathSource(g, p)];
  }
  return classOf(K, vec);
}

std::vector<long long> addClass(const K0Group& K, std::vector<long long> a,
                                const std::vector<long long>& b) {
  if (a.size() != b.size() ||
      a.size() != K.torsion.size() + static_cast<std::size_t>(K.freeRank))
    throw std::invalid_argument("class coordinate length mismatch");
  for (std::size_t i = 0; i < a.size(); ++i) {
    a[i] += b[i];
    if (i < K.torsion.size())
      a[i] = ((a[i] % K.torsion[i]) + K.torsion[i]) % K.torsion[i];
  }
  return a;
}

std::vector<long long> negClass(const K0Group& K, std::vector<long long> a) {
  if (a.size() != K.torsion.size() + static_cast<std::size_t>(K.freeRank))
    throw std::invalid_argument("class coordinate length mismatch");
  for (std::size_t i = 0; i < a.size(); ++i) {
    a[i] = -a[i];
    if (i < K.torsion.size())
      a[i] = ((a[i] % K.torsion[i]) + K.torsion[i]) % K.torsion[i];
  }
  return a;
}

bool zeroClass(const std::vector<long long>& c) {
  return std::all_of(c.begin(), c.end(), [](long long x) { return x == 0; });
}

namespace {

dr::LoopSearch requireLoops(const dr::DirectedGraph& g) {
  dr::LoopSearch loops = dr::independentLoopsCheck(g);
  if (!loops.ok)
    throw std::invalid_argument(
        "vertex " + vertexLabel(g, loops.failingVertex) +
        " lacks two independent first-return loops");
  return loops;
}

void requireSameClass(const K0Group& K, const dr::DirectedGraph& g,
                      const dr::CompactOpen& got,
                      const std::vector<long long>& want,
                      const std::string& what) {
  if (classOfSet(K, g, got) != want)
    throw std::logic_error(what + " changed the class");
}

}  // namespace

ParadoxicalPair paradoxicalWitness(const dr::DirectedGraph& g,
                                   const dr::CompactOpen& O) {
  const dr::CompactOpen inside = dr::normalizeCompactOpen(g, O);
  if (inside.empty()) throw std::invalid_argument("empty compact open set");
  const dr::LoopSearch loops = requireLoops(g);
  ParadoxicalPair out;
  out.U1.role = "first copy";
  out.U2.role = "second copy";
  for (const dr::GPath& part : inside) {
    const int v = dr::pathSource(g, part);
    const dr::GPath a = dr::concatPath(g, part, loops.loops[v].first);
    const dr::GPath b = dr::concatPath(g, part, loops.loops[v].second);
    out.U1.bisections.push_back({a, part});
    out.U2.bisections.push_back({b, part});
    out.U1.rU.push_back(a);
    out.U2.rU.push_back(b);
    out.U1.sU.push_back(part);
    out.U2.sU.push_back(part);
  }
  for (BisectionWitness* w : {&out.U1, &out.U2}) {
    if (!dr::sameCompactOpen(g, w->sU, inside))
      throw std::logic_error("copy source is not the whole set");
    if (!dr::diffCompactOpen(g, w->rU, inside).empty())
      throw std::logic_error("copy escapes the set");
  }
  if (!dr::meetCompactOpen(g, out.U1.rU, out.U2.rU).empty())
    throw std::logic_error("the two copies are not disjoint");
  return out;
}

AddResult addWitness(const dr::DirectedGraph& g, const K0Group& K,
                     const dr::CompactOpen& O1, const dr::CompactOpen& O2) {
  const dr::CompactOpen A = dr::normalizeCompactOpen(g, O1);
  const dr::CompactOpen B = dr::normalizeCompactOpen(g, O2);
  const std::vector<long long> want =
      addClass(K, classOfSet(K, g, A), classOfSet(K, g, B));
  AddResult out;
  out.U1.role = "left summand";
  out.U2.role = "right summand";
  if (dr::meetCompactOpen(g, A, B).empty()) {
    out.disjoint = true;
    for (const dr::GPath& p : A) out.U1.bisections.push_back({p, p});
    for (const dr::GPath& p : B) out.U2.bisections.push_back({p, p});
    out.U1.sU = out.U1.rU = A;
    out.U2.sU = out.U2.rU = B;
    out.result = dr::uniteCompactOpen(g, A, B);
    requireSameClass(K, g, out.result, want, "disjoint union");
    return out;
  }
  const dr::LoopSearch loops = requireLoops(g);
  for (const dr::GPath& p : A) {
    const dr::GPath moved = dr::concatPath(g, loops.loops[p.vertex].first, p);
    out.U1.bisections.push_back({moved, p});
    out.U1.rU.push_back(moved);
    out.U1.sU.push_back(p);
  }
  for (const dr::GPath& p : B) {
    const dr::GPath moved = dr::concatPath(g, loops.loops[p.vertex].second, p);
    out.U2.bisections.push_back({moved, p});
    out.U2.rU.push_back(moved);
    out.U2.sU.push_back(p);
  }
  if (!dr::meetCompactOpen(g, out.U1.rU, out.U2.rU).empty())
    throw std::logic_error("relocated summands overlap");
  out.result = dr::uniteCompactOpen(g, out.U1.rU, out.U2.rU);
  requireSameClass(K, g, out.result, want, "relocated union");
  return out;
}

NegResult negWitness(const dr::DirectedGraph& g, const K0Group& K,
                     const dr::CompactOpen& O) {
  const dr::CompactOpen inside = dr::normalizeCompactOpen(g, O);
  NegResult out;
  if (inside.empty()) return out;
  out.used = paradoxicalWitness(g, inside);
  requireSameClass(K, g, out.used.U1.rU, classOfSet(K, g, inside),
                   "first copy");
  requireSameClass(K, g, out.used.U2.rU, classOfSet(K, g, inside),
                   "second copy");
  out.result = dr::diffCompactOpen(
      g, inside, dr::uniteCompactOpen(g, out.used.U1.rU, out.used.U2.rU));
  requireSameClass(K, g, out.result,
                   negClass(K, classOfSet(K, g, inside)), "carving");
  return out;
}

RealizeResult realizeClass(const dr::DirectedGraph& g, const K0Group& K,
                           const std::vector<long long>& target) {
  RealizeResult out;
  if (target.size() != K.torsion.size() + static_cast<std::size_t>(K.freeRank))
    throw std::invalid_argument("class coordinate length mismatch");
  const std::vector<long long> goal =
      addClass(K, std::vector<long long>(target.size(), 0), target);

  long long weight = K.numVertices;
  for (long long c : goal) weight += std::llabs(c);
  const long long depthBudget = 3 * std::max<long long>(1, weight);

  std::vector<std::vector<long long>> vertexClass;
  for (int v = 0; v < K.numVertices; ++v) {
    std::vector<long long> e(K.numVertices, 0);
    e[v] = 1;
    vertexClass.push_back(classOf(K, e));
  }

  // Shortest nonempty signed expression; positive moves are explored first,
  // so a goal reachable by positive moves never picks up a negative one of
  // the same length.
  using State = std::vector<long long>;
  const State start(goal.size(), 0);
  std::map<State, std::pair<State, int>> parent;  // state -> (prev, move)
  parent[start] = {start, -1};
  std::deque<std::pair<State, long long>> queue{{start, 0}};
  std::vector<int> moves;
  bool found = false;
  while (!queue.empty() && !found) {
    const auto [cur, depth] = queue.front();
    queue.pop_front();
    if (depth >= depthBudget) break;
    for (int v = 0; v < K.numVertices && !found; ++v)
      for (int sgn = 0; sgn < 2 && !found; ++sgn) {
        const State next = sgn == 0
                               ? addClass(K, cur, vertexClass[v])
                               : addClass(K, cur, negClass(K, vertexClass[v]));
        if (next == goal) {
          for (State at = cur; parent.at(at).second >= 0;
               at = parent.at(at).first)
            moves.push_back(parent.at(at).second);
          std::reverse(moves.begin(), moves.end());
          moves.push_back(2 * v + sgn);
          found = true;
        } else if (!parent.count(next)) {
          parent[next] = {cur, 2 * v + sgn};
          queue.push_back({next, depth + 1});
        }
      }
  }
  if (!found) {
    out.reason =
        "not reached within depth budget " + std::to_string(depthBudget);
    return out;
  }

  // Fold the positive and negative summands separately; one carving joins
  // them at the end, keeping the cylinder lists small.
  dr::CompactOpen P, N;
  for (int move : moves) {
    const int v = move / 2;
    const bool negative = move % 2 == 1;
    const dr::CompactOpen copy{dr::vertexPath(v)};
    dr::CompactOpen& side = negative ? N : P;
    side = addWitness(g, K, side, copy).result;
    RealizeStep step;
    step.op = (negative ? "-" : "+") + vertexLabel(g, v);
    step.state = side;
    step.classNow = classOfSet(K, g, side);
    out.steps.push_back(std::move(step));
  }
  dr::CompactOpen O;
  if (N.empty()) {
    O = P;
  } else {
    O = addWitness(g, K, P, negWitness(g, K, N).result).result;
    RealizeStep step;
    step.op = "combine";
    step.state = O;
    step.classNow = classOfSet(K, g, O);
    out.steps.push_back(std::move(step));
  }
  if (classOfSet(K, g, O) != goal)
    throw std::logic_error("realized set has the wrong class");
  if (O.empty()) throw std::logic_error("realized set is empty");
  out.witness = O;
  out.ok = true;
  return out;
}

ClosureReport realizedClassClosure(const dr::DirectedGraph& g, int window) {
  ClosureReport out;
  out.window = window;
  if (window < 0) throw std::invalid_argument("negative window");
  const dr::LoopSearch loops = dr::independentLoopsCheck(g);
  if (!loops.ok) {
    out.failure = "vertex " + vertexLabel(g, loops.failingVertex) +
                  " lacks two independent first-return loops";
    return out;
  }
  const K0Group K = snfOracle(g);
  std::vector<std::vector<long long>> targets{{}};
  for (long long d : K.torsion) {
    std::vector<std::vector<long long>> next;
    for (const auto& t : targets)
      for (long long c = 0; c < d; ++c) {
        auto u = t;
        u.push_back(c);
        next.push_back(std::move(u));
      }
    targets = std::move(next);
  }
  for (int i = 0; i < K.freeRank; ++i) {
    std::vector<std::vector<long long>> next;
    for (const auto& t : targets)
      for (long long c = -window; c <= window; ++c) {
        auto u = t;
        u.push_back(c);
        next.push_back(std::move(u));
      }
    targets = std::move(next);
  }
  for (const auto& t : targets) {
    const RealizeResult r = realizeClass(g, K, t);
    if (!r.ok) {
      out.failure = "class " + classString(t) + ": " + r.reason;
      return out;
    }
    ++out.realized;
  }
  out.ok = true;
  return out;
}

}  // namespace ample::kzero
