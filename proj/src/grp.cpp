#include "ample/grp.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

namespace ample::grp {

namespace {

std::vector<std::string> defaultLabels(int n, bool elementStyle) {
  static const char* alphabet = "abcdefghijklmnopqrstuvwxyz";
  std::vector<std::string> out;
  out.reserve(n);
  for (int i = 0; i < n; ++i) {
    if (!elementStyle && n <= 26) {
      out.push_back(std::string(1, alphabet[i]));
    } else {
      out.push_back((elementStyle ? "x" : "g") + std::to_string(i));
    }
  }
  return out;
}

void checkLabels(int n, std::vector<std::string>& labels, bool elementStyle) {
  if (labels.empty()) {
    labels = defaultLabels(n, elementStyle);
    return;
  }
  if (static_cast<int>(labels.size()) != n)
    throw std::invalid_argument("label count does not match generator count");
  std::set<std::string> seen;
  for (const auto& l : labels) {
    if (l.empty() || !seen.insert(l).second)
      throw std::invalid_argument("labels must be nonempty and distinct");
  }
}

}  // namespace

GroupPtr Group::makeFree(int rank, std::vector<std::string> labels) {
  if (rank < 0) throw std::invalid_argument("rank must be nonnegative");
  auto g = std::shared_ptr<Group>(new Group());
  g->kind = GroupKind::Free;
  g->rank = rank;
  g->labels = std::move(labels);
  checkLabels(rank, g->labels, false);
  return g;
}

GroupPtr Group::makeFreeAbelian(int rank, std::vector<std::string> labels) {
  auto g = std::const_pointer_cast<Group>(makeFree(rank, std::move(labels)));
  g->kind = GroupKind::FreeAbelian;
  return g;
}

GroupPtr Group::makeFinite(std::vector<std::vector<int>> table,
                           std::vector<std::string> labels) {
  const int n = static_cast<int>(table.size());
  if (n == 0) throw std::invalid_argument("finite group table is empty");
  for (const auto& row : table) {
    if (static_cast<int>(row.size()) != n)
      throw std::invalid_argument("finite group table is not square");
    for (int v : row)
      if (v < 0 || v >= n)
        throw std::invalid_argument("finite group table entry out of range");
  }
  // Identity: a two-sided neutral element.
  int id = -1;
  for (int e = 0; e < n && id < 0; ++e) {
    bool ok = true;
    for (int x = 0; x < n; ++x) ok = ok && table[e][x] == x && table[x][e] == x;
    if (ok) id = e;
  }
  if (id < 0) throw std::invalid_argument("finite group table has no identity");
  std::vector<int> inv(n, -1);
  for (int x = 0; x < n; ++x) {
    for (int y = 0; y < n; ++y)
      if (table[x][y] == id && table[y][x] == id) { inv[x] = y; break; }
    if (inv[x] < 0)
      throw std::invalid_argument("finite group table element has no inverse");
  }
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y)
      for (int z = 0; z < n; ++z)
        if (table[table[x][y]][z] != table[x][table[y][z]])
          throw std::invalid_argument("finite group table is not associative");

  auto g = std::shared_ptr<Group>(new Group());
  g->kind = GroupKind::Finite;
  g->rank = n;
  g->table = std::move(table);
  g->identity = id;
  g->inverseOf = std::move(inv);
  g->labels = std::move(labels);
  checkLabels(n, g->labels, true);
  return g;
}

GroupPtr Group::makeQuotientChainUnchecked(QuotientChain chain) {
  if (!chain.base) throw std::invalid_argument("chain has no base group");
  if (chain.base->kind == GroupKind::QuotientChain)
    throw std::invalid_argument("chain base must not itself be a chain");
  auto g = std::shared_ptr<Group>(new Group());
  g->kind = GroupKind::QuotientChain;
  g->rank = chain.base->rank;
  g->labels = chain.base->labels;
  g->chain = std::move(chain);
  return g;
}

GroupPtr Group::makeQuotientChain(QuotientChain chain) {
  if (auto err = validateChain(chain))
    throw std::invalid_argument("invalid quotient chain: " + *err);
  return makeQuotientChainUnchecked(std::move(chain));
}

int Group::numGenerators() const {
  return kind == GroupKind::Finite ? static_cast<int>(table.size()) : rank;
}

const Group& Group::wordGroup() const {
  return kind == GroupKind::QuotientChain ? *chain->base : *this;
}

bool Group::sameAs(const Group& other) const {
  if (this == &other) return true;
  const Group& a = wordGroup();
  const Group& b = other.wordGroup();
  if (&a == &b) return true;
  return a.kind == b.kind && a.rank == b.rank && a.table == b.table &&
         a.labels == b.labels;
}

std::optional<std::string> validateChain(const QuotientChain& chain) {
  if (!chain.base) return "missing base group";
  if (chain.base->kind == GroupKind::QuotientChain)
    return "base must not itself be a chain";
  if (chain.levels.empty()) return "chain has no levels";
  const int numGens = chain.base->numGenerators();
  for (size_t k = 0; k < chain.levels.size(); ++k) {
    const ChainLevel& lvl = chain.levels[k];
    const std::string at = "level " + std::to_string(k) + ": ";
    if (!lvl.group || lvl.group->kind != GroupKind::Finite)
      return at + "level group must be finite";
    const Group& G = *lvl.group;
    const int n = G.numGenerators();
    if (static_cast<int>(lvl.genImages.size()) != numGens)
      return at + "generator image count mismatch";
    for (int v : lvl.genImages)
      if (v < 0 || v >= n) return at + "generator image out of range";
    // Surjectivity of the quotient map: the images generate the level group.
    {
      std::vector<char> hit(n, 0);
      hit[G.identity] = 1;
      std::vector<int> frontier{G.identity};
      while (!frontier.empty()) {
        int x = frontier.back();
        frontier.pop_back();
        for (int img : lvl.genImages) {
          for (int y : {G.table[x][img], G.table[x][G.inverseOf[img]]}) {
            if (!hit[y]) { hit[y] = 1; frontier.push_back(y); }
          }
        }
      }
      for (int x = 0; x < n; ++x)
        if (!hit[x])
          return at + "generator images do not generate the level group";
    }
    const bool last = k + 1 == chain.levels.size();
    if (last) {
      if (!lvl.factorMap.empty()) return at + "last level must have no factor map";
      continue;
    }
    const Group& next = *chain.levels[k + 1].group;
    const int m = next.numGenerators();
    if (static_cast<int>(lvl.factorMap.size()) != m)
      return at + "factor map size mismatch";
    std::vector<char> onto(n, 0);
    for (int v : lvl.factorMap) {
      if (v < 0 || v >= n) return at + "factor map value out of range";
      onto[v] = 1;
    }
    for (int x = 0; x < n; ++x)
      if (!onto[x]) return at + "factor map is not surjective";
    for (int x = 0; x < m; ++x)
      for (int y = 0; y < m; ++y)
        if (lvl.factorMap[next.table[x][y]] !=
            G.table[lvl.factorMap[x]][lvl.factorMap[y]])
          return at + "factor map is not a homomorphism";
    for (int gidx = 0; gidx < numGens; ++gidx)
      if (lvl.factorMap[chain.levels[k + 1].genImages[gidx]] != lvl.genImages[gidx])
        return at + "generator images do not commute with the factor map";
  }
  return std::nullopt;
}

// --- word arithmetic --------------------------------------------------------

namespace {

void requireOwner(const Word& w) {
  if (!w.owner) throw std::invalid_argument("word has no owner group");
}

void requireSameOwner(const Word& a, const Word& b) {
  requireOwner(a);
  requireOwner(b);
  if (!a.owner->sameAs(*b.owner))
    throw std::invalid_argument("words belong to different groups");
}

Word reduceFree(const Word& w) {
  std::vector<Letter> out;
  for (const Letter& l : w.letters) {
    if (!out.empty() && out.back().gen == l.gen && out.back().sign == -l.sign)
      out.pop_back();
    else
      out.push_back(l);
  }
  return Word{w.owner, std::move(out)};
}

Word reduceFreeAbelian(const Word& w) {
  const int r = w.owner->wordGroup().rank;
  std::vector<long long> exp(r, 0);
  for (const Letter& l : w.letters) exp[l.gen] += l.sign;
  std::vector<Letter> out;
  for (int g = 0; g < r; ++g) {
    const int sign = exp[g] >= 0 ? 1 : -1;
    for (long long i = 0; i < std::llabs(exp[g]); ++i) out.push_back({g, sign});
  }
  return Word{w.owner, std::move(out)};
}

Word reduceFinite(const Word& w) {
  const Group& G = w.owner->wordGroup();
  int acc = G.identity;
  for (const Letter& l : w.letters) {
    const int e = l.sign > 0 ? l.gen : G.inverseOf[l.gen];
    acc = G.table[acc][e];
  }
  if (acc == G.identity) return Word{w.owner, {}};
  return Word{w.owner, {Letter{acc, 1}}};
}

}  // namespace

Word wordFromLetters(const GroupPtr& g, std::vector<Letter> letters) {
  if (!g) throw std::invalid_argument("null group");
  const int n = g->wordGroup().numGenerators();
  for (const Letter& l : letters) {
    if (l.gen < 0 || l.gen >= n)
      throw std::invalid_argument("letter generator index out of range");
    if (l.sign != 1 && l.sign != -1)
      throw std::invalid_argument("letter sign must be +1 or -1");
  }
  return Word{g, std::move(letters)};
}

Word identityWord(const GroupPtr& g) { return wordFromLetters(g, {}); }

Word generatorWord(const GroupPtr& g, int gen, int sign) {
  return wordFromLetters(g, {Letter{gen, sign}});
}

Word reduceWord(const Word& w) {
  requireOwner(w);
  switch (w.owner->wordGroup().kind) {
    case GroupKind::Free: return reduceFree(w);
    case GroupKind::FreeAbelian: return reduceFreeAbelian(w);
    case GroupKind::Finite: return reduceFinite(w);
    default: throw std::logic_error("unreachable word group kind");
  }
}

bool isReduced(const Word& w) {
  Word r = reduceWord(w);
  return r.letters == w.letters;
}

Word mulWords(const Word& a, const Word& b) {
  requireSameOwner(a, b);
  Word c{a.owner, a.letters};
  c.letters.insert(c.letters.end(), b.letters.begin(), b.letters.end());
  return reduceWord(c);
}

Word invWord(const Word& a) {
  requireOwner(a);
  Word c{a.owner, {}};
  c.letters.reserve(a.letters.size());
  for (auto it = a.letters.rbegin(); it != a.letters.rend(); ++it)
    c.letters.push_back({it->gen, -it->sign});
  return reduceWord(c);
}

bool equalWords(const Word& a, const Word& b) {
  requireSameOwner(a, b);
  return reduceWord(a).letters == reduceWord(b).letters;
}

bool isIdentity(const Word& w) { return reduceWord(w).letters.empty(); }

int cmpWords(const Word& a, const Word& b) {
  requireSameOwner(a, b);
  const Word ra = reduceWord(a), rb = reduceWord(b);
  if (ra.letters.size() != rb.letters.size())
    return ra.letters.size() < rb.letters.size() ? -1 : 1;
  for (size_t i = 0; i < ra.letters.size(); ++i) {
    const Letter& x = ra.letters[i];
    const Letter& y = rb.letters[i];
    if (x.gen != y.gen) return x.gen < y.gen ? -1 : 1;
    if (x.sign != y.sign) return x.sign > y.sign ? -1 : 1;  // +1 before -1
  }
  return 0;
}

std::string wordToString(const Word& w) {
  requireOwner(w);
  const Group& G = w.owner->wordGroup();
  const Word r = reduceWord(w);
  // Finite groups label every element, so the identity has a label of its
  // own; using it keeps rendering injective when some element is called "1".
  if (r.letters.empty())
    return G.kind == GroupKind::Finite ? G.labels[G.identity] : "1";
  std::ostringstream os;
  size_t i = 0;
  bool first = true;
  while (i < r.letters.size()) {
    size_t j = i;
    while (j < r.letters.size() && r.letters[j] == r.letters[i]) ++j;
    const long long exp = static_cast<long long>(j - i) * r.letters[i].sign;
    if (!first) os << ' ';
    first = false;
    os << G.labels[r.letters[i].gen];
    if (exp != 1) os << '^' << exp;
    i = j;
  }
  return os.str();
}

std::string canonicalKey(const Word& w) {
  std::string k;
  for (const Letter& l : reduceWord(w).letters)
    k += std::to_string(l.gen) + (l.sign > 0 ? "+" : "-");
  return k;
}

Word wordFromString(const GroupPtr& g, const std::string& text) {
  if (!g) throw std::invalid_argument("null group");
  const Group& G = g->wordGroup();
  std::map<std::string, int> byLabel;
  for (int i = 0; i < G.numGenerators(); ++i) byLabel[G.labels[i]] = i;
  std::vector<Letter> letters;
  std::istringstream is(text);
  std::string tok;
  while (is >> tok) {
    // "1"/"e" mean the identity only when no generator claims that label
    // (finite groups label elements with digits).
    if ((tok == "1" || tok == "e") && !byLabel.count(tok)) continue;
    long long exp = 1;
    std::string label = tok;
    if (auto pos = tok.find('^'); pos != std::string::npos) {
      label = tok.substr(0, pos);
      try {
        exp = std::stoll(tok.substr(pos + 1));
      } catch (const std::exception&) {
        throw std::invalid_argument("bad exponent in word token '" + tok + "'");
      }
    }
    auto it = byLabel.find(label);
    if (it == byLabel.end())
      throw std::invalid_argument("unknown generator label '" + label + "'");
    const int sign = exp >= 0 ? 1 : -1;
    for (long long i = 0; i < std::llabs(exp); ++i)
      letters.push_back({it->second, sign});
  }
  return wordFromLetters(g, std::move(letters));
}

// --- quotient chain maps ----------------------------------------------------

int finiteWordImage(const Group& finiteGroup, const std::vector<int>& images,
                    const Word& w) {
  if (finiteGroup.kind != GroupKind::Finite)
    throw std::invalid_argument("image group must be finite");
  int acc = finiteGroup.identity;
  for (const Letter& l : w.letters) {
    int e = images.at(l.gen);
    if (l.sign < 0) e = finiteGroup.inverseOf[e];
    acc = finiteGroup.table[acc][e];
  }
  return acc;
}

int quotientImage(const QuotientChain& chain, int k, const Word& w) {
  if (k < 0 || k >= static_cast<int>(chain.levels.size()))
    throw std::invalid_argument("chain level out of range");
  if (!w.owner || !w.owner->sameAs(*chain.base))
    throw std::invalid_argument("word does not live in the chain base");
  return finiteWordImage(*chain.levels[k].group, chain.levels[k].genImages, w);
}

int factorImage(const QuotientChain& chain, int k, int n, int element) {
  if (k < 0 || n >= static_cast<int>(chain.levels.size()) || k > n)
    throw std::invalid_argument("chain levels out of range (need k <= n)");
  if (element < 0 || element >= chain.levels[n].group->numGenerators())
    throw std::invalid_argument("element out of range for level");
  int x = element;
  for (int j = n; j > k; --j) x = chain.levels[j - 1].factorMap[x];
  return x;
}

// --- ball enumeration -------------------------------------------------------

namespace {

struct WordKey {
  std::vector<Letter> letters;
  bool operator<(const WordKey& o) const {
    if (letters.size() != o.letters.size())
      return letters.size() < o.letters.size();
    for (size_t i = 0; i < letters.size(); ++i) {
      if (letters[i].gen != o.letters[i].gen)
        return letters[i].gen < o.letters[i].gen;
      if (letters[i].sign != o.letters[i].sign)
        return letters[i].sign > o.letters[i].sign;
    }
    return false;
  }
};

}  // namespace

std::vector<BallEntry> ballEnumerateWithPaths(const GroupPtr& g,
                                              const std::vector<Word>& S,
                                              int radius) {
  if (!g) throw std::invalid_argument("null group");
  if (radius < 0) throw std::invalid_argument("radius must be nonnegative");
  std::vector<Word> steps;
  for (const Word& s : S) {
    if (!s.owner || !s.owner->sameAs(*g))
      throw std::invalid_argument("ball generator in wrong group");
    steps.push_back(reduceWord(Word{g, s.letters}));
    steps.push_back(invWord(steps.back()));
  }
  std::map<WordKey, std::vector<Word>> found;
  found[WordKey{{}}] = {};
  std::vector<Word> frontier{identityWord(g)};
  std::vector<std::vector<Word>> frontierPaths{{}};
  for (int depth = 0; depth < radius; ++depth) {
    std::vector<Word> next;
    std::vector<std::vector<Word>> nextPaths;
    for (size_t i = 0; i < frontier.size(); ++i) {
      for (const Word& s : steps) {
        Word prod = mulWords(frontier[i], s);
        WordKey key{prod.letters};
        if (found.count(key)) continue;
        auto path = frontierPaths[i];
        path.push_back(s);
        found.emplace(key, path);
        next.push_back(std::move(prod));
        nextPaths.push_back(found[key]);
      }
    }
    frontier = std::move(next);
    frontierPaths = std::move(nextPaths);
  }
  std::vector<BallEntry> out;
  out.reserve(found.size());
  for (auto& [key, path] : found)
    out.push_back(BallEntry{Word{g, key.letters}, path});
  return out;  // map order == cmpWords order
}

std::vector<Word> ballEnumerate(const GroupPtr& g, const std::vector<Word>& S,
                                int radius) {
  std::vector<Word> out;
  for (auto& e : ballEnumerateWithPaths(g, S, radius))
    out.push_back(std::move(e.element));
  return out;
}

}  // namespace ample::grp
