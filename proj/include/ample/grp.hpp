#pragma once
// Groups with a decidable word problem: free, free-abelian, finite (by
// multiplication table), and finite-quotient chains over such a base.
// Words are letter sequences; every group kind supplies a canonical form,
// so word equality is a table/reduction computation, never a search.

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace ample::grp {

enum class GroupKind { Free, FreeAbelian, Finite, QuotientChain };

struct Letter {
  int gen = 0;   // generator index (finite kind: element id)
  int sign = 1;  // +1 or -1
  friend bool operator==(const Letter&, const Letter&) = default;
};

class Group;
using GroupPtr = std::shared_ptr<const Group>;

// A word in a specific group; `letters` need not be canonical.
struct Word {
  GroupPtr owner;
  std::vector<Letter> letters;
};

// One finite quotient level: a finite group, images of the base generators,
// and (except on the last level) the element-wise factor map from the next
// level onto this one.
struct ChainLevel {
  GroupPtr group;               // finite kind
  std::vector<int> genImages;   // base generator -> element id
  std::vector<int> factorMap;   // next level element -> this level element
};

struct QuotientChain {
  GroupPtr base;                // free / free-abelian / finite
  std::vector<ChainLevel> levels;
  // The kernels-intersect-trivially hypothesis is not checkable from finite
  // data; callers record it as an assumption only.
  bool assumesTrivialIntersection = false;
};

class Group : public std::enable_shared_from_this<Group> {
 public:
  GroupKind kind;
  int rank = 0;                          // Free / FreeAbelian
  std::vector<std::string> labels;       // one per generator (Finite: per element)
  std::vector<std::vector<int>> table;   // Finite: multiplication table
  int identity = -1;                     // Finite
  std::vector<int> inverseOf;            // Finite
  std::optional<QuotientChain> chain;    // QuotientChain

  static GroupPtr makeFree(int rank, std::vector<std::string> labels = {});
  static GroupPtr makeFreeAbelian(int rank, std::vector<std::string> labels = {});
  // Validates the table: square, closed, associative, with identity and inverses.
  static GroupPtr makeFinite(std::vector<std::vector<int>> table,
                             std::vector<std::string> labels = {});
  // Validates level coherence (see validateChain).
  static GroupPtr makeQuotientChain(QuotientChain chain);
  // Skips chain validation; used to exercise the coherence re-checks downstream.
  static GroupPtr makeQuotientChainUnchecked(QuotientChain chain);

  int numGenerators() const;             // letter alphabet size
  const Group& wordGroup() const;        // group whose letters words use (chain -> base)
  bool sameAs(const Group& other) const; // structural identity for word ops

 private:
  Group() = default;
};

// --- chain validation -------------------------------------------------------
// Returns an error description for the first violated chain requirement, or
// nullopt when the chain is coherent: every level group finite and valid,
// generator images surjective (images generate the level), factor maps are
// surjective homomorphisms, and genImages commute with the factor maps.
std::optional<std::string> validateChain(const QuotientChain& chain);

// --- word arithmetic --------------------------------------------------------
Word wordFromLetters(const GroupPtr& g, std::vector<Letter> letters);
Word identityWord(const GroupPtr& g);
Word generatorWord(const GroupPtr& g, int gen, int sign = 1);

// Canonical form: free reduction (Free), sorted exponent form (FreeAbelian),
// single-element form (Finite; identity becomes the empty word).
Word reduceWord(const Word& w);
bool isReduced(const Word& w);
Word mulWords(const Word& a, const Word& b);  // canonical product
Word invWord(const Word& a);                  // canonical inverse
bool equalWords(const Word& a, const Word& b);
bool isIdentity(const Word& w);

// Deterministic total order on canonical words: length, then letter-by-letter
// by (generator index, +1 before -1). Inputs are canonicalized first.
int cmpWords(const Word& a, const Word& b);

// Render/parse with generator labels ("a b^-1 a^2"; identity renders as "1").
std::string wordToString(const Word& w);
Word wordFromString(const GroupPtr& g, const std::string& text);

// Injective map key built from canonical letters. Rendered strings are not
// injective — a finite-group element labelled "1" renders like the identity —
// so containers must key on this, never on wordToString.
std::string canonicalKey(const Word& w);

// --- quotient chain maps ----------------------------------------------------
// Image of a base-group word in level k (element id of levels[k].group).
int quotientImage(const QuotientChain& chain, int k, const Word& w);
// Factor an element of level n down to level k <= n.
int factorImage(const QuotientChain& chain, int k, int n, int element);

// --- ball enumeration -------------------------------------------------------
// All canonical forms of products of at most `radius` factors drawn from
// S, S^{-1} and the identity, sorted by cmpWords.
std::vector<Word> ballEnumerate(const GroupPtr& g, const std::vector<Word>& S,
                                int radius);

// Ball entry with one witnessing factorization: `factors` lists at most
// `radius` elements of S u S^{-1} whose left-to-right product is `element`.
struct BallEntry {
  Word element;
  std::vector<Word> factors;
};
std::vector<BallEntry> ballEnumerateWithPaths(const GroupPtr& g,
                                              const std::vector<Word>& S,
                                              int radius);

// Multiplication of finite-group element ids along a word (helper shared with
// quotient images; `images` maps each base generator to an element id).
int finiteWordImage(const Group& finiteGroup, const std::vector<int>& images,
                    const Word& w);

}  // namespace ample::grp
