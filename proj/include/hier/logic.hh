// logic.hh -- first-order formulas over class signatures, quantifier
//             alternation bookkeeping, and compilation back to automata
#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "hier/dfa.hh"
#include "hier/language_class.hh"
#include "json.hpp"

namespace hier {

class Formula;
using FormulaPtr = std::shared_ptr<const Formula>;

// Immutable formula tree.  Language atoms are resolved against a class at
// construction time, so the node carries both the member name and its DFA;
// evaluation never needs the class again.
class Formula {
 public:
  enum class Node {
    True,
    False,
    Label,    // a(x): position x carries letter a
    Eq,       // eq(x, y): same position
    Infix,    // I{L}(x, y): x < y and the open infix between them lies in L
    Prefix,   // P{L}(x): the prefix strictly left of x lies in L
    Suffix,   // S{L}(x): the suffix strictly right of x lies in L
    Nullary,  // N{L}: the whole word lies in L
    And,
    Or,
    Not,
    Exists,
    Forall,
  };

  static FormulaPtr truth(bool value);
  static FormulaPtr label(char a, const std::string& x);
  static FormulaPtr eq(const std::string& x, const std::string& y);
  static FormulaPtr infix(const LanguageClass& c, const std::string& lang,
                          const std::string& x, const std::string& y);
  static FormulaPtr prefix(const LanguageClass& c, const std::string& lang, const std::string& x);
  static FormulaPtr suffix(const LanguageClass& c, const std::string& lang, const std::string& x);
  static FormulaPtr nullary(const LanguageClass& c, const std::string& lang);
  static FormulaPtr conj(FormulaPtr l, FormulaPtr r);
  static FormulaPtr disj(FormulaPtr l, FormulaPtr r);
  static FormulaPtr neg(FormulaPtr f);
  static FormulaPtr exists(const std::string& x, FormulaPtr body);
  static FormulaPtr forall(const std::string& x, FormulaPtr body);
  // Atom with the payload of src under a (possibly different) atom kind and
  // fresh variable arguments; plumbing for the prenex and relativization
  // rewriters, which must rebuild atoms without re-resolving languages.
  static FormulaPtr atom_as(const FormulaPtr& src, Node kind, const std::string& x,
                            const std::string& y = "");

  Node node() const { return node_; }
  char letter() const { return letter_; }              // Label
  const std::string& var() const { return var_; }      // Label/Eq/Infix/Prefix/Suffix, Exists/Forall
  const std::string& var2() const { return var2_; }    // Eq/Infix
  const std::string& lang_name() const { return lang_name_; }
  const Dfa& lang() const { return *lang_; }           // Infix/Prefix/Suffix/Nullary
  const FormulaPtr& left() const { return kids_[0]; }  // And/Or
  const FormulaPtr& right() const { return kids_[1]; }
  const FormulaPtr& body() const { return kids_[0]; }  // Not/Exists/Forall

  bool is_atom() const;
  // Free variables in first-appearance order.
  std::vector<std::string> free_variables() const;
  // Concrete syntax; parses back to an equal tree under the same class.
  std::string text() const;

 private:
  Formula() = default;
  static std::shared_ptr<Formula> blank() { return std::shared_ptr<Formula>(new Formula()); }
  Node node_ = Node::True;
  char letter_ = 0;
  std::string var_, var2_, lang_name_;
  std::shared_ptr<const Dfa> lang_;
  std::vector<FormulaPtr> kids_;
};

// 1-based positions, keyed by variable name.
using Assignment = std::map<std::string, int>;

// Concrete syntax:
//   exists x. F | forall x. F | F & F | F | F | ! F | ( F )
//   a(x) | eq(x,y) | I{L}(x,y) | P{L}(x) | S{L}(x) | N{L} | true | false
// plus the derived predicates <(x,y), +1(x,y), min(x), max(x), epsilon when
// the class provides the languages they abbreviate.
FormulaPtr parse_formula(const std::string& text, const LanguageClass& c);

// Truth of f on w under mu.  Quantifiers range over the positions 1..|w|, so
// every existential is false and every universal true on the empty word.
bool evaluate(const FormulaPtr& f, const Word& w, const Assignment& mu = {});

struct AlternationClass {
  enum class Kind { Sigma, Pi, BSigma };
  Kind kind = Kind::Sigma;
  int n = 0;
};
bool operator==(const AlternationClass& a, const AlternationClass& b);
std::string alternation_name(const AlternationClass& a);

// Finest syntactic alternation class: Sigma(n)/Pi(n) count quantifier blocks
// over the best prenex form, BSigma(n) is reported when a Boolean combination
// of Sigma(n) formulas beats both.
AlternationClass classify(const FormulaPtr& f);

// Equivalent sentence in the existential normal shape: a prenex core whose
// quantifier prefix fits n blocks starting existentially, with the empty-word
// adjustment (.. or forall x. false / .. and exists x. true) appended when the
// prenex rewrite disagrees with f on the empty word.  Throws NotSigmaN when f
// does not classify within Sigma(n).
FormulaPtr normalize_sigma(const FormulaPtr& f, int n);

// Sentence defining L(f1) a L(f2) with the same alternation rank: a fresh
// variable pins the marker letter, f1 is relativized to the strict prefix and
// f2 to the strict suffix.  Both inputs must be sentences.
FormulaPtr marked_concat_sentence(const FormulaPtr& f1, char a, const FormulaPtr& f2,
                                  const LanguageClass& c);

// Alphabet of pairs (b1..bl, a): l marker bits on top of a base letter.  Pair
// letters are synthesized printable characters ordered by (mask, base index);
// level 0 reuses the base letters unchanged.
struct ExtendedAlphabet {
  Alphabet base;
  int ell = 0;
  Alphabet letters;

  char pack(unsigned mask, int base_index) const;
  unsigned mask_of(char ext) const;
  int base_index_of(char ext) const;
  bool bit(char ext, int h) const;  // component h, 1-based
};
ExtendedAlphabet extended_alphabet(const Alphabet& base, int ell);

// Word w tagged with the positions of x1..xl (bit h marks mu(xh)).
Word encode(const Word& w, const Assignment& mu, const ExtendedAlphabet& ea);
// Inverse; nullopt when some bit is not set exactly once.
std::optional<std::pair<Word, Assignment>> decode(const Word& w, const ExtendedAlphabet& ea);

// Words over ea whose top bit is set at exactly one position.
Dfa good_filter(const ExtendedAlphabet& ea);

// Letter-to-letter projection dropping the top bit (relabel, determinize,
// canonicalize).  The subset construction aborts with BudgetExceeded past
// state_budget states.
Dfa project(const Dfa& l, const ExtendedAlphabet& from, const ExtendedAlphabet& to,
            size_t state_budget = 200000);

// Preimage of l under the morphism that re-reads a bare letter with the top
// bit cleared; a transition re-indexing, no state growth.
Dfa inv_alpha(const Dfa& l, const ExtendedAlphabet& from, const ExtendedAlphabet& to);

struct SplitTriple {
  Dfa left;
  char marker = 0;
  Dfa right;
};

// Decomposition of everything in l that crosses the letter b: finitely many
// triples P b S with P an intersection of right quotients of l and S a left
// quotient, whose union is exactly l int A* b A*.  The reconstruction is
// checked on every call; l must belong to c.
std::vector<SplitTriple> split_by_letter(const Dfa& l, const LanguageClass& c, char b);

struct CompileResult {
  Dfa language;
  // Claimed concatenation level over the class, on the half-index scale used
  // by level tags (1 = half level 1, 2 = full level 1, ...).  Advisory: an
  // upper bound from the construction, not a tight placement.
  int claimed_half_index = 1;
  AlternationClass target;  // alternation class the input was normalized into
};

// Automaton of a sentence over the signature of c.  The recursion follows the
// existential normal shape: atoms become marker monomials over the extended
// alphabet, and/or become intersection/union, an existential quantifier
// intersects with the good filter and projects the top bit away, and negated
// quantified subformulas compile and complement (bumping the claim to the
// enclosing full level).
CompileResult compile_sentence(const FormulaPtr& f, const LanguageClass& c,
                               size_t state_budget = 200000);

// Open-formula variant over the extended alphabet with ell bits; free
// variables must be named x1..x<ell>.  No prenex normalization is applied.
CompileResult compile_formula(const FormulaPtr& f, const LanguageClass& c, int ell,
                              size_t state_budget = 200000);

// Abbreviations available on top of a builtin basis, mapping each derived
// predicate to the atom it expands to.
std::map<std::string, std::string> derived_signature(const std::string& basis_kind);

struct RoundTripReport {
  int words_checked = 0;
  std::vector<Word> mismatches;  // words where compiler and semantics disagree
  int claimed_half_index = 1;
  // Bounded stratum verdicts for the compiled language (advisory).
  std::vector<std::string> stratum_notes;
  bool ok() const { return mismatches.empty(); }
};

// Cross-checks compile_sentence against direct evaluation on every word up to
// maxlen, then probes small strata of the claimed level.
RoundTripReport round_trip_check(const FormulaPtr& f, const LanguageClass& c, int maxlen,
                                 size_t state_budget = 200000);

nlohmann::ordered_json formula_to_json(const FormulaPtr& f);

}  // namespace hier
