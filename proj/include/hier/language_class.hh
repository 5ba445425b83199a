// language_class.hh -- finite language classes, canonical preorders, class monoids
#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "hier/dfa.hh"

namespace hier {

// A finite class of regular languages over one alphabet, as an explicit,
// deduplicated member list.  Members are canonical DFAs and carry names so
// the logic layer can reference them (I{Astar}, P{Eps}, ...).
struct LanguageClass {
  std::string name;
  Alphabet alphabet;
  std::vector<Dfa> members;
  std::vector<std::string> member_names;

  int size() const { return static_cast<int>(members.size()); }
  int find(const std::string& member_name) const;
  const Dfa& member(const std::string& member_name) const;  // throws UnknownLanguage
};

// Builtin bases.  `kind` is one of st0, dd0, at, wat, att:<d>.
//   st0    {∅, A*}
//   dd0    {∅, {ε}, A⁺, A*}
//   at     Boolean algebra generated by the A*aA* (alphabet testable)
//   wat    all unions of B* for B ⊆ A (weak alphabet testable)
//   att:d  Boolean algebra of letter counts capped at threshold d
// Generation is capped: exceeding member_cap raises BudgetExceeded.
LanguageClass builtin_basis(const std::string& kind, const Alphabet& a,
                            size_t member_cap = 4096);

// User-defined class: {name, alphabet, languages: [{name, regex}]}.
// Language-equal duplicates are dropped (first name wins).
LanguageClass load_class(const nlohmann::json& j);

struct ClassProperties {
  bool lattice = false;          // has ∅, A*; closed under ∪ and ∩
  bool boolean_algebra = false;  // lattice + complements
  bool quotienting = false;      // closed under single-letter quotients, both sides
};
ClassProperties check_properties(const LanguageClass& c);

// One bit per member, in member order.
std::vector<std::uint8_t> membership_vector(const LanguageClass& c, const Word& w);

// Canonical preorder of the class: w ≤_C w' iff every member containing w
// also contains w' (bitwise implication of membership vectors).
bool leq_C(const LanguageClass& c, const Word& w, const Word& w2);

// Intersection of all members containing w (A* when none do).
Dfa upper_set(const LanguageClass& c, const Word& w);

// Transition monoid of the product of all member DFAs.  eval extends to a
// morphism A* -> elements whose image determines the membership vector, so
// the canonical preorder factors through it.
struct ClassMonoid {
  Alphabet alphabet;
  int n = 0;      // element count
  int unit = 0;   // identity element (image of ε)
  std::vector<int> mult;                       // n*n, row-major: mult[s*n + t] = s·t
  std::vector<int> letter_eval;                // per alphabet letter
  std::vector<Word> rep;                       // length-lex least representative
  std::vector<std::vector<std::uint8_t>> vec;  // membership vector per element
  std::vector<std::uint8_t> leq;               // n*n: vec implication
  int period = 1;  // minimal p ≥ 1 with s^p = s^{2p} for every element
  int state_count = 0;                         // product states (internal sizes)
  std::vector<std::vector<int>> table;         // element as map product-state -> product-state
  int initial_state = 0;

  int times(int s, int t) const { return mult[static_cast<size_t>(s) * n + t]; }
  bool leq_elem(int s, int t) const { return leq[static_cast<size_t>(s) * n + t] != 0; }
  int eval_word(const Word& w) const;
  int power(int s, long long e) const;
};

ClassMonoid class_monoid(const LanguageClass& c);  // throws NotQuotienting
int period(const LanguageClass& c);

// Membership of a regular language in the finite lattice C (upper-set
// criterion), and the corresponding witness extractors.  Witness pairs are
// shortest, ties broken length-lex.
bool in_class(const LanguageClass& c, const Dfa& l);  // throws NotLattice
std::optional<std::pair<Word, Word>> non_membership_witness(const LanguageClass& c, const Dfa& l);
std::optional<std::pair<Word, Word>> non_separability_witness(const LanguageClass& c,
                                                              const Dfa& l1, const Dfa& l2);

}  // namespace hier
