// dfa.hh -- canonical minimal DFAs and the regular-language operations
//
// Every Dfa produced by this API is complete, minimal, and numbered by the
// fixed canonicalization procedure (BFS from the initial state, letters in
// alphabet order, i.e. states ordered by their length-lex least reaching
// word).  Structural equality therefore coincides with language equality,
// which makes deduplication and memo keys trivial everywhere else.
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "hier/alphabet.hh"

namespace hier {

struct Dfa {
  Alphabet alphabet;
  int n = 0;                     // number of states
  std::vector<int> trans;        // n * |alphabet|, row-major
  int init = 0;
  std::vector<std::uint8_t> acc; // size n
  bool canonical = false;

  int step(int q, char c) const { return trans[static_cast<size_t>(q) * alphabet.size() + alphabet.index(c)]; }
  int step_idx(int q, int a) const { return trans[static_cast<size_t>(q) * alphabet.size() + a]; }
  int run(int q, const Word& w) const {
    for (char c : w) q = step(q, c);
    return q;
  }
  bool accepts(int q) const { return acc[static_cast<size_t>(q)] != 0; }

  bool operator==(const Dfa& o) const {
    return alphabet == o.alphabet && n == o.n && trans == o.trans && init == o.init && acc == o.acc;
  }
};

// Minimize + renumber; the only way Dfas become canonical.
Dfa canonicalize(const Dfa& d);

// Byte string identifying the canonical automaton; usable as a hash key.
std::string dfa_key(const Dfa& d);

// ---- factories (all canonical) ----------------------------------------
Dfa dfa_empty(const Alphabet& a);
Dfa dfa_universal(const Alphabet& a);
Dfa dfa_epsilon(const Alphabet& a);                    // {epsilon}
Dfa dfa_word(const Alphabet& a, const Word& w);        // {w}
Dfa dfa_from_words(const Alphabet& a, const std::vector<Word>& words);
Dfa dfa_sub_star(const Alphabet& a, const std::string& letters);  // B* for B <= A

// ---- boolean operations ------------------------------------------------
Dfa dfa_complement(const Dfa& d);
Dfa dfa_union(const Dfa& a, const Dfa& b);
Dfa dfa_intersect(const Dfa& a, const Dfa& b);
Dfa dfa_minus(const Dfa& a, const Dfa& b);

// ---- concatenations ----------------------------------------------------
Dfa dfa_marked_concat(const Dfa& k, char a, const Dfa& l);  // K a L
Dfa dfa_concat(const Dfa& k, const Dfa& l);
Dfa dfa_plus(const Dfa& d);                                  // L+
Dfa dfa_star(const Dfa& d);                                  // L*

// ---- quotients and residuals -------------------------------------------
Dfa left_quotient(const Word& w, const Dfa& l);   // w^-1 L
Dfa right_quotient(const Dfa& l, const Word& w);  // L w^-1
std::vector<Dfa> residuals(const Dfa& l, bool right = false);

// ---- queries -------------------------------------------------------------
bool is_member(const Word& w, const Dfa& l);
bool is_empty_lang(const Dfa& l);
bool equivalent(const Dfa& a, const Dfa& b);
std::vector<Word> enumerate(const Dfa& l, int maxlen);
// Length-lex least member, if any.
std::optional<Word> shortest_member(const Dfa& l);

// ---- serialization -------------------------------------------------------
nlohmann::ordered_json dfa_to_json(const Dfa& d);
Dfa dfa_from_json(const nlohmann::json& j);

}  // namespace hier
