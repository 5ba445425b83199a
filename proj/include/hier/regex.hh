// regex.hh -- regex syntax trees and compilation to canonical DFAs
#pragma once

#include <string>
#include <vector>

#include "hier/dfa.hh"

namespace hier {

// Grammar: union `|`, concatenation by juxtaposition, star `*`, parentheses,
// `_` for the empty word, `.` for any single letter.  Letters must belong to
// the declared alphabet; alphabets are never inferred from the pattern.
struct Regex {
  enum class Kind { Empty, Epsilon, Letter, AnyLetter, Union, Concat, Star };
  Kind kind = Kind::Empty;
  char letter = 0;  // Kind::Letter only
  std::vector<Regex> kids;
};

Regex parse_regex(const std::string& text, const Alphabet& alphabet);
Dfa regex_to_dfa(const Regex& re, const Alphabet& alphabet);
Dfa compile_regex(const std::string& text, const Alphabet& alphabet);

}  // namespace hier
