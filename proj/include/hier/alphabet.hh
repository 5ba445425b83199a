// alphabet.hh -- explicit finite alphabets and word helpers
#pragma once

#include <string>
#include <vector>

#include "hier/errors.hh"

namespace hier {

// Words are plain strings over the alphabet's letters; "" is epsilon.
using Word = std::string;

class Alphabet {
 public:
  Alphabet() = default;
  explicit Alphabet(std::string letters);

  int size() const { return static_cast<int>(letters_.size()); }
  char letter(int i) const { return letters_[static_cast<size_t>(i)]; }
  const std::string& letters() const { return letters_; }

  bool contains(char c) const { return index_of(c) >= 0; }
  // Throws UnknownLetter for symbols outside the alphabet.
  int index(char c) const;

  void check_word(const Word& w) const;

  bool operator==(const Alphabet& o) const { return letters_ == o.letters_; }
  bool operator!=(const Alphabet& o) const { return letters_ != o.letters_; }

 private:
  int index_of(char c) const;
  std::string letters_;
};

// Length-lexicographic order; the ambient order for all enumerations.
bool llex_less(const Word& a, const Word& b);

// All words of length <= maxlen in length-lex order.
std::vector<Word> words_upto(const Alphabet& a, int maxlen);

Word repeat(const Word& w, int times);

}  // namespace hier
