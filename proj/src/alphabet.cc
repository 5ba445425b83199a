// alphabet.cc
#include "hier/alphabet.hh"

namespace hier {

Alphabet::Alphabet(std::string letters) : letters_(std::move(letters)) {
  if (letters_.empty()) throw Error("alphabet must be non-empty");
  for (size_t i = 0; i < letters_.size(); ++i)
    for (size_t j = i + 1; j < letters_.size(); ++j)
      if (letters_[i] == letters_[j])
        throw Error(std::string("duplicate letter '") + letters_[i] + "' in alphabet");
}

int Alphabet::index_of(char c) const {
  for (size_t i = 0; i < letters_.size(); ++i)
    if (letters_[i] == c) return static_cast<int>(i);
  return -1;
}

int Alphabet::index(char c) const {
  int i = index_of(c);
  if (i < 0) throw UnknownLetter(c);
  return i;
}

void Alphabet::check_word(const Word& w) const {
  for (char c : w) index(c);
}

bool llex_less(const Word& a, const Word& b) {
  if (a.size() != b.size()) return a.size() < b.size();
  return a < b;
}

std::vector<Word> words_upto(const Alphabet& a, int maxlen) {
  std::vector<Word> out{Word{}};
  size_t level_begin = 0;
  for (int len = 1; len <= maxlen; ++len) {
    size_t level_end = out.size();
    for (size_t i = level_begin; i < level_end; ++i)
      for (int j = 0; j < a.size(); ++j) out.push_back(out[i] + a.letter(j));
    level_begin = level_end;
  }
  return out;
}

Word repeat(const Word& w, int times) {
  Word out;
  out.reserve(w.size() * static_cast<size_t>(times > 0 ? times : 0));
  for (int i = 0; i < times; ++i) out += w;
  return out;
}

}  // namespace hier
