// regex.cc -- recursive-descent regex parser, compiled via DFA combinators
#include "hier/regex.hh"

namespace hier {

namespace {

struct Parser {
  const std::string& text;
  const Alphabet& alphabet;
  size_t pos = 0;

  char peek() const { return pos < text.size() ? text[pos] : '\0'; }
  bool at_end() const { return pos >= text.size(); }

  Regex expr() {
    Regex left = term();
    while (peek() == '|') {
      ++pos;
      Regex right = term();
      Regex node;
      node.kind = Regex::Kind::Union;
      node.kids = {std::move(left), std::move(right)};
      left = std::move(node);
    }
    return left;
  }

  Regex term() {
    Regex left = factor();
    while (!at_end() && peek() != '|' && peek() != ')') {
      Regex right = factor();
      Regex node;
      node.kind = Regex::Kind::Concat;
      node.kids = {std::move(left), std::move(right)};
      left = std::move(node);
    }
    return left;
  }

  Regex factor() {
    Regex node = atom();
    while (peek() == '*') {
      ++pos;
      Regex star;
      star.kind = Regex::Kind::Star;
      star.kids = {std::move(node)};
      node = std::move(star);
    }
    return node;
  }

  Regex atom() {
    if (at_end()) throw SyntaxError("unexpected end of pattern", pos);
    char c = text[pos];
    Regex node;
    switch (c) {
      case '(': {
        ++pos;
        node = expr();
        if (peek() != ')') throw SyntaxError("missing ')'", pos);
        ++pos;
        return node;
      }
      case ')':
        throw SyntaxError("unmatched ')'", pos);
      case '*':
        throw SyntaxError("'*' needs an operand", pos);
      case '|':
        throw SyntaxError("'|' needs a left operand", pos);
      case '_':
        ++pos;
        node.kind = Regex::Kind::Epsilon;
        return node;
      case '.':
        ++pos;
        node.kind = Regex::Kind::AnyLetter;
        return node;
      default:
        if (!alphabet.contains(c)) throw UnknownLetter(c);
        ++pos;
        node.kind = Regex::Kind::Letter;
        node.letter = c;
        return node;
    }
  }
};

}  // namespace

Regex parse_regex(const std::string& text, const Alphabet& alphabet) {
  if (text.empty()) throw SyntaxError("empty pattern", 0);
  Parser p{text, alphabet};
  Regex re = p.expr();
  if (!p.at_end()) throw SyntaxError("trailing input", p.pos);
  return re;
}

Dfa regex_to_dfa(const Regex& re, const Alphabet& alphabet) {
  switch (re.kind) {
    case Regex::Kind::Empty:
      return dfa_empty(alphabet);
    case Regex::Kind::Epsilon:
      return dfa_epsilon(alphabet);
    case Regex::Kind::Letter:
      return dfa_word(alphabet, Word(1, re.letter));
    case Regex::Kind::AnyLetter: {
      Dfa d = dfa_empty(alphabet);
      for (int a = 0; a < alphabet.size(); ++a)
        d = dfa_union(d, dfa_word(alphabet, Word(1, alphabet.letter(a))));
      return d;
    }
    case Regex::Kind::Union:
      return dfa_union(regex_to_dfa(re.kids[0], alphabet), regex_to_dfa(re.kids[1], alphabet));
    case Regex::Kind::Concat:
      return dfa_concat(regex_to_dfa(re.kids[0], alphabet), regex_to_dfa(re.kids[1], alphabet));
    case Regex::Kind::Star:
      return dfa_star(regex_to_dfa(re.kids[0], alphabet));
  }
  throw Error("unreachable regex node");
}

Dfa compile_regex(const std::string& text, const Alphabet& alphabet) {
  return regex_to_dfa(parse_regex(text, alphabet), alphabet);
}

}  // namespace hier
