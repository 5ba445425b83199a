// logic.cc -- formula trees, alternation bookkeeping, and the compiler from
// sentences back to canonical automata
#include "hier/logic.hh"

#include <algorithm>
#include <cctype>
#include <cstring>
#include <set>

#include "hier/errors.hh"
#include "hier/strata.hh"
#include "nfa.hh"

namespace hier {

using Node = Formula::Node;

// ---- formula construction -----------------------------------------------

FormulaPtr Formula::truth(bool value) {
  auto p = blank();
  p->node_ = value ? Node::True : Node::False;
  return p;
}

FormulaPtr Formula::label(char a, const std::string& x) {
  auto p = blank();
  p->node_ = Node::Label;
  p->letter_ = a;
  p->var_ = x;
  return p;
}

FormulaPtr Formula::eq(const std::string& x, const std::string& y) {
  auto p = blank();
  p->node_ = Node::Eq;
  p->var_ = x;
  p->var2_ = y;
  return p;
}

FormulaPtr Formula::infix(const LanguageClass& c, const std::string& lang, const std::string& x,
                          const std::string& y) {
  auto p = blank();
  p->node_ = Node::Infix;
  p->lang_name_ = lang;
  p->lang_ = std::make_shared<Dfa>(c.member(lang));
  p->var_ = x;
  p->var2_ = y;
  return p;
}

FormulaPtr Formula::prefix(const LanguageClass& c, const std::string& lang, const std::string& x) {
  auto p = blank();
  p->node_ = Node::Prefix;
  p->lang_name_ = lang;
  p->lang_ = std::make_shared<Dfa>(c.member(lang));
  p->var_ = x;
  return p;
}

FormulaPtr Formula::suffix(const LanguageClass& c, const std::string& lang, const std::string& x) {
  auto p = blank();
  p->node_ = Node::Suffix;
  p->lang_name_ = lang;
  p->lang_ = std::make_shared<Dfa>(c.member(lang));
  p->var_ = x;
  return p;
}

FormulaPtr Formula::nullary(const LanguageClass& c, const std::string& lang) {
  auto p = blank();
  p->node_ = Node::Nullary;
  p->lang_name_ = lang;
  p->lang_ = std::make_shared<Dfa>(c.member(lang));
  return p;
}

FormulaPtr Formula::conj(FormulaPtr l, FormulaPtr r) {
  auto p = blank();
  p->node_ = Node::And;
  p->kids_ = {std::move(l), std::move(r)};
  return p;
}

FormulaPtr Formula::disj(FormulaPtr l, FormulaPtr r) {
  auto p = blank();
  p->node_ = Node::Or;
  p->kids_ = {std::move(l), std::move(r)};
  return p;
}

FormulaPtr Formula::neg(FormulaPtr f) {
  auto p = blank();
  p->node_ = Node::Not;
  p->kids_ = {std::move(f)};
  return p;
}

FormulaPtr Formula::exists(const std::string& x, FormulaPtr body) {
  auto p = blank();
  p->node_ = Node::Exists;
  p->var_ = x;
  p->kids_ = {std::move(body)};
  return p;
}

FormulaPtr Formula::forall(const std::string& x, FormulaPtr body) {
  auto p = blank();
  p->node_ = Node::Forall;
  p->var_ = x;
  p->kids_ = {std::move(body)};
  return p;
}

FormulaPtr Formula::atom_as(const FormulaPtr& src, Node kind, const std::string& x,
                            const std::string& y) {
  auto p = blank();
  p->node_ = kind;
  switch (kind) {
    case Node::True:
    case Node::False:
      break;
    case Node::Label:
      if (src->node_ != Node::Label) throw Error("atom_as: a label atom needs a label source");
      p->letter_ = src->letter_;
      p->var_ = x;
      break;
    case Node::Eq:
      p->var_ = x;
      p->var2_ = y;
      break;
    case Node::Infix:
    case Node::Prefix:
    case Node::Suffix:
    case Node::Nullary:
      if (!src->lang_) throw Error("atom_as: the source atom carries no language");
      p->lang_name_ = src->lang_name_;
      p->lang_ = src->lang_;
      if (kind == Node::Infix) {
        p->var_ = x;
        p->var2_ = y;
      } else if (kind != Node::Nullary) {
        p->var_ = x;
      }
      break;
    default:
      throw Error("atom_as needs an atom kind");
  }
  return p;
}

bool Formula::is_atom() const { return static_cast<int>(node_) <= static_cast<int>(Node::Nullary); }

namespace {
void free_vars_rec(const Formula& f, std::vector<std::string>& bound,
                   std::vector<std::string>& out) {
  auto add = [&](const std::string& v) {
    if (std::find(bound.begin(), bound.end(), v) != bound.end()) return;
    if (std::find(out.begin(), out.end(), v) == out.end()) out.push_back(v);
  };
  switch (f.node()) {
    case Node::True:
    case Node::False:
    case Node::Nullary:
      return;
    case Node::Label:
    case Node::Prefix:
    case Node::Suffix:
      add(f.var());
      return;
    case Node::Eq:
    case Node::Infix:
      add(f.var());
      add(f.var2());
      return;
    case Node::And:
    case Node::Or:
      free_vars_rec(*f.left(), bound, out);
      free_vars_rec(*f.right(), bound, out);
      return;
    case Node::Not:
      free_vars_rec(*f.body(), bound, out);
      return;
    case Node::Exists:
    case Node::Forall:
      bound.push_back(f.var());
      free_vars_rec(*f.body(), bound, out);
      bound.pop_back();
      return;
  }
}
}  // namespace

std::vector<std::string> Formula::free_variables() const {
  std::vector<std::string> bound, out;
  free_vars_rec(*this, bound, out);
  return out;
}

namespace {
std::string text_rec(const Formula& f) {
  switch (f.node()) {
    case Node::True: return "true";
    case Node::False: return "false";
    case Node::Label: return std::string(1, f.letter()) + "(" + f.var() + ")";
    case Node::Eq: return "eq(" + f.var() + "," + f.var2() + ")";
    case Node::Infix: return "I{" + f.lang_name() + "}(" + f.var() + "," + f.var2() + ")";
    case Node::Prefix: return "P{" + f.lang_name() + "}(" + f.var() + ")";
    case Node::Suffix: return "S{" + f.lang_name() + "}(" + f.var() + ")";
    case Node::Nullary: return "N{" + f.lang_name() + "}";
    case Node::And:
    case Node::Or: {
      // Quantifier bodies extend maximally right, so quantified operands need
      // their own parentheses to survive a round trip.
      auto side = [](const Formula& g) {
        bool q = g.node() == Node::Exists || g.node() == Node::Forall;
        return q ? "(" + text_rec(g) + ")" : text_rec(g);
      };
      const char* op = f.node() == Node::And ? " & " : " | ";
      return "(" + side(*f.left()) + op + side(*f.right()) + ")";
    }
    case Node::Not: {
      const Formula& b = *f.body();
      bool wrap = b.node() == Node::Exists || b.node() == Node::Forall;
      return wrap ? "!(" + text_rec(b) + ")" : "!" + text_rec(b);
    }
    case Node::Exists: return "exists " + f.var() + ". " + text_rec(*f.body());
    case Node::Forall: return "forall " + f.var() + ". " + text_rec(*f.body());
  }
  return "";
}
}  // namespace

std::string Formula::text() const { return text_rec(*this); }

// ---- parsing -------------------------------------------------------------

namespace {

int find_member_index(const LanguageClass& c, const Dfa& d) {
  for (int i = 0; i < c.size(); ++i)
    if (c.members[static_cast<size_t>(i)] == d) return i;
  return -1;
}

struct Parser {
  const std::string& s;
  const LanguageClass& c;
  size_t pos = 0;
  // derived predicate -> (atom kind, member name)
  std::map<std::string, std::pair<char, std::string>> aliases;

  Parser(const std::string& text, const LanguageClass& cls) : s(text), c(cls) {
    int uni = find_member_index(c, dfa_universal(c.alphabet));
    int eps = find_member_index(c, dfa_epsilon(c.alphabet));
    if (uni >= 0) aliases["<"] = {'I', c.member_names[static_cast<size_t>(uni)]};
    if (eps >= 0) {
      const std::string& e = c.member_names[static_cast<size_t>(eps)];
      aliases["+1"] = {'I', e};
      aliases["min"] = {'P', e};
      aliases["max"] = {'S', e};
      aliases["epsilon"] = {'N', e};
    }
  }

  void skip() {
    while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
  }
  char peek() {
    skip();
    return pos < s.size() ? s[pos] : '\0';
  }
  bool eat(char ch) {
    if (peek() != ch) return false;
    ++pos;
    return true;
  }
  void expect(char ch) {
    if (!eat(ch)) throw SyntaxError(std::string("expected '") + ch + "'", pos);
  }
  std::string ident() {
    skip();
    size_t start = pos;
    auto ok = [&](char ch, bool first) {
      return std::isalpha(static_cast<unsigned char>(ch)) || ch == '_' ||
             (!first && std::isdigit(static_cast<unsigned char>(ch)));
    };
    while (pos < s.size() && ok(s[pos], pos == start)) ++pos;
    return s.substr(start, pos - start);
  }
  std::string require_var() {
    std::string v = ident();
    if (v.empty()) throw SyntaxError("expected a variable name", pos);
    return v;
  }

  FormulaPtr expr() {
    FormulaPtr l = conjunct();
    while (eat('|')) l = Formula::disj(l, conjunct());
    return l;
  }
  FormulaPtr conjunct() {
    FormulaPtr l = unary();
    while (eat('&')) l = Formula::conj(l, unary());
    return l;
  }
  FormulaPtr unary() {
    if (eat('!')) return Formula::neg(unary());
    return primary();
  }

  FormulaPtr alias_atom(const std::string& name) {
    auto it = aliases.find(name);
    if (it == aliases.end()) throw UnknownPredicate(name);
    auto [kind, member] = it->second;
    if (kind == 'N') return Formula::nullary(c, member);
    expect('(');
    std::string v = require_var();
    if (kind == 'I') {
      expect(',');
      std::string v2 = require_var();
      expect(')');
      return Formula::infix(c, member, v, v2);
    }
    expect(')');
    return kind == 'P' ? Formula::prefix(c, member, v) : Formula::suffix(c, member, v);
  }

  FormulaPtr signature_atom(char kind) {
    expect('{');
    std::string name = ident();
    if (name.empty()) throw SyntaxError("expected a language name", pos);
    expect('}');
    if (kind == 'N') return Formula::nullary(c, name);
    expect('(');
    std::string v = require_var();
    if (kind == 'I') {
      expect(',');
      std::string v2 = require_var();
      expect(')');
      return Formula::infix(c, name, v, v2);
    }
    expect(')');
    return kind == 'P' ? Formula::prefix(c, name, v) : Formula::suffix(c, name, v);
  }

  FormulaPtr primary() {
    skip();
    if (eat('(')) {
      FormulaPtr f = expr();
      expect(')');
      return f;
    }
    if (peek() == '<') {
      ++pos;
      return alias_atom("<");
    }
    if (peek() == '+') {
      if (s.compare(pos, 2, "+1") != 0) throw SyntaxError("expected '+1'", pos);
      pos += 2;
      return alias_atom("+1");
    }
    size_t at = pos;
    std::string id = ident();
    if (id.empty()) throw SyntaxError("expected a formula", pos);
    if (id == "exists" || id == "forall") {
      std::string v = require_var();
      expect('.');
      FormulaPtr b = expr();
      return id == "exists" ? Formula::exists(v, b) : Formula::forall(v, b);
    }
    if (id == "true") return Formula::truth(true);
    if (id == "false") return Formula::truth(false);
    if (id == "eq" && peek() == '(') {
      ++pos;
      std::string v = require_var();
      expect(',');
      std::string v2 = require_var();
      expect(')');
      return Formula::eq(v, v2);
    }
    if ((id == "I" || id == "P" || id == "S" || id == "N") && peek() == '{')
      return signature_atom(id[0]);
    if (aliases.count(id)) return alias_atom(id);
    if (id.size() == 1 && peek() == '(') {
      if (!c.alphabet.contains(id[0])) throw UnknownLetter(id[0]);
      ++pos;
      std::string v = require_var();
      expect(')');
      return Formula::label(id[0], v);
    }
    if (id == "min" || id == "max" || id == "epsilon") throw UnknownPredicate(id);
    throw SyntaxError("unknown predicate '" + id + "'", at);
  }
};

}  // namespace

FormulaPtr parse_formula(const std::string& text, const LanguageClass& c) {
  Parser p(text, c);
  if (p.peek() == '\0') throw SyntaxError("empty formula", 0);
  FormulaPtr f = p.expr();
  if (p.peek() != '\0') throw SyntaxError("unexpected trailing input", p.pos);
  return f;
}

// ---- semantics -------------------------------------------------------------

namespace {
int position_of(const Assignment& mu, const std::string& v, const Word& w) {
  auto it = mu.find(v);
  if (it == mu.end()) throw UnboundVariable(v);
  if (it->second < 1 || it->second > static_cast<int>(w.size()))
    throw Error("assignment sends '" + v + "' to position " + std::to_string(it->second) +
                ", outside the word");
  return it->second;
}
}  // namespace

bool evaluate(const FormulaPtr& f, const Word& w, const Assignment& mu) {
  switch (f->node()) {
    case Node::True: return true;
    case Node::False: return false;
    case Node::Label: return w[static_cast<size_t>(position_of(mu, f->var(), w)) - 1] == f->letter();
    case Node::Eq: return position_of(mu, f->var(), w) == position_of(mu, f->var2(), w);
    case Node::Infix: {
      int i = position_of(mu, f->var(), w);
      int j = position_of(mu, f->var2(), w);
      if (i >= j) return false;
      return is_member(w.substr(static_cast<size_t>(i), static_cast<size_t>(j - i - 1)), f->lang());
    }
    case Node::Prefix: {
      int i = position_of(mu, f->var(), w);
      return is_member(w.substr(0, static_cast<size_t>(i - 1)), f->lang());
    }
    case Node::Suffix: {
      int i = position_of(mu, f->var(), w);
      return is_member(w.substr(static_cast<size_t>(i)), f->lang());
    }
    case Node::Nullary: return is_member(w, f->lang());
    case Node::And: return evaluate(f->left(), w, mu) && evaluate(f->right(), w, mu);
    case Node::Or: return evaluate(f->left(), w, mu) || evaluate(f->right(), w, mu);
    case Node::Not: return !evaluate(f->body(), w, mu);
    case Node::Exists: {
      Assignment m2 = mu;
      for (int i = 1; i <= static_cast<int>(w.size()); ++i) {
        m2[f->var()] = i;
        if (evaluate(f->body(), w, m2)) return true;
      }
      return false;
    }
    case Node::Forall: {
      Assignment m2 = mu;
      for (int i = 1; i <= static_cast<int>(w.size()); ++i) {
        m2[f->var()] = i;
        if (!evaluate(f->body(), w, m2)) return false;
      }
      return true;
    }
  }
  return false;
}

// ---- alternation classification --------------------------------------------

bool operator==(const AlternationClass& a, const AlternationClass& b) {
  return a.kind == b.kind && a.n == b.n;
}

std::string alternation_name(const AlternationClass& a) {
  switch (a.kind) {
    case AlternationClass::Kind::Sigma: return "Sigma(" + std::to_string(a.n) + ")";
    case AlternationClass::Kind::Pi: return "Pi(" + std::to_string(a.n) + ")";
    case AlternationClass::Kind::BSigma: return "BSigma(" + std::to_string(a.n) + ")";
  }
  return "";
}

namespace {
// Least n with the formula in Sigma_n (s), Pi_n (p), and "Boolean combination
// of Sigma_n" (bs), computed without materializing a prenex form.  A
// quantifier freezes bs at the rank of the quantified formula itself, since
// there is no Boolean structure above it to exploit.
struct AltRank {
  int s = 0, p = 0, bs = 0;
};

AltRank alt_rank(const Formula& f) {
  switch (f.node()) {
    case Node::And:
    case Node::Or: {
      AltRank a = alt_rank(*f.left());
      AltRank b = alt_rank(*f.right());
      return {std::max(a.s, b.s), std::max(a.p, b.p), std::max(a.bs, b.bs)};
    }
    case Node::Not: {
      AltRank a = alt_rank(*f.body());
      return {a.p, a.s, a.bs};
    }
    case Node::Exists: {
      AltRank a = alt_rank(*f.body());
      int s = std::max(1, a.s);
      return {s, s + 1, s};
    }
    case Node::Forall: {
      AltRank a = alt_rank(*f.body());
      int p = std::max(1, a.p);
      return {p + 1, p, p};
    }
    default: return {0, 0, 0};
  }
}
}  // namespace

AlternationClass classify(const FormulaPtr& f) {
  AltRank r = alt_rank(*f);
  if (r.s == 0 && r.p == 0) return {AlternationClass::Kind::Sigma, 0};
  if (r.bs < std::min(r.s, r.p)) return {AlternationClass::Kind::BSigma, r.bs};
  if (r.s <= r.p) return {AlternationClass::Kind::Sigma, r.s};
  return {AlternationClass::Kind::Pi, r.p};
}

// ---- prenex machinery -------------------------------------------------------

namespace {

// Negation normal form; `negate` pushes one pending negation down.
FormulaPtr nnf(const FormulaPtr& f, bool negate) {
  switch (f->node()) {
    case Node::True: return Formula::truth(!negate);
    case Node::False: return Formula::truth(negate);
    case Node::And:
      return negate ? Formula::disj(nnf(f->left(), true), nnf(f->right(), true))
                    : Formula::conj(nnf(f->left(), false), nnf(f->right(), false));
    case Node::Or:
      return negate ? Formula::conj(nnf(f->left(), true), nnf(f->right(), true))
                    : Formula::disj(nnf(f->left(), false), nnf(f->right(), false));
    case Node::Not: return nnf(f->body(), !negate);
    case Node::Exists:
      return negate ? Formula::forall(f->var(), nnf(f->body(), true))
                    : Formula::exists(f->var(), nnf(f->body(), false));
    case Node::Forall:
      return negate ? Formula::exists(f->var(), nnf(f->body(), true))
                    : Formula::forall(f->var(), nnf(f->body(), false));
    default: return negate ? Formula::neg(f) : f;
  }
}

FormulaPtr rename_apart(const FormulaPtr& f, int& counter,
                        std::map<std::string, std::string>& sub) {
  auto s = [&](const std::string& v) {
    auto it = sub.find(v);
    return it == sub.end() ? v : it->second;
  };
  switch (f->node()) {
    case Node::True:
    case Node::False:
    case Node::Nullary: return f;
    case Node::Label: return Formula::atom_as(f, Node::Label, s(f->var()));
    case Node::Eq: return Formula::atom_as(f, Node::Eq, s(f->var()), s(f->var2()));
    case Node::Infix: return Formula::atom_as(f, Node::Infix, s(f->var()), s(f->var2()));
    case Node::Prefix: return Formula::atom_as(f, Node::Prefix, s(f->var()));
    case Node::Suffix: return Formula::atom_as(f, Node::Suffix, s(f->var()));
    case Node::And:
    case Node::Or: {
      // Sequenced explicitly: the counter must run left to right.
      FormulaPtr l = rename_apart(f->left(), counter, sub);
      FormulaPtr r = rename_apart(f->right(), counter, sub);
      return f->node() == Node::And ? Formula::conj(l, r) : Formula::disj(l, r);
    }
    case Node::Not: return Formula::neg(rename_apart(f->body(), counter, sub));
    case Node::Exists:
    case Node::Forall: {
      std::string fresh = "x" + std::to_string(++counter);
      auto it = sub.find(f->var());
      std::optional<std::string> saved =
          it == sub.end() ? std::nullopt : std::optional<std::string>(it->second);
      sub[f->var()] = fresh;
      FormulaPtr b = rename_apart(f->body(), counter, sub);
      if (saved) sub[f->var()] = *saved;
      else sub.erase(f->var());
      return f->node() == Node::Exists ? Formula::exists(fresh, b) : Formula::forall(fresh, b);
    }
  }
  return f;
}

struct Quant {
  Node kind = Node::Exists;
  std::string var;
};

// Interleaving of two quantifier prefixes with the fewest alternation blocks,
// counting a virtual leading existential block (so a universal start costs
// one more, matching the Sigma scale).  Plain DP over (consumed, consumed,
// last kind); the relative order within each prefix is preserved.
std::vector<Quant> merge_prefixes(const std::vector<Quant>& a, const std::vector<Quant>& b) {
  if (a.empty()) return b;
  if (b.empty()) return a;
  const int n = static_cast<int>(a.size()), m = static_cast<int>(b.size());
  const int inf = 1 << 28;
  auto id = [&](int i, int j, int k) { return (i * (m + 1) + j) * 2 + k; };
  std::vector<int> cost(static_cast<size_t>((n + 1) * (m + 1) * 2), inf);
  std::vector<signed char> from(cost.size(), -1);  // 0: took a[i], 1: took b[j]
  std::vector<signed char> prev(cost.size(), -1);  // previous `last kind`
  cost[static_cast<size_t>(id(0, 0, 0))] = 1;
  auto kind_bit = [](const Quant& q) { return q.kind == Node::Exists ? 0 : 1; };
  // Layered by consumed count, left prefix first within a layer, so ties
  // resolve toward keeping the left operand's quantifiers outermost.
  for (int s = 0; s <= n + m; ++s)
    for (int i = std::min(s, n); i >= std::max(0, s - m); --i) {
      int j = s - i;
      for (int k = 0; k < 2; ++k) {
        int cur = cost[static_cast<size_t>(id(i, j, k))];
        if (cur >= inf) continue;
        auto relax = [&](int i2, int j2, int k2, signed char take) {
          int c2 = cur + (k2 != k ? 1 : 0);
          size_t t = static_cast<size_t>(id(i2, j2, k2));
          if (c2 < cost[t]) {
            cost[t] = c2;
            from[t] = take;
            prev[t] = static_cast<signed char>(k);
          }
        };
        if (i < n) relax(i + 1, j, kind_bit(a[static_cast<size_t>(i)]), 0);
        if (j < m) relax(i, j + 1, kind_bit(b[static_cast<size_t>(j)]), 1);
      }
    }
  int bestk = cost[static_cast<size_t>(id(n, m, 0))] <= cost[static_cast<size_t>(id(n, m, 1))] ? 0 : 1;
  std::vector<Quant> out;
  int i = n, j = m, k = bestk;
  while (i > 0 || j > 0) {
    size_t t = static_cast<size_t>(id(i, j, k));
    if (from[t] == 0) {
      out.push_back(a[static_cast<size_t>(--i)]);
    } else {
      out.push_back(b[static_cast<size_t>(--j)]);
    }
    k = prev[t];
  }
  std::reverse(out.begin(), out.end());
  return out;
}

// Quantifier prefix extraction from an NNF formula with distinct bound
// variables.  Sound on nonempty words; the empty word is adjusted separately.
std::pair<std::vector<Quant>, FormulaPtr> hoist(const FormulaPtr& f) {
  switch (f->node()) {
    case Node::Exists:
    case Node::Forall: {
      auto [p, m] = hoist(f->body());
      p.insert(p.begin(), Quant{f->node(), f->var()});
      return {std::move(p), std::move(m)};
    }
    case Node::And:
    case Node::Or: {
      auto [p1, m1] = hoist(f->left());
      auto [p2, m2] = hoist(f->right());
      FormulaPtr matrix =
          f->node() == Node::And ? Formula::conj(m1, m2) : Formula::disj(m1, m2);
      return {merge_prefixes(p1, p2), std::move(matrix)};
    }
    default: return {{}, f};
  }
}

}  // namespace

FormulaPtr normalize_sigma(const FormulaPtr& f, int n) {
  if (!f->free_variables().empty())
    throw PreconditionViolated("normalization needs a sentence");
  AltRank r = alt_rank(*f);
  if (r.s > n)
    throw NotSigmaN("the sentence needs " + std::to_string(r.s) +
                    " alternating blocks, more than Sigma(" + std::to_string(n) + ") allows");
  int counter = 0;
  std::map<std::string, std::string> sub;
  FormulaPtr g = rename_apart(nnf(f, false), counter, sub);
  auto [prefix, matrix] = hoist(g);
  FormulaPtr out = matrix;
  for (auto it = prefix.rbegin(); it != prefix.rend(); ++it)
    out = it->kind == Node::Exists ? Formula::exists(it->var, out) : Formula::forall(it->var, out);
  // The prenex rewrite is only faithful on nonempty words; patch the empty
  // word explicitly with a disjunct that adds it or a conjunct that removes
  // it.
  bool want = evaluate(f, "", {});
  bool got = evaluate(out, "", {});
  std::string fresh = "x" + std::to_string(counter + 1);
  if (want && !got) out = Formula::disj(out, Formula::forall(fresh, Formula::truth(false)));
  if (!want && got) out = Formula::conj(out, Formula::exists(fresh, Formula::truth(true)));
  return out;
}

// ---- marked concatenation at the sentence level ------------------------------

namespace {
void collect_vars(const Formula& f, std::set<std::string>& out) {
  switch (f.node()) {
    case Node::Label:
    case Node::Prefix:
    case Node::Suffix: out.insert(f.var()); return;
    case Node::Eq:
    case Node::Infix:
      out.insert(f.var());
      out.insert(f.var2());
      return;
    case Node::And:
    case Node::Or:
      collect_vars(*f.left(), out);
      collect_vars(*f.right(), out);
      return;
    case Node::Not: collect_vars(*f.body(), out); return;
    case Node::Exists:
    case Node::Forall:
      out.insert(f.var());
      collect_vars(*f.body(), out);
      return;
    default: return;
  }
}

// Reinterprets a sentence on the strict prefix (left = true) or strict suffix
// (left = false) of the marker position x: quantifiers are guarded by the
// order predicate, and the atoms that touch the word's far boundary are
// re-based at x.
FormulaPtr relativize(const FormulaPtr& f, const std::string& x, bool left,
                      const std::string& order, const LanguageClass& c) {
  switch (f->node()) {
    case Node::True:
    case Node::False:
    case Node::Label:
    case Node::Eq:
    case Node::Infix: return f;
    case Node::Prefix:
      return left ? f : Formula::atom_as(f, Node::Infix, x, f->var());
    case Node::Suffix:
      return left ? Formula::atom_as(f, Node::Infix, f->var(), x) : f;
    case Node::Nullary:
      return Formula::atom_as(f, left ? Node::Prefix : Node::Suffix, x);
    case Node::And:
      return Formula::conj(relativize(f->left(), x, left, order, c),
                           relativize(f->right(), x, left, order, c));
    case Node::Or:
      return Formula::disj(relativize(f->left(), x, left, order, c),
                           relativize(f->right(), x, left, order, c));
    case Node::Not: return Formula::neg(relativize(f->body(), x, left, order, c));
    case Node::Exists: {
      FormulaPtr guard = left ? Formula::infix(c, order, f->var(), x)
                              : Formula::infix(c, order, x, f->var());
      return Formula::exists(f->var(),
                             Formula::conj(guard, relativize(f->body(), x, left, order, c)));
    }
    case Node::Forall: {
      FormulaPtr guard = left ? Formula::infix(c, order, f->var(), x)
                              : Formula::infix(c, order, x, f->var());
      return Formula::forall(f->var(), Formula::disj(Formula::neg(guard),
                                                     relativize(f->body(), x, left, order, c)));
    }
  }
  return f;
}
}  // namespace

FormulaPtr marked_concat_sentence(const FormulaPtr& f1, char a, const FormulaPtr& f2,
                                  const LanguageClass& c) {
  if (!f1->free_variables().empty() || !f2->free_variables().empty())
    throw NotSigmaN("marked concatenation needs sentences");
  if (classify(f1).kind != AlternationClass::Kind::Sigma ||
      classify(f2).kind != AlternationClass::Kind::Sigma)
    throw NotSigmaN("marked concatenation needs Sigma-shaped sentences");
  if (!c.alphabet.contains(a)) throw UnknownLetter(a);
  int uni = find_member_index(c, dfa_universal(c.alphabet));
  if (uni < 0)
    throw PreconditionViolated("the class has no full language, so the order predicate is missing");
  const std::string& order = c.member_names[static_cast<size_t>(uni)];
  std::set<std::string> used;
  collect_vars(*f1, used);
  collect_vars(*f2, used);
  std::string x = "x";
  while (used.count(x)) x += "_";
  FormulaPtr l = relativize(f1, x, true, order, c);
  FormulaPtr r = relativize(f2, x, false, order, c);
  return Formula::exists(x, Formula::conj(Formula::conj(Formula::label(a, x), l), r));
}

// ---- extended alphabets -------------------------------------------------------

namespace {
constexpr const char* kLetterPool =
    "abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ0123456789";
}

ExtendedAlphabet extended_alphabet(const Alphabet& base, int ell) {
  if (ell < 0) throw Error("the marker count cannot be negative");
  ExtendedAlphabet ea;
  ea.base = base;
  ea.ell = ell;
  if (ell == 0) {
    ea.letters = base;
    return ea;
  }
  size_t need = (size_t{1} << ell) * static_cast<size_t>(base.size());
  if (need > std::strlen(kLetterPool))
    throw BudgetExceeded("the extended alphabet outgrew the printable letter pool", need);
  ea.letters = Alphabet(std::string(kLetterPool, need));
  return ea;
}

char ExtendedAlphabet::pack(unsigned mask, int base_index) const {
  if (ell == 0) {
    if (mask != 0) throw Error("marker bits at level 0");
    return base.letter(base_index);
  }
  return letters.letter(static_cast<int>(mask) * base.size() + base_index);
}

unsigned ExtendedAlphabet::mask_of(char ext) const {
  if (ell == 0) {
    (void)letters.index(ext);
    return 0;
  }
  return static_cast<unsigned>(letters.index(ext) / base.size());
}

int ExtendedAlphabet::base_index_of(char ext) const {
  return ell == 0 ? base.index(ext) : letters.index(ext) % base.size();
}

bool ExtendedAlphabet::bit(char ext, int h) const { return (mask_of(ext) >> (h - 1)) & 1u; }

Word encode(const Word& w, const Assignment& mu, const ExtendedAlphabet& ea) {
  std::vector<int> marked(static_cast<size_t>(ea.ell), 0);
  for (int h = 1; h <= ea.ell; ++h) {
    std::string name = "x" + std::to_string(h);
    auto it = mu.find(name);
    if (it == mu.end()) throw UnboundVariable(name);
    if (it->second < 1 || it->second > static_cast<int>(w.size()))
      throw Error("assignment sends '" + name + "' outside the word");
    marked[static_cast<size_t>(h - 1)] = it->second;
  }
  Word out;
  out.reserve(w.size());
  for (int i = 1; i <= static_cast<int>(w.size()); ++i) {
    unsigned mask = 0;
    for (int h = 1; h <= ea.ell; ++h)
      if (marked[static_cast<size_t>(h - 1)] == i) mask |= 1u << (h - 1);
    out += ea.pack(mask, ea.base.index(w[static_cast<size_t>(i - 1)]));
  }
  return out;
}

std::optional<std::pair<Word, Assignment>> decode(const Word& w, const ExtendedAlphabet& ea) {
  Word base;
  Assignment mu;
  std::vector<int> count(static_cast<size_t>(ea.ell), 0);
  for (size_t i = 0; i < w.size(); ++i) {
    unsigned mask = ea.mask_of(w[i]);
    base += ea.base.letter(ea.base_index_of(w[i]));
    for (int h = 1; h <= ea.ell; ++h)
      if ((mask >> (h - 1)) & 1u) {
        mu["x" + std::to_string(h)] = static_cast<int>(i) + 1;
        ++count[static_cast<size_t>(h - 1)];
      }
  }
  for (int n : count)
    if (n != 1) return std::nullopt;
  return std::make_pair(base, mu);
}

// ---- good words, projection, inverse relabeling -------------------------------

Dfa good_filter(const ExtendedAlphabet& ea) {
  if (ea.ell < 1) throw PreconditionViolated("the good filter needs at least one marker bit");
  const int k = ea.letters.size();
  Dfa d;
  d.alphabet = ea.letters;
  d.n = 3;
  d.init = 0;
  d.acc = {0, 1, 0};
  d.trans.assign(static_cast<size_t>(3 * k), 0);
  for (int a = 0; a < k; ++a) {
    bool marked = ea.bit(ea.letters.letter(a), ea.ell);
    d.trans[static_cast<size_t>(0 * k + a)] = marked ? 1 : 0;
    d.trans[static_cast<size_t>(1 * k + a)] = marked ? 2 : 1;
    d.trans[static_cast<size_t>(2 * k + a)] = 2;
  }
  return canonicalize(d);
}

namespace {
void check_level_drop(const Dfa& l, const ExtendedAlphabet& from, const ExtendedAlphabet& to) {
  if (!(l.alphabet == from.letters))
    throw AlphabetMismatch("the automaton is not over the source extended alphabet");
  if (to.ell != from.ell - 1 || !(to.base == from.base))
    throw AlphabetMismatch("the target alphabet must drop exactly the top marker bit");
}

// Subset construction with a state cap; otherwise the shared procedure.
Dfa determinize_capped(const Nfa& nfa, size_t cap) {
  const int k = nfa.alphabet.size();
  std::map<std::vector<int>, int> id;
  std::vector<std::vector<int>> subsets;
  auto intern = [&](std::vector<int> s) {
    std::sort(s.begin(), s.end());
    s.erase(std::unique(s.begin(), s.end()), s.end());
    auto [it, fresh] = id.try_emplace(s, static_cast<int>(subsets.size()));
    if (fresh) {
      if (subsets.size() >= cap)
        throw BudgetExceeded("projection determinization outgrew the state budget",
                             subsets.size());
      subsets.push_back(std::move(s));
    }
    return it->second;
  };
  intern(nfa.inits);
  Dfa out;
  out.alphabet = nfa.alphabet;
  out.init = 0;
  for (size_t i = 0; i < subsets.size(); ++i) {
    std::vector<int> cur = subsets[i];
    bool accept = false;
    for (int q : cur) accept = accept || nfa.acc[static_cast<size_t>(q)];
    out.acc.push_back(accept ? 1 : 0);
    for (int a = 0; a < k; ++a) {
      std::vector<int> next;
      for (int q : cur)
        for (int t : nfa.edges[static_cast<size_t>(q)][static_cast<size_t>(a)]) next.push_back(t);
      out.trans.push_back(intern(std::move(next)));
    }
  }
  out.n = static_cast<int>(subsets.size());
  return canonicalize(out);
}
}  // namespace

Dfa project(const Dfa& l, const ExtendedAlphabet& from, const ExtendedAlphabet& to,
            size_t state_budget) {
  check_level_drop(l, from, to);
  const unsigned keep = (1u << to.ell) - 1u;
  Nfa nfa(to.letters, l.n);
  for (int q = 0; q < l.n; ++q)
    for (int a = 0; a < from.letters.size(); ++a) {
      char cf = from.letters.letter(a);
      char ct = to.pack(from.mask_of(cf) & keep, from.base_index_of(cf));
      nfa.add_edge(q, to.letters.index(ct), l.step_idx(q, a));
    }
  nfa.inits = {l.init};
  for (int q = 0; q < l.n; ++q) nfa.acc[static_cast<size_t>(q)] = l.acc[static_cast<size_t>(q)];
  return determinize_capped(nfa, state_budget);
}

Dfa inv_alpha(const Dfa& l, const ExtendedAlphabet& from, const ExtendedAlphabet& to) {
  check_level_drop(l, from, to);
  const int sz = to.letters.size();
  Dfa out;
  out.alphabet = to.letters;
  out.n = l.n;
  out.init = l.init;
  out.acc = l.acc;
  out.trans.assign(static_cast<size_t>(l.n) * static_cast<size_t>(sz), 0);
  for (int q = 0; q < l.n; ++q)
    for (int a = 0; a < sz; ++a) {
      char ct = to.letters.letter(a);
      char cf = from.pack(to.mask_of(ct), to.base_index_of(ct));
      out.trans[static_cast<size_t>(q) * static_cast<size_t>(sz) + static_cast<size_t>(a)] =
          l.step(q, cf);
    }
  return canonicalize(out);
}

// ---- letter splits ------------------------------------------------------------

std::vector<SplitTriple> split_by_letter(const Dfa& l0, const LanguageClass& c, char b) {
  if (!(l0.alphabet == c.alphabet)) throw AlphabetMismatch();
  if (!c.alphabet.contains(b)) throw UnknownLetter(b);
  if (!in_class(c, l0)) throw NotInClass("the language to split is not a member of the class");
  Dfa l = l0.canonical ? l0 : canonicalize(l0);

  // Right language of every state; contexts u group by the state reached on
  // ub, so the union over all of A* collapses to these finitely many cases.
  std::vector<Dfa> from_state(static_cast<size_t>(l.n));
  for (int q = 0; q < l.n; ++q) {
    Dfa d = l;
    d.init = q;
    d.canonical = false;
    from_state[static_cast<size_t>(q)] = canonicalize(d);
  }
  std::vector<int> targets;
  std::vector<std::uint8_t> seen(static_cast<size_t>(l.n), 0);
  for (int q = 0; q < l.n; ++q) {
    int t = l.step(q, b);
    if (!seen[static_cast<size_t>(t)]) {
      seen[static_cast<size_t>(t)] = 1;
      targets.push_back(t);
    }
  }
  std::sort(targets.begin(), targets.end());

  std::vector<SplitTriple> out;
  Dfa cover = dfa_empty(c.alphabet);
  for (int t : targets) {
    const Dfa& tail = from_state[static_cast<size_t>(t)];
    if (is_empty_lang(tail)) continue;
    // Heads: the words u' whose b-successor language covers the tail; this is
    // the intersection of the right quotients L(bv)^-1 over v in the tail.
    Dfa head = l;
    for (int q = 0; q < l.n; ++q)
      head.acc[static_cast<size_t>(q)] =
          is_empty_lang(dfa_minus(tail, from_state[static_cast<size_t>(l.step(q, b))])) ? 1 : 0;
    head.canonical = false;
    head = canonicalize(head);
    cover = dfa_union(cover, dfa_marked_concat(head, b, tail));
    out.push_back({std::move(head), b, tail});
  }

  Dfa crossing =
      dfa_intersect(l, dfa_marked_concat(dfa_universal(c.alphabet), b, dfa_universal(c.alphabet)));
  if (!equivalent(cover, crossing)) throw Error("letter split reconstruction failed");
  if (check_properties(c).quotienting) {
    for (const SplitTriple& t : out)
      if (!in_class(c, t.left) || !in_class(c, t.right))
        throw Error("letter split parts left the quotienting class");
  }
  return out;
}

// ---- compilation ---------------------------------------------------------------

namespace {

struct CompileCtx {
  const LanguageClass& c;
  size_t budget;
  std::vector<ExtendedAlphabet> eas;

  // By value: the cache vector reallocates as deeper levels appear.
  ExtendedAlphabet ea(int ell) {
    while (static_cast<int>(eas.size()) <= ell)
      eas.push_back(extended_alphabet(c.alphabet, static_cast<int>(eas.size())));
    return eas[static_cast<size_t>(ell)];
  }
};

struct Compiled {
  Dfa lang;
  int claim = 1;
};

// Complements close at full levels; polynomial closure absorbs the next half.
int bump_boolean(int k) { return k % 2 == 1 ? k + 1 : k; }
int bump_polynomial(int k) { return k % 2 == 0 ? k + 1 : k; }

// Base-alphabet language re-read through the letter projection.
Dfa pullback(const Dfa& k, const ExtendedAlphabet& ea) {
  if (ea.ell == 0) return k;
  const int sz = ea.letters.size();
  Dfa out;
  out.alphabet = ea.letters;
  out.n = k.n;
  out.init = k.init;
  out.acc = k.acc;
  out.trans.assign(static_cast<size_t>(k.n) * static_cast<size_t>(sz), 0);
  for (int q = 0; q < k.n; ++q)
    for (int a = 0; a < sz; ++a)
      out.trans[static_cast<size_t>(q) * static_cast<size_t>(sz) + static_cast<size_t>(a)] =
          k.step_idx(q, ea.base_index_of(ea.letters.letter(a)));
  return canonicalize(out);
}

// Letters of ea carrying marker bit h; base_idx >= 0 further restricts the
// base letter.
std::vector<char> marked_letters(const ExtendedAlphabet& ea, int h, int base_idx) {
  std::vector<char> out;
  for (int a = 0; a < ea.letters.size(); ++a) {
    char ch = ea.letters.letter(a);
    if (!ea.bit(ch, h)) continue;
    if (base_idx >= 0 && ea.base_index_of(ch) != base_idx) continue;
    out.push_back(ch);
  }
  return out;
}

Dfa one_marked_letter(const Alphabet& a, const std::vector<char>& bs) {
  // union over b in bs of A* b A*
  Dfa u = dfa_universal(a);
  Dfa acc = dfa_empty(a);
  for (char b : bs) acc = dfa_union(acc, dfa_marked_concat(u, b, u));
  return acc;
}

// Positive replacement for a negated atom, using the complement members of
// the class; nullopt when the class is missing the needed language (the
// caller then falls back to an automaton complement).
std::optional<FormulaPtr> positive_negation(const FormulaPtr& f, const LanguageClass& c) {
  switch (f->node()) {
    case Node::True: return Formula::truth(false);
    case Node::False: return Formula::truth(true);
    case Node::Label: {
      FormulaPtr acc;
      for (char ch : c.alphabet.letters()) {
        if (ch == f->letter()) continue;
        FormulaPtr alt = Formula::label(ch, f->var());
        acc = acc ? Formula::disj(acc, alt) : alt;
      }
      // Unary alphabet: the position always carries the letter.
      return acc ? acc : Formula::truth(false);
    }
    case Node::Eq: {
      int uni = find_member_index(c, dfa_universal(c.alphabet));
      if (uni < 0) return std::nullopt;
      const std::string& order = c.member_names[static_cast<size_t>(uni)];
      return Formula::disj(Formula::infix(c, order, f->var(), f->var2()),
                           Formula::infix(c, order, f->var2(), f->var()));
    }
    case Node::Infix: {
      int uni = find_member_index(c, dfa_universal(c.alphabet));
      int comp = find_member_index(c, dfa_complement(f->lang()));
      if (uni < 0 || comp < 0) return std::nullopt;
      const std::string& order = c.member_names[static_cast<size_t>(uni)];
      const std::string& rest = c.member_names[static_cast<size_t>(comp)];
      return Formula::disj(
          Formula::disj(Formula::infix(c, order, f->var2(), f->var()),
                        Formula::eq(f->var(), f->var2())),
          Formula::infix(c, rest, f->var(), f->var2()));
    }
    case Node::Prefix:
    case Node::Suffix:
    case Node::Nullary: {
      int comp = find_member_index(c, dfa_complement(f->lang()));
      if (comp < 0) return std::nullopt;
      const std::string& rest = c.member_names[static_cast<size_t>(comp)];
      if (f->node() == Node::Prefix) return Formula::prefix(c, rest, f->var());
      if (f->node() == Node::Suffix) return Formula::suffix(c, rest, f->var());
      return Formula::nullary(c, rest);
    }
    default: return std::nullopt;
  }
}

Compiled compile_rec(const FormulaPtr& f, int ell, const std::map<std::string, int>& vars,
                     CompileCtx& ctx) {
  const ExtendedAlphabet A = ctx.ea(ell);
  auto bit_of = [&](const std::string& v) {
    auto it = vars.find(v);
    if (it == vars.end()) throw UnboundVariable(v);
    return it->second;
  };
  switch (f->node()) {
    case Node::True: return {dfa_universal(A.letters), 1};
    case Node::False: return {dfa_empty(A.letters), 1};
    case Node::Label: {
      int h = bit_of(f->var());
      int bi = A.base.index(f->letter());
      return {one_marked_letter(A.letters, marked_letters(A, h, bi)), 1};
    }
    case Node::Eq: {
      int g = bit_of(f->var());
      int h = bit_of(f->var2());
      std::vector<char> bs;
      for (int a = 0; a < A.letters.size(); ++a) {
        char ch = A.letters.letter(a);
        if (A.bit(ch, g) && A.bit(ch, h)) bs.push_back(ch);
      }
      return {one_marked_letter(A.letters, bs), 1};
    }
    case Node::Infix: {
      int i = bit_of(f->var());
      int j = bit_of(f->var2());
      if (i == j) return {dfa_empty(A.letters), 1};  // x < x never holds
      Dfa fence = pullback(f->lang(), A);
      Dfa u = dfa_universal(A.letters);
      Dfa acc = dfa_empty(A.letters);
      for (char bi : marked_letters(A, i, -1)) {
        Dfa head = dfa_marked_concat(u, bi, fence);
        for (char bj : marked_letters(A, j, -1))
          acc = dfa_union(acc, dfa_marked_concat(head, bj, u));
      }
      return {std::move(acc), 1};
    }
    case Node::Prefix: {
      int h = bit_of(f->var());
      Dfa fence = pullback(f->lang(), A);
      Dfa acc = dfa_empty(A.letters);
      for (char b : marked_letters(A, h, -1))
        acc = dfa_union(acc, dfa_marked_concat(fence, b, dfa_universal(A.letters)));
      return {std::move(acc), 1};
    }
    case Node::Suffix: {
      int h = bit_of(f->var());
      Dfa fence = pullback(f->lang(), A);
      Dfa acc = dfa_empty(A.letters);
      for (char b : marked_letters(A, h, -1))
        acc = dfa_union(acc, dfa_marked_concat(dfa_universal(A.letters), b, fence));
      return {std::move(acc), 1};
    }
    case Node::Nullary: return {pullback(f->lang(), A), 1};
    case Node::And: {
      Compiled a = compile_rec(f->left(), ell, vars, ctx);
      Compiled b = compile_rec(f->right(), ell, vars, ctx);
      return {dfa_intersect(a.lang, b.lang), std::max(a.claim, b.claim)};
    }
    case Node::Or: {
      Compiled a = compile_rec(f->left(), ell, vars, ctx);
      Compiled b = compile_rec(f->right(), ell, vars, ctx);
      return {dfa_union(a.lang, b.lang), std::max(a.claim, b.claim)};
    }
    case Node::Not: {
      if (f->body()->is_atom()) {
        if (auto rw = positive_negation(f->body(), ctx.c)) return compile_rec(*rw, ell, vars, ctx);
      }
      Compiled sub = compile_rec(f->body(), ell, vars, ctx);
      return {dfa_complement(sub.lang), bump_boolean(sub.claim)};
    }
    case Node::Exists: {
      const ExtendedAlphabet B = ctx.ea(ell + 1);
      std::map<std::string, int> vars2 = vars;
      vars2[f->var()] = ell + 1;
      Compiled sub = compile_rec(f->body(), ell + 1, vars2, ctx);
      Dfa good = good_filter(B);
      Dfa proj = project(dfa_intersect(sub.lang, good), B, A, ctx.budget);
      return {std::move(proj), bump_polynomial(sub.claim)};
    }
    case Node::Forall: {
      if (ell == 0 && f->body()->node() == Node::False) {
        // the empty-word disjunct from the sigma normal form
        int eps = find_member_index(ctx.c, dfa_epsilon(ctx.c.alphabet));
        return {dfa_epsilon(A.letters), eps >= 0 ? 1 : 2};
      }
      FormulaPtr flipped = Formula::exists(f->var(), nnf(f->body(), true));
      Compiled sub = compile_rec(flipped, ell, vars, ctx);
      return {dfa_complement(sub.lang), bump_boolean(sub.claim)};
    }
  }
  throw Error("unreachable formula node");
}

}  // namespace

CompileResult compile_formula(const FormulaPtr& f, const LanguageClass& c, int ell,
                              size_t state_budget) {
  std::map<std::string, int> vars;
  for (int h = 1; h <= ell; ++h) vars["x" + std::to_string(h)] = h;
  for (const std::string& v : f->free_variables())
    if (!vars.count(v))
      throw NotInFragment("free variable '" + v + "' does not follow the x1..x" +
                          std::to_string(ell) + " convention");
  CompileCtx ctx{c, state_budget, {}};
  Compiled piece = compile_rec(f, ell, vars, ctx);
  return {std::move(piece.lang), piece.claim, classify(f)};
}

CompileResult compile_sentence(const FormulaPtr& f, const LanguageClass& c, size_t state_budget) {
  if (!f->free_variables().empty()) throw NotInFragment("compilation needs a sentence");
  AlternationClass cls = classify(f);
  int target = cls.kind == AlternationClass::Kind::Sigma ? std::max(1, cls.n) : cls.n + 1;
  // Structural recursion on the sentence as given.  Prenexing first would
  // merge every quantifier into one prefix and the extended alphabet grows
  // with the prefix depth, not the nesting depth; the per-node scheme is also
  // already faithful on the empty word, so no epsilon patch is needed here.
  CompileCtx ctx{c, state_budget, {}};
  Compiled piece = compile_rec(f, 0, {}, ctx);
  int claim = std::min(piece.claim, 2 * target - 1);
  return {std::move(piece.lang), claim, AlternationClass{AlternationClass::Kind::Sigma, target}};
}

// ---- derived signatures ---------------------------------------------------------

std::map<std::string, std::string> derived_signature(const std::string& basis_kind) {
  if (basis_kind == "st0") return {{"<", "I{Astar}"}};
  if (basis_kind == "dd0")
    return {{"<", "I{Astar}"},
            {"+1", "I{Eps}"},
            {"min", "P{Eps}"},
            {"max", "S{Eps}"},
            {"epsilon", "N{Eps}"}};
  throw UnknownBasis(basis_kind);
}

// ---- round trips -----------------------------------------------------------------

RoundTripReport round_trip_check(const FormulaPtr& f, const LanguageClass& c, int maxlen,
                                 size_t state_budget) {
  RoundTripReport rep;
  CompileResult res = compile_sentence(f, c, state_budget);
  rep.claimed_half_index = res.claimed_half_index;
  for (const Word& w : words_upto(c.alphabet, maxlen)) {
    ++rep.words_checked;
    if (evaluate(f, w) != is_member(w, res.language)) rep.mismatches.push_back(w);
  }
  StratumBudget sb;
  auto probe = [&](bool boolean_closure) {
    for (int k = 0; k <= 1; ++k) {
      StratumVerdict v = boolean_closure ? bpol_stratum_member(res.language, c, k, sb)
                                         : pol_stratum_member(res.language, c, k, sb);
      rep.stratum_notes.push_back(std::string(boolean_closure ? "boolean stratum" : "stratum") +
                                  " k=" + std::to_string(k) + ": " + status_name(v.status));
      if (v.status == StratumVerdict::Status::Member) break;
    }
  };
  if (res.claimed_half_index <= 1) probe(false);
  else if (res.claimed_half_index == 2) probe(true);
  else rep.stratum_notes.push_back("claimed level beyond the bounded stratum probes");
  return rep;
}

// ---- serialization ----------------------------------------------------------------

nlohmann::ordered_json formula_to_json(const FormulaPtr& f) {
  using J = nlohmann::ordered_json;
  J j;
  switch (f->node()) {
    case Node::True: j["op"] = "true"; break;
    case Node::False: j["op"] = "false"; break;
    case Node::Label:
      j["op"] = "label";
      j["letter"] = std::string(1, f->letter());
      j["var"] = f->var();
      break;
    case Node::Eq:
      j["op"] = "eq";
      j["var"] = f->var();
      j["var2"] = f->var2();
      break;
    case Node::Infix:
      j["op"] = "infix";
      j["language"] = f->lang_name();
      j["var"] = f->var();
      j["var2"] = f->var2();
      break;
    case Node::Prefix:
    case Node::Suffix:
      j["op"] = f->node() == Node::Prefix ? "prefix" : "suffix";
      j["language"] = f->lang_name();
      j["var"] = f->var();
      break;
    case Node::Nullary:
      j["op"] = "nullary";
      j["language"] = f->lang_name();
      break;
    case Node::And:
    case Node::Or:
      j["op"] = f->node() == Node::And ? "and" : "or";
      j["args"] = J::array({formula_to_json(f->left()), formula_to_json(f->right())});
      break;
    case Node::Not:
      j["op"] = "not";
      j["arg"] = formula_to_json(f->body());
      break;
    case Node::Exists:
    case Node::Forall:
      j["op"] = f->node() == Node::Exists ? "exists" : "forall";
      j["var"] = f->var();
      j["arg"] = formula_to_json(f->body());
      break;
  }
  return j;
}

}  // namespace hier
