// hierarchy.cc -- tagged level expressions and the constructive rewritings
//
// Every rewriting here is self-verifying: the produced expression is
// evaluated and compared against the direct automaton computation on every
// invocation, so a wrong formula cannot survive a single call.  The
// intersection rewriting realizes the union over context words by grouping
// contexts by the quotient language they induce, which is finite because
// factors live in a finite quotienting class.
#include "hier/hierarchy.hh"

#include <algorithm>
#include <functional>
#include <random>
#include <set>
#include <unordered_map>
#include <unordered_set>

#include "hier/errors.hh"

namespace hier {

namespace {

int round_up_to_odd(int i) { return i % 2 == 0 ? i + 1 : i; }

void check_shape(const Monomial& m) {
  if (m.factors.empty() || m.factors.size() != m.markers.size() + 1)
    throw Error("monomial needs n+1 factors around n markers");
}

std::string monomial_key(const Monomial& m) {
  std::string s = m.factors[0]->key();
  for (size_t i = 0; i < m.markers.size(); ++i) {
    s.push_back('\x01');
    s.push_back(m.markers[i]);
    s += m.factors[i + 1]->key();
  }
  return s;
}

std::string class_fingerprint(const LanguageClass& c) {
  size_t h = std::hash<std::string>{}(c.name + "/" + c.alphabet.letters());
  for (const Dfa& m : c.members)
    h = (h * 1315423911u) ^ std::hash<std::string>{}(dfa_key(m));
  return c.name + ":" + std::to_string(c.size()) + ":" + std::to_string(h);
}

Dfa eval_monomial(const Monomial& m, const LanguageClass& c) {
  check_shape(m);
  Dfa cur = eval_level(m.factors[0], c);
  for (size_t i = 0; i < m.markers.size(); ++i)
    cur = dfa_marked_concat(cur, m.markers[i], eval_level(m.factors[i + 1], c));
  return cur;
}

void push_unique(PolyExpr& p, std::set<std::string>& seen, Monomial m) {
  if (seen.insert(monomial_key(m)).second) p.monomials.push_back(std::move(m));
}

Monomial drop_first(const Monomial& m) {
  Monomial t;
  t.factors.assign(m.factors.begin() + 1, m.factors.end());
  t.markers = m.markers.substr(1);
  return t;
}

// Prepends `left . x` to every monomial of p.
void prepend_into(PolyExpr& out, std::set<std::string>& seen, const LevelPtr& left, char x,
                  const PolyExpr& p) {
  for (const Monomial& m : p.monomials) {
    Monomial n;
    n.factors.reserve(m.factors.size() + 1);
    n.factors.push_back(left);
    n.factors.insert(n.factors.end(), m.factors.begin(), m.factors.end());
    n.markers = std::string(1, x) + m.markers;
    push_unique(out, seen, std::move(n));
  }
}

}  // namespace

int PolyExpr::degree() const {
  int d = 0;
  for (const Monomial& m : monomials) d = std::max(d, m.degree());
  return d;
}

// ---- LevelExpr factories -------------------------------------------------

LevelPtr LevelExpr::member(const std::string& name, const std::string& basis) {
  auto e = std::shared_ptr<LevelExpr>(new LevelExpr());
  e->node_ = Node::Member;
  e->member_ = name;
  e->tag_ = {basis, 0};
  return e;
}

static LevelTag joined_tag(const std::vector<LevelPtr>& kids) {
  LevelTag t = kids.front()->tag();
  for (const LevelPtr& k : kids) t.half_index = std::max(t.half_index, k->tag().half_index);
  return t;
}

LevelPtr LevelExpr::union_of(std::vector<LevelPtr> kids) {
  if (kids.empty()) throw Error("union of nothing; use an empty polynomial for the empty language");
  auto e = std::shared_ptr<LevelExpr>(new LevelExpr());
  e->node_ = Node::Union;
  e->tag_ = joined_tag(kids);
  e->kids_ = std::move(kids);
  return e;
}

LevelPtr LevelExpr::intersect_of(std::vector<LevelPtr> kids) {
  if (kids.empty()) throw Error("intersection of nothing is not representable");
  auto e = std::shared_ptr<LevelExpr>(new LevelExpr());
  e->node_ = Node::Intersect;
  e->tag_ = joined_tag(kids);
  e->kids_ = std::move(kids);
  return e;
}

LevelPtr LevelExpr::complement_of(LevelPtr kid) {
  if (!kid->tag().full())
    throw TagViolation("complement is only available at full levels; promote the operand first");
  auto e = std::shared_ptr<LevelExpr>(new LevelExpr());
  e->node_ = Node::Complement;
  e->tag_ = kid->tag();
  e->kids_ = {std::move(kid)};
  return e;
}

LevelPtr LevelExpr::marked(LevelPtr left, char a, LevelPtr right) {
  auto e = std::shared_ptr<LevelExpr>(new LevelExpr());
  e->node_ = Node::MarkedConcat;
  e->tag_ = joined_tag({left, right});
  e->tag_.half_index = round_up_to_odd(e->tag_.half_index);
  e->marker_ = a;
  e->kids_ = {std::move(left), std::move(right)};
  return e;
}

LevelPtr LevelExpr::concat(LevelPtr left, LevelPtr right) {
  auto e = std::shared_ptr<LevelExpr>(new LevelExpr());
  e->node_ = Node::Concat;
  e->tag_ = joined_tag({left, right});
  e->tag_.half_index = round_up_to_odd(e->tag_.half_index);
  e->kids_ = {std::move(left), std::move(right)};
  return e;
}

LevelPtr LevelExpr::poly(PolyExpr p, const std::string& basis) {
  int idx = 0;
  for (const Monomial& m : p.monomials) {
    check_shape(m);
    for (const LevelPtr& f : m.factors) idx = std::max(idx, f->tag().half_index);
  }
  auto e = std::shared_ptr<LevelExpr>(new LevelExpr());
  e->node_ = Node::Poly;
  e->tag_ = {basis, round_up_to_odd(idx)};
  e->poly_ = std::make_shared<const PolyExpr>(std::move(p));
  return e;
}

LevelPtr LevelExpr::promote(LevelPtr e, int half_index) {
  if (half_index < e->tag().half_index)
    throw TagViolation("cannot lower a level tag from " + std::to_string(e->tag().half_index) +
                       " to " + std::to_string(half_index));
  if (half_index == e->tag().half_index) return e;
  auto n = std::shared_ptr<LevelExpr>(new LevelExpr(*e));
  n->tag_.half_index = half_index;
  return n;
}

std::string LevelExpr::key() const {
  switch (node_) {
    case Node::Member:
      return "m[" + member_ + "]";
    case Node::Union:
    case Node::Intersect: {
      std::string s = node_ == Node::Union ? "u(" : "i(";
      for (const LevelPtr& k : kids_) {
        s += k->key();
        s.push_back(',');
      }
      s.push_back(')');
      return s;
    }
    case Node::Complement:
      return "c(" + kids_[0]->key() + ")";
    case Node::MarkedConcat:
      return "x(" + kids_[0]->key() + "," + std::string(1, marker_) + "," + kids_[1]->key() + ")";
    case Node::Concat:
      return "k(" + kids_[0]->key() + "," + kids_[1]->key() + ")";
    case Node::Poly: {
      std::string s = "p(";
      for (const Monomial& m : poly_->monomials) {
        s += monomial_key(m);
        s.push_back(';');
      }
      s.push_back(')');
      return s;
    }
  }
  throw Error("corrupt expression node");
}

// ---- evaluation ----------------------------------------------------------

Dfa eval_level(const LevelPtr& e, const LanguageClass& c) {
  thread_local std::unordered_map<std::string, Dfa> cache;
  const std::string ck = class_fingerprint(c) + "#" + e->key();
  auto it = cache.find(ck);
  if (it != cache.end()) return it->second;

  Dfa out;
  switch (e->node()) {
    case LevelExpr::Node::Member:
      out = c.member(e->member_name());
      break;
    case LevelExpr::Node::Union:
      out = dfa_empty(c.alphabet);
      for (const LevelPtr& k : e->kids()) out = dfa_union(out, eval_level(k, c));
      break;
    case LevelExpr::Node::Intersect:
      out = dfa_universal(c.alphabet);
      for (const LevelPtr& k : e->kids()) out = dfa_intersect(out, eval_level(k, c));
      break;
    case LevelExpr::Node::Complement:
      out = dfa_complement(eval_level(e->kids()[0], c));
      break;
    case LevelExpr::Node::MarkedConcat:
      out = dfa_marked_concat(eval_level(e->kids()[0], c), e->marker(), eval_level(e->kids()[1], c));
      break;
    case LevelExpr::Node::Concat:
      out = dfa_concat(eval_level(e->kids()[0], c), eval_level(e->kids()[1], c));
      break;
    case LevelExpr::Node::Poly:
      out = eval_poly(e->poly_body(), c);
      break;
  }
  cache.emplace(ck, out);
  return out;
}

Dfa eval_poly(const PolyExpr& p, const LanguageClass& c) {
  Dfa out = dfa_empty(c.alphabet);
  for (const Monomial& m : p.monomials) out = dfa_union(out, eval_monomial(m, c));
  return out;
}

// ---- serialization -------------------------------------------------------

nlohmann::ordered_json poly_expr_to_json(const PolyExpr& p) {
  nlohmann::ordered_json monos = nlohmann::ordered_json::array();
  for (const Monomial& m : p.monomials) {
    nlohmann::ordered_json factors = nlohmann::ordered_json::array();
    for (const LevelPtr& f : m.factors) factors.push_back(level_expr_to_json(f));
    monos.push_back({{"factors", factors}, {"markers", m.markers}});
  }
  return {{"monomials", monos}};
}

nlohmann::ordered_json level_expr_to_json(const LevelPtr& e) {
  nlohmann::ordered_json j;
  switch (e->node()) {
    case LevelExpr::Node::Member:
      j["op"] = "member";
      j["name"] = e->member_name();
      break;
    case LevelExpr::Node::Union:
    case LevelExpr::Node::Intersect: {
      j["op"] = e->node() == LevelExpr::Node::Union ? "union" : "intersect";
      nlohmann::ordered_json args = nlohmann::ordered_json::array();
      for (const LevelPtr& k : e->kids()) args.push_back(level_expr_to_json(k));
      j["args"] = args;
      break;
    }
    case LevelExpr::Node::Complement:
      j["op"] = "complement";
      j["arg"] = level_expr_to_json(e->kids()[0]);
      break;
    case LevelExpr::Node::MarkedConcat:
      j["op"] = "marked";
      j["marker"] = std::string(1, e->marker());
      j["args"] = {level_expr_to_json(e->kids()[0]), level_expr_to_json(e->kids()[1])};
      break;
    case LevelExpr::Node::Concat:
      j["op"] = "concat";
      j["args"] = {level_expr_to_json(e->kids()[0]), level_expr_to_json(e->kids()[1])};
      break;
    case LevelExpr::Node::Poly:
      j["op"] = "poly";
      j["monomials"] = poly_expr_to_json(e->poly_body())["monomials"];
      break;
  }
  j["basis"] = e->tag().basis;
  j["half_index"] = e->tag().half_index;
  return j;
}

// ---- member lookup -------------------------------------------------------

int find_member(const LanguageClass& c, const Dfa& d) {
  const Dfa cd = d.canonical ? d : canonicalize(d);
  const std::string key = dfa_key(cd);
  for (int i = 0; i < c.size(); ++i)
    if (dfa_key(c.members[i]) == key) return i;
  return -1;
}

LevelPtr member_ref(const LanguageClass& c, const Dfa& d) {
  int i = find_member(c, d);
  if (i < 0) throw NotInBasis("required language is not a member of class '" + c.name + "'");
  return LevelExpr::member(c.member_names[static_cast<size_t>(i)], c.name);
}

// ---- quotient rewriting ----------------------------------------------------

PolyExpr pol_quotient_rewrite(const Monomial& m, char a, Side side, const LanguageClass& c) {
  check_shape(m);
  c.alphabet.index(a);  // throws UnknownLetter

  PolyExpr out;
  std::set<std::string> seen;
  if (side == Side::Left) {
    Dfa l0 = eval_level(m.factors.front(), c);
    Dfa q = left_quotient(std::string(1, a), l0);
    if (!is_empty_lang(q)) {
      Monomial head = m;
      head.factors[0] = member_ref(c, q);
      push_unique(out, seen, std::move(head));
    }
    if (m.degree() >= 1 && m.markers.front() == a && is_member("", l0))
      push_unique(out, seen, drop_first(m));
  } else {
    Dfa ln = eval_level(m.factors.back(), c);
    Dfa q = right_quotient(ln, std::string(1, a));
    if (!is_empty_lang(q)) {
      Monomial head = m;
      head.factors.back() = member_ref(c, q);
      push_unique(out, seen, std::move(head));
    }
    if (m.degree() >= 1 && m.markers.back() == a && is_member("", ln)) {
      Monomial t;
      t.factors.assign(m.factors.begin(), m.factors.end() - 1);
      t.markers = m.markers.substr(0, m.markers.size() - 1);
      push_unique(out, seen, std::move(t));
    }
  }

  const Dfa whole = eval_monomial(m, c);
  const Dfa want = side == Side::Left ? left_quotient(std::string(1, a), whole)
                                      : right_quotient(whole, std::string(1, a));
  if (!equivalent(eval_poly(out, c), want))
    throw Error("quotient rewriting disagreed with the automaton quotient");
  return out;
}

// ---- intersection rewriting ------------------------------------------------

namespace {

// For the first marker x of a product starting with language d: contexts u
// group by the quotient (ux)^-1 d, i.e. by the state reached from d's states
// under x.  For each such state p this yields the pair
//   head = { w : (wx)^-1 d  superseteq  tail }      (the common left part)
//   tail = the quotient language itself.
struct MarkerSplit {
  Dfa head;
  Dfa tail;
};

std::vector<MarkerSplit> marker_splits(const Dfa& d, char x) {
  const int xi = d.alphabet.index(x);
  std::vector<Dfa> lang(static_cast<size_t>(d.n));
  for (int q = 0; q < d.n; ++q) {
    Dfa cp = d;
    cp.init = q;
    cp.canonical = false;
    lang[static_cast<size_t>(q)] = canonicalize(cp);
  }
  std::set<int> targets;
  for (int q = 0; q < d.n; ++q) targets.insert(d.step_idx(q, xi));

  std::vector<MarkerSplit> out;
  for (int p : targets) {
    const Dfa& tail = lang[static_cast<size_t>(p)];
    if (is_empty_lang(tail)) continue;
    Dfa head = d;
    head.acc.assign(static_cast<size_t>(d.n), 0);
    for (int q = 0; q < d.n; ++q)
      if (is_empty_lang(dfa_minus(tail, lang[static_cast<size_t>(d.step_idx(q, xi))])))
        head.acc[static_cast<size_t>(q)] = 1;
    head.canonical = false;
    out.push_back({canonicalize(head), tail});
  }
  return out;
}

PolyExpr isect_mono(const Monomial& m1, const Monomial& m2, const LanguageClass& c);

// K int (L1 b L2...): split at the first marker of the monomial.
PolyExpr isect_with_plain(const Dfa& k, const Monomial& m2, const LanguageClass& c) {
  const char b = m2.markers[0];
  const Monomial tail = drop_first(m2);
  const Dfa l1 = eval_level(m2.factors[0], c);

  PolyExpr out;
  std::set<std::string> seen;
  for (const MarkerSplit& sp : marker_splits(k, b)) {
    Dfa left = dfa_intersect(l1, sp.head);
    if (is_empty_lang(left)) continue;
    Monomial plain;
    plain.factors = {member_ref(c, sp.tail)};
    PolyExpr rest = isect_mono(plain, tail, c);
    prepend_into(out, seen, member_ref(c, left), b, rest);
  }
  return out;
}

PolyExpr isect_mono(const Monomial& m1, const Monomial& m2, const LanguageClass& c) {
  thread_local std::unordered_map<std::string, PolyExpr> memo;
  std::string k1 = monomial_key(m1), k2 = monomial_key(m2);
  if (k2 < k1) std::swap(k1, k2);
  const std::string memo_key = class_fingerprint(c) + "#" + k1 + "\x02" + k2;
  auto it = memo.find(memo_key);
  if (it != memo.end()) return it->second;

  PolyExpr out;
  std::set<std::string> seen;
  if (m1.degree() == 0 && m2.degree() == 0) {
    Dfa g = dfa_intersect(eval_level(m1.factors[0], c), eval_level(m2.factors[0], c));
    if (!is_empty_lang(g)) {
      Monomial mm;
      mm.factors = {member_ref(c, g)};
      push_unique(out, seen, std::move(mm));
    }
  } else if (m1.degree() == 0) {
    out = isect_with_plain(eval_level(m1.factors[0], c), m2, c);
  } else if (m2.degree() == 0) {
    out = isect_with_plain(eval_level(m2.factors[0], c), m1, c);
  } else {
    const char a = m1.markers[0];
    const char b = m2.markers[0];
    const Dfa k1dfa = eval_level(m1.factors[0], c);
    const Dfa l1dfa = eval_level(m2.factors[0], c);
    const Monomial k2m = drop_first(m1);
    const Monomial l2m = drop_first(m2);

    // Splits where the first marker of m1 lands inside m2's first block.
    for (const MarkerSplit& sp : marker_splits(l1dfa, a)) {
      Dfa left = dfa_intersect(k1dfa, sp.head);
      if (is_empty_lang(left)) continue;
      Monomial rebuilt;
      rebuilt.factors.push_back(member_ref(c, sp.tail));
      rebuilt.factors.insert(rebuilt.factors.end(), l2m.factors.begin(), l2m.factors.end());
      rebuilt.markers = std::string(1, b) + l2m.markers;
      prepend_into(out, seen, member_ref(c, left), a, isect_mono(k2m, rebuilt, c));
    }
    // The mirror image: m2's first marker lands inside m1's first block.
    for (const MarkerSplit& sp : marker_splits(k1dfa, b)) {
      Dfa left = dfa_intersect(l1dfa, sp.head);
      if (is_empty_lang(left)) continue;
      Monomial rebuilt;
      rebuilt.factors.push_back(member_ref(c, sp.tail));
      rebuilt.factors.insert(rebuilt.factors.end(), k2m.factors.begin(), k2m.factors.end());
      rebuilt.markers = std::string(1, a) + k2m.markers;
      prepend_into(out, seen, member_ref(c, left), b, isect_mono(l2m, rebuilt, c));
    }
    // Aligned markers.
    if (a == b) {
      Dfa left = dfa_intersect(k1dfa, l1dfa);
      if (!is_empty_lang(left))
        prepend_into(out, seen, member_ref(c, left), a, isect_mono(k2m, l2m, c));
    }
  }

  if (!equivalent(eval_poly(out, c),
                  dfa_intersect(eval_monomial(m1, c), eval_monomial(m2, c))))
    throw Error("intersection rewriting disagreed with the automaton intersection");
  if (out.degree() > m1.degree() + m2.degree())
    throw Error("intersection rewriting exceeded the degree bound");
  memo.emplace(memo_key, out);
  return out;
}

}  // namespace

PolyExpr pol_intersect_rewrite(const Monomial& m1, const Monomial& m2, const LanguageClass& c) {
  check_shape(m1);
  check_shape(m2);
  return isect_mono(m1, m2, c);
}

PolyExpr pol_intersect_rewrite(const PolyExpr& p1, const PolyExpr& p2, const LanguageClass& c) {
  PolyExpr out;
  std::set<std::string> seen;
  for (const Monomial& a : p1.monomials)
    for (const Monomial& b : p2.monomials) {
      PolyExpr part = pol_intersect_rewrite(a, b, c);
      for (Monomial& m : part.monomials) push_unique(out, seen, std::move(m));
    }
  if (!equivalent(eval_poly(out, c), dfa_intersect(eval_poly(p1, c), eval_poly(p2, c))))
    throw Error("intersection rewriting disagreed with the automaton intersection");
  if (out.degree() > p1.degree() + p2.degree())
    throw Error("intersection rewriting exceeded the degree bound");
  return out;
}

// ---- concatenation rewriting -----------------------------------------------

PolyExpr pol_concat_rewrite(const PolyExpr& k, const PolyExpr& l, const LanguageClass& c) {
  const Dfa ldfa = eval_poly(l, c);
  PolyExpr out;
  std::set<std::string> seen;
  for (int ai = 0; ai < c.alphabet.size(); ++ai) {
    const char a = c.alphabet.letter(ai);
    PolyExpr la;
    std::set<std::string> la_seen;
    for (const Monomial& m : l.monomials) {
      PolyExpr q = pol_quotient_rewrite(m, a, Side::Left, c);
      for (Monomial& qm : q.monomials) push_unique(la, la_seen, std::move(qm));
    }
    for (const Monomial& mk : k.monomials)
      for (const Monomial& ml : la.monomials) {
        Monomial join;
        join.factors = mk.factors;
        join.factors.insert(join.factors.end(), ml.factors.begin(), ml.factors.end());
        join.markers = mk.markers + std::string(1, a) + ml.markers;
        push_unique(out, seen, std::move(join));
      }
  }
  if (is_member("", ldfa))
    for (const Monomial& mk : k.monomials) push_unique(out, seen, mk);

  if (!equivalent(eval_poly(out, c), dfa_concat(eval_poly(k, c), ldfa)))
    throw Error("concatenation rewriting disagreed with the automaton concatenation");
  return out;
}

PolyExpr eps_chain(const PolyExpr& k, const Word& w, const PolyExpr& l, const LanguageClass& c) {
  c.alphabet.check_word(w);
  if (w.empty()) return pol_concat_rewrite(k, l, c);
  const int eps_idx = find_member(c, dfa_epsilon(c.alphabet));
  if (eps_idx < 0) throw EpsilonNotInBasis();
  const LevelPtr eps = LevelExpr::member(c.member_names[static_cast<size_t>(eps_idx)], c.name);

  PolyExpr out;
  std::set<std::string> seen;
  for (const Monomial& mk : k.monomials)
    for (const Monomial& ml : l.monomials) {
      Monomial join;
      join.factors = mk.factors;
      for (size_t i = 0; i + 1 < w.size(); ++i) join.factors.push_back(eps);
      join.factors.insert(join.factors.end(), ml.factors.begin(), ml.factors.end());
      join.markers = mk.markers + w + ml.markers;
      push_unique(out, seen, std::move(join));
    }

  const Dfa want = dfa_concat(dfa_concat(eval_poly(k, c), dfa_word(c.alphabet, w)), eval_poly(l, c));
  if (!equivalent(eval_poly(out, c), want))
    throw Error("marker-chain rewriting disagreed with the automaton concatenation");
  return out;
}

// ---- flattening ------------------------------------------------------------

namespace {

std::vector<Monomial> flatten_monomial(const Monomial& m);

std::vector<Monomial> expand_factor(const LevelPtr& f) {
  switch (f->node()) {
    case LevelExpr::Node::Poly: {
      std::vector<Monomial> out;
      for (const Monomial& m : f->poly_body().monomials) {
        std::vector<Monomial> flat = flatten_monomial(m);
        out.insert(out.end(), flat.begin(), flat.end());
      }
      return out;
    }
    case LevelExpr::Node::Union: {
      std::vector<Monomial> out;
      for (const LevelPtr& k : f->kids()) {
        std::vector<Monomial> part = expand_factor(k);
        out.insert(out.end(), part.begin(), part.end());
      }
      return out;
    }
    default: {
      Monomial single;
      single.factors = {f};
      return {single};
    }
  }
}

std::vector<Monomial> flatten_monomial(const Monomial& m) {
  check_shape(m);
  std::vector<Monomial> cur = expand_factor(m.factors[0]);
  for (size_t i = 0; i < m.markers.size(); ++i) {
    const char a = m.markers[i];
    std::vector<Monomial> rhs = expand_factor(m.factors[i + 1]);
    std::vector<Monomial> next;
    next.reserve(cur.size() * rhs.size());
    for (const Monomial& x : cur)
      for (const Monomial& y : rhs) {
        Monomial j;
        j.factors = x.factors;
        j.factors.insert(j.factors.end(), y.factors.begin(), y.factors.end());
        j.markers = x.markers + std::string(1, a) + y.markers;
        next.push_back(std::move(j));
      }
    cur = std::move(next);
  }
  return cur;
}

}  // namespace

PolyExpr flatten_poly(const PolyExpr& p, const LanguageClass& c) {
  PolyExpr out;
  std::set<std::string> seen;
  for (const Monomial& m : p.monomials)
    for (Monomial& f : flatten_monomial(m)) push_unique(out, seen, std::move(f));
  if (!equivalent(eval_poly(out, c), eval_poly(p, c)))
    throw Error("flattening changed the evaluated language");
  return out;
}

// ---- piece complements -----------------------------------------------------

PolyExpr piece_complement(const std::string& piece, const Alphabet& a) {
  a.check_word(piece);
  const LanguageClass wat = builtin_basis("wat", a);
  auto avoid_ref = [&](char skip) {
    std::string keep;
    for (int i = 0; i < a.size(); ++i)
      if (a.letter(i) != skip) keep.push_back(a.letter(i));
    return member_ref(wat, dfa_sub_star(a, keep));
  };

  PolyExpr cur;  // empty piece: the product degenerates to A*, complement empty
  if (!piece.empty()) {
    Monomial first;
    first.factors = {avoid_ref(piece[0])};
    cur.monomials = {first};
    for (size_t k = 1; k < piece.size(); ++k) {
      const char ak = piece[k];
      PolyExpr next;
      Monomial fresh;
      fresh.factors = {avoid_ref(ak)};
      next.monomials = {fresh};
      for (const Monomial& m : cur.monomials) {
        Monomial ext = m;
        ext.factors.push_back(avoid_ref(ak));
        ext.markers.push_back(ak);
        next.monomials.push_back(std::move(ext));
      }
      cur = std::move(next);
    }
  }

  Dfa product = dfa_universal(a);
  for (char x : piece) product = dfa_marked_concat(product, x, dfa_universal(a));
  if (!equivalent(eval_poly(cur, wat), dfa_complement(product)))
    throw Error("piece complement disagreed with the automaton complement");
  return cur;
}

// ---- check reports ---------------------------------------------------------

bool CheckReport::ok() const {
  for (const auto& [name, pass] : checks)
    if (!pass) return false;
  return !checks.empty();
}

CheckReport alphabet_trick_check(int samples, int maxlen, unsigned seed, const Alphabet& a) {
  CheckReport report;
  const LanguageClass wat = builtin_basis("wat", a);

  report.checks.emplace_back("empty piece gives the empty language",
                             is_empty_lang(eval_poly(piece_complement("", a), wat)));

  bool singles = true;
  for (int i = 0; i < a.size(); ++i) {
    std::string keep;
    for (int j = 0; j < a.size(); ++j)
      if (j != i) keep.push_back(a.letter(j));
    singles = singles && equivalent(eval_poly(piece_complement(std::string(1, a.letter(i)), a), wat),
                                    dfa_sub_star(a, keep));
  }
  report.checks.emplace_back("single-letter pieces give the letter-free words", singles);

  if (a.size() == 2) {
    const char x = a.letter(0), y = a.letter(1);
    const Dfa want = dfa_concat(dfa_sub_star(a, std::string(1, y)), dfa_sub_star(a, std::string(1, x)));
    report.checks.emplace_back(
        "two-letter piece flips into the sorted words",
        equivalent(eval_poly(piece_complement(std::string{x, y}, a), wat), want));
  }

  std::mt19937 rng(seed);
  for (int s = 0; s < samples; ++s) {
    const int count = 1 + static_cast<int>(rng() % 3);
    std::vector<std::string> pieces;
    Dfa uni = dfa_empty(a);
    for (int j = 0; j < count; ++j) {
      const int len = 1 + static_cast<int>(rng() % static_cast<unsigned>(std::max(1, maxlen)));
      std::string piece;
      for (int i = 0; i < len; ++i) piece.push_back(a.letter(static_cast<int>(rng() % static_cast<unsigned>(a.size()))));
      Dfa product = dfa_universal(a);
      for (char x : piece) product = dfa_marked_concat(product, x, dfa_universal(a));
      uni = dfa_union(uni, product);
      pieces.push_back(std::move(piece));
    }
    PolyExpr acc = piece_complement(pieces[0], a);
    for (size_t j = 1; j < pieces.size(); ++j)
      acc = pol_intersect_rewrite(acc, piece_complement(pieces[j], a), wat);
    std::string label = "sample " + std::to_string(s) + " (";
    for (size_t j = 0; j < pieces.size(); ++j) label += (j ? "|" : "") + pieces[j];
    label += ")";
    report.checks.emplace_back(label, equivalent(eval_poly(acc, wat), dfa_complement(uni)));
  }
  return report;
}

CheckReport interleaving_check(const Alphabet& a) {
  CheckReport report;
  const LanguageClass st0 = builtin_basis("st0", a);
  const LanguageClass dd0 = builtin_basis("dd0", a);

  bool contained = true;
  for (const Dfa& m : st0.members) contained = contained && find_member(dd0, m) >= 0;
  report.checks.emplace_back("the trivial basis sits inside the empty-word basis", contained);

  PolyExpr aplus;
  for (int i = 0; i < a.size(); ++i) {
    Monomial m;
    m.factors = {LevelExpr::member("Astar", "st0"), LevelExpr::member("Astar", "st0")};
    m.markers = std::string(1, a.letter(i));
    aplus.monomials.push_back(std::move(m));
  }
  const LevelPtr aplus_expr = LevelExpr::poly(aplus, "st0");
  report.checks.emplace_back(
      "the nonempty words appear at the first half level",
      aplus_expr->tag().half_index == 1 &&
          equivalent(eval_level(aplus_expr, st0), dfa_complement(dfa_epsilon(a))));

  const LevelPtr eps_expr = LevelExpr::complement_of(LevelExpr::promote(aplus_expr, 2));
  report.checks.emplace_back(
      "the empty-word singleton appears at the first full level",
      eps_expr->tag().half_index == 2 && eps_expr->tag().full() &&
          equivalent(eval_level(eps_expr, st0), dfa_epsilon(a)));
  return report;
}

// ---- strictness witnesses --------------------------------------------------

namespace {

std::string special_member_name(const Dfa& d, int idx, const Alphabet& a) {
  if (equivalent(d, dfa_empty(a))) return "Empty";
  if (equivalent(d, dfa_universal(a))) return "Astar";
  if (equivalent(d, dfa_epsilon(a))) return "Eps";
  if (equivalent(d, dfa_complement(dfa_epsilon(a)))) return "Aplus";
  return "m" + std::to_string(idx);
}

LanguageClass augment_with_epsilon(const LanguageClass& c) {
  const Alphabet& a = c.alphabet;
  std::vector<Dfa> mem;
  std::unordered_set<std::string> seen;
  auto add = [&](const Dfa& d) {
    if (seen.insert(dfa_key(d)).second) {
      mem.push_back(d);
      return true;
    }
    return false;
  };
  for (const Dfa& d : c.members) add(d);
  add(dfa_epsilon(a));
  bool grew = true;
  while (grew) {
    grew = false;
    const size_t n = mem.size();
    for (size_t i = 0; i < n; ++i) {
      grew |= add(dfa_complement(mem[i]));
      for (size_t j = i; j < n; ++j) {
        grew |= add(dfa_union(mem[i], mem[j]));
        grew |= add(dfa_intersect(mem[i], mem[j]));
      }
    }
    if (mem.size() > 4096)
      throw BudgetExceeded("empty-word augmentation outgrew the member cap", mem.size());
  }
  LanguageClass out;
  out.name = c.name + "+eps";
  out.alphabet = a;
  out.members = std::move(mem);
  for (size_t i = 0; i < out.members.size(); ++i)
    out.member_names.push_back(special_member_name(out.members[i], static_cast<int>(i), a));
  return out;
}

}  // namespace

WitnessBundle strictness_witnesses(const LanguageClass& basis, int kmax,
                                   const StratumBudget& budget) {
  const Alphabet& a = basis.alphabet;
  if (a.size() < 2) throw AlphabetTooSmall();
  const ClassProperties props = check_properties(basis);
  if (!props.boolean_algebra || !props.quotienting)
    throw PreconditionViolated("strictness witnesses need a quotienting Boolean algebra");

  LanguageClass d = basis;
  bool augmented = false;
  if (find_member(d, dfa_epsilon(a)) < 0) {
    d = augment_with_epsilon(basis);
    augmented = true;
  }

  const int p = period(d);
  const char ca = a.letter(0);
  const char cb = a.letter(1);
  const Word v_short = std::string(1, ca) + std::string(static_cast<size_t>(p), cb) + std::string(1, ca);
  const Word v_long = std::string(1, ca) + std::string(static_cast<size_t>(2 * p), cb) + std::string(1, ca);

  // L = A* (a b^{2p} a) A*, constructed through the marker chain so the
  // expression itself certifies membership in the first half level over d.
  PolyExpr astar;
  Monomial am;
  am.factors = {member_ref(d, dfa_universal(a))};
  astar.monomials = {am};
  const PolyExpr lpoly = eps_chain(astar, v_long, astar, d);

  WitnessBundle bundle;
  bundle.basis = basis.name;
  bundle.augmented = augmented;
  bundle.period = p;
  bundle.l = eval_poly(lpoly, d);
  bundle.v_words = {v_short, v_long};

  const Dfa vplus = dfa_plus(dfa_union(dfa_word(a, v_short), dfa_word(a, v_long)));
  for (int k = 0; k <= kmax; ++k) {
    const Word u = repeat(v_short, p * (1 << (k + 1)));
    const Word v = u + repeat(v_long, p) + u;
    if (is_member(u, bundle.l)) throw Error("strictness: the lower witness landed inside L");
    if (!is_member(v, bundle.l)) throw Error("strictness: the upper witness missed L");
    if (!is_member(u, vplus) || !is_member(v, vplus))
      throw Error("strictness: witnesses left the factor language");
    if (!word_leq_k(d, k, u, v, budget))
      throw Error("strictness: the witness pair is not ordered at level " + std::to_string(k));
    bundle.pairs.emplace_back(u, v);
  }
  return bundle;
}

nlohmann::ordered_json bundle_to_json(const WitnessBundle& b) {
  nlohmann::ordered_json pairs = nlohmann::ordered_json::array();
  for (const auto& [u, v] : b.pairs) pairs.push_back({{"u", u}, {"v", v}});
  return {{"basis", b.basis},
          {"augmented", b.augmented},
          {"period", b.period},
          {"v_words", b.v_words},
          {"pairs", pairs}};
}

// ---- classic expressions ---------------------------------------------------

std::vector<ClassicExpression> classic_expressions(const Alphabet& a) {
  if (a.size() != 2)
    throw PreconditionViolated("classic expressions are defined over a two-letter alphabet");
  const char x = a.letter(0);
  const char y = a.letter(1);
  const LanguageClass dd0 = builtin_basis("dd0", a);
  const LanguageClass st0 = builtin_basis("st0", a);

  const LevelPtr EPS = LevelExpr::member("Eps", "dd0");
  const LevelPtr AST = LevelExpr::member("Astar", "dd0");
  auto mono = [](std::vector<LevelPtr> f, Word m) {
    Monomial out;
    out.factors = std::move(f);
    out.markers = std::move(m);
    return out;
  };

  // (xy)* is everything except: starts with y, ends with x, or repeats a letter.
  auto not_alternating = [&](const LevelPtr& eps, const LevelPtr& ast) {
    PolyExpr p;
    p.monomials = {mono({eps, ast}, std::string(1, y)), mono({ast, eps}, std::string(1, x)),
                   mono({ast, eps, ast}, std::string{x, x}), mono({ast, eps, ast}, std::string{y, y})};
    return p;
  };

  const LevelPtr xy_star = LevelExpr::complement_of(
      LevelExpr::promote(LevelExpr::poly(not_alternating(EPS, AST), "dd0"), 2));
  const Dfa xy_star_dfa =
      dfa_star(dfa_word(a, std::string{x, y}));

  // The mirrored (yx)* serves as a factor below.
  PolyExpr not_yx;
  not_yx.monomials = {mono({EPS, AST}, std::string(1, x)), mono({AST, EPS}, std::string(1, y)),
                      mono({AST, EPS, AST}, std::string{y, y}),
                      mono({AST, EPS, AST}, std::string{x, x})};
  const LevelPtr yx_star =
      LevelExpr::complement_of(LevelExpr::promote(LevelExpr::poly(not_yx, "dd0"), 2));

  // (x(xy)*y)* is everything except the four ways a word can break the
  // nesting: a y-block too early, an unmatched xx descent, an unmatched yy
  // ascent, or a dangling x-tail.
  PolyExpr not_nested;
  not_nested.monomials = {
      mono({xy_star, AST}, std::string(1, y)),
      mono({AST, EPS, yx_star, AST}, std::string{x, x, x}),
      mono({AST, yx_star, EPS, AST}, std::string{y, y, y}),
      mono({AST, xy_star}, std::string(1, x)),
  };
  const LevelPtr nested = LevelExpr::complement_of(
      LevelExpr::promote(LevelExpr::poly(not_nested, "dd0"), 4));
  const Dfa nested_dfa = dfa_star(dfa_marked_concat(
      dfa_marked_concat(dfa_epsilon(a), x, dfa_star(dfa_word(a, std::string{x, y}))), y,
      dfa_epsilon(a)));

  // The same (xy)* against the trivial basis: {eps} is first rebuilt at the
  // first full level, then reused as a factor two half levels up.
  const LevelPtr AST0 = LevelExpr::member("Astar", "st0");
  PolyExpr aplus0;
  aplus0.monomials = {mono({AST0, AST0}, std::string(1, x)), mono({AST0, AST0}, std::string(1, y))};
  const LevelPtr eps0 =
      LevelExpr::complement_of(LevelExpr::promote(LevelExpr::poly(aplus0, "st0"), 2));
  const LevelPtr xy_star_st = LevelExpr::complement_of(
      LevelExpr::promote(LevelExpr::poly(not_alternating(eps0, AST0), "st0"), 4));

  std::vector<ClassicExpression> out;
  auto add = [&](std::string name, std::string basis_kind, LevelPtr expr,
                 const LanguageClass& cls, const Dfa& target) {
    const Dfa got = eval_level(expr, cls);
    if (!equivalent(got, target))
      throw Error("classic expression '" + name + "' failed verification");
    out.push_back({std::move(name), std::move(basis_kind), std::move(expr), got});
  };
  add("dd1", "dd0", xy_star, dd0, xy_star_dfa);
  add("dd2", "dd0", nested, dd0, nested_dfa);
  add("st2", "st0", xy_star_st, st0, xy_star_dfa);
  return out;
}

}  // namespace hier
