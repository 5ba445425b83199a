// language_class.cc -- builtin bases, class monoids, upper-set membership
#include "hier/language_class.hh"

#include <algorithm>
#include <deque>
#include <map>
#include <tuple>
#include <unordered_set>

#include "hier/regex.hh"

namespace hier {

int LanguageClass::find(const std::string& member_name) const {
  for (size_t i = 0; i < member_names.size(); ++i)
    if (member_names[i] == member_name) return static_cast<int>(i);
  return -1;
}

const Dfa& LanguageClass::member(const std::string& member_name) const {
  int i = find(member_name);
  if (i < 0) throw UnknownLanguage(member_name);
  return members[static_cast<size_t>(i)];
}

namespace {

// Words containing at least v occurrences of c, i.e. (A*cA*)^v.
Dfa count_at_least(const Alphabet& a, char c, int v) {
  if (v == 0) return dfa_universal(a);
  const int k = a.size();
  Dfa d;
  d.alphabet = a;
  d.n = v + 1;
  d.trans.resize(static_cast<size_t>(d.n) * k);
  d.acc.assign(static_cast<size_t>(d.n), 0);
  d.acc[static_cast<size_t>(v)] = 1;
  for (int q = 0; q <= v; ++q)
    for (int x = 0; x < k; ++x)
      d.trans[static_cast<size_t>(q) * k + x] =
          (a.letter(x) == c && q < v) ? q + 1 : q;
  return canonicalize(d);
}

std::string default_member_name(const Dfa& d, size_t index) {
  if (is_empty_lang(d)) return "Empty";
  if (d == dfa_universal(d.alphabet)) return "Astar";
  if (d == dfa_epsilon(d.alphabet)) return "Eps";
  if (d == dfa_complement(dfa_epsilon(d.alphabet))) return "Aplus";
  return "m" + std::to_string(index);
}

// All unions of the given atom list, deduplicated, deterministic order.
LanguageClass unions_of(const std::string& name, const Alphabet& a,
                        const std::vector<Dfa>& atoms, size_t member_cap) {
  if (atoms.size() >= 63)
    throw BudgetExceeded(name + " member generation", static_cast<size_t>(-1));
  const size_t total = size_t{1} << atoms.size();
  if (total > member_cap) throw BudgetExceeded(name + " member generation", total);
  std::vector<Dfa> by_mask(total);
  by_mask[0] = dfa_empty(a);
  LanguageClass c;
  c.name = name;
  c.alphabet = a;
  std::unordered_set<std::string> seen;
  for (size_t mask = 0; mask < total; ++mask) {
    if (mask) {
      size_t low = mask & (~mask + 1);
      int bit = 0;
      while ((size_t{1} << bit) != low) ++bit;
      by_mask[mask] = dfa_union(by_mask[mask ^ low], atoms[static_cast<size_t>(bit)]);
    }
    if (seen.insert(dfa_key(by_mask[mask])).second) {
      c.members.push_back(by_mask[mask]);
      c.member_names.push_back(default_member_name(c.members.back(), c.members.size() - 1));
    }
  }
  return c;
}

}  // namespace

LanguageClass builtin_basis(const std::string& kind, const Alphabet& a, size_t member_cap) {
  const int k = a.size();
  if (kind == "st0") {
    LanguageClass c;
    c.name = "st0";
    c.alphabet = a;
    c.members = {dfa_empty(a), dfa_universal(a)};
    c.member_names = {"Empty", "Astar"};
    return c;
  }
  if (kind == "dd0") {
    LanguageClass c;
    c.name = "dd0";
    c.alphabet = a;
    c.members = {dfa_empty(a), dfa_epsilon(a), dfa_complement(dfa_epsilon(a)), dfa_universal(a)};
    c.member_names = {"Empty", "Eps", "Aplus", "Astar"};
    return c;
  }
  if (kind == "at") {
    // Atoms: one language per alphabet-content profile.
    std::vector<Dfa> atoms;
    for (int mask = 0; mask < (1 << k); ++mask) {
      Dfa atom = dfa_universal(a);
      for (int x = 0; x < k; ++x) {
        Dfa occurs = count_at_least(a, a.letter(x), 1);
        atom = dfa_intersect(atom, (mask >> x) & 1 ? occurs : dfa_complement(occurs));
      }
      atoms.push_back(std::move(atom));
    }
    return unions_of("at", a, atoms, member_cap);
  }
  if (kind == "wat") {
    std::vector<Dfa> gens;
    for (int mask = 0; mask < (1 << k); ++mask) {
      std::string letters;
      for (int x = 0; x < k; ++x)
        if ((mask >> x) & 1) letters += a.letter(x);
      gens.push_back(dfa_sub_star(a, letters));
    }
    return unions_of("wat", a, gens, member_cap);
  }
  if (kind.rfind("att:", 0) == 0) {
    int d = 0;
    try {
      d = std::stoi(kind.substr(4));
    } catch (...) {
      throw UnknownBasis(kind);
    }
    if (d < 1) throw UnknownBasis(kind);
    // Atoms: letter-count profiles capped at d.
    std::vector<Dfa> atoms;
    std::vector<int> profile(static_cast<size_t>(k), 0);
    while (true) {
      Dfa atom = dfa_universal(a);
      for (int x = 0; x < k; ++x) {
        int v = profile[static_cast<size_t>(x)];
        atom = dfa_intersect(atom, count_at_least(a, a.letter(x), v));
        if (v < d) atom = dfa_intersect(atom, dfa_complement(count_at_least(a, a.letter(x), v + 1)));
      }
      atoms.push_back(std::move(atom));
      if (atoms.size() >= 63)
        throw BudgetExceeded(kind + " member generation", static_cast<size_t>(-1));
      int x = 0;
      while (x < k && profile[static_cast<size_t>(x)] == d) profile[static_cast<size_t>(x++)] = 0;
      if (x == k) break;
      ++profile[static_cast<size_t>(x)];
    }
    return unions_of(kind, a, atoms, member_cap);
  }
  throw UnknownBasis(kind);
}

LanguageClass load_class(const nlohmann::json& j) {
  LanguageClass c;
  c.name = j.at("name").get<std::string>();
  c.alphabet = Alphabet(j.at("alphabet").get<std::string>());
  std::unordered_set<std::string> seen;
  for (const auto& entry : j.at("languages")) {
    Dfa d = compile_regex(entry.at("regex").get<std::string>(), c.alphabet);
    if (!seen.insert(dfa_key(d)).second) continue;  // language-equal duplicate
    c.members.push_back(std::move(d));
    c.member_names.push_back(entry.at("name").get<std::string>());
  }
  return c;
}

ClassProperties check_properties(const LanguageClass& c) {
  std::unordered_set<std::string> keys;
  for (const auto& m : c.members) keys.insert(dfa_key(m));
  auto has = [&](const Dfa& d) { return keys.count(dfa_key(d)) != 0; };

  ClassProperties p;
  p.lattice = has(dfa_empty(c.alphabet)) && has(dfa_universal(c.alphabet));
  for (size_t i = 0; i < c.members.size() && p.lattice; ++i)
    for (size_t j = i + 1; j < c.members.size() && p.lattice; ++j)
      p.lattice = has(dfa_union(c.members[i], c.members[j])) &&
                  has(dfa_intersect(c.members[i], c.members[j]));
  p.boolean_algebra = p.lattice;
  for (size_t i = 0; i < c.members.size() && p.boolean_algebra; ++i)
    p.boolean_algebra = has(dfa_complement(c.members[i]));
  p.quotienting = true;
  for (size_t i = 0; i < c.members.size() && p.quotienting; ++i)
    for (int a = 0; a < c.alphabet.size() && p.quotienting; ++a) {
      Word w(1, c.alphabet.letter(a));
      p.quotienting = has(left_quotient(w, c.members[i])) && has(right_quotient(c.members[i], w));
    }
  return p;
}

std::vector<std::uint8_t> membership_vector(const LanguageClass& c, const Word& w) {
  std::vector<std::uint8_t> v(c.members.size());
  for (size_t i = 0; i < c.members.size(); ++i) v[i] = is_member(w, c.members[i]) ? 1 : 0;
  return v;
}

bool leq_C(const LanguageClass& c, const Word& w, const Word& w2) {
  for (const auto& m : c.members)
    if (is_member(w, m) && !is_member(w2, m)) return false;
  return true;
}

Dfa upper_set(const LanguageClass& c, const Word& w) {
  Dfa out = dfa_universal(c.alphabet);
  for (const auto& m : c.members)
    if (is_member(w, m)) out = dfa_intersect(out, m);
  return out;
}

// ---- class monoid ----------------------------------------------------------

int ClassMonoid::eval_word(const Word& w) const {
  int e = unit;
  for (char ch : w) e = times(e, letter_eval[static_cast<size_t>(alphabet.index(ch))]);
  return e;
}

int ClassMonoid::power(int s, long long e) const {
  int acc = unit;
  int base = s;
  while (e > 0) {
    if (e & 1) acc = times(acc, base);
    base = times(base, base);
    e >>= 1;
  }
  return acc;
}

namespace {

// Transition monoid of the product of all members; the quotienting
// precondition is checked separately so the search helpers below can reuse
// this on arbitrary classes.
ClassMonoid build_monoid(const LanguageClass& c) {
  const int k = c.alphabet.size();
  // Reachable product states.
  std::map<std::vector<int>, int> pid;
  std::vector<std::vector<int>> tuples;
  std::vector<int> succ;  // state * k + letter
  {
    std::vector<int> t0;
    for (const auto& m : c.members) t0.push_back(m.init);
    pid.emplace(t0, 0);
    tuples.push_back(std::move(t0));
  }
  for (size_t i = 0; i < tuples.size(); ++i)
    for (int a = 0; a < k; ++a) {
      std::vector<int> next(c.members.size());
      for (size_t mi = 0; mi < c.members.size(); ++mi)
        next[mi] = c.members[mi].step_idx(tuples[i][mi], a);
      auto [it, fresh] = pid.try_emplace(next, static_cast<int>(tuples.size()));
      if (fresh) tuples.push_back(std::move(next));
      succ.push_back(it->second);
    }
  const int m = static_cast<int>(tuples.size());

  ClassMonoid mo;
  mo.alphabet = c.alphabet;
  mo.state_count = m;
  mo.initial_state = 0;

  // Monoid closure from the identity under right multiplication by letters.
  std::map<std::vector<int>, int> eid;
  {
    std::vector<int> ident(static_cast<size_t>(m));
    for (int i = 0; i < m; ++i) ident[static_cast<size_t>(i)] = i;
    eid.emplace(ident, 0);
    mo.table.push_back(std::move(ident));
    mo.rep.emplace_back();
  }
  mo.letter_eval.assign(static_cast<size_t>(k), -1);
  for (size_t e = 0; e < mo.table.size(); ++e)
    for (int a = 0; a < k; ++a) {
      std::vector<int> f(static_cast<size_t>(m));
      for (int i = 0; i < m; ++i)
        f[static_cast<size_t>(i)] = succ[static_cast<size_t>(mo.table[e][static_cast<size_t>(i)]) * k + a];
      auto [it, fresh] = eid.try_emplace(f, static_cast<int>(mo.table.size()));
      if (fresh) {
        mo.table.push_back(std::move(f));
        mo.rep.push_back(mo.rep[e] + c.alphabet.letter(a));
      }
      if (e == 0) mo.letter_eval[static_cast<size_t>(a)] = it->second;
    }
  mo.n = static_cast<int>(mo.table.size());
  mo.unit = 0;

  // Multiplication table: s·t composes the transformations (s first).
  mo.mult.assign(static_cast<size_t>(mo.n) * mo.n, -1);
  for (int s = 0; s < mo.n; ++s)
    for (int t = 0; t < mo.n; ++t) {
      std::vector<int> f(static_cast<size_t>(m));
      for (int i = 0; i < m; ++i)
        f[static_cast<size_t>(i)] = mo.table[static_cast<size_t>(t)][static_cast<size_t>(mo.table[static_cast<size_t>(s)][static_cast<size_t>(i)])];
      mo.mult[static_cast<size_t>(s) * mo.n + t] = eid.at(f);
    }

  // Membership vector of each element (read off at the initial tuple).
  for (int s = 0; s < mo.n; ++s) {
    const auto& tuple = tuples[static_cast<size_t>(mo.table[static_cast<size_t>(s)][0])];
    std::vector<std::uint8_t> v(c.members.size());
    for (size_t mi = 0; mi < c.members.size(); ++mi)
      v[mi] = c.members[mi].accepts(tuple[mi]) ? 1 : 0;
    mo.vec.push_back(std::move(v));
  }

  // Element preorder: membership-vector implication.
  mo.leq.assign(static_cast<size_t>(mo.n) * mo.n, 0);
  for (int s = 0; s < mo.n; ++s)
    for (int t = 0; t < mo.n; ++t) {
      bool ok = true;
      for (size_t mi = 0; mi < c.members.size() && ok; ++mi)
        ok = !mo.vec[static_cast<size_t>(s)][mi] || mo.vec[static_cast<size_t>(t)][mi];
      mo.leq[static_cast<size_t>(s) * mo.n + t] = ok ? 1 : 0;
    }

  // Period: minimal p ≥ 1 such that s^p is idempotent for every s.
  {
    std::vector<int> pw(static_cast<size_t>(mo.n));
    for (int s = 0; s < mo.n; ++s) pw[static_cast<size_t>(s)] = s;
    for (int p = 1;; ++p) {
      if (p > 1 << 20) throw Error("period search exceeded bound");
      bool ok = true;
      for (int s = 0; s < mo.n && ok; ++s)
        ok = mo.times(pw[static_cast<size_t>(s)], pw[static_cast<size_t>(s)]) == pw[static_cast<size_t>(s)];
      if (ok) {
        mo.period = p;
        break;
      }
      for (int s = 0; s < mo.n; ++s) pw[static_cast<size_t>(s)] = mo.times(pw[static_cast<size_t>(s)], s);
    }
  }
  return mo;
}

}  // namespace

ClassMonoid class_monoid(const LanguageClass& c) {
  std::unordered_set<std::string> keys;
  for (const auto& m : c.members) keys.insert(dfa_key(m));
  for (const auto& m : c.members)
    for (int a = 0; a < c.alphabet.size(); ++a) {
      Word w(1, c.alphabet.letter(a));
      if (!keys.count(dfa_key(left_quotient(w, m))) || !keys.count(dfa_key(right_quotient(m, w))))
        throw NotQuotienting(c.name);
    }
  return build_monoid(c);
}

int period(const LanguageClass& c) { return class_monoid(c).period; }

// ---- upper-set membership and witnesses --------------------------------------

namespace {

// Shortest representative of every reachable (monoid element, DFA state)
// pair, in BFS (length-lex) order.
std::vector<std::tuple<int, int, Word>> reach_pairs(const ClassMonoid& mo, const Dfa& d) {
  std::map<std::pair<int, int>, int> seen;
  std::vector<std::tuple<int, int, Word>> out;
  out.emplace_back(mo.unit, d.init, Word{});
  seen.emplace(std::make_pair(mo.unit, d.init), 1);
  for (size_t i = 0; i < out.size(); ++i) {
    auto [e, s, w] = out[i];
    for (int a = 0; a < mo.alphabet.size(); ++a) {
      int e2 = mo.times(e, mo.letter_eval[static_cast<size_t>(a)]);
      int s2 = d.step_idx(s, a);
      if (seen.emplace(std::make_pair(e2, s2), 1).second)
        out.emplace_back(e2, s2, w + mo.alphabet.letter(a));
    }
  }
  return out;
}

// Least pair (w, w') with w ∈ pos, w' ∈ neg, w ≤_C w'; order: total length,
// then length-lex on w, then on w'.
std::optional<std::pair<Word, Word>> leq_pair_search(const LanguageClass& c, const Dfa& pos,
                                                     const Dfa& neg) {
  if (pos.alphabet != c.alphabet || neg.alphabet != c.alphabet) throw AlphabetMismatch();
  ClassMonoid mo = build_monoid(c);
  std::vector<std::pair<int, Word>> ps, ns;
  for (auto& [e, s, w] : reach_pairs(mo, pos))
    if (pos.accepts(s)) ps.emplace_back(e, w);
  for (auto& [e, s, w] : reach_pairs(mo, neg))
    if (neg.accepts(s)) ns.emplace_back(e, w);
  std::optional<std::pair<Word, Word>> best;
  auto better = [](const std::pair<Word, Word>& x, const std::pair<Word, Word>& y) {
    size_t tx = x.first.size() + x.second.size(), ty = y.first.size() + y.second.size();
    if (tx != ty) return tx < ty;
    if (x.first != y.first) return llex_less(x.first, y.first);
    return llex_less(x.second, y.second);
  };
  for (const auto& [e, w] : ps)
    for (const auto& [e2, w2] : ns) {
      if (!mo.leq_elem(e, e2)) continue;
      std::pair<Word, Word> cand{w, w2};
      if (!best || better(cand, *best)) best = std::move(cand);
    }
  return best;
}

}  // namespace

bool in_class(const LanguageClass& c, const Dfa& l) {
  if (!check_properties(c).lattice) throw NotLattice(c.name);
  return !leq_pair_search(c, l, dfa_complement(l)).has_value();
}

std::optional<std::pair<Word, Word>> non_membership_witness(const LanguageClass& c, const Dfa& l) {
  if (!check_properties(c).lattice) throw NotLattice(c.name);
  return leq_pair_search(c, l, dfa_complement(l));
}

std::optional<std::pair<Word, Word>> non_separability_witness(const LanguageClass& c,
                                                              const Dfa& l1, const Dfa& l2) {
  if (!check_properties(c).lattice) throw NotLattice(c.name);
  return leq_pair_search(c, l1, l2);
}

}  // namespace hier
