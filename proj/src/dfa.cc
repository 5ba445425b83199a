// dfa.cc -- canonicalization (Hopcroft + BFS renumber) and language ops
#include "hier/dfa.hh"

#include <algorithm>
#include <deque>
#include <map>
#include <queue>
#include <unordered_map>

#include "nfa.hh"

namespace hier {

namespace {

// Restrict to the part reachable from the initial state.
Dfa trim(const Dfa& d) {
  const int k = d.alphabet.size();
  std::vector<int> renum(static_cast<size_t>(d.n), -1);
  std::vector<int> order;
  renum[static_cast<size_t>(d.init)] = 0;
  order.push_back(d.init);
  for (size_t i = 0; i < order.size(); ++i)
    for (int a = 0; a < k; ++a) {
      int t = d.step_idx(order[i], a);
      if (renum[static_cast<size_t>(t)] < 0) {
        renum[static_cast<size_t>(t)] = static_cast<int>(order.size());
        order.push_back(t);
      }
    }
  Dfa out;
  out.alphabet = d.alphabet;
  out.n = static_cast<int>(order.size());
  out.init = 0;
  out.trans.resize(static_cast<size_t>(out.n) * k);
  out.acc.resize(static_cast<size_t>(out.n));
  for (int q = 0; q < out.n; ++q) {
    out.acc[static_cast<size_t>(q)] = d.acc[static_cast<size_t>(order[static_cast<size_t>(q)])];
    for (int a = 0; a < k; ++a)
      out.trans[static_cast<size_t>(q) * k + a] = renum[static_cast<size_t>(d.step_idx(order[static_cast<size_t>(q)], a))];
  }
  return out;
}

// Hopcroft partition refinement on a trimmed, complete DFA.  Returns the
// block id of each state and the number of blocks.
std::vector<int> hopcroft(const Dfa& d, int& nblocks) {
  const int n = d.n, k = d.alphabet.size();
  std::vector<std::vector<int>> inv(static_cast<size_t>(n) * k);
  for (int q = 0; q < n; ++q)
    for (int a = 0; a < k; ++a) inv[static_cast<size_t>(d.step_idx(q, a)) * k + a].push_back(q);

  std::vector<int> block_of(static_cast<size_t>(n), -1);
  std::vector<std::vector<int>> members;
  {
    std::vector<int> accs, rejs;
    for (int q = 0; q < n; ++q) (d.acc[static_cast<size_t>(q)] ? accs : rejs).push_back(q);
    for (auto* v : {&accs, &rejs})
      if (!v->empty()) {
        for (int q : *v) block_of[static_cast<size_t>(q)] = static_cast<int>(members.size());
        members.push_back(std::move(*v));
      }
  }

  std::deque<int> work;
  std::vector<std::uint8_t> in_work(members.size(), 0);
  if (members.size() == 2) {
    int smaller = members[0].size() <= members[1].size() ? 0 : 1;
    work.push_back(smaller);
    in_work[static_cast<size_t>(smaller)] = 1;
  }

  std::vector<int> hit_blocks;
  std::unordered_map<int, std::vector<int>> hits;
  while (!work.empty()) {
    int splitter = work.front();
    work.pop_front();
    in_work[static_cast<size_t>(splitter)] = 0;
    std::vector<int> splitter_states = members[static_cast<size_t>(splitter)];
    for (int a = 0; a < k; ++a) {
      hit_blocks.clear();
      hits.clear();
      for (int q : splitter_states)
        for (int p : inv[static_cast<size_t>(q) * k + a]) {
          auto& v = hits[block_of[static_cast<size_t>(p)]];
          if (v.empty()) hit_blocks.push_back(block_of[static_cast<size_t>(p)]);
          v.push_back(p);
        }
      for (int b : hit_blocks) {
        auto& hs = hits[b];
        if (hs.size() == members[static_cast<size_t>(b)].size()) continue;  // whole block hit
        int nb = static_cast<int>(members.size());
        for (int p : hs) block_of[static_cast<size_t>(p)] = nb;
        auto& mb = members[static_cast<size_t>(b)];
        mb.erase(std::remove_if(mb.begin(), mb.end(),
                                [&](int s) { return block_of[static_cast<size_t>(s)] == nb; }),
                 mb.end());
        members.push_back(std::move(hs));
        in_work.push_back(0);
        // Keep the worklist invariant: if b was queued, both halves must be;
        // otherwise the smaller half suffices.
        int to_add = nb;
        if (!in_work[static_cast<size_t>(b)] && mb.size() < members[static_cast<size_t>(nb)].size())
          to_add = b;
        work.push_back(to_add);
        in_work[static_cast<size_t>(to_add)] = 1;
      }
    }
  }
  nblocks = static_cast<int>(members.size());
  return block_of;
}

}  // namespace

Dfa canonicalize(const Dfa& d0) {
  Dfa d = trim(d0);
  const int k = d.alphabet.size();
  int nb = 0;
  std::vector<int> block_of = hopcroft(d, nb);

  // Quotient automaton on blocks.
  std::vector<int> rep(static_cast<size_t>(nb), -1);
  for (int q = 0; q < d.n; ++q)
    if (rep[static_cast<size_t>(block_of[static_cast<size_t>(q)])] < 0) rep[static_cast<size_t>(block_of[static_cast<size_t>(q)])] = q;

  // BFS renumbering: states ordered by their length-lex least reaching word.
  std::vector<int> renum(static_cast<size_t>(nb), -1);
  std::vector<int> order;
  renum[static_cast<size_t>(block_of[static_cast<size_t>(d.init)])] = 0;
  order.push_back(block_of[static_cast<size_t>(d.init)]);
  for (size_t i = 0; i < order.size(); ++i)
    for (int a = 0; a < k; ++a) {
      int t = block_of[static_cast<size_t>(d.step_idx(rep[static_cast<size_t>(order[i])], a))];
      if (renum[static_cast<size_t>(t)] < 0) {
        renum[static_cast<size_t>(t)] = static_cast<int>(order.size());
        order.push_back(t);
      }
    }

  Dfa out;
  out.alphabet = d.alphabet;
  out.n = nb;
  out.init = 0;
  out.trans.resize(static_cast<size_t>(nb) * k);
  out.acc.resize(static_cast<size_t>(nb));
  for (int b = 0; b < nb; ++b) {
    int q = rep[static_cast<size_t>(order[static_cast<size_t>(b)])];
    out.acc[static_cast<size_t>(b)] = d.acc[static_cast<size_t>(q)];
    for (int a = 0; a < k; ++a)
      out.trans[static_cast<size_t>(b) * k + a] =
          renum[static_cast<size_t>(block_of[static_cast<size_t>(d.step_idx(q, a))])];
  }
  out.canonical = true;
  return out;
}

std::string dfa_key(const Dfa& d) {
  std::string key = d.alphabet.letters();
  key += '\x1f';
  auto push_int = [&key](int v) {
    for (int i = 0; i < 4; ++i) key += static_cast<char>((v >> (8 * i)) & 0xff);
  };
  push_int(d.n);
  push_int(d.init);
  for (int t : d.trans) push_int(t);
  for (auto b : d.acc) key += static_cast<char>(b);
  return key;
}

// ---- factories ------------------------------------------------------------

namespace {
Dfa one_state(const Alphabet& a, bool accepting) {
  Dfa d;
  d.alphabet = a;
  d.n = 1;
  d.trans.assign(static_cast<size_t>(a.size()), 0);
  d.acc.assign(1, accepting ? 1 : 0);
  d.canonical = true;
  return d;
}
}  // namespace

Dfa dfa_empty(const Alphabet& a) { return one_state(a, false); }
Dfa dfa_universal(const Alphabet& a) { return one_state(a, true); }

Dfa dfa_epsilon(const Alphabet& a) {
  Dfa d;
  d.alphabet = a;
  d.n = 2;
  d.trans.assign(static_cast<size_t>(2 * a.size()), 1);
  d.acc = {1, 0};
  d.canonical = true;
  return d;
}

Dfa dfa_word(const Alphabet& a, const Word& w) {
  a.check_word(w);
  const int k = a.size();
  Dfa d;
  d.alphabet = a;
  d.n = static_cast<int>(w.size()) + 2;  // chain + sink
  int sink = d.n - 1;
  d.trans.assign(static_cast<size_t>(d.n) * k, sink);
  d.acc.assign(static_cast<size_t>(d.n), 0);
  for (size_t i = 0; i < w.size(); ++i)
    d.trans[i * k + a.index(w[i])] = static_cast<int>(i) + 1;
  d.acc[w.size()] = 1;
  return canonicalize(d);
}

Dfa dfa_from_words(const Alphabet& a, const std::vector<Word>& words) {
  Dfa d = dfa_empty(a);
  for (const Word& w : words) d = dfa_union(d, dfa_word(a, w));
  return d;
}

Dfa dfa_sub_star(const Alphabet& a, const std::string& letters) {
  Dfa d;
  d.alphabet = a;
  d.n = 2;
  d.trans.assign(static_cast<size_t>(2 * a.size()), 1);
  for (char c : letters) d.trans[static_cast<size_t>(a.index(c))] = 0;
  d.acc = {1, 0};
  return canonicalize(d);
}

// ---- boolean operations ----------------------------------------------------

Dfa dfa_complement(const Dfa& d) {
  Dfa out = d;
  for (auto& b : out.acc) b = b ? 0 : 1;
  return canonicalize(out);
}

namespace {
template <typename F>
Dfa product(const Dfa& x, const Dfa& y, F accept) {
  if (x.alphabet != y.alphabet) throw AlphabetMismatch();
  const int k = x.alphabet.size();
  std::map<std::pair<int, int>, int> id;
  std::vector<std::pair<int, int>> states;
  auto intern = [&](int a, int b) {
    auto [it, fresh] = id.try_emplace({a, b}, static_cast<int>(states.size()));
    if (fresh) states.emplace_back(a, b);
    return it->second;
  };
  intern(x.init, y.init);
  Dfa out;
  out.alphabet = x.alphabet;
  out.init = 0;
  for (size_t i = 0; i < states.size(); ++i) {
    auto [qa, qb] = states[i];
    out.acc.push_back(accept(x.accepts(qa), y.accepts(qb)) ? 1 : 0);
    for (int a = 0; a < k; ++a) out.trans.push_back(intern(x.step_idx(qa, a), y.step_idx(qb, a)));
  }
  out.n = static_cast<int>(states.size());
  return canonicalize(out);
}
}  // namespace

Dfa dfa_union(const Dfa& a, const Dfa& b) {
  return product(a, b, [](bool x, bool y) { return x || y; });
}
Dfa dfa_intersect(const Dfa& a, const Dfa& b) {
  return product(a, b, [](bool x, bool y) { return x && y; });
}
Dfa dfa_minus(const Dfa& a, const Dfa& b) {
  return product(a, b, [](bool x, bool y) { return x && !y; });
}

// ---- concatenations ---------------------------------------------------------

Dfa dfa_marked_concat(const Dfa& k, char a, const Dfa& l) {
  if (k.alphabet != l.alphabet) throw AlphabetMismatch();
  int ai = k.alphabet.index(a);
  Nfa nfa(k.alphabet, k.n + l.n);
  const int ab = k.alphabet.size();
  for (int q = 0; q < k.n; ++q)
    for (int c = 0; c < ab; ++c) nfa.add_edge(q, c, k.step_idx(q, c));
  for (int q = 0; q < l.n; ++q)
    for (int c = 0; c < ab; ++c) nfa.add_edge(k.n + q, c, k.n + l.step_idx(q, c));
  for (int q = 0; q < k.n; ++q)
    if (k.accepts(q)) nfa.add_edge(q, ai, k.n + l.init);
  nfa.inits = {k.init};
  for (int q = 0; q < l.n; ++q) nfa.acc[static_cast<size_t>(k.n + q)] = l.acc[static_cast<size_t>(q)];
  return determinize(nfa);
}

Dfa dfa_concat(const Dfa& k, const Dfa& l) {
  if (k.alphabet != l.alphabet) throw AlphabetMismatch();
  const int ab = k.alphabet.size();
  bool l_has_eps = l.accepts(l.init);
  Nfa nfa(k.alphabet, k.n + l.n);
  for (int q = 0; q < k.n; ++q)
    for (int c = 0; c < ab; ++c) nfa.add_edge(q, c, k.step_idx(q, c));
  for (int q = 0; q < l.n; ++q)
    for (int c = 0; c < ab; ++c) nfa.add_edge(k.n + q, c, k.n + l.step_idx(q, c));
  for (int q = 0; q < k.n; ++q)
    if (k.accepts(q))
      for (int c = 0; c < ab; ++c) nfa.add_edge(q, c, k.n + l.step_idx(l.init, c));
  nfa.inits = {k.init};
  for (int q = 0; q < l.n; ++q) nfa.acc[static_cast<size_t>(k.n + q)] = l.acc[static_cast<size_t>(q)];
  if (l_has_eps)
    for (int q = 0; q < k.n; ++q)
      if (k.accepts(q)) nfa.acc[static_cast<size_t>(q)] = 1;
  return determinize(nfa);
}

Dfa dfa_plus(const Dfa& d) {
  const int ab = d.alphabet.size();
  Nfa nfa(d.alphabet, d.n);
  for (int q = 0; q < d.n; ++q)
    for (int c = 0; c < ab; ++c) nfa.add_edge(q, c, d.step_idx(q, c));
  for (int q = 0; q < d.n; ++q)
    if (d.accepts(q))
      for (int c = 0; c < ab; ++c) nfa.add_edge(q, c, d.step_idx(d.init, c));
  nfa.inits = {d.init};
  for (int q = 0; q < d.n; ++q) nfa.acc[static_cast<size_t>(q)] = d.acc[static_cast<size_t>(q)];
  return determinize(nfa);
}

Dfa dfa_star(const Dfa& d) { return dfa_union(dfa_plus(d), dfa_epsilon(d.alphabet)); }

// ---- quotients ---------------------------------------------------------------

Dfa left_quotient(const Word& w, const Dfa& l) {
  l.alphabet.check_word(w);
  Dfa out = l;
  out.init = l.run(l.init, w);
  return canonicalize(out);
}

Dfa right_quotient(const Dfa& l, const Word& w) {
  l.alphabet.check_word(w);
  Dfa out = l;
  for (int q = 0; q < l.n; ++q)
    out.acc[static_cast<size_t>(q)] = l.acc[static_cast<size_t>(l.run(q, w))];
  return canonicalize(out);
}

std::vector<Dfa> residuals(const Dfa& l0, bool right) {
  Dfa l = l0.canonical ? l0 : canonicalize(l0);
  std::vector<Dfa> out;
  std::unordered_map<std::string, int> seen;
  if (!right) {
    // Canonical DFAs are trim, so the states are exactly the left quotients.
    for (int q = 0; q < l.n; ++q) {
      Dfa r = l;
      r.init = q;
      r = canonicalize(r);
      if (seen.emplace(dfa_key(r), 1).second) out.push_back(std::move(r));
    }
    return out;
  }
  // Right quotients L w^-1: BFS over acceptance vectors; prepending a letter
  // to w maps vector V to V' with V'[q] = V[step(q, a)].
  std::unordered_map<std::string, int> vec_seen;
  std::deque<std::vector<std::uint8_t>> queue{l.acc};
  vec_seen.emplace(std::string(l.acc.begin(), l.acc.end()), 1);
  const int k = l.alphabet.size();
  while (!queue.empty()) {
    std::vector<std::uint8_t> v = std::move(queue.front());
    queue.pop_front();
    Dfa r = l;
    r.acc = v;
    r = canonicalize(r);
    if (seen.emplace(dfa_key(r), 1).second) out.push_back(std::move(r));
    for (int a = 0; a < k; ++a) {
      std::vector<std::uint8_t> nv(static_cast<size_t>(l.n));
      for (int q = 0; q < l.n; ++q) nv[static_cast<size_t>(q)] = v[static_cast<size_t>(l.step_idx(q, a))];
      if (vec_seen.emplace(std::string(nv.begin(), nv.end()), 1).second) queue.push_back(std::move(nv));
    }
  }
  return out;
}

// ---- queries -------------------------------------------------------------------

bool is_member(const Word& w, const Dfa& l) { return l.accepts(l.run(l.init, w)); }

bool is_empty_lang(const Dfa& l) {
  for (auto b : l.acc)
    if (b) return false;  // canonical DFAs are trim
  return true;
}

bool equivalent(const Dfa& a, const Dfa& b) {
  if (a.alphabet != b.alphabet) throw AlphabetMismatch();
  const Dfa& ca = a.canonical ? a : canonicalize(a);
  const Dfa& cb = b.canonical ? b : canonicalize(b);
  return ca == cb;
}

std::vector<Word> enumerate(const Dfa& l, int maxlen) {
  std::vector<Word> out;
  for (const Word& w : words_upto(l.alphabet, maxlen))
    if (is_member(w, l)) out.push_back(w);
  return out;
}

std::optional<Word> shortest_member(const Dfa& l) {
  std::vector<std::uint8_t> seen(static_cast<size_t>(l.n), 0);
  std::deque<std::pair<int, Word>> queue{{l.init, Word{}}};
  seen[static_cast<size_t>(l.init)] = 1;
  while (!queue.empty()) {
    auto [q, w] = std::move(queue.front());
    queue.pop_front();
    if (l.accepts(q)) return w;
    for (int a = 0; a < l.alphabet.size(); ++a) {
      int t = l.step_idx(q, a);
      if (!seen[static_cast<size_t>(t)]) {
        seen[static_cast<size_t>(t)] = 1;
        queue.emplace_back(t, w + l.alphabet.letter(a));
      }
    }
  }
  return std::nullopt;
}

// ---- NFA determinization ----------------------------------------------------------

Dfa determinize(const Nfa& nfa) {
  const int k = nfa.alphabet.size();
  std::map<std::vector<int>, int> id;
  std::vector<std::vector<int>> subsets;
  auto intern = [&](std::vector<int> s) {
    std::sort(s.begin(), s.end());
    s.erase(std::unique(s.begin(), s.end()), s.end());
    auto [it, fresh] = id.try_emplace(s, static_cast<int>(subsets.size()));
    if (fresh) subsets.push_back(std::move(s));
    return it->second;
  };
  intern(nfa.inits);
  Dfa out;
  out.alphabet = nfa.alphabet;
  out.init = 0;
  for (size_t i = 0; i < subsets.size(); ++i) {
    std::vector<int> cur = subsets[i];  // copy: subsets grows below
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

// ---- serialization -----------------------------------------------------------------

nlohmann::ordered_json dfa_to_json(const Dfa& d) {
  nlohmann::ordered_json j;
  j["alphabet"] = d.alphabet.letters();
  j["states"] = d.n;
  auto& tr = j["transitions"] = nlohmann::ordered_json::array();
  for (int q = 0; q < d.n; ++q)
    for (int a = 0; a < d.alphabet.size(); ++a)
      tr.push_back({q, std::string(1, d.alphabet.letter(a)), d.step_idx(q, a)});
  j["initial"] = d.init;
  auto& ac = j["accepting"] = nlohmann::ordered_json::array();
  for (int q = 0; q < d.n; ++q)
    if (d.accepts(q)) ac.push_back(q);
  return j;
}

Dfa dfa_from_json(const nlohmann::json& j) {
  std::string letters;
  if (j.at("alphabet").is_string()) {
    letters = j.at("alphabet").get<std::string>();
  } else {
    for (const auto& item : j.at("alphabet")) letters += item.get<std::string>().at(0);
  }
  Dfa d;
  d.alphabet = Alphabet(letters);
  d.n = j.at("states").get<int>();
  if (d.n < 1) throw Error("dfa json: needs at least one state");
  d.init = j.at("initial").get<int>();
  if (d.init < 0 || d.init >= d.n) throw Error("dfa json: initial state out of range");
  const int k = d.alphabet.size();
  d.trans.assign(static_cast<size_t>(d.n) * k, -1);
  for (const auto& row : j.at("transitions")) {
    int q = row.at(0).get<int>();
    std::string c = row.at(1).get<std::string>();
    int t = row.at(2).get<int>();
    if (q < 0 || q >= d.n || t < 0 || t >= d.n || c.size() != 1)
      throw Error("dfa json: malformed transition");
    d.trans[static_cast<size_t>(q) * k + d.alphabet.index(c[0])] = t;
  }
  for (int entry : d.trans)
    if (entry < 0) throw Error("dfa json: transition map is not total");
  d.acc.assign(static_cast<size_t>(d.n), 0);
  for (const auto& q : j.at("accepting")) {
    int s = q.get<int>();
    if (s < 0 || s >= d.n) throw Error("dfa json: accepting state out of range");
    d.acc[static_cast<size_t>(s)] = 1;
  }
  return canonicalize(d);
}

}  // namespace hier
