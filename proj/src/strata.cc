// strata.cc -- type monoids for the stratified preorders and the verdict engine
//
// The workhorse here is TypeMonoid: a finite, interned representation of the
// level-k preorder classes over a quotienting class.  Everything downstream
// (membership in a polynomial stratum, Boolean-closure membership,
// separability) is a reachability question over (type, DFA state) pairs plus
// pairwise comparisons of the reached types.  When the registries outgrow the
// budget, the verdicts fall back to pumping families (sound by construction)
// and a bounded word search; they report Inconclusive rather than guess.

#include "hier/strata.hh"

#include <algorithm>
#include <deque>
#include <map>
#include <set>
#include <tuple>
#include <unordered_set>

#include "hier/errors.hh"

namespace hier {

namespace {

std::uint64_t pack_pair(int s, int t) {
  return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(s)) << 32) |
         static_cast<std::uint32_t>(t);
}

bool vec_implies(const std::vector<std::uint8_t>& a, const std::vector<std::uint8_t>& b) {
  for (size_t i = 0; i < a.size(); ++i)
    if (a[i] && !b[i]) return false;
  return true;
}

}  // namespace

// ---------------------------------------------------------------------------
// TypeMonoid

TypeMonoid::TypeMonoid(const LanguageClass& c, int k, const StratumBudget& budget)
    : cls_(c), base_(class_monoid(c)), k_(k), type_cap_(budget.type_cap) {
  // Level 0: monoid elements merged by membership vector.  The class is
  // quotienting, so the canonical preorder is a precongruence and the merged
  // multiplication is well defined; with this quotient, mutual comparability
  // coincides with equality at every level, which keeps the split antichains
  // canonical.
  std::map<std::vector<std::uint8_t>, int> by_vec;
  std::vector<int> elem_class(base_.n);
  std::vector<int> class_rep_elem;
  for (int e = 0; e < base_.n; ++e) {
    auto it = by_vec.find(base_.vec[e]);
    if (it == by_vec.end()) {
      it = by_vec.emplace(base_.vec[e], static_cast<int>(class_rep_elem.size())).first;
      class_rep_elem.push_back(e);
      vec0_.push_back(base_.vec[e]);
      reps0_.push_back(base_.rep[e]);
    } else if (llex_less(base_.rep[e], reps0_[it->second])) {
      reps0_[it->second] = base_.rep[e];
    }
    elem_class[e] = it->second;
  }
  n0_ = static_cast<int>(class_rep_elem.size());
  unit0_ = elem_class[base_.unit];
  letters0_.resize(cls_.alphabet.size());
  for (int a = 0; a < cls_.alphabet.size(); ++a)
    letters0_[a] = elem_class[base_.letter_eval[a]];
  mult0_.assign(static_cast<size_t>(n0_) * n0_, 0);
  for (int s = 0; s < n0_; ++s)
    for (int t = 0; t < n0_; ++t)
      mult0_[static_cast<size_t>(s) * n0_ + t] =
          elem_class[base_.times(class_rep_elem[s], class_rep_elem[t])];
  leq0_.assign(static_cast<size_t>(n0_) * n0_, 0);
  for (int s = 0; s < n0_; ++s)
    for (int t = 0; t < n0_; ++t)
      leq0_[static_cast<size_t>(s) * n0_ + t] = vec_implies(vec0_[s], vec0_[t]) ? 1 : 0;

  // Levels 1..k: close each registry under right multiplication by letters.
  // Every product of word types is itself a word type, so once a level is
  // closed, later queries stay inside the registry.
  levels_.resize(k_);
  for (int j = 1; j <= k_; ++j) {
    Level& L = levels_[j - 1];
    int prev_unit = (j == 1) ? unit0_ : levels_[j - 2].unit;
    L.unit = intern_type(j, prev_unit, {}, Word());
    L.letters.resize(cls_.alphabet.size());
    for (int a = 0; a < cls_.alphabet.size(); ++a) {
      int prev_letter = (j == 1) ? letters0_[a] : levels_[j - 2].letters[a];
      L.letters[a] = intern_type(j, prev_letter, {Triple{prev_unit, a, prev_unit}},
                                 Word(1, cls_.alphabet.letter(a)));
    }
    std::deque<int> work(L.letters.begin(), L.letters.end());
    work.push_front(L.unit);
    while (!work.empty()) {
      int t = work.front();
      work.pop_front();
      for (int a = 0; a < cls_.alphabet.size(); ++a) {
        size_t before = L.splits.size();
        int r = mult(j, t, L.letters[a]);
        if (L.splits.size() > before) work.push_back(r);
        if (L.splits.size() > type_cap_)
          throw BudgetExceeded("type registry over budget", L.splits.size(), j);
      }
    }
  }
  closed_ = true;
}

int TypeMonoid::base0_of(int level, int t) const {
  return level == 0 ? t : levels_[level - 1].base0[t];
}

std::vector<TypeMonoid::Triple> TypeMonoid::canonical_splits(int level_below,
                                                             std::vector<Triple> triples) const {
  std::sort(triples.begin(), triples.end());
  triples.erase(std::unique(triples.begin(), triples.end()), triples.end());
  if (triples.size() <= 1) return triples;
  std::vector<Triple> kept;
  kept.reserve(triples.size());
  for (size_t i = 0; i < triples.size(); ++i) {
    bool drop = false;
    for (size_t j = 0; j < triples.size() && !drop; ++j) {
      if (j == i || !triple_dominated(level_below, triples[i], triples[j])) continue;
      // Dominated triples are redundant: domination is transitive and
      // compatible with multiplication, so dropping them early commutes with
      // products.  The j < i guard breaks would-be mutual ties.
      if (j < i || !triple_dominated(level_below, triples[j], triples[i])) drop = true;
    }
    if (!drop) kept.push_back(triples[i]);
  }
  return kept;
}

bool TypeMonoid::triple_dominated(int level_below, const Triple& s, const Triple& t) const {
  return s[1] == t[1] && leq(level_below, s[0], t[0]) && leq(level_below, s[2], t[2]);
}

int TypeMonoid::intern_type(int level, int proj, std::vector<Triple> triples,
                            Word witness_rep) const {
  Level& L = levels_[level - 1];
  triples = canonical_splits(level - 1, std::move(triples));
  std::string key;
  key.reserve(4 + triples.size() * 12);
  auto put = [&key](int x) {
    for (int b = 0; b < 4; ++b) key.push_back(static_cast<char>((x >> (8 * b)) & 0xff));
  };
  put(proj);
  for (const Triple& t : triples) {
    put(t[0]);
    put(t[1]);
    put(t[2]);
  }
  auto it = L.intern.find(key);
  if (it != L.intern.end()) return it->second;
  if (closed_)
    throw Error("type monoid: product escaped the closed registry");

  int b0 = (level == 1) ? proj : levels_[level - 2].base0[proj];
  // Integrity: the split data must compose back to the level-0 image.
  for (const Triple& t : triples) {
    int lhs = mult0_[static_cast<size_t>(base0_of(level - 1, t[0])) * n0_ + letters0_[t[1]]];
    if (mult0_[static_cast<size_t>(lhs) * n0_ + base0_of(level - 1, t[2])] != b0)
      throw Error("type monoid: split data disagrees with the level-0 image");
  }
  int id = static_cast<int>(L.splits.size());
  L.proj.push_back(proj);
  L.base0.push_back(b0);
  L.splits.push_back(std::move(triples));
  L.reps.push_back(std::move(witness_rep));
  L.intern.emplace(std::move(key), id);
  return id;
}

int TypeMonoid::mult(int level, int s, int t) const {
  if (level == 0) return mult0_[static_cast<size_t>(s) * n0_ + t];
  const Level& L = levels_[level - 1];
  std::uint64_t key = pack_pair(s, t);
  auto it = L.mult_memo.find(key);
  if (it != L.mult_memo.end()) return it->second;
  int prev_s = L.proj[s], prev_t = L.proj[t];
  std::vector<Triple> triples;
  triples.reserve(L.splits[s].size() + L.splits[t].size());
  // Splits of a product: splits of the left factor with the right factor
  // appended, and splits of the right factor with the left factor prepended.
  for (const Triple& tr : L.splits[s])
    triples.push_back(Triple{tr[0], tr[1], mult(level - 1, tr[2], prev_t)});
  for (const Triple& tr : L.splits[t])
    triples.push_back(Triple{mult(level - 1, prev_s, tr[0]), tr[1], tr[2]});
  int proj = mult(level - 1, prev_s, prev_t);
  int id = intern_type(level, proj, std::move(triples), L.reps[s] + L.reps[t]);
  L.mult_memo.emplace(key, id);
  return id;
}

bool TypeMonoid::leq(int level, int s, int t) const {
  if (level == 0) return leq0_[static_cast<size_t>(s) * n0_ + t] != 0;
  if (s == t) return true;
  const Level& L = levels_[level - 1];
  std::uint64_t key = pack_pair(s, t);
  auto it = L.leq_memo.find(key);
  if (it != L.leq_memo.end()) return it->second != 0;
  bool ok = leq0_[static_cast<size_t>(L.base0[s]) * n0_ + L.base0[t]] != 0;
  if (ok) {
    for (const Triple& a : L.splits[s]) {
      bool dominated = false;
      for (const Triple& b : L.splits[t]) {
        if (triple_dominated(level - 1, a, b)) {
          dominated = true;
          break;
        }
      }
      if (!dominated) {
        ok = false;
        break;
      }
    }
  }
  L.leq_memo.emplace(key, ok ? 1 : 0);
  return ok;
}

int TypeMonoid::size(int level) const {
  return level == 0 ? n0_ : static_cast<int>(levels_[level - 1].splits.size());
}

int TypeMonoid::unit(int level) const {
  return level == 0 ? unit0_ : levels_[level - 1].unit;
}

int TypeMonoid::letter_type(int level, int letter_idx) const {
  return level == 0 ? letters0_[letter_idx] : levels_[level - 1].letters[letter_idx];
}

int TypeMonoid::type_of(int level, const Word& w) const {
  cls_.alphabet.check_word(w);
  int t = unit(level);
  for (char ch : w) t = mult(level, t, letter_type(level, cls_.alphabet.index(ch)));
  return t;
}

const Word& TypeMonoid::rep(int level, int t) const {
  return level == 0 ? reps0_[t] : levels_[level - 1].reps[t];
}

const std::vector<std::uint8_t>& TypeMonoid::type_vec(int level, int t) const {
  return vec0_[base0_of(level, t)];
}

size_t TypeMonoid::total_types() const {
  size_t s = n0_;
  for (const Level& l : levels_) s += l.splits.size();
  return s;
}

TypeMonoid build_type_monoid(const LanguageClass& c, int k, const StratumBudget& budget) {
  return TypeMonoid(c, k, budget);
}

// ---------------------------------------------------------------------------
// The word preorder

bool word_leq_k(const TypeMonoid& tm, int k, const Word& w, const Word& w2) {
  const Alphabet& al = tm.cls().alphabet;
  al.check_word(w);
  al.check_word(w2);
  if (!tm.leq(0, tm.type_of(0, w), tm.type_of(0, w2))) return false;
  if (k == 0) return true;
  if (tm.k_levels() < k - 1) throw Error("type monoid not built deep enough for this level");
  const int lvl = k - 1;
  const int n = static_cast<int>(w.size()), n2 = static_cast<int>(w2.size());
  std::vector<int> p(n + 1), s(n + 1), p2(n2 + 1), s2(n2 + 1);
  p[0] = tm.unit(lvl);
  for (int i = 0; i < n; ++i) p[i + 1] = tm.mult(lvl, p[i], tm.letter_type(lvl, al.index(w[i])));
  s[n] = tm.unit(lvl);
  for (int i = n - 1; i >= 0; --i)
    s[i] = tm.mult(lvl, tm.letter_type(lvl, al.index(w[i])), s[i + 1]);
  p2[0] = tm.unit(lvl);
  for (int i = 0; i < n2; ++i)
    p2[i + 1] = tm.mult(lvl, p2[i], tm.letter_type(lvl, al.index(w2[i])));
  s2[n2] = tm.unit(lvl);
  for (int i = n2 - 1; i >= 0; --i)
    s2[i] = tm.mult(lvl, tm.letter_type(lvl, al.index(w2[i])), s2[i + 1]);
  // Every split of w must be dominated by a split of w2 at the same letter.
  for (int i = 0; i < n; ++i) {
    bool found = false;
    for (int j = 0; j < n2 && !found; ++j) {
      if (w2[j] != w[i]) continue;
      found = tm.leq(lvl, p[i], p2[j]) && tm.leq(lvl, s[i + 1], s2[j + 1]);
    }
    if (!found) return false;
  }
  return true;
}

namespace {

// Literal recursion on words; the independent route used to gate the typed
// one and the last-resort fallback when no type monoid fits the budget.
struct LiteralLeq {
  const LanguageClass& c;
  std::map<Word, std::vector<std::uint8_t>> vecs;
  std::map<std::tuple<int, Word, Word>, bool> memo;

  const std::vector<std::uint8_t>& vec(const Word& w) {
    auto it = vecs.find(w);
    if (it == vecs.end()) it = vecs.emplace(w, membership_vector(c, w)).first;
    return it->second;
  }

  bool leq(int k, const Word& w, const Word& w2) {
    if (!vec_implies(vec(w), vec(w2))) return false;
    if (k == 0) return true;
    auto key = std::make_tuple(k, w, w2);
    auto it = memo.find(key);
    if (it != memo.end()) return it->second;
    bool ok = true;
    for (size_t i = 0; i < w.size() && ok; ++i) {
      bool found = false;
      for (size_t j = 0; j < w2.size() && !found; ++j) {
        if (w2[j] != w[i]) continue;
        found = leq(k - 1, w.substr(0, i), w2.substr(0, j)) &&
                leq(k - 1, w.substr(i + 1), w2.substr(j + 1));
      }
      ok = found;
    }
    memo.emplace(std::move(key), ok);
    return ok;
  }
};

}  // namespace

bool word_leq_k_literal(const LanguageClass& c, int k, const Word& w, const Word& w2) {
  c.alphabet.check_word(w);
  c.alphabet.check_word(w2);
  LiteralLeq rec{c, {}, {}};
  return rec.leq(k, w, w2);
}

bool word_leq_k(const LanguageClass& c, int k, const Word& w, const Word& w2,
                const StratumBudget& budget) {
  c.alphabet.check_word(w);
  c.alphabet.check_word(w2);
  if (k == 0) return leq_C(c, w, w2);
  try {
    TypeMonoid tm(c, k - 1, budget);
    return word_leq_k(tm, k, w, w2);
  } catch (const BudgetExceeded&) {
    return word_leq_k_literal(c, k, w, w2);
  }
}

// ---------------------------------------------------------------------------
// Verdicts

std::string status_name(StratumVerdict::Status s) {
  switch (s) {
    case StratumVerdict::Status::Member: return "Member";
    case StratumVerdict::Status::NotMember: return "NotMember";
    case StratumVerdict::Status::Separable: return "Separable";
    case StratumVerdict::Status::NotSeparable: return "NotSeparable";
    case StratumVerdict::Status::Inconclusive: return "Inconclusive";
  }
  return "Inconclusive";
}

nlohmann::ordered_json verdict_to_json(const StratumVerdict& v) {
  nlohmann::ordered_json j;
  j["status"] = status_name(v.status);
  j["k"] = v.k;
  if (v.witness) j["witness"] = {v.witness->first, v.witness->second};
  if (v.separator) j["separator"] = dfa_to_json(*v.separator);
  j["budget"] = nlohmann::ordered_json{{"types_built", v.types_built}, {"type_cap", v.type_cap}};
  if (!v.note.empty()) j["note"] = v.note;
  return j;
}

namespace {

using Status = StratumVerdict::Status;

// Reachable (type, state) pairs with shortest witnesses per pair, and the
// first (shortest) accepting / rejecting pair seen for each type.
struct PairBfs {
  std::vector<int> types, states, parents;
  std::vector<char> via;
  std::map<int, int> first_acc, first_rej;  // type -> pair index

  Word word_of(int idx) const {
    Word w;
    while (idx > 0) {
      w.push_back(via[idx]);
      idx = parents[idx];
    }
    std::reverse(w.begin(), w.end());
    return w;
  }
};

PairBfs pair_bfs(const TypeMonoid& tm, int level, const Dfa& l) {
  PairBfs b;
  std::map<std::pair<int, int>, int> seen;
  auto add = [&](int ty, int st, int parent, char letter) {
    auto key = std::make_pair(ty, st);
    if (!seen.emplace(key, static_cast<int>(b.types.size())).second) return;
    b.types.push_back(ty);
    b.states.push_back(st);
    b.parents.push_back(parent);
    b.via.push_back(letter);
    auto& slot = l.accepts(st) ? b.first_acc : b.first_rej;
    slot.emplace(ty, static_cast<int>(b.types.size()) - 1);
  };
  add(tm.unit(level), l.init, -1, '\0');
  for (size_t i = 0; i < b.types.size(); ++i) {
    for (int a = 0; a < tm.cls().alphabet.size(); ++a) {
      add(tm.mult(level, b.types[i], tm.letter_type(level, a)), l.step_idx(b.states[i], a),
          static_cast<int>(i), tm.cls().alphabet.letter(a));
    }
  }
  return b;
}

struct TypeRep {
  int type;
  Word word;
};

std::vector<TypeRep> type_reps(const PairBfs& b, bool accepting) {
  const auto& m = accepting ? b.first_acc : b.first_rej;
  std::vector<TypeRep> out;
  out.reserve(m.size());
  for (const auto& [ty, idx] : m) out.push_back({ty, b.word_of(idx)});
  return out;
}

// First pair (by combined witness length, then length-lex) with
// left.type below right.type.  Caller keeps |left|*|right| within the cap.
std::optional<std::pair<Word, Word>> scan_type_pairs(const TypeMonoid& tm, int level,
                                                     const std::vector<TypeRep>& left,
                                                     const std::vector<TypeRep>& right) {
  struct Cand {
    size_t len;
    int i, j;
  };
  std::vector<Cand> order;
  order.reserve(left.size() * right.size());
  for (int i = 0; i < static_cast<int>(left.size()); ++i)
    for (int j = 0; j < static_cast<int>(right.size()); ++j)
      order.push_back({left[i].word.size() + right[j].word.size(), i, j});
  std::sort(order.begin(), order.end(), [&](const Cand& a, const Cand& b) {
    if (a.len != b.len) return a.len < b.len;
    if (left[a.i].word != left[b.i].word) return llex_less(left[a.i].word, left[b.i].word);
    return llex_less(right[a.j].word, right[b.j].word);
  });
  for (const Cand& cd : order)
    if (tm.leq(level, left[cd.i].type, right[cd.j].type))
      return std::make_pair(left[cd.i].word, right[cd.j].word);
  return std::nullopt;
}

// Shortest same-type accepting/rejecting collision, if any.
std::optional<std::pair<Word, Word>> type_collision(const PairBfs& b) {
  std::optional<std::pair<Word, Word>> best;
  for (const auto& [ty, aidx] : b.first_acc) {
    auto it = b.first_rej.find(ty);
    if (it == b.first_rej.end()) continue;
    auto cand = std::make_pair(b.word_of(aidx), b.word_of(it->second));
    auto shorter = [](const std::pair<Word, Word>& x, const std::pair<Word, Word>& y) {
      size_t lx = x.first.size() + x.second.size(), ly = y.first.size() + y.second.size();
      if (lx != ly) return lx < ly;
      if (x.first != y.first) return llex_less(x.first, y.first);
      return llex_less(x.second, y.second);
    };
    if (!best || shorter(cand, *best)) best = cand;
  }
  return best;
}

// Verified level-k pairs from the pumping lemmas: u^{pm} is mutually
// comparable with u^{pm'}, and below u^{pm} v u^{pm} when u^p is below v at
// level 0 (all exponents at least 2^{k+1}-1).  Both shapes transfer through
// contexts because the preorders are precongruences, so any membership
// pattern found here is a sound witness.  `want` orders the pair or rejects.
template <class Want>
std::optional<std::pair<Word, Word>> pumping_pair_search(const LanguageClass& c, int k,
                                                         bool mutual_only, Want want) {
  if (k > 20) return std::nullopt;  // pumped words would be astronomically long
  const int p = period(c);
  const int m = 1 << (k + 1);
  std::vector<Word> vs;
  for (const Word& v : words_upto(c.alphabet, 4))
    if (!v.empty()) vs.push_back(v);
  for (const Word& z : words_upto(c.alphabet, 2))
    if (!z.empty()) vs.push_back(repeat(z, m));
  const std::vector<Word> ctx = words_upto(c.alphabet, 2);
  // Materialize the candidate pairs and check them shortest-first so the
  // reported witness is the least one the families can produce.
  struct Cand {
    Word left, right;
    bool mutual;
  };
  std::vector<Cand> cands;
  for (const Word& u : words_upto(c.alphabet, 3)) {
    if (u.empty()) continue;
    const Word up = repeat(u, p);
    if (up.size() * static_cast<size_t>(m + 1) > 200000) continue;
    const Word block = repeat(up, m);
    const Word inflated = repeat(up, m + 1);
    for (const Word& x : ctx) {
      for (const Word& y : ctx) {
        const Word left = x + block + y;
        cands.push_back({left, x + inflated + y, true});
        if (mutual_only) continue;
        for (const Word& v : vs) {
          if (!leq_C(c, up, v)) continue;
          cands.push_back({left, x + block + v + block + y, false});
        }
      }
    }
  }
  std::sort(cands.begin(), cands.end(), [](const Cand& a, const Cand& b) {
    const size_t la = a.left.size() + a.right.size(), lb = b.left.size() + b.right.size();
    if (la != lb) return la < lb;
    if (a.left != b.left) return llex_less(a.left, b.left);
    return llex_less(a.right, b.right);
  });
  for (const Cand& cd : cands)
    if (auto r = want(cd.left, cd.right, cd.mutual)) return r;
  return std::nullopt;
}

// Bounded word search: all pairs (w in pos, w2 in neg) by combined length,
// filtered through the deepest type tables that fit the budget and confirmed
// by the literal recursion when those tables stop short of level k.
std::optional<std::pair<Word, Word>> bounded_pair_search(const LanguageClass& c, int k,
                                                         const Dfa& pos, const Dfa& neg,
                                                         const StratumBudget& budget,
                                                         bool mutual) {
  std::optional<TypeMonoid> lo;
  int depth = -1;
  for (int j = k - 1; j >= 0 && !lo; --j) {
    try {
      lo.emplace(c, j, budget);
      depth = j;
    } catch (const BudgetExceeded&) {
    }
  }
  if (!lo) return std::nullopt;
  const int pre_k = depth + 1;  // the typed relation available
  const bool exact = pre_k >= k;

  const std::vector<Word> words = words_upto(c.alphabet, budget.word_len_cap);
  std::vector<char> in_pos(words.size()), in_neg(words.size());
  for (size_t i = 0; i < words.size(); ++i) {
    in_pos[i] = is_member(words[i], pos) ? 1 : 0;
    in_neg[i] = is_member(words[i], neg) ? 1 : 0;
  }
  // words_upto is length-lex: bucket boundaries by length.
  std::vector<size_t> bucket(budget.word_len_cap + 2, words.size());
  for (size_t i = words.size(); i-- > 0;) bucket[words[i].size()] = i;
  auto bucket_end = [&](int len) {
    return len + 1 <= budget.word_len_cap + 1 ? bucket[len + 1] : words.size();
  };

  LiteralLeq literal{c, {}, {}};
  size_t attempts = 0, literal_attempts = 0;
  for (int total = 0; total <= 2 * budget.word_len_cap; ++total) {
    for (int lp = 0; lp <= std::min(total, budget.word_len_cap); ++lp) {
      const int ln = total - lp;
      if (ln > budget.word_len_cap) continue;
      for (size_t i = bucket[lp]; i < bucket_end(lp); ++i) {
        if (!in_pos[i]) continue;
        for (size_t j = bucket[ln]; j < bucket_end(ln); ++j) {
          if (!in_neg[j]) continue;
          if (++attempts > budget.pair_cap) return std::nullopt;
          const Word& w = words[i];
          const Word& w2 = words[j];
          if (!word_leq_k(*lo, std::min(pre_k, k), w, w2)) continue;
          if (!exact) {
            if (++literal_attempts > 5000) return std::nullopt;
            if (!literal.leq(k, w, w2)) continue;
          }
          if (mutual) {
            if (!word_leq_k(*lo, std::min(pre_k, k), w2, w)) continue;
            if (!exact && !literal.leq(k, w2, w)) continue;
          }
          return std::make_pair(w, w2);
        }
      }
    }
  }
  return std::nullopt;
}

void confirm_membership(const std::pair<Word, Word>& w, const Dfa& first_in,
                        const Dfa& second_in) {
  if (!is_member(w.first, first_in) || !is_member(w.second, second_in))
    throw Error("internal: witness fails membership revalidation");
}

// Union of the upper sets of the given types: the canonical separator.
Dfa type_automaton(const TypeMonoid& tm, int level, const std::vector<TypeRep>& lower) {
  Dfa d;
  d.alphabet = tm.cls().alphabet;
  d.n = tm.size(level);
  d.init = tm.unit(level);
  d.trans.resize(static_cast<size_t>(d.n) * d.alphabet.size());
  d.acc.assign(d.n, 0);
  for (int t = 0; t < d.n; ++t) {
    for (int a = 0; a < d.alphabet.size(); ++a)
      d.trans[static_cast<size_t>(t) * d.alphabet.size() + a] =
          tm.mult(level, t, tm.letter_type(level, a));
    for (const TypeRep& r : lower) {
      if (tm.leq(level, r.type, t)) {
        d.acc[t] = 1;
        break;
      }
    }
  }
  return canonicalize(d);
}

}  // namespace

StratumVerdict pol_stratum_member(const Dfa& l, const LanguageClass& c, int k,
                                  const StratumBudget& budget) {
  if (l.alphabet != c.alphabet) throw AlphabetMismatch();
  StratumVerdict v;
  v.k = k;
  v.type_cap = budget.type_cap;
  auto want = [&](const Word& a, const Word& b,
                  bool mutual) -> std::optional<std::pair<Word, Word>> {
    if (is_member(a, l) && !is_member(b, l)) return std::make_pair(a, b);
    if (mutual && is_member(b, l) && !is_member(a, l)) return std::make_pair(b, a);
    return std::nullopt;
  };
  // Refutation ladder for when the exact scan is out of reach: pumping
  // families first, bounded word search second, Inconclusive last.
  auto fall_back = [&](const std::string& why) {
    if (auto w = pumping_pair_search(c, k, false, want)) {
      v.status = Status::NotMember;
      v.witness = w;
      v.note = "pumping-family witness";
    } else if (auto w2 = bounded_pair_search(c, k, l, dfa_complement(l), budget, false)) {
      v.status = Status::NotMember;
      v.witness = w2;
      v.note = "bounded-search witness";
    } else {
      v.status = Status::Inconclusive;
      v.note = why + "; no counterexample within the word bound";
    }
  };
  try {
    TypeMonoid tm(c, k, budget);
    v.types_built = tm.total_types();
    PairBfs b = pair_bfs(tm, k, l);
    auto acc = type_reps(b, true), rej = type_reps(b, false);
    if (acc.size() * rej.size() <= budget.pair_cap) {
      if (auto w = scan_type_pairs(tm, k, acc, rej)) {
        v.status = Status::NotMember;
        v.witness = w;
      } else {
        v.status = Status::Member;
      }
    } else if (auto w = type_collision(b)) {
      v.status = Status::NotMember;
      v.witness = w;
      v.note = "type scan over the pair budget; same-type collision";
    } else {
      fall_back("type scan over the pair budget");
    }
  } catch (const BudgetExceeded& e) {
    v.types_built = e.reached;
    fall_back("type budget exceeded at level " + std::to_string(e.level) + " (" +
              std::to_string(e.reached) + " types)");
  }
  if (v.status == Status::NotMember) confirm_membership(*v.witness, l, dfa_complement(l));
  return v;
}

StratumVerdict bpol_stratum_member(const Dfa& l, const LanguageClass& c, int k,
                                   const StratumBudget& budget) {
  if (l.alphabet != c.alphabet) throw AlphabetMismatch();
  StratumVerdict v;
  v.k = k;
  v.type_cap = budget.type_cap;
  try {
    TypeMonoid tm(c, k, budget);
    v.types_built = tm.total_types();
    PairBfs b = pair_bfs(tm, k, l);
    // Mutual level-k comparability coincides with type equality (leq is
    // antisymmetric on the registry), so membership in the Boolean closure
    // fails exactly when some type carries words on both sides of L.
    if (auto w = type_collision(b)) {
      v.status = Status::NotMember;
      v.witness = w;
    } else {
      v.status = Status::Member;
    }
  } catch (const BudgetExceeded& e) {
    v.types_built = e.reached;
    auto want = [&](const Word& a, const Word& b,
                    bool) -> std::optional<std::pair<Word, Word>> {
      // Only called on mutually comparable pairs here.
      if (is_member(a, l) && !is_member(b, l)) return std::make_pair(a, b);
      if (is_member(b, l) && !is_member(a, l)) return std::make_pair(b, a);
      return std::nullopt;
    };
    if (auto w = pumping_pair_search(c, k, true, want)) {
      v.status = Status::NotMember;
      v.witness = w;
      v.note = "pumping-family witness";
    } else if (auto w2 = bounded_pair_search(c, k, l, dfa_complement(l), budget, true)) {
      v.status = Status::NotMember;
      v.witness = w2;
      v.note = "bounded-search witness";
    } else {
      v.status = Status::Inconclusive;
      v.note = "type budget exceeded at level " + std::to_string(e.level) + " (" +
               std::to_string(e.reached) + " types); no counterexample within the word bound";
    }
  }
  if (v.status == Status::NotMember) confirm_membership(*v.witness, l, dfa_complement(l));
  return v;
}

StratumVerdict pol_stratum_separable(const Dfa& l1, const Dfa& l2, const LanguageClass& c,
                                     int k, const StratumBudget& budget) {
  if (l1.alphabet != c.alphabet || l2.alphabet != c.alphabet) throw AlphabetMismatch();
  StratumVerdict v;
  v.k = k;
  v.type_cap = budget.type_cap;
  auto want = [&](const Word& a, const Word& b,
                  bool mutual) -> std::optional<std::pair<Word, Word>> {
    if (is_member(a, l1) && is_member(b, l2)) return std::make_pair(a, b);
    if (mutual && is_member(b, l1) && is_member(a, l2)) return std::make_pair(b, a);
    return std::nullopt;
  };
  auto fall_back = [&](const std::string& why) {
    if (auto w = pumping_pair_search(c, k, false, want)) {
      v.status = Status::NotSeparable;
      v.witness = w;
      v.note = "pumping-family witness";
    } else if (auto w2 = bounded_pair_search(c, k, l1, l2, budget, false)) {
      v.status = Status::NotSeparable;
      v.witness = w2;
      v.note = "bounded-search witness";
    } else {
      v.status = Status::Inconclusive;
      v.note = why + "; no witness within the word bound";
    }
  };
  try {
    TypeMonoid tm(c, k, budget);
    v.types_built = tm.total_types();
    PairBfs b1 = pair_bfs(tm, k, l1);
    PairBfs b2 = pair_bfs(tm, k, l2);
    auto t1 = type_reps(b1, true), t2 = type_reps(b2, true);
    if (t1.size() * t2.size() <= budget.pair_cap) {
      if (auto w = scan_type_pairs(tm, k, t1, t2)) {
        v.status = Status::NotSeparable;
        v.witness = w;
      } else {
        v.status = Status::Separable;
        Dfa sep = type_automaton(tm, k, t1);
        if (!is_empty_lang(dfa_minus(l1, sep)) || !is_empty_lang(dfa_intersect(sep, l2)))
          throw Error("internal: separator fails containment revalidation");
        v.separator = sep;
      }
    } else {
      // Same-type hits are still decisive.
      std::optional<std::pair<Word, Word>> hit;
      for (const auto& [ty, idx] : b1.first_acc) {
        auto it = b2.first_acc.find(ty);
        if (it == b2.first_acc.end()) continue;
        auto cand = std::make_pair(b1.word_of(idx), b2.word_of(it->second));
        if (!hit || cand.first.size() + cand.second.size() <
                        hit->first.size() + hit->second.size())
          hit = cand;
      }
      if (hit) {
        v.status = Status::NotSeparable;
        v.witness = hit;
        v.note = "type scan over the pair budget; same-type collision";
      } else {
        fall_back("type scan over the pair budget");
      }
    }
  } catch (const BudgetExceeded& e) {
    v.types_built = e.reached;
    fall_back("type budget exceeded at level " + std::to_string(e.level) + " (" +
              std::to_string(e.reached) + " types)");
  }
  if (v.status == Status::NotSeparable) confirm_membership(*v.witness, l1, l2);
  return v;
}

SeparabilitySearchResult pol_separability_search(const Dfa& l1, const Dfa& l2,
                                                 const LanguageClass& c, int kmax,
                                                 const StratumBudget& budget) {
  SeparabilitySearchResult r;
  for (int k = 0; k <= kmax; ++k) {
    r.per_k.push_back(pol_stratum_separable(l1, l2, c, k, budget));
    if (r.per_k.back().status == Status::Separable) {
      r.first_separable = k;
      break;
    }
  }
  return r;
}

// ---------------------------------------------------------------------------
// Brute-force stratum enumeration

std::vector<Dfa> enumerate_stratum(const LanguageClass& c, int k, size_t budget) {
  if (!check_properties(c).lattice) throw NotLattice(c.name);
  if (k == 0) return c.members;
  const std::vector<Dfa> prev = enumerate_stratum(c, k - 1, budget);

  std::vector<Dfa> gens;
  std::unordered_set<std::string> keys;
  auto add = [&](std::vector<Dfa>& list, const Dfa& d, const char* what) {
    if (!keys.insert(dfa_key(d)).second) return;
    list.push_back(d);
    if (list.size() > budget) throw BudgetExceeded(what, list.size(), k);
  };
  for (const Dfa& d : prev) add(gens, d, "stratum generators");
  for (const Dfa& x : prev)
    for (int a = 0; a < c.alphabet.size(); ++a)
      for (const Dfa& y : prev) add(gens, dfa_marked_concat(x, c.alphabet.letter(a), y),
                                    "stratum generators");

  // Close under intersection first; every lattice combination of the
  // generators is then a union of these, so closing the result under unions
  // with the intersection-closed family alone reaches the fixpoint.
  std::vector<Dfa> inter = gens;
  for (size_t i = 0; i < inter.size(); ++i)
    for (size_t j = 0; j < i; ++j)
      add(inter, dfa_intersect(inter[i], inter[j]), "stratum intersections");

  std::vector<Dfa> out = inter;
  const size_t base_count = inter.size();
  for (size_t i = 0; i < out.size(); ++i)
    for (size_t j = 0; j < base_count; ++j)
      add(out, dfa_union(out[i], out[j]), "stratum unions");
  return out;
}

// ---------------------------------------------------------------------------
// Pumping verifiers

bool verify_pumping_1(const LanguageClass& c, int k, const Word& u, int m, int m2,
                      const StratumBudget& budget) {
  c.alphabet.check_word(u);
  const long bound = (1L << (k + 1)) - 1;
  if (m < bound || m2 < bound)
    throw PreconditionViolated("pumping exponents must be at least 2^{k+1}-1 = " +
                               std::to_string(bound) + " (got m=" + std::to_string(m) +
                               ", m'=" + std::to_string(m2) + ")");
  const Word up = repeat(u, period(c));
  return word_leq_k(c, k, repeat(up, m), repeat(up, m2), budget);
}

bool verify_pumping_2(const LanguageClass& c, int k, const Word& u, const Word& v, int m,
                      int m1, int m2, const StratumBudget& budget) {
  c.alphabet.check_word(u);
  c.alphabet.check_word(v);
  const long bound = (1L << (k + 1)) - 1;
  if (m < bound || m1 < bound || m2 < bound)
    throw PreconditionViolated(
        "pumping exponents must be at least 2^{k+1}-1 = " + std::to_string(bound) + " (got m=" +
        std::to_string(m) + ", m1=" + std::to_string(m1) + ", m2=" + std::to_string(m2) + ")");
  const Word up = repeat(u, period(c));
  if (!leq_C(c, up, v))
    throw PreconditionViolated("u^p must be below v in the canonical preorder (u^p = \"" + up +
                               "\", v = \"" + v + "\")");
  return word_leq_k(c, k, repeat(up, m), repeat(up, m1) + v + repeat(up, m2), budget);
}

}  // namespace hier
