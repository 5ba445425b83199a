// verify.cc -- the eleven acceptance checks behind `verify-suite`
//
// Each criterion is self-contained: it rebuilds what it measures, re-verifies
// every witness it receives, and never trusts a cached result from another
// item.  Time limits (criteria 1 and 9) are pinned here, not configurable.
#include "hier/verify.hh"

#include <chrono>
#include <cstdint>
#include <map>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "hier/hierarchy.hh"
#include "hier/logic.hh"
#include "hier/regex.hh"
#include "hier/strata.hh"

namespace hier {

namespace {

const Alphabet& ab_alphabet() {
  static Alphabet a("ab");
  return a;
}

const LanguageClass& st0_class() {
  static LanguageClass c = builtin_basis("st0", ab_alphabet());
  return c;
}

const LanguageClass& dd0_class() {
  static LanguageClass c = builtin_basis("dd0", ab_alphabet());
  return c;
}

const LanguageClass& at_class() {
  static LanguageClass c = builtin_basis("at", ab_alphabet());
  return c;
}

const LanguageClass& wat_class() {
  static LanguageClass c = builtin_basis("wat", ab_alphabet());
  return c;
}

StratumBudget big_budget() {
  StratumBudget b;
  b.type_cap = 120000;
  return b;
}

// The stratum-heavy items pin a 120k type cap; SuiteOptions may lower it,
// trading definite answers for Inconclusive reports.
StratumBudget chosen_budget(const SuiteOptions& opts) {
  StratumBudget b;
  b.type_cap = opts.type_cap ? opts.type_cap : 120000;
  return b;
}

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

// Accumulates checks and remembers the first failure so the report can name
// the exact thing that broke instead of a bare boolean.
struct Probe {
  long checks = 0;
  long indefinite = 0;
  bool pass = true;
  std::string first_failure;
  std::string first_indefinite;

  void expect(bool ok, const std::string& what) {
    ++checks;
    if (!ok && pass) {
      pass = false;
      first_failure = what;
    }
  }

  // Verdict-valued checks: Inconclusive is recorded apart from failure.
  void definite(const StratumVerdict& v, StratumVerdict::Status want, const std::string& what) {
    if (v.status == StratumVerdict::Status::Inconclusive) {
      ++checks;
      ++indefinite;
      if (first_indefinite.empty())
        first_indefinite = what + " (" + std::to_string(v.types_built) + "/" +
                           std::to_string(v.type_cap) + " types built)";
      return;
    }
    expect(v.status == want, what);
  }
};

CriterionResult finish(int id, std::string name, const Probe& p, double secs,
                       const std::string& extra = "") {
  CriterionResult r;
  r.id = id;
  r.name = std::move(name);
  r.seconds = secs;
  if (!p.pass) {
    r.detail = "failed: " + p.first_failure;
    return r;
  }
  if (p.indefinite > 0) {
    r.inconclusive = true;
    r.detail = "inconclusive: " + p.first_indefinite;
    return r;
  }
  r.pass = true;
  std::ostringstream os;
  os << p.checks << " checks";
  if (!extra.empty()) os << "; " << extra;
  r.detail = os.str();
  return r;
}

// --------------------------------------------------------------------------
// 1. a*b* sits outside the first four Pol(dd0) strata, and the documented
//    witness family (u_k = a^{2^{k+1}} b, v_k = u_k-with-a-b-block-doubled)
//    confirms each refutation.  Pinned limit: 60 s for the whole item.

CriterionResult criterion_astar_bstar(const SuiteOptions& opts) {
  const auto t0 = Clock::now();
  Probe p;
  const LanguageClass& dd0 = dd0_class();
  const StratumBudget budget = chosen_budget(opts);
  const Dfa l = compile_regex("a*b*", ab_alphabet());
  for (int k = 0; k <= 3; ++k) {
    const StratumVerdict v = pol_stratum_member(l, dd0, k, budget);
    p.definite(v, StratumVerdict::Status::NotMember,
               "a*b* was not refuted at stratum " + std::to_string(k));
    if (v.witness) {
      const Word& wu = v.witness->first;
      const Word& wv = v.witness->second;
      p.expect(is_member(wu, l) && !is_member(wv, l) && word_leq_k(dd0, k, wu, wv, budget),
               "engine witness failed re-verification at k = " + std::to_string(k));
    }
    const Word a_run = repeat("a", 2 << k);
    const Word b_run = repeat("b", 2 << k);
    const Word u = a_run + "b";
    const Word v2 = a_run + b_run + a_run + "b";
    p.expect(is_member(u, l), "u_" + std::to_string(k) + " fell outside a*b*");
    p.expect(!is_member(v2, l), "v_" + std::to_string(k) + " fell inside a*b*");
    p.expect(word_leq_k(dd0, k, u, v2, budget),
             "documented pair is not ordered at k = " + std::to_string(k));
  }
  const double secs = seconds_since(t0);
  p.expect(secs < 60.0, "runtime exceeded the pinned 60 s limit");
  return finish(1, "a*b* stays outside Pol(dd0) strata 0..3", p, secs);
}

// --------------------------------------------------------------------------
// 2. (a(ab)*b)* escapes BPol(dd0): NotMember at strata 0..2, and the
//    documented pair family x_k = (a w_k b w_k)^{2^{k+1}},
//    y_k = (a w_k a w_k b w_k)^{2^{k+1}} with w_k = (ab)^{2^{k+1}} validates
//    as mutually related words split by the language.  Exact, no tolerance.

CriterionResult criterion_bpol_escape(const SuiteOptions& opts) {
  const auto t0 = Clock::now();
  Probe p;
  const LanguageClass& dd0 = dd0_class();
  const StratumBudget budget = chosen_budget(opts);
  const Dfa kl = compile_regex("(a(ab)*b)*", ab_alphabet());
  for (int k = 0; k <= 2; ++k) {
    const StratumVerdict v = bpol_stratum_member(kl, dd0, k, budget);
    p.definite(v, StratumVerdict::Status::NotMember,
               "(a(ab)*b)* was not refuted at boolean stratum " + std::to_string(k));
    if (v.witness) {
      const Word& wu = v.witness->first;
      const Word& wv = v.witness->second;
      p.expect(is_member(wu, kl) != is_member(wv, kl),
               "engine witness pair is not split by the language at k = " + std::to_string(k));
      p.expect(word_leq_k(dd0, k, wu, wv, budget) && word_leq_k(dd0, k, wv, wu, budget),
               "engine witness pair is not mutually related at k = " + std::to_string(k));
    }
    const Word wk = repeat("ab", 2 << k);
    const Word xk = repeat("a" + wk + "b" + wk, 2 << k);
    const Word yk = repeat("a" + wk + "a" + wk + "b" + wk, 2 << k);
    p.expect(is_member(xk, kl), "x_" + std::to_string(k) + " fell outside the language");
    p.expect(!is_member(yk, kl), "y_" + std::to_string(k) + " fell inside the language");
    p.expect(word_leq_k(dd0, k, xk, yk, budget) && word_leq_k(dd0, k, yk, xk, budget),
             "x_k and y_k are not mutually related at k = " + std::to_string(k));
  }
  return finish(2, "(a(ab)*b)* escapes BPol(dd0) strata 0..2", p, seconds_since(t0));
}

// --------------------------------------------------------------------------
// 3. The classic level expressions evaluate to exactly their target
//    languages: the depth-one expression for (ab)*, the depth-two expression
//    for (a(ab)*b)*, and the level-two expression for (ab)*.

CriterionResult criterion_classics() {
  const auto t0 = Clock::now();
  Probe p;
  const std::map<std::string, std::string> targets = {
      {"dd1", "(ab)*"}, {"dd2", "(a(ab)*b)*"}, {"st2", "(ab)*"}};
  const auto entries = classic_expressions(ab_alphabet());
  p.expect(entries.size() == targets.size(), "unexpected number of classic expressions");
  bool saw_dd1 = false, saw_dd2 = false;
  for (const ClassicExpression& e : entries) {
    const auto it = targets.find(e.name);
    if (it == targets.end()) {
      p.expect(false, "unknown classic entry '" + e.name + "'");
      continue;
    }
    saw_dd1 = saw_dd1 || e.name == "dd1";
    saw_dd2 = saw_dd2 || e.name == "dd2";
    const Dfa want = compile_regex(it->second, ab_alphabet());
    const LanguageClass basis = builtin_basis(e.basis, ab_alphabet());
    p.expect(equivalent(eval_level(e.expr, basis), want),
             e.name + " expression drifted from " + it->second);
    p.expect(equivalent(e.language, want), e.name + " cached language drifted");
  }
  p.expect(saw_dd1 && saw_dd2, "a classic entry is missing");
  return finish(3, "classic level expressions hit their target languages", p,
                seconds_since(t0));
}

// --------------------------------------------------------------------------
// 4. piece_complement(a1..an) equals the complement of A* a1 A* ... an A*
//    for every letter sequence of length <= 4 over {a, b} -- exhaustive.

CriterionResult criterion_piece_complements() {
  const auto t0 = Clock::now();
  Probe p;
  const Alphabet& ab = ab_alphabet();
  const std::vector<Word> pieces = words_upto(ab, 4);
  for (const Word& s : pieces) {
    std::string pattern = ".*";
    for (char ch : s) {
      pattern += ch;
      pattern += ".*";
    }
    const Dfa direct = dfa_complement(compile_regex(pattern, ab));
    p.expect(equivalent(eval_poly(piece_complement(s, ab), wat_class()), direct),
             "piece complement drifted for \"" + s + "\"");
  }
  return finish(4, "piece complements match the pattern complements", p, seconds_since(t0),
                std::to_string(pieces.size()) + " pieces");
}

// --------------------------------------------------------------------------
// 5. pol_intersect_rewrite agrees with the direct product on randomized
//    degree-<=2 monomials over st0 and at.  Factors are drawn from the
//    universal language and every basis member other than A+ (at contains
//    A+ as the union of its three nonempty-content atoms).

CriterionResult criterion_intersections(const SuiteOptions& opts) {
  const unsigned seed = opts.seed;
  const auto t0 = Clock::now();
  Probe p;
  const Alphabet& ab = ab_alphabet();
  const Dfa aplus = dfa_complement(dfa_epsilon(ab));
  const auto pool = [&](const LanguageClass& c) {
    std::vector<std::string> names;
    for (size_t i = 0; i < c.members.size(); ++i)
      if (!equivalent(c.members[i], aplus)) names.push_back(c.member_names[i]);
    return names;
  };
  struct BasisPool {
    const LanguageClass* c;
    std::vector<std::string> names;
  };
  const BasisPool bases[2] = {{&st0_class(), pool(st0_class())},
                              {&at_class(), pool(at_class())}};
  p.expect(bases[1].names.size() + 1 == at_class().members.size(),
           "expected exactly one A+ member inside at");

  std::mt19937 rng(seed);
  int instances = 0;
  for (int i = 0; i < 120; ++i) {
    const BasisPool& b = bases[i % 2];
    const auto rand_mono = [&] {
      const auto pick = [&] {
        return LevelExpr::member(b.names[rng() % b.names.size()], b.c->name);
      };
      Monomial m;
      m.factors.push_back(pick());
      const int degree = static_cast<int>(rng() % 3u);
      for (int j = 0; j < degree; ++j) {
        m.markers.push_back(ab.letter(static_cast<int>(rng() % 2u)));
        m.factors.push_back(pick());
      }
      return m;
    };
    const Monomial m1 = rand_mono();
    const Monomial m2 = rand_mono();
    PolyExpr p1, p2;
    p1.monomials = {m1};
    p2.monomials = {m2};
    const PolyExpr r = pol_intersect_rewrite(m1, m2, *b.c);
    p.expect(r.degree() <= m1.degree() + m2.degree(),
             "degree bound broke at instance " + std::to_string(i));
    p.expect(equivalent(eval_poly(r, *b.c),
                        dfa_intersect(eval_poly(p1, *b.c), eval_poly(p2, *b.c))),
             "rewrite diverged from the direct intersection at instance " + std::to_string(i));
    ++instances;
  }
  p.expect(instances >= 100, "fewer than 100 randomized instances ran");
  return finish(5, "monomial intersections rewrite to equal languages", p, seconds_since(t0),
                std::to_string(instances) + " instances, seed " + std::to_string(seed));
}

// --------------------------------------------------------------------------
// 6. The oracle gate.  Three independent routes to the stratified preorder
//    must agree on every word pair of length <= 5, k <= 2, over st0 and dd0:
//      - the typed route (shared level-1 type monoid),
//      - the literal recursion on words,
//      - membership implication over the materialized stratum itself.
//    Strata 0 and 1 are enumerated outright.  For stratum 2 the implication
//    is computed over its generators: stratum-1 members plus all marked
//    products of stratum-1 members.  Because the enumerated stratum is
//    closed under intersection, each split w = u a v admits canonical
//    minimal factors (the intersection of all stratum-1 members containing
//    u, resp. v), so implication over every product reduces to matching
//    splits under the stratum-1 implication; unions and intersections
//    preserve pointwise implication, which extends the claim from the
//    generators to the full lattice.

CriterionResult criterion_oracle_gate() {
  const auto t0 = Clock::now();
  Probe p;
  const Alphabet& ab = ab_alphabet();
  const std::vector<Word> words = words_upto(ab, 5);
  const size_t n = words.size();
  std::map<Word, size_t> index;
  for (size_t i = 0; i < n; ++i) index[words[i]] = i;
  const StratumBudget big = big_budget();
  std::ostringstream sizes;

  for (const LanguageClass* cp : {&st0_class(), &dd0_class()}) {
    const LanguageClass& c = *cp;
    const std::vector<Dfa> stratum0 = enumerate_stratum(c, 0);
    const std::vector<Dfa> stratum1 = enumerate_stratum(c, 1);
    if (sizes.tellp() > 0) sizes << ", ";
    sizes << c.name << ": |Pol_0| = " << stratum0.size() << ", |Pol_1| = " << stratum1.size();

    // Membership bitset per word over one materialized stratum.
    const auto language_sets = [&](const std::vector<Dfa>& langs) {
      const size_t blocks = (langs.size() + 63) / 64;
      std::vector<std::vector<std::uint64_t>> bits(n, std::vector<std::uint64_t>(blocks, 0));
      for (size_t li = 0; li < langs.size(); ++li)
        for (size_t wi = 0; wi < n; ++wi)
          if (is_member(words[wi], langs[li]))
            bits[wi][li >> 6] |= std::uint64_t{1} << (li & 63);
      return bits;
    };
    const auto bits0 = language_sets(stratum0);
    const auto bits1 = language_sets(stratum1);
    const auto implies = [](const std::vector<std::uint64_t>& x,
                            const std::vector<std::uint64_t>& y) {
      for (size_t i = 0; i < x.size(); ++i)
        if (x[i] & ~y[i]) return false;
      return true;
    };

    std::vector<std::vector<std::uint8_t>> o0(n, std::vector<std::uint8_t>(n, 0));
    auto o1 = o0, o2 = o0;
    for (size_t i = 0; i < n; ++i)
      for (size_t j = 0; j < n; ++j) {
        o0[i][j] = implies(bits0[i], bits0[j]) ? 1 : 0;
        o1[i][j] = implies(bits1[i], bits1[j]) ? 1 : 0;
      }
    for (size_t i = 0; i < n; ++i)
      for (size_t j = 0; j < n; ++j) {
        const Word& w = words[i];
        const Word& w2 = words[j];
        bool ok = o1[i][j] != 0;
        for (size_t a = 0; a < w.size() && ok; ++a) {
          bool found = false;
          for (size_t b = 0; b < w2.size() && !found; ++b) {
            if (w2[b] != w[a]) continue;
            found = o1[index.at(w.substr(0, a))][index.at(w2.substr(0, b))] != 0 &&
                    o1[index.at(w.substr(a + 1))][index.at(w2.substr(b + 1))] != 0;
          }
          ok = found;
        }
        o2[i][j] = ok ? 1 : 0;
      }

    const TypeMonoid tm = build_type_monoid(c, 1, big);
    for (int k = 0; k <= 2; ++k) {
      const auto& oracle = k == 0 ? o0 : k == 1 ? o1 : o2;
      for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j) {
          const bool want = oracle[i][j] != 0;
          const std::string at_pair = " at k = " + std::to_string(k) + " on (\"" + words[i] +
                                      "\", \"" + words[j] + "\") over " + c.name;
          p.expect(word_leq_k(tm, k, words[i], words[j]) == want,
                   "typed route diverged from the lattice oracle" + at_pair);
          p.expect(word_leq_k_literal(c, k, words[i], words[j]) == want,
                   "literal route diverged from the lattice oracle" + at_pair);
        }
    }
  }
  return finish(6, "preorder routes agree with the materialized strata", p, seconds_since(t0),
                sizes.str());
}

// --------------------------------------------------------------------------
// 7. Pumping laws hold across the full parameter grids: units and fillers
//    from {a, b, ab}, k <= 2, every exponent at the bound 2^{k+1} - 1 and
//    two above it, over dd0 and st0 (both period 1).

CriterionResult criterion_pumping_grids() {
  const auto t0 = Clock::now();
  Probe p;
  const Word units[3] = {"a", "b", "ab"};
  for (const LanguageClass* cp : {&dd0_class(), &st0_class()}) {
    const LanguageClass& c = *cp;
    p.expect(period(c) == 1, c.name + " period drifted from 1");
    for (int k = 0; k <= 2; ++k) {
      const int bound = (1 << (k + 1)) - 1;
      const int exps[2] = {bound, bound + 2};
      for (const Word& u : units)
        for (int m : exps)
          for (int m2 : exps)
            p.expect(verify_pumping_1(c, k, u, m, m2),
                     "pumping-1 failed for u = " + u + ", k = " + std::to_string(k) + ", m = " +
                         std::to_string(m) + ", m' = " + std::to_string(m2) + " over " + c.name);
      for (const Word& u : units)
        for (const Word& v : units)
          for (int m : exps)
            for (int m1 : exps)
              for (int m2 : exps)
                p.expect(verify_pumping_2(c, k, u, v, m, m1, m2),
                         "pumping-2 failed for u = " + u + ", v = " + v + ", k = " +
                             std::to_string(k) + " over " + c.name);
    }
  }
  return finish(7, "pumping laws hold on the full parameter grids", p, seconds_since(t0));
}

// --------------------------------------------------------------------------
// 8. Periods: dd0 and st0 sit at 1, the threshold-counting bases att:d sit
//    at d for d <= 4, and every value matches a brute-force search for the
//    least p with s^p = s^{2p} computed by plain table multiplication.
//    att:3 and att:4 run over {a}; their two-letter member lattices outgrow
//    the class budget.

CriterionResult criterion_periods() {
  const auto t0 = Clock::now();
  Probe p;
  const auto slow_power = [](const ClassMonoid& m, int s, int e) {
    int acc = m.unit;
    for (int i = 0; i < e; ++i) acc = m.times(acc, s);
    return acc;
  };
  const auto brute_period = [&](const ClassMonoid& m) {
    for (int candidate = 1;; ++candidate) {
      bool all = true;
      for (int s = 0; s < m.n && all; ++s)
        all = slow_power(m, s, candidate) == slow_power(m, s, 2 * candidate);
      if (all) return candidate;
    }
  };
  struct Row {
    const char* kind;
    const char* letters;
    int want;
  };
  const Row rows[] = {{"dd0", "ab", 1},   {"st0", "ab", 1},   {"att:1", "ab", 1},
                      {"att:1", "a", 1},  {"att:2", "ab", 2}, {"att:2", "a", 2},
                      {"att:3", "a", 3},  {"att:4", "a", 4}};
  for (const Row& r : rows) {
    const LanguageClass c = builtin_basis(r.kind, Alphabet(r.letters));
    const std::string label = std::string(r.kind) + " over {" + r.letters + "}";
    const int got = period(c);
    p.expect(got == r.want,
             label + ": period " + std::to_string(got) + " != " + std::to_string(r.want));
    p.expect(brute_period(class_monoid(c)) == r.want, label + ": brute-force oracle disagreed");
  }
  return finish(8, "class periods match the brute-force idempotent oracle", p,
                seconds_since(t0));
}

// --------------------------------------------------------------------------
// 9. The strictness bundle for dd0 through level 3 re-verifies from scratch:
//    membership pattern, pair lengths (48 and 100 characters at k = 3), and
//    the orderings u_k <= v_k.  Pinned limit: 120 s including the level-2
//    type tables built twice (once inside the bundle, once here).

CriterionResult criterion_strictness(const SuiteOptions& opts) {
  const auto t0 = Clock::now();
  Probe p;
  const StratumBudget budget = chosen_budget(opts);
  try {
    const WitnessBundle b = strictness_witnesses(dd0_class(), 3, budget);
    p.expect(b.basis == "dd0" && !b.augmented && b.period == 1, "bundle header drifted");
    p.expect(b.v_words == std::vector<Word>{"aba", "abba"}, "generator words drifted");
    p.expect(b.pairs.size() == 4, "expected pairs for k = 0..3");
    for (size_t k = 0; k < b.pairs.size(); ++k) {
      const Word& u = b.pairs[k].first;
      const Word& v = b.pairs[k].second;
      const std::string at_k = " at k = " + std::to_string(k);
      p.expect(u.size() == 3u * (2u << k), "u length drifted" + at_k);
      p.expect(v.size() == 2 * u.size() + 4, "v length drifted" + at_k);
      p.expect(!is_member(u, b.l), "u entered the witness language" + at_k);
      p.expect(is_member(v, b.l), "v left the witness language" + at_k);
      p.expect(word_leq_k(dd0_class(), static_cast<int>(k), u, v, budget),
               "pair unordered" + at_k);
    }
    const double secs = seconds_since(t0);
    p.expect(secs < 120.0, "runtime exceeded the pinned 120 s limit");
  } catch (const BudgetExceeded& e) {
    ++p.indefinite;
    p.first_indefinite = std::string("bundle construction ran out of budget: ") + e.what();
  }
  return finish(9, "strictness witnesses re-verify through level 3", p, seconds_since(t0),
                "|u_3| = 48, |v_3| = 100");
}

// --------------------------------------------------------------------------
// 10. Logic round trip.  A catalog of sentences (existential, universal,
//     two-block, and boolean shapes, including the derived +1/min/max/
//     epsilon forms that only parse under dd0) compiles to automata that
//     agree with semantic evaluation on every word of length <= 8; five
//     sentence-level marked concatenations are checked the same way.

CriterionResult criterion_logic_round_trip() {
  const auto t0 = Clock::now();
  Probe p;
  const Alphabet& ab = ab_alphabet();
  const LanguageClass& st0 = st0_class();
  const LanguageClass& dd0 = dd0_class();
  const std::vector<Word> words = words_upto(ab, 8);

  const char* catalog[] = {
      "exists x. a(x)",
      "forall x. a(x)",
      "exists x. forall y. (a(y) | b(x))",
      "(exists x. a(x)) & !(exists y. b(y))",
      "exists x. exists y. (I{Astar}(x,y) & a(x) & a(y))",
      "exists x. !a(x)",
      "forall x. exists y. (I{Astar}(x,y) | I{Astar}(y,x))",
      "N{Aplus}",
      "exists x. (min(x) & a(x))",
      "exists x. (max(x) & b(x))",
      "exists x. exists y. (+1(x,y) & a(x) & a(y))",
      "epsilon | (exists x. (min(x) & a(x)))",
      "forall x. forall y. (!(+1(x,y)) | !a(x) | !b(y))",
      "exists x. forall y. (I{Astar}(y,x) | eq(x,y))",
  };
  int compiled = 0;
  int derived_forms = 0;
  for (const char* text : catalog) {
    for (const LanguageClass* cls : {&st0, &dd0}) {
      FormulaPtr f;
      try {
        f = parse_formula(text, *cls);
      } catch (const UnknownPredicate&) {
        continue;  // needs the richer signature
      } catch (const UnknownLanguage&) {
        continue;
      }
      const CompileResult r = compile_sentence(f, *cls);
      ++compiled;
      const std::string t(text);
      if (cls == &dd0 && (t.find("min(") != std::string::npos ||
                          t.find("max(") != std::string::npos ||
                          t.find("+1(") != std::string::npos ||
                          t.find("epsilon") != std::string::npos))
        ++derived_forms;
      bool agreed = true;
      Word bad;
      for (const Word& w : words)
        if (evaluate(f, w) != is_member(w, r.language)) {
          agreed = false;
          bad = w;
          break;
        }
      p.expect(agreed, std::string("'") + text + "' under " + cls->name +
                           " diverged from its automaton at \"" + bad + "\"");
    }
  }
  p.expect(compiled >= 10, "catalog shrank below ten compiled sentences");
  p.expect(derived_forms >= 4, "derived dd0 forms fell out of the catalog");

  // Marked concatenations at the sentence level.
  const Dfa any_a = compile_regex(".*a.*", ab);
  const Dfa aplus = dfa_complement(dfa_epsilon(ab));
  const FormulaPtr all_st = parse_formula("N{Astar}", st0);
  const FormulaPtr all_dd = parse_formula("N{Astar}", dd0);
  struct Pair {
    FormulaPtr sentence;
    Dfa want;
    const char* label;
  };
  const Pair pairs[] = {
      {marked_concat_sentence(all_st, 'a', all_st, st0),
       dfa_marked_concat(dfa_universal(ab), 'a', dfa_universal(ab)), "A* a A*"},
      {marked_concat_sentence(parse_formula("N{Eps}", dd0), 'a',
                              parse_formula("exists x. a(x)", dd0), dd0),
       dfa_marked_concat(dfa_epsilon(ab), 'a', any_a), "{eps} a (some a)"},
      {marked_concat_sentence(parse_formula("exists x. (max(x) & b(x))", dd0), 'a', all_dd, dd0),
       dfa_marked_concat(compile_regex(".*b", ab), 'a', dfa_universal(ab)), "(ends b) a A*"},
      {marked_concat_sentence(all_dd, 'b', parse_formula("exists x. (min(x) & a(x))", dd0), dd0),
       dfa_marked_concat(dfa_universal(ab), 'b', compile_regex("a.*", ab)), "A* b (starts a)"},
      {marked_concat_sentence(parse_formula("N{Aplus}", dd0), 'a',
                              parse_formula("N{Aplus}", dd0), dd0),
       dfa_marked_concat(aplus, 'a', aplus), "A+ a A+"},
  };
  for (const Pair& pr : pairs) {
    bool agreed = true;
    Word bad;
    for (const Word& w : words)
      if (evaluate(pr.sentence, w) != is_member(w, pr.want)) {
        agreed = false;
        bad = w;
        break;
      }
    p.expect(agreed, std::string("marked concatenation ") + pr.label + " diverged at \"" +
                         bad + "\"");
  }
  return finish(10, "compiled sentences agree with semantic evaluation", p, seconds_since(t0),
                std::to_string(compiled) + " sentence/signature instances");
}

// --------------------------------------------------------------------------
// 11. {eps} sits outside every Pol(st0) stratum k <= 3 while A+ enters at
//     stratum 1.

CriterionResult criterion_epsilon_gap(const SuiteOptions& opts) {
  const auto t0 = Clock::now();
  Probe p;
  const LanguageClass& st0 = st0_class();
  const StratumBudget budget = chosen_budget(opts);
  const Dfa eps = dfa_epsilon(ab_alphabet());
  for (int k = 0; k <= 3; ++k) {
    const StratumVerdict v = pol_stratum_member(eps, st0, k, budget);
    p.definite(v, StratumVerdict::Status::NotMember,
               "{eps} was not refuted at stratum " + std::to_string(k));
    if (v.witness) {
      const Word& wu = v.witness->first;
      const Word& wv = v.witness->second;
      p.expect(is_member(wu, eps) && !is_member(wv, eps) && word_leq_k(st0, k, wu, wv, budget),
               "engine witness failed re-verification at k = " + std::to_string(k));
    }
  }
  const Dfa aplus = dfa_complement(eps);
  p.definite(pol_stratum_member(aplus, st0, 1, budget), StratumVerdict::Status::Member,
             "A+ missed membership at stratum 1");
  return finish(11, "{eps} escapes Pol(st0) while A+ enters at stratum 1", p,
                seconds_since(t0));
}

}  // namespace

CriterionResult run_acceptance_criterion(int id, const SuiteOptions& opts) {
  switch (id) {
    case 1: return criterion_astar_bstar(opts);
    case 2: return criterion_bpol_escape(opts);
    case 3: return criterion_classics();
    case 4: return criterion_piece_complements();
    case 5: return criterion_intersections(opts);
    case 6: return criterion_oracle_gate();
    case 7: return criterion_pumping_grids();
    case 8: return criterion_periods();
    case 9: return criterion_strictness(opts);
    case 10: return criterion_logic_round_trip();
    case 11: return criterion_epsilon_gap(opts);
    default: break;
  }
  throw std::out_of_range("acceptance criterion id must be 1..11");
}

std::vector<CriterionResult> run_acceptance_suite(const SuiteOptions& opts) {
  std::vector<CriterionResult> out;
  out.reserve(11);
  for (int id = 1; id <= 11; ++id) out.push_back(run_acceptance_criterion(id, opts));
  return out;
}

nlohmann::ordered_json suite_to_json(const std::vector<CriterionResult>& results) {
  nlohmann::ordered_json items = nlohmann::ordered_json::array();
  bool all = true;
  bool indefinite = false;
  for (const CriterionResult& r : results) {
    all = all && r.pass;
    indefinite = indefinite || r.inconclusive;
    items.push_back({{"id", r.id},
                     {"name", r.name},
                     {"pass", r.pass},
                     {"inconclusive", r.inconclusive},
                     {"seconds", r.seconds},
                     {"detail", r.detail}});
  }
  return nlohmann::ordered_json{{"pass", all}, {"inconclusive", indefinite}, {"criteria", items}};
}

}  // namespace hier
