// strata_test.cc -- type monoids, the stratified preorders, stratum verdicts,
// the brute-force stratum enumerator, and the pumping verifiers.
//
// The expected registry sizes, witnesses and stratum counts in this file were
// produced by the literal recursive definition of the preorder (see the
// "routes agree" case) and frozen; the typed engine must keep reproducing
// them exactly.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "hier/dfa.hh"
#include "hier/errors.hh"
#include "hier/language_class.hh"
#include "hier/regex.hh"
#include "hier/strata.hh"

using namespace hier;

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

Dfa rx(const std::string& pattern) { return compile_regex(pattern, ab_alphabet()); }

// dd0 level 2 has 55,311 canonical types; st0 level 3 has 50,864.  Both are
// above the default cap, so the level-2/3 rows run with this raised budget.
StratumBudget big_budget() {
  StratumBudget b;
  b.type_cap = 120000;
  return b;
}

// Shared monoids; building them once keeps the suite fast.
const TypeMonoid& dd0_depth1() {
  static TypeMonoid tm(dd0_class(), 1);
  return tm;
}
const TypeMonoid& dd0_depth2() {
  static TypeMonoid tm(dd0_class(), 2, big_budget());
  return tm;
}
const TypeMonoid& st0_depth2() {
  static TypeMonoid tm(st0_class(), 2);
  return tm;
}

// Every refutation must come with a witness that actually refutes: w inside,
// w' outside, w below w' at the claimed level.
void check_refutation(const Dfa& l, const LanguageClass& c, const StratumVerdict& v,
                      const StratumBudget& budget = {}) {
  REQUIRE(v.status == StratumVerdict::Status::NotMember);
  REQUIRE(v.witness.has_value());
  const Word& w = v.witness->first;
  const Word& w2 = v.witness->second;
  CHECK(is_member(w, l) != is_member(w2, l));
  CHECK(is_member(w, l));
  CHECK(word_leq_k(c, v.k, w, w2, budget));
}

void check_mutual_refutation(const Dfa& l, const LanguageClass& c, const StratumVerdict& v,
                             const StratumBudget& budget = {}) {
  check_refutation(l, c, v, budget);
  CHECK(word_leq_k(c, v.k, v.witness->second, v.witness->first, budget));
}

void check_inseparability(const Dfa& l1, const Dfa& l2, const LanguageClass& c,
                          const StratumVerdict& v, const StratumBudget& budget = {}) {
  REQUIRE(v.status == StratumVerdict::Status::NotSeparable);
  REQUIRE(v.witness.has_value());
  CHECK(is_member(v.witness->first, l1));
  CHECK(is_member(v.witness->second, l2));
  CHECK(word_leq_k(c, v.k, v.witness->first, v.witness->second, budget));
}

bool contains_lang(const std::vector<Dfa>& list, const Dfa& l) {
  Dfa cl = canonicalize(l);
  std::string key = dfa_key(cl);
  for (const Dfa& m : list)
    if (dfa_key(m) == key) return true;
  return false;
}

}  // namespace

TEST_CASE("type monoid registries and algebraic laws") {
  const TypeMonoid& d1 = dd0_depth1();
  const TypeMonoid& d2 = dd0_depth2();
  const TypeMonoid& s2 = st0_depth2();

  // Frozen registry sizes per basis and level.
  CHECK(s2.size(0) == 1);
  CHECK(s2.size(1) == 4);
  CHECK(s2.size(2) == 68);
  CHECK(d1.size(0) == 2);
  CHECK(d1.size(1) == 19);
  CHECK(d2.size(2) == 55311);
  {
    TypeMonoid at1(at_class(), 1);
    CHECK(at1.size(0) == 4);
    CHECK(at1.size(1) == 97);
  }
  {
    StratumBudget b;
    b.type_cap = 60000;
    TypeMonoid s3(st0_class(), 3, b);
    CHECK(s3.size(3) == 50864);
    CHECK(s3.total_types() == 1u + 4u + 68u + 50864u);
  }

  // The default cap is below the dd0 level-2 registry; the constructor must
  // refuse rather than truncate, and must say which level overflowed.
  try {
    TypeMonoid overflow(dd0_class(), 2);
    FAIL("level-2 build under the default cap should exhaust the budget");
  } catch (const BudgetExceeded& e) {
    CHECK(e.level == 2);
    CHECK(e.reached > 50000u);
  }

  // Monoid laws on the closed registries.  Associativity and unit laws hold
  // structurally because canonicalization is confluent; a violation here
  // means the antichain quotient broke.
  for (const TypeMonoid* tm : {&d1, &s2}) {
    for (int level = 0; level <= 2 && level <= tm->k_levels(); ++level) {
      int n = tm->size(level);
      int e = tm->unit(level);
      for (int s = 0; s < n; ++s) {
        CHECK(tm->mult(level, e, s) == s);
        CHECK(tm->mult(level, s, e) == s);
      }
      if (n <= 80) {
        for (int s = 0; s < n; ++s)
          for (int t = 0; t < n; ++t)
            for (int u = 0; u < n; ++u)
              CHECK(tm->mult(level, tm->mult(level, s, t), u) ==
                    tm->mult(level, s, tm->mult(level, t, u)));
      }
    }
  }

  // Antisymmetry: distinct canonical types are never mutually below each
  // other (this is what makes type equality the same as mutual ~_k).
  for (const TypeMonoid* tm : {&d1, &s2}) {
    for (int level = 1; level <= tm->k_levels(); ++level) {
      int n = tm->size(level);
      for (int s = 0; s < n; ++s)
        for (int t = 0; t < n; ++t)
          if (s != t) CHECK(!(tm->leq(level, s, t) && tm->leq(level, t, s)));
    }
  }

  // The preorder is a precongruence at the type level.
  {
    int n = d1.size(1);
    for (int s = 0; s < n; ++s)
      for (int t = 0; t < n; ++t) {
        if (!d1.leq(1, s, t)) continue;
        for (int u = 0; u < n; ++u) {
          CHECK(d1.leq(1, d1.mult(1, s, u), d1.mult(1, t, u)));
          CHECK(d1.leq(1, d1.mult(1, u, s), d1.mult(1, u, t)));
        }
      }
  }

  // type_of folds letters through mult; reps invert it.
  for (const TypeMonoid* tm : {&d1, &s2}) {
    for (int level = 0; level <= tm->k_levels(); ++level) {
      CHECK(tm->type_of(level, "") == tm->unit(level));
      for (const Word& w : words_upto(ab_alphabet(), 4)) {
        int t = tm->unit(level);
        for (char ch : w)
          t = tm->mult(level, t, tm->letter_type(level, ab_alphabet().index(ch)));
        CHECK(tm->type_of(level, w) == t);
      }
      int n = tm->size(level);
      for (int t = 0; t < n; ++t) CHECK(tm->type_of(level, tm->rep(level, t)) == t);
    }
  }

  // Level-0 types remember exactly the membership vector.
  for (const Word& w : {Word(""), Word("a"), Word("ab"), Word("bba")}) {
    CHECK(d1.type_vec(0, d1.type_of(0, w)) == membership_vector(dd0_class(), w));
    CHECK(d1.type_vec(1, d1.type_of(1, w)) == membership_vector(dd0_class(), w));
  }
}

TEST_CASE("typed and literal preorder routes agree") {
  // The mandatory cross-check: the type-monoid route must match the literal
  // recursive definition on every pair.  Exhaustive to length 4, randomized
  // to length 7.
  std::vector<Word> corpus = words_upto(ab_alphabet(), 4);

  for (const LanguageClass* c : {&st0_class(), &dd0_class()}) {
    const TypeMonoid& tm = (c == &st0_class()) ? st0_depth2() : dd0_depth1();
    for (int k = 0; k <= 2; ++k) {
      int mismatches = 0;
      for (const Word& w : corpus)
        for (const Word& w2 : corpus)
          if (word_leq_k(tm, k, w, w2) != word_leq_k_literal(*c, k, w, w2)) ++mismatches;
      CHECK(mismatches == 0);
    }
  }

  std::mt19937 rng(20240817);
  std::vector<Word> pool = words_upto(ab_alphabet(), 7);
  for (int i = 0; i < 150; ++i) {
    const Word& w = pool[rng() % pool.size()];
    const Word& w2 = pool[rng() % pool.size()];
    for (int k = 1; k <= 2; ++k) {
      CHECK(word_leq_k(dd0_depth1(), k, w, w2) == word_leq_k_literal(dd0_class(), k, w, w2));
      CHECK(word_leq_k(st0_depth2(), k, w, w2) == word_leq_k_literal(st0_class(), k, w, w2));
    }
  }

  // The budget-free entry point picks a route itself; it must agree too.
  CHECK(word_leq_k(dd0_class(), 2, "ab", "aabb") == word_leq_k_literal(dd0_class(), 2, "ab", "aabb"));
  CHECK(word_leq_k(dd0_class(), 0, "a", "ab") == leq_C(dd0_class(), "a", "ab"));
}

TEST_CASE("stratified preorder: base case, refinement, compatibility") {
  std::vector<Word> corpus = words_upto(ab_alphabet(), 4);

  // Level 0 is the canonical preorder of the class.
  for (const LanguageClass* c : {&st0_class(), &dd0_class(), &at_class()})
    for (const Word& w : corpus)
      for (const Word& w2 : corpus)
        CHECK(word_leq_k(*c, 0, w, w2) == leq_C(*c, w, w2));

  // Each level refines the previous one.
  const TypeMonoid& tm = dd0_depth1();
  for (const Word& w : corpus)
    for (const Word& w2 : corpus) {
      if (word_leq_k(tm, 2, w, w2)) CHECK(word_leq_k(tm, 1, w, w2));
      if (word_leq_k(tm, 1, w, w2)) CHECK(word_leq_k(tm, 0, w, w2));
    }

  // Compatibility with concatenation, on the pairs where the relation holds.
  std::vector<Word> small = words_upto(ab_alphabet(), 3);
  for (int k = 1; k <= 2; ++k)
    for (const Word& w : small)
      for (const Word& w2 : small) {
        if (!word_leq_k(tm, k, w, w2)) continue;
        for (const Word& x : {Word("a"), Word("ab")}) {
          CHECK(word_leq_k(tm, k, w + x, w2 + x));
          CHECK(word_leq_k(tm, k, x + w, x + w2));
        }
      }
}

TEST_CASE("stratified preorder: the one-sided example family") {
  // u_k = a^{2^{k+1}} b sits below v_k = a^{2^{k+1}} b^{2^{k+1}} a^{2^{k+1}} b
  // at level k over dd0, and the relation is strict for k >= 1.
  for (int k = 0; k <= 3; ++k) {
    int m = 1 << (k + 1);
    Word u = repeat("a", m) + "b";
    Word v = repeat("a", m) + repeat("b", m) + repeat("a", m) + "b";
    StratumBudget b = big_budget();
    CHECK(word_leq_k(dd0_class(), k, u, v, b));
    bool reverse = word_leq_k(dd0_class(), k, v, u, b);
    CHECK(reverse == (k == 0));
  }
}

TEST_CASE("polynomial stratum membership: refutations over dd0") {
  Dfa l = rx("a*b*");

  // a*b* escapes every polynomial stratum over dd0.  Levels 0 and 1 are
  // settled by the type tables; levels 2 and 3 exceed the default budget and
  // must be refuted by the pumping fallback.
  auto v0 = pol_stratum_member(l, dd0_class(), 0);
  check_refutation(l, dd0_class(), v0);
  CHECK(v0.witness->first == "a");
  CHECK(v0.witness->second == "ba");

  auto v1 = pol_stratum_member(l, dd0_class(), 1);
  check_refutation(l, dd0_class(), v1);
  CHECK(v1.witness->first == "aa");
  CHECK(v1.witness->second == "aba");

  auto v2 = pol_stratum_member(l, dd0_class(), 2);
  check_refutation(l, dd0_class(), v2, big_budget());
  CHECK(v2.witness->first == repeat("a", 8));
  CHECK(v2.witness->second == repeat("a", 8) + "b" + repeat("a", 8));

  auto v3 = pol_stratum_member(l, dd0_class(), 3);
  check_refutation(l, dd0_class(), v3, big_budget());
  CHECK(v3.witness->first == repeat("a", 16));
  CHECK(v3.witness->second == repeat("a", 16) + "b" + repeat("a", 16));

  // With a raised budget, level 2 is settled by the exact type scan instead;
  // the verdict must not change.
  auto v2x = pol_stratum_member(l, dd0_class(), 2, big_budget());
  check_refutation(l, dd0_class(), v2x, big_budget());

  // The documented witness family for this fact: u_k in a*b*, v_k outside,
  // u_k below v_k at level k -- each pair independently refutes level k.
  for (int k = 0; k <= 3; ++k) {
    int m = 1 << (k + 1);
    Word u = repeat("a", m) + "b";
    Word v = repeat("a", m) + repeat("b", m) + repeat("a", m) + "b";
    CHECK(is_member(u, l));
    CHECK(!is_member(v, l));
    CHECK(word_leq_k(dd0_class(), k, u, v, big_budget()));
  }
}

TEST_CASE("polynomial stratum membership: members and the enumeration oracle") {
  // Basis members are already in stratum 0.
  for (const Dfa& m : dd0_class().members)
    CHECK(pol_stratum_member(m, dd0_class(), 0).status == StratumVerdict::Status::Member);

  // A+ = union of the two letter monomials, so it appears at level 1 over st0.
  Dfa aplus_lang = dfa_complement(dfa_epsilon(ab_alphabet()));
  CHECK(pol_stratum_member(aplus_lang, st0_class(), 1).status == StratumVerdict::Status::Member);
  CHECK(pol_stratum_member(rx(".*a.*"), st0_class(), 1).status == StratumVerdict::Status::Member);

  // Oracle agreement: the engine's level-1 verdict over st0 must match the
  // materialized stratum exactly, on a catalog straddling the boundary.
  std::vector<Dfa> stratum1 = enumerate_stratum(st0_class(), 1);
  CHECK(stratum1.size() == 6);
  for (const char* member : {".*a.*", ".*b.*", ".*a.*b.*|.*b.*a.*"})
    CHECK(contains_lang(stratum1, rx(member)));
  CHECK(contains_lang(stratum1, dfa_empty(ab_alphabet())));
  CHECK(contains_lang(stratum1, dfa_universal(ab_alphabet())));
  CHECK(contains_lang(stratum1, aplus_lang));

  struct Row {
    const char* pattern;
    const char* expect_w;
    const char* expect_w2;
  };
  // Languages outside the stratum, with their frozen shortest witnesses.
  for (const Row& row : {Row{"_", "", "a"}, Row{"a*", "", "b"}, Row{"(ab)*", "", "a"},
                         Row{"a.*", "a", "ba"}, Row{".*a", "a", "ab"},
                         Row{".*ab.*", "ab", "ba"}, Row{"a*b*", "", "ba"}}) {
    Dfa l = rx(row.pattern);
    CHECK(!contains_lang(stratum1, l));
    auto v = pol_stratum_member(l, st0_class(), 1);
    check_refutation(l, st0_class(), v);
    CHECK(v.witness->first == row.expect_w);
    CHECK(v.witness->second == row.expect_w2);
  }
  // Languages inside it get Member verdicts.
  for (const Dfa& m : stratum1)
    CHECK(pol_stratum_member(m, st0_class(), 1).status == StratumVerdict::Status::Member);

  // Verdicts are monotone in k: members of stratum 1 stay members at 2.
  CHECK(pol_stratum_member(aplus_lang, st0_class(), 2).status ==
        StratumVerdict::Status::Member);
}

TEST_CASE("polynomial stratum membership over the alphabet-testable basis") {
  // a*b* is not even in stratum 0 over at: ab and ba have equal content.
  Dfa l = rx("a*b*");
  auto v = pol_stratum_member(l, at_class(), 0);
  check_refutation(l, at_class(), v);
  CHECK(v.witness->first == "ab");
  CHECK(v.witness->second == "ba");
}

TEST_CASE("stratum enumeration: closure laws and the big dd0 stratum") {
  // Stratum 0 over st0 is the basis itself.
  std::vector<Dfa> s0 = enumerate_stratum(st0_class(), 0);
  CHECK(s0.size() == 2);
  CHECK(contains_lang(s0, dfa_empty(ab_alphabet())));
  CHECK(contains_lang(s0, dfa_universal(ab_alphabet())));

  // Stratum 1 over st0 is lattice-closed.
  std::vector<Dfa> s1 = enumerate_stratum(st0_class(), 1);
  REQUIRE(s1.size() == 6);
  for (const Dfa& x : s1)
    for (const Dfa& y : s1) {
      CHECK(contains_lang(s1, dfa_union(x, y)));
      CHECK(contains_lang(s1, dfa_intersect(x, y)));
    }

  // The frozen size of the first dd0 stratum, and spot agreement with the
  // verdict engine on both sides of the membership boundary.
  std::vector<Dfa> d1 = enumerate_stratum(dd0_class(), 1);
  CHECK(d1.size() == 10368);
  CHECK(contains_lang(d1, dfa_complement(dfa_epsilon(ab_alphabet()))));
  CHECK(!contains_lang(d1, rx("a*b*")));
  std::mt19937 rng(7);
  for (int i = 0; i < 8; ++i) {
    const Dfa& m = d1[rng() % d1.size()];
    CHECK(pol_stratum_member(m, dd0_class(), 1).status == StratumVerdict::Status::Member);
  }

  // The enumerator refuses to silently truncate.
  CHECK_THROWS_AS(enumerate_stratum(dd0_class(), 1, 100), BudgetExceeded);
  CHECK_THROWS_AS(enumerate_stratum(st0_class(), 2, 500), BudgetExceeded);
}

TEST_CASE("boolean closure membership over dd0") {
  StratumBudget big = big_budget();

  // (ab)* sits outside the boolean closure at levels 0 and 1 but inside at
  // level 2 (the dot-depth-one expression for it uses level-2 monomials).
  Dfa abstar = rx("(ab)*");
  auto v0 = bpol_stratum_member(abstar, dd0_class(), 0);
  check_mutual_refutation(abstar, dd0_class(), v0);
  CHECK(v0.witness->first == "ab");
  CHECK(v0.witness->second == "a");

  auto v1 = bpol_stratum_member(abstar, dd0_class(), 1);
  check_mutual_refutation(abstar, dd0_class(), v1);
  CHECK(v1.witness->first == "abab");
  CHECK(v1.witness->second == "aabb");

  auto v2 = bpol_stratum_member(abstar, dd0_class(), 2, big);
  CHECK(v2.status == StratumVerdict::Status::Member);
  // Independent corroboration: no mutually equivalent pair of length <= 6
  // disagrees about (ab)* at level 2.
  {
    const TypeMonoid& tm = dd0_depth1();
    std::vector<Word> pool = words_upto(ab_alphabet(), 6);
    int collisions = 0;
    for (const Word& w : pool)
      for (const Word& w2 : pool) {
        if (is_member(w, abstar) == is_member(w2, abstar)) continue;
        if (word_leq_k(tm, 2, w, w2) && word_leq_k(tm, 2, w2, w)) ++collisions;
      }
    CHECK(collisions == 0);
  }

  // K = (a(ab)*b)* stays outside through level 2.
  Dfa k_lang = rx("(a(ab)*b)*");
  auto k0 = bpol_stratum_member(k_lang, dd0_class(), 0);
  check_mutual_refutation(k_lang, dd0_class(), k0);
  CHECK(k0.witness->first == "ab");
  CHECK(k0.witness->second == "a");

  auto k1 = bpol_stratum_member(k_lang, dd0_class(), 1);
  check_mutual_refutation(k_lang, dd0_class(), k1);
  CHECK(k1.witness->first == "aabb");
  CHECK(k1.witness->second == "aaabb");

  auto k2 = bpol_stratum_member(k_lang, dd0_class(), 2, big);
  check_mutual_refutation(k_lang, dd0_class(), k2, big);
  CHECK(k2.witness->first == "aabababbaabb");
  CHECK(k2.witness->second == "aabbababbaabb");

  // Boolean-closure members at level 0: the basis itself.
  CHECK(bpol_stratum_member(dfa_complement(dfa_epsilon(ab_alphabet())), dd0_class(), 0).status ==
        StratumVerdict::Status::Member);
}

TEST_CASE("boolean closure membership: scaling witness family") {
  // The classical scaling family for K = (a(ab)*b)*: with m = 2^{k+1} and
  // w = (ab)^m, the words x = (a w b w)^m and y = (a w a w b w)^m are
  // mutually equivalent at level k yet disagree about K.
  Dfa k_lang = rx("(a(ab)*b)*");
  for (int k = 1; k <= 2; ++k) {
    int m = 1 << (k + 1);
    Word w = repeat("ab", m);
    Word x = repeat("a" + w + "b" + w, m);
    Word y = repeat("a" + w + "a" + w + "b" + w, m);
    CHECK(is_member(x, k_lang));
    CHECK(!is_member(y, k_lang));
    const TypeMonoid& tm = (k == 1) ? dd0_depth1() : dd0_depth2();
    CHECK(tm.type_of(k, x) == tm.type_of(k, y));
    CHECK(word_leq_k(tm, k, x, y));
    CHECK(word_leq_k(tm, k, y, x));
  }
}

TEST_CASE("boolean closure membership over threshold-counting bases") {
  // Letter counting with any threshold cannot see alternation order.
  for (const char* kind : {"att:1", "att:2"}) {
    LanguageClass c = builtin_basis(kind, ab_alphabet());
    Dfa abstar = rx("(ab)*");
    auto v = bpol_stratum_member(abstar, c, 0);
    check_mutual_refutation(abstar, c, v);
    CHECK(v.witness->first == "ab");
    CHECK(v.witness->second == "ba");
  }

  // Over st0 every word looks alike at level 0, so the empty word collides
  // with the letter a.
  Dfa abstar = rx("(ab)*");
  auto v = bpol_stratum_member(abstar, st0_class(), 0);
  check_mutual_refutation(abstar, st0_class(), v);
  CHECK(v.witness->first == "");
  CHECK(v.witness->second == "a");
}

TEST_CASE("polynomial stratum separability") {
  Dfa aplus = rx("aa*");
  Dfa bplus = rx("bb*");

  // Over st0, a+ and b+ are inseparable at level 0 (all nonempty words are
  // equivalent) and separable at level 1.
  auto v0 = pol_stratum_separable(aplus, bplus, st0_class(), 0);
  check_inseparability(aplus, bplus, st0_class(), v0);
  CHECK(v0.witness->first == "a");
  CHECK(v0.witness->second == "b");

  auto v1 = pol_stratum_separable(aplus, bplus, st0_class(), 1);
  REQUIRE(v1.status == StratumVerdict::Status::Separable);
  REQUIRE(v1.separator.has_value());
  const Dfa& sep = *v1.separator;
  CHECK(is_empty_lang(dfa_minus(aplus, sep)));       // L1 inside
  CHECK(is_empty_lang(dfa_intersect(sep, bplus)));   // disjoint from L2
  CHECK(pol_stratum_member(sep, st0_class(), 1).status == StratumVerdict::Status::Member);

  // The ascending search stops at the first separable level.
  auto sr = pol_separability_search(aplus, bplus, st0_class(), 3);
  CHECK(sr.first_separable == 1);
  REQUIRE(sr.per_k.size() == 2);
  CHECK(sr.per_k[0].status == StratumVerdict::Status::NotSeparable);
  CHECK(sr.per_k[1].status == StratumVerdict::Status::Separable);

  // Over at the level-0 separator is a+ itself: the upper set of the
  // content-{a} type contains exactly the content-{a} words.
  auto va = pol_stratum_separable(aplus, bplus, at_class(), 0);
  REQUIRE(va.status == StratumVerdict::Status::Separable);
  REQUIRE(va.separator.has_value());
  CHECK(equivalent(*va.separator, aplus));
  CHECK(in_class(at_class(), *va.separator));

  // Content-equal languages with opposite alternation are inseparable over at.
  Dfa l1 = rx("aa*bb*");
  Dfa l2 = rx("bb*aa*");
  auto vc = pol_stratum_separable(l1, l2, at_class(), 0);
  check_inseparability(l1, l2, at_class(), vc);
  CHECK(vc.witness->first == "ab");
  CHECK(vc.witness->second == "ba");
}

TEST_CASE("polynomial stratum separability: the two-generator factor family") {
  // V = {aba, abba}; inside V+, the words avoiding the factor abba cannot be
  // separated from those containing it at any level k <= 3.  Levels 0 and 1
  // are settled by the type tables; levels 2 and 3 exceed the default budget
  // and fall to the pumping route, whose frozen witnesses scale as
  // (aba)^{2^{k+1}} against (aba)^{2^{k+1}} abba (aba)^{2^{k+1}}.
  Dfa vplus = dfa_plus(dfa_from_words(ab_alphabet(), {"aba", "abba"}));
  Dfa with_factor = dfa_intersect(vplus, rx(".*abba.*"));
  Dfa without_factor = dfa_minus(vplus, rx(".*abba.*"));

  for (int k = 0; k <= 3; ++k) {
    auto v = pol_stratum_separable(without_factor, with_factor, dd0_class(), k);
    check_inseparability(without_factor, with_factor, dd0_class(), v, big_budget());
    if (k <= 1) {
      CHECK(v.witness->first == "aba");
      CHECK(v.witness->second == "abba");
    } else {
      int m = 1 << (k + 1);
      CHECK(v.witness->first == repeat("aba", m));
      CHECK(v.witness->second == repeat("aba", m) + "abba" + repeat("aba", m));
    }
  }
}

TEST_CASE("pumping verifiers") {
  // One-sided pumping: x u^{pm} y and x u^{pm'} y are mutually equivalent at
  // level k once both exponents reach 2^{k+1}-1.  The laws must hold for
  // every instance meeting the bounds.
  CHECK(verify_pumping_1(dd0_class(), 1, "a", 3, 7));
  for (const LanguageClass* c : {&st0_class(), &dd0_class()})
    for (int k = 0; k <= 2; ++k) {
      int bound = (1 << (k + 1)) - 1;
      for (const Word& u : {Word("a"), Word("b"), Word("ab"), Word("ba"), Word("aab")})
        for (int m = bound; m <= bound + 2; ++m)
          for (int m2 = bound; m2 <= bound + 2; ++m2)
            CHECK(verify_pumping_1(*c, k, u, m, m2));
    }

  // Exponents below the bound are rejected, not evaluated.
  CHECK_THROWS_AS(verify_pumping_1(dd0_class(), 1, "a", 2, 7), PreconditionViolated);
  CHECK_THROWS_AS(verify_pumping_1(dd0_class(), 2, "ab", 7, 6), PreconditionViolated);
  try {
    verify_pumping_1(dd0_class(), 1, "a", 1, 1);
    FAIL("bound check missing");
  } catch (const PreconditionViolated& e) {
    CHECK(std::string(e.what()).find("2^{k+1}-1") != std::string::npos);
  }

  // Two-sided pumping: inserting v above u^p between pumped blocks only moves
  // the word upward.
  CHECK(verify_pumping_2(dd0_class(), 1, "aba", "abba", 3, 3, 3));
  for (int k = 0; k <= 2; ++k) {
    int bound = (1 << (k + 1)) - 1;
    CHECK(verify_pumping_2(dd0_class(), k, "aba", "abba", bound, bound, bound + 1));
    CHECK(verify_pumping_2(dd0_class(), k, "a", "aa", bound, bound + 1, bound));
  }

  // The side condition u^p below v is checked up front: over at, a is not
  // below b.
  CHECK_THROWS_AS(verify_pumping_2(at_class(), 0, "a", "b", 1, 1, 1), PreconditionViolated);
  try {
    verify_pumping_2(at_class(), 0, "a", "b", 1, 1, 1);
    FAIL("side-condition check missing");
  } catch (const PreconditionViolated& e) {
    CHECK(std::string(e.what()).find("canonical preorder") != std::string::npos);
  }
}

TEST_CASE("verdict serialization") {
  auto v = pol_stratum_member(rx("a*b*"), dd0_class(), 1);
  auto j = verdict_to_json(v);
  CHECK(j["status"] == "NotMember");
  CHECK(j["k"] == 1);
  REQUIRE(j.contains("witness"));
  CHECK(j["witness"].size() == 2);
  CHECK(j["witness"][0] == "aa");
  CHECK(j["witness"][1] == "aba");
  REQUIRE(j.contains("budget"));
  CHECK(j["budget"]["type_cap"] == 50000);
  CHECK(j["budget"]["types_built"].get<size_t>() > 0);

  // Deterministic: the same query serializes identically.
  auto j2 = verdict_to_json(pol_stratum_member(rx("a*b*"), dd0_class(), 1));
  CHECK(j.dump() == j2.dump());

  auto vs = pol_stratum_separable(rx("aa*"), rx("bb*"), st0_class(), 1);
  auto js = verdict_to_json(vs);
  CHECK(js["status"] == "Separable");
  CHECK(js.contains("separator"));

  CHECK(status_name(StratumVerdict::Status::Inconclusive) == "Inconclusive");
}
