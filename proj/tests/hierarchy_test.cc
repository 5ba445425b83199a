// hierarchy_test.cc -- level expressions, closure rewritings, piece
// complements, strictness bundles, classic expressions
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>
#include <set>

#include "hier/hierarchy.hh"
#include "hier/regex.hh"

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

const LanguageClass& wat_class() {
  static LanguageClass c = builtin_basis("wat", ab_alphabet());
  return c;
}

Dfa rx(const std::string& pattern) { return compile_regex(pattern, ab_alphabet()); }

Monomial mono(std::vector<LevelPtr> factors, Word markers) {
  Monomial m;
  m.factors = std::move(factors);
  m.markers = std::move(markers);
  return m;
}

PolyExpr poly_of(std::vector<Monomial> monomials) {
  PolyExpr p;
  p.monomials = std::move(monomials);
  return p;
}

Monomial random_monomial(std::mt19937& rng, const LanguageClass& c, int maxdeg) {
  auto pick = [&] {
    return LevelExpr::member(c.member_names[rng() % c.member_names.size()], c.name);
  };
  Monomial m;
  m.factors.push_back(pick());
  const int d = static_cast<int>(rng() % static_cast<unsigned>(maxdeg + 1));
  for (int i = 0; i < d; ++i) {
    m.markers.push_back(c.alphabet.letter(static_cast<int>(rng() % 2)));
    m.factors.push_back(pick());
  }
  return m;
}

}  // namespace

TEST_CASE("expression trees: tags, promotion, serialization") {
  const LevelPtr ast = LevelExpr::member("Astar", "dd0");
  const LevelPtr eps = LevelExpr::member("Eps", "dd0");
  CHECK(ast->tag().half_index == 0);
  CHECK(ast->tag().full());
  CHECK(ast->tag().basis == "dd0");

  const LevelPtr m = LevelExpr::marked(ast, 'a', ast);
  CHECK(m->tag().half_index == 1);
  CHECK_FALSE(m->tag().full());

  // marked concatenation keeps half levels closed, and pushes full levels up
  CHECK(LevelExpr::marked(m, 'b', m)->tag().half_index == 1);
  const LevelPtr prom = LevelExpr::promote(m, 2);
  CHECK(prom->tag().half_index == 2);
  CHECK(LevelExpr::marked(prom, 'b', ast)->tag().half_index == 3);
  CHECK(LevelExpr::concat(prom, prom)->tag().half_index == 3);

  // union and intersection stay put
  CHECK(LevelExpr::union_of({m, ast})->tag().half_index == 1);
  CHECK(LevelExpr::intersect_of({prom, ast})->tag().half_index == 2);

  // complement wants a full level
  CHECK_NOTHROW(LevelExpr::complement_of(prom));
  CHECK_THROWS_AS(LevelExpr::complement_of(m), TagViolation);
  CHECK_THROWS_AS(LevelExpr::promote(prom, 1), TagViolation);
  CHECK(LevelExpr::promote(prom, 2) == prom);  // no-op shares the node

  // poly tags: member factors land at the first half level, nested poly
  // factors stay at theirs, full factors are pushed above
  const LevelPtr p1 = LevelExpr::poly(poly_of({mono({ast, eps}, "a")}), "dd0");
  CHECK(p1->tag().half_index == 1);
  const LevelPtr p2 = LevelExpr::poly(poly_of({mono({p1, ast}, "b")}), "dd0");
  CHECK(p2->tag().half_index == 1);
  const LevelPtr p3 = LevelExpr::poly(poly_of({mono({prom, ast}, "b")}), "dd0");
  CHECK(p3->tag().half_index == 3);

  CHECK_THROWS_AS(LevelExpr::union_of({}), Error);
  CHECK_THROWS_AS(LevelExpr::poly(poly_of({mono({ast}, "a")}), "dd0"), Error);

  // structural keys distinguish structure, ignore tags
  CHECK(p1->key() == LevelExpr::poly(poly_of({mono({ast, eps}, "a")}), "dd0")->key());
  CHECK(p1->key() != p2->key());
  CHECK(prom->key() == m->key());

  const nlohmann::ordered_json j = level_expr_to_json(LevelExpr::complement_of(prom));
  CHECK(j["op"] == "complement");
  CHECK(j["basis"] == "dd0");
  CHECK(j["half_index"] == 2);
  CHECK(j["arg"]["op"] == "marked");
  CHECK(j["arg"]["marker"] == "a");
  const nlohmann::ordered_json pj = level_expr_to_json(p1);
  CHECK(pj["op"] == "poly");
  CHECK(pj["monomials"].size() == 1);
  CHECK(pj["monomials"][0]["markers"] == "a");
  CHECK(pj["monomials"][0]["factors"].size() == 2);
}

TEST_CASE("evaluation resolves members and operators") {
  const LanguageClass& dd0 = dd0_class();
  const LevelPtr ast = LevelExpr::member("Astar", "dd0");
  const LevelPtr eps = LevelExpr::member("Eps", "dd0");
  const LevelPtr apl = LevelExpr::member("Aplus", "dd0");

  CHECK(equivalent(eval_level(ast, dd0), dfa_universal(ab_alphabet())));
  CHECK(equivalent(eval_level(LevelExpr::marked(ast, 'a', ast), dd0), rx(".*a.*")));
  CHECK(equivalent(eval_level(LevelExpr::union_of({eps, apl}), dd0), dfa_universal(ab_alphabet())));
  CHECK(equivalent(eval_level(LevelExpr::intersect_of({eps, apl}), dd0), dfa_empty(ab_alphabet())));
  CHECK(equivalent(eval_level(LevelExpr::concat(apl, apl), dd0), rx("...*")));
  CHECK(equivalent(
      eval_level(LevelExpr::complement_of(LevelExpr::promote(LevelExpr::marked(ast, 'a', ast), 2)), dd0),
      rx("b*")));

  CHECK(is_empty_lang(eval_poly(PolyExpr{}, dd0)));
  CHECK_THROWS_AS(eval_level(LevelExpr::member("NoSuch", "dd0"), dd0), UnknownLanguage);
}

TEST_CASE("quotient rewriting follows the two-case formula") {
  const LanguageClass& st0 = st0_class();
  const LanguageClass& dd0 = dd0_class();
  const LevelPtr ast = LevelExpr::member("Astar", "st0");
  const Monomial axa = mono({ast, ast}, "a");

  // a^-1(A* a A*) keeps the quotient head and fires the drop case
  const PolyExpr qa = pol_quotient_rewrite(axa, 'a', Side::Left, st0);
  CHECK(qa.monomials.size() == 2);
  CHECK(equivalent(eval_poly(qa, st0), dfa_universal(ab_alphabet())));

  // b^-1(A* a A*) only keeps the head
  const PolyExpr qb = pol_quotient_rewrite(axa, 'b', Side::Left, st0);
  CHECK(qb.monomials.size() == 1);
  CHECK(equivalent(eval_poly(qb, st0), rx(".*a.*")));

  // and the right-hand side mirrors both
  CHECK(equivalent(eval_poly(pol_quotient_rewrite(axa, 'a', Side::Right, st0), st0),
                   dfa_universal(ab_alphabet())));
  CHECK(equivalent(eval_poly(pol_quotient_rewrite(axa, 'b', Side::Right, st0), st0), rx(".*a.*")));

  // over dd0 the {eps} head vanishes and only the drop case survives
  const Monomial eps_a = mono({LevelExpr::member("Eps", "dd0"), LevelExpr::member("Astar", "dd0")}, "a");
  const PolyExpr qe = pol_quotient_rewrite(eps_a, 'a', Side::Left, dd0);
  CHECK(qe.monomials.size() == 1);
  CHECK(qe.monomials[0].degree() == 0);
  CHECK(equivalent(eval_poly(qe, dd0), dfa_universal(ab_alphabet())));
  CHECK(pol_quotient_rewrite(eps_a, 'b', Side::Left, dd0).monomials.empty());

  CHECK_THROWS_AS(pol_quotient_rewrite(axa, 'c', Side::Left, st0), UnknownLetter);

  // the rewriting self-verifies; sweep random monomials over two bases
  std::mt19937 rng(20240818u);
  for (int i = 0; i < 60; ++i) {
    const LanguageClass& c = (i % 2 == 0) ? at_class() : dd0;
    const Monomial m = random_monomial(rng, c, 2);
    const char letter = ab_alphabet().letter(static_cast<int>(rng() % 2));
    const Side side = (rng() % 2 == 0) ? Side::Left : Side::Right;
    const PolyExpr q = pol_quotient_rewrite(m, letter, side, c);
    const Dfa whole = eval_poly(poly_of({m}), c);
    const Dfa want = side == Side::Left ? left_quotient(std::string(1, letter), whole)
                                        : right_quotient(whole, std::string(1, letter));
    CHECK(equivalent(eval_poly(q, c), want));
  }
}

TEST_CASE("intersection rewriting stays polynomial") {
  const LanguageClass& st0 = st0_class();
  const LanguageClass& dd0 = dd0_class();
  const LevelPtr ast = LevelExpr::member("Astar", "st0");
  const Monomial axa = mono({ast, ast}, "a");
  const Monomial bxb = mono({ast, ast}, "b");

  // the textbook split: A*aA* int A*bA* = A*aA*bA* u A*bA*aA*
  const PolyExpr both = pol_intersect_rewrite(axa, bxb, st0);
  CHECK(both.monomials.size() == 2);
  CHECK(both.degree() == 2);
  std::set<Word> markers;
  for (const Monomial& m : both.monomials) markers.insert(m.markers);
  CHECK(markers == std::set<Word>{"ab", "ba"});
  CHECK(equivalent(eval_poly(both, st0), rx(".*a.*b.*|.*b.*a.*")));

  // aligned markers exercise the center term
  const PolyExpr self = pol_intersect_rewrite(axa, axa, st0);
  CHECK(equivalent(eval_poly(self, st0), rx(".*a.*")));
  CHECK(self.degree() <= 2);

  // degree-0 pairs intersect inside the class
  const Monomial eps0 = mono({LevelExpr::member("Eps", "dd0")}, "");
  const Monomial apl0 = mono({LevelExpr::member("Aplus", "dd0")}, "");
  const Monomial uni0 = mono({LevelExpr::member("Astar", "dd0")}, "");
  CHECK(pol_intersect_rewrite(eps0, apl0, dd0).monomials.empty());
  const PolyExpr keep = pol_intersect_rewrite(eps0, uni0, dd0);
  CHECK(keep.monomials.size() == 1);
  CHECK(keep.monomials[0].factors[0]->member_name() == "Eps");

  // factors outside the class cannot be re-expressed
  const auto classics = classic_expressions(ab_alphabet());
  const Monomial alien = mono({classics[0].expr}, "");
  CHECK_THROWS_AS(pol_intersect_rewrite(alien, uni0, dd0), NotInBasis);

  // expression-level distribution
  const PolyExpr p1 = poly_of({axa, bxb});
  const PolyExpr p2 = poly_of({axa});
  const PolyExpr dist = pol_intersect_rewrite(p1, p2, st0);
  CHECK(equivalent(eval_poly(dist, st0), rx(".*a.*")));
  CHECK(dist.degree() <= p1.degree() + p2.degree());

  // randomized sweep: the rewriting self-verifies on every call, so the
  // property here is that no instance throws and the bound holds
  std::mt19937 rng(20240819u);
  for (int i = 0; i < 120; ++i) {
    const LanguageClass& c = (i % 3 == 0) ? dd0 : at_class();
    const Monomial m1 = random_monomial(rng, c, 2);
    const Monomial m2 = random_monomial(rng, c, 2);
    const PolyExpr r = pol_intersect_rewrite(m1, m2, c);
    CHECK(r.degree() <= m1.degree() + m2.degree());
    CHECK(equivalent(eval_poly(r, c),
                     dfa_intersect(eval_poly(poly_of({m1}), c), eval_poly(poly_of({m2}), c))));
  }
}

TEST_CASE("concatenation rewriting and marker chains") {
  const LanguageClass& dd0 = dd0_class();
  const LanguageClass& st0 = st0_class();
  const LevelPtr ast = LevelExpr::member("Astar", "dd0");
  const LevelPtr eps = LevelExpr::member("Eps", "dd0");
  const LevelPtr apl = LevelExpr::member("Aplus", "dd0");

  // A* . (aA*) folds into one monomial
  const PolyExpr k_astar = poly_of({mono({ast}, "")});
  const PolyExpr l_amark = poly_of({mono({eps, ast}, "a")});
  const PolyExpr cat = pol_concat_rewrite(k_astar, l_amark, dd0);
  CHECK(cat.monomials.size() == 1);
  CHECK(equivalent(eval_poly(cat, dd0), rx(".*a.*")));

  // A+ . A+ marks the join letter
  const PolyExpr plus = poly_of({mono({apl}, "")});
  const PolyExpr twice = pol_concat_rewrite(plus, plus, dd0);
  CHECK(twice.monomials.size() == 2);
  CHECK(equivalent(eval_poly(twice, dd0), rx("...*")));

  // an epsilon-containing right side keeps K as an extra term
  const PolyExpr keep = pol_concat_rewrite(plus, poly_of({mono({ast}, "")}), dd0);
  CHECK(keep.monomials.size() == 3);
  CHECK(equivalent(eval_poly(keep, dd0), rx("..*")));

  // marker chains spell the in-fix through {eps} factors
  const PolyExpr chain = eps_chain(k_astar, "ab", k_astar, dd0);
  REQUIRE(chain.monomials.size() == 1);
  CHECK(chain.monomials[0].factors.size() == 3);
  CHECK(chain.monomials[0].markers == "ab");
  CHECK(chain.monomials[0].factors[1]->member_name() == "Eps");
  CHECK(equivalent(eval_poly(chain, dd0), rx(".*ab.*")));

  const PolyExpr longer = eps_chain(k_astar, "aba", k_astar, dd0);
  REQUIRE(longer.monomials.size() == 1);
  CHECK(longer.monomials[0].factors.size() == 4);
  CHECK(equivalent(eval_poly(longer, dd0), rx(".*aba.*")));

  // the empty in-fix degenerates to plain concatenation
  CHECK(equivalent(eval_poly(eps_chain(plus, "", plus, dd0), dd0), rx("...*")));

  // chains need {eps} in the basis
  const PolyExpr st_astar = poly_of({mono({LevelExpr::member("Astar", "st0")}, "")});
  CHECK_THROWS_AS(eps_chain(st_astar, "ab", st_astar, st0), EpsilonNotInBasis);

  std::mt19937 rng(20240820u);
  for (int i = 0; i < 40; ++i) {
    const PolyExpr k = poly_of({random_monomial(rng, dd0, 1)});
    const PolyExpr l = poly_of({random_monomial(rng, dd0, 1)});
    const PolyExpr r = pol_concat_rewrite(k, l, dd0);  // self-verifying
    CHECK(equivalent(eval_poly(r, dd0), dfa_concat(eval_poly(k, dd0), eval_poly(l, dd0))));
  }
}

TEST_CASE("piece complements over the weak alphabet-testable basis") {
  const Alphabet& a = ab_alphabet();
  const LanguageClass& wat = wat_class();

  CHECK(piece_complement("", a).monomials.empty());
  CHECK(is_empty_lang(eval_poly(piece_complement("", a), wat)));

  const PolyExpr pa = piece_complement("a", a);
  CHECK(pa.monomials.size() == 1);
  CHECK(equivalent(eval_poly(pa, wat), rx("b*")));

  const PolyExpr pab = piece_complement("ab", a);
  CHECK(pab.monomials.size() == 2);
  CHECK(equivalent(eval_poly(pab, wat), rx("b*a*")));
  for (const Monomial& m : pab.monomials)
    for (const LevelPtr& f : m.factors) CHECK(f->node() == LevelExpr::Node::Member);

  // at most one 'a' overall
  CHECK(equivalent(eval_poly(piece_complement("aa", a), wat), rx("b*|b*ab*")));

  CHECK_THROWS_AS(piece_complement("ac", a), UnknownLetter);

  // a wider alphabet, against the direct complement
  const Alphabet abc("abc");
  const LanguageClass wat3 = builtin_basis("wat", abc);
  std::mt19937 rng(20240821u);
  for (int i = 0; i < 20; ++i) {
    const int len = 1 + static_cast<int>(rng() % 4);
    std::string piece;
    for (int j = 0; j < len; ++j) piece.push_back(abc.letter(static_cast<int>(rng() % 3)));
    Dfa product = dfa_universal(abc);
    for (char x : piece) product = dfa_marked_concat(product, x, dfa_universal(abc));
    CHECK(equivalent(eval_poly(piece_complement(piece, abc), wat3), dfa_complement(product)));
  }
}

TEST_CASE("the alphabet trick re-expresses piece complements") {
  const CheckReport two = alphabet_trick_check(12, 3, 20240817u, ab_alphabet());
  CHECK(two.ok());
  CHECK(two.checks.size() == 15);  // three fixed facts plus the samples

  const CheckReport three = alphabet_trick_check(6, 2, 7u, Alphabet("abc"));
  CHECK(three.ok());
  CHECK(three.checks.size() == 8);  // the two-letter special fact drops out
}

TEST_CASE("hierarchy interleaving base facts") {
  const CheckReport r = interleaving_check(ab_alphabet());
  REQUIRE(r.checks.size() == 3);
  CHECK(r.ok());
  for (const auto& [name, pass] : r.checks) {
    INFO(name);
    CHECK(pass);
  }
}

TEST_CASE("strictness witness bundles") {
  WitnessBundle dd = strictness_witnesses(dd0_class(), 2);
  CHECK(dd.basis == "dd0");
  CHECK_FALSE(dd.augmented);
  CHECK(dd.period == 1);
  CHECK(equivalent(dd.l, rx(".*abba.*")));
  CHECK(dd.v_words == std::vector<Word>{"aba", "abba"});
  REQUIRE(dd.pairs.size() == 3);
  CHECK(dd.pairs[0].first == "abaaba");
  CHECK(dd.pairs[0].second == "abaabaabbaabaaba");
  for (size_t k = 0; k < dd.pairs.size(); ++k) {
    CHECK(dd.pairs[k].first.size() == 3u * (2u << k));
    CHECK_FALSE(is_member(dd.pairs[k].first, dd.l));
    CHECK(is_member(dd.pairs[k].second, dd.l));
  }

  // one more level fits once the type budget is raised
  StratumBudget big;
  big.type_cap = 120000;
  WitnessBundle dd3 = strictness_witnesses(dd0_class(), 3, big);
  REQUIRE(dd3.pairs.size() == 4);
  CHECK(dd3.pairs[3].first.size() == 48);
  CHECK(dd3.pairs[3].second.size() == 100);

  // the trivial basis lacks {eps} and gets augmented on the way
  WitnessBundle st = strictness_witnesses(st0_class(), 2);
  CHECK(st.augmented);
  CHECK(st.period == 1);
  CHECK(st.pairs[0].first == "abaaba");

  WitnessBundle att = strictness_witnesses(at_class(), 1);
  CHECK_FALSE(att.augmented);  // the letter-content atoms already include {eps}
  CHECK(att.period == 1);

  const nlohmann::ordered_json j = bundle_to_json(dd);
  CHECK(j["basis"] == "dd0");
  CHECK(j["period"] == 1);
  CHECK(j["pairs"].size() == 3);
  CHECK(j["pairs"][0]["u"] == "abaaba");

  CHECK_THROWS_AS(strictness_witnesses(builtin_basis("dd0", Alphabet("a")), 1), AlphabetTooSmall);
  // wat is a lattice but not a Boolean algebra
  CHECK_THROWS_AS(strictness_witnesses(wat_class(), 1), PreconditionViolated);
}

TEST_CASE("classic expressions at the first levels") {
  const auto entries = classic_expressions(ab_alphabet());
  REQUIRE(entries.size() == 3);

  CHECK(entries[0].name == "dd1");
  CHECK(entries[0].basis == "dd0");
  CHECK(entries[0].expr->tag().half_index == 2);
  CHECK(entries[0].expr->node() == LevelExpr::Node::Complement);
  CHECK(equivalent(entries[0].language, rx("(ab)*")));

  CHECK(entries[1].name == "dd2");
  CHECK(entries[1].expr->tag().half_index == 4);
  CHECK(equivalent(entries[1].language, rx("(a(ab)*b)*")));

  CHECK(entries[2].name == "st2");
  CHECK(entries[2].basis == "st0");
  CHECK(entries[2].expr->tag().half_index == 4);
  CHECK(equivalent(entries[2].language, rx("(ab)*")));

  // letters are taken from the alphabet, not hard-coded
  const Alphabet xy("xy");
  const auto swapped = classic_expressions(xy);
  CHECK(equivalent(swapped[0].language, compile_regex("(xy)*", xy)));

  CHECK_THROWS_AS(classic_expressions(Alphabet("abc")), PreconditionViolated);
  CHECK_THROWS_AS(classic_expressions(Alphabet("a")), PreconditionViolated);
}

TEST_CASE("flattening distributes nested polynomials") {
  const LanguageClass& dd0 = dd0_class();
  const LevelPtr ast = LevelExpr::member("Astar", "dd0");
  const LevelPtr eps = LevelExpr::member("Eps", "dd0");

  const LevelPtr inner = LevelExpr::poly(poly_of({mono({ast, ast}, "a")}), "dd0");
  const PolyExpr outer = poly_of({mono({inner, ast}, "b")});
  const PolyExpr flat = flatten_poly(outer, dd0);
  REQUIRE(flat.monomials.size() == 1);
  CHECK(flat.monomials[0].markers == "ab");
  CHECK(flat.monomials[0].factors.size() == 3);
  for (const LevelPtr& f : flat.monomials[0].factors) CHECK(f->node() == LevelExpr::Node::Member);
  CHECK(equivalent(eval_poly(flat, dd0), eval_poly(outer, dd0)));

  // nesting a poly inside a poly stays at the same half level
  CHECK(LevelExpr::poly(outer, "dd0")->tag().half_index == 1);

  // union factors distribute
  const PolyExpr with_union = poly_of({mono({LevelExpr::union_of({ast, eps}), eps}, "a")});
  const PolyExpr split = flatten_poly(with_union, dd0);
  CHECK(split.monomials.size() == 2);
  CHECK(equivalent(eval_poly(split, dd0), eval_poly(with_union, dd0)));

  // two levels of nesting, with a union inside the inner poly
  const LevelPtr tangled = LevelExpr::poly(
      poly_of({mono({LevelExpr::union_of({inner, eps}), ast}, "b"), mono({ast}, "")}), "dd0");
  const PolyExpr flat2 = flatten_poly(tangled->poly_body(), dd0);
  CHECK(flat2.monomials.size() == 3);
  for (const Monomial& m : flat2.monomials)
    for (const LevelPtr& f : m.factors) CHECK(f->node() == LevelExpr::Node::Member);
  CHECK(equivalent(eval_poly(flat2, dd0), eval_level(tangled, dd0)));
}
