// hierarchy.hh -- symbolic hierarchy levels: tagged expressions, polynomial
// expressions, the constructive closure rewritings (quotient, intersection,
// concatenation, piece complements), classic dot-depth expressions, and
// strictness witness bundles
#pragma once

#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "hier/language_class.hh"
#include "hier/strata.hh"

namespace hier {

class LevelExpr;
using LevelPtr = std::shared_ptr<const LevelExpr>;

// Where in the hierarchy an expression claims to live.  half_index counts
// half levels: 0 is the basis, odd indices are the polynomial (half) levels,
// even indices the Boolean (full) levels.  Tags are advisory; only the
// complement/marked-concatenation discipline is enforced.
struct LevelTag {
  std::string basis;
  int half_index = 0;
  bool full() const { return half_index % 2 == 0; }
};

// One monomial L_0 a_1 L_1 a_2 ... a_n L_n: n marker letters between n+1
// factor expressions.
struct Monomial {
  std::vector<LevelPtr> factors;
  Word markers;
  int degree() const { return static_cast<int>(markers.size()); }
};

// A finite union of monomials; no monomials denotes the empty language.
struct PolyExpr {
  std::vector<Monomial> monomials;
  int degree() const;
};

// Immutable expression tree.  Construction goes through the factories, which
// compute tags and reject ill-placed nodes: complement is only available at
// full levels, and marked concatenation always lands at a half level.
class LevelExpr {
 public:
  enum class Node { Member, Union, Intersect, Complement, MarkedConcat, Concat, Poly };

  static LevelPtr member(const std::string& name, const std::string& basis);
  static LevelPtr union_of(std::vector<LevelPtr> kids);
  static LevelPtr intersect_of(std::vector<LevelPtr> kids);
  static LevelPtr complement_of(LevelPtr kid);  // TagViolation at half levels
  static LevelPtr marked(LevelPtr left, char a, LevelPtr right);
  static LevelPtr concat(LevelPtr left, LevelPtr right);
  static LevelPtr poly(PolyExpr p, const std::string& basis);
  // Re-tags e at a higher level (the levels are increasing, so this is
  // always sound); lowering the tag is a TagViolation.
  static LevelPtr promote(LevelPtr e, int half_index);

  Node node() const { return node_; }
  const LevelTag& tag() const { return tag_; }
  const std::string& member_name() const { return member_; }
  const std::vector<LevelPtr>& kids() const { return kids_; }
  char marker() const { return marker_; }
  const PolyExpr& poly_body() const { return *poly_; }

  // Structural serialization; also the evaluation cache key.
  std::string key() const;

 private:
  LevelExpr() = default;

  Node node_ = Node::Member;
  LevelTag tag_;
  std::string member_;
  std::vector<LevelPtr> kids_;
  char marker_ = 0;
  std::shared_ptr<const PolyExpr> poly_;
};

// Evaluation to canonical DFAs.  Member nodes resolve by name against the
// given class; results are memoized per (class, expression) pair.
Dfa eval_level(const LevelPtr& e, const LanguageClass& c);
Dfa eval_poly(const PolyExpr& p, const LanguageClass& c);

nlohmann::ordered_json level_expr_to_json(const LevelPtr& e);
nlohmann::ordered_json poly_expr_to_json(const PolyExpr& p);

// Index of the class member equal to d, or -1.
int find_member(const LanguageClass& c, const Dfa& d);
// Member reference for d; throws NotInBasis when the class has no such
// member.
LevelPtr member_ref(const LanguageClass& c, const Dfa& d);

enum class Side { Left, Right };

// a^{-1}M (or Ma^{-1}) as a union of monomials, per the two-case quotient
// formula on the outermost factor.  The result is re-verified against the
// automaton quotient of the evaluated monomial.
PolyExpr pol_quotient_rewrite(const Monomial& m, char a, Side side, const LanguageClass& c);

// M1 int M2 by recursion on the degree sum: the degree-0 base intersects
// inside the class, and the general case splits at the first markers into
// the left/right/center languages.  The union over context words is
// materialized by enumerating the finitely many distinct quotient languages
// of the relevant factor.  All factors must be class members.
PolyExpr pol_intersect_rewrite(const Monomial& m1, const Monomial& m2, const LanguageClass& c);
PolyExpr pol_intersect_rewrite(const PolyExpr& p1, const PolyExpr& p2, const LanguageClass& c);

// KL as a polynomial: the union over letters of K a (a^{-1}L), plus K when
// L contains the empty word.
PolyExpr pol_concat_rewrite(const PolyExpr& k, const PolyExpr& l, const LanguageClass& c);

// K w L with the marker word spelled out through {eps} factors; the class
// must have {eps} among its members.
PolyExpr eps_chain(const PolyExpr& k, const Word& w, const PolyExpr& l, const LanguageClass& c);

// Distributes nested poly and union factors into plain monomials; evaluation
// is preserved.
PolyExpr flatten_poly(const PolyExpr& p, const LanguageClass& c);

// The complement of A*a_1A*...a_nA* over the weak alphabet-testable basis,
// by the last-occurrence recursion on the piece a_1...a_n.  The empty piece
// yields the empty expression (the degenerate product is A* itself).
// Evaluate against builtin_basis("wat", a).
PolyExpr piece_complement(const std::string& piece, const Alphabet& a);

struct CheckReport {
  std::vector<std::pair<std::string, bool>> checks;
  bool ok() const;
};

// Random unions of A*a_1A*...a_nA* monomials are complemented, re-expressed
// over the weak alphabet-testable basis (piece complements combined with
// intersection rewriting), and compared to the automaton complement.
CheckReport alphabet_trick_check(int samples, int maxlen, unsigned seed, const Alphabet& a);

// The base facts interleaving the two classical hierarchies: the two-member
// basis sits inside the four-member one, A+ appears at the first half level
// above the two-member basis, and {eps} at the first full level.
CheckReport interleaving_check(const Alphabet& a);

// Scaling witness pairs proving half and full levels apart.  With p the
// period of the (possibly {eps}-augmented) basis: L = A* a b^{2p} a A*,
// V = {a b^p a, a b^{2p} a}, u_k = (a b^p a)^{p 2^{k+1}} and
// v_k = u_k (a b^{2p} a)^p u_k.  Construction verifies, for every k: u_k is
// outside L, v_k inside L, both words in V+, and u_k below v_k at level k.
struct WitnessBundle {
  std::string basis;
  bool augmented = false;  // {eps} was added to the basis first
  int period = 0;
  Dfa l;
  std::vector<Word> v_words;
  std::vector<std::pair<Word, Word>> pairs;  // (u_k, v_k) for k = 0..kmax
};

WitnessBundle strictness_witnesses(const LanguageClass& basis, int kmax,
                                   const StratumBudget& budget = {});
nlohmann::ordered_json bundle_to_json(const WitnessBundle& b);

// The textbook expressions placing (ab)* at dot-depth one, (a(ab)*b)* at
// dot-depth two, and (ab)* at the second full level above the trivial basis.
// Each expression is evaluated and checked against the star language it is
// supposed to denote.  Two-letter alphabets only.
struct ClassicExpression {
  std::string name;   // dd1, dd2, st2
  std::string basis;  // evaluation basis kind
  LevelPtr expr;
  Dfa language;
};
std::vector<ClassicExpression> classic_expressions(const Alphabet& a);

}  // namespace hier
