// strata.hh -- the stratified preorders: type monoids, stratum verdicts,
// brute-force stratum enumeration, pumping verifiers
#pragma once

#include <array>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "json.hpp"

#include "hier/language_class.hh"

namespace hier {

// Caps for the verdict machinery.  Exhausting type_cap while building a type
// monoid raises BudgetExceeded and sends verdict computations down the
// bounded-search fallbacks; verdicts themselves never guess (they return
// Inconclusive instead).
struct StratumBudget {
  size_t type_cap = 50000;    // canonical types per level
  int word_len_cap = 12;      // bounded word search fallback
  size_t pair_cap = 2000000;  // pairwise type scans
};

// Finite quotient of the level-k preorder, built level by level.
//
// A level-0 type is a class of the product transition monoid with equal
// membership vectors.  A level-j type is (projection to level j-1, set of
// split triples (left type, letter, right type) over level j-1), where the
// split set keeps only its dominance-maximal triples; the level-0 image is
// stored redundantly and revalidated against the split data on creation.
// Dropping dominated triples is sound because domination is a precongruence,
// and it keeps the registries small enough to close.
//
// Query results are memoized; confine an instance to one thread.
class TypeMonoid {
 public:
  // Builds levels 0..k; throws BudgetExceeded (with the level reached) when a
  // registry outgrows budget.type_cap.  Requires a quotienting class.
  TypeMonoid(const LanguageClass& c, int k, const StratumBudget& budget = {});

  int k_levels() const { return k_; }
  const LanguageClass& cls() const { return cls_; }
  const ClassMonoid& base() const { return base_; }

  int size(int level) const;
  int unit(int level) const;
  int letter_type(int level, int letter_idx) const;
  int mult(int level, int s, int t) const;
  bool leq(int level, int s, int t) const;
  int type_of(int level, const Word& w) const;
  const Word& rep(int level, int t) const;
  // Level-0 membership vector associated with a type.
  const std::vector<std::uint8_t>& type_vec(int level, int t) const;
  size_t total_types() const;

 private:
  using Triple = std::array<int, 3>;  // left type, letter index, right type

  struct Level {
    std::vector<int> proj;                       // level j-1 type
    std::vector<int> base0;                      // level-0 type
    std::vector<std::vector<Triple>> splits;     // sorted maximal triples
    std::vector<Word> reps;
    std::vector<int> letters;
    int unit = 0;
    std::unordered_map<std::string, int> intern;
    mutable std::unordered_map<std::uint64_t, int> mult_memo;
    mutable std::unordered_map<std::uint64_t, signed char> leq_memo;
  };

  int intern_type(int level, int proj, std::vector<Triple> triples, Word witness_rep) const;
  std::vector<Triple> canonical_splits(int level_below, std::vector<Triple> triples) const;
  bool triple_dominated(int level_below, const Triple& s, const Triple& t) const;
  int base0_of(int level, int t) const;

  LanguageClass cls_;
  ClassMonoid base_;
  int k_ = 0;
  size_t type_cap_ = 0;
  bool closed_ = false;  // post-build, products must land in the registry

  // Level 0: monoid elements merged by membership vector.
  int n0_ = 0;
  int unit0_ = 0;
  std::vector<int> mult0_;     // n0 * n0
  std::vector<int> letters0_;  // per alphabet letter
  std::vector<Word> reps0_;
  std::vector<std::vector<std::uint8_t>> vec0_;
  std::vector<std::uint8_t> leq0_;

  mutable std::vector<Level> levels_;  // levels_[j-1] holds level j
};

// The stratified word preorder itself.  k = 0 is the canonical class
// preorder; at k > 0, w is below w' when it is below at level 0 and every
// split w = uav is matched by some split w' = u'av' with u, v below u', v'
// at level k-1.  The default entry point answers through level-(k-1) type
// tables when they fit the budget and falls back to the literal memoized
// recursion otherwise; the two routes are cross-checked in the tests.
bool word_leq_k(const LanguageClass& c, int k, const Word& w, const Word& w2,
                const StratumBudget& budget = {});
bool word_leq_k_literal(const LanguageClass& c, int k, const Word& w, const Word& w2);
// Fast path against a prebuilt monoid with at least k-1 levels.
bool word_leq_k(const TypeMonoid& tm, int k, const Word& w, const Word& w2);

TypeMonoid build_type_monoid(const LanguageClass& c, int k, const StratumBudget& budget = {});

struct StratumVerdict {
  enum class Status { Member, NotMember, Separable, NotSeparable, Inconclusive };
  Status status = Status::Inconclusive;
  int k = 0;
  std::optional<std::pair<Word, Word>> witness;
  std::optional<Dfa> separator;
  std::string note;  // fallback route or Inconclusive reason
  size_t types_built = 0;
  size_t type_cap = 0;

  bool definite() const { return status != Status::Inconclusive; }
};

std::string status_name(StratumVerdict::Status s);
nlohmann::ordered_json verdict_to_json(const StratumVerdict& v);

// Membership of L in the k-th polynomial stratum over C (upper sets of the
// level-k preorder).  Member/NotMember when the type monoid fits the budget;
// otherwise pumping families and a bounded word search can still refute, and
// anything else is Inconclusive.
StratumVerdict pol_stratum_member(const Dfa& l, const LanguageClass& c, int k,
                                  const StratumBudget& budget = {});

// Membership in the Boolean closure of the stratum: L must be a union of
// mutual-≤_k classes.
StratumVerdict bpol_stratum_member(const Dfa& l, const LanguageClass& c, int k,
                                   const StratumBudget& budget = {});

// Separability of L1 from L2 by a stratum language.  NotSeparable yields
// w ∈ L1, w' ∈ L2 with w ≤_k w'; Separable yields a verified separator DFA
// (the union of upper sets of the L1-reachable types).
StratumVerdict pol_stratum_separable(const Dfa& l1, const Dfa& l2, const LanguageClass& c,
                                     int k, const StratumBudget& budget = {});

struct SeparabilitySearchResult {
  int first_separable = -1;  // smallest separable k, or -1
  std::vector<StratumVerdict> per_k;
};
SeparabilitySearchResult pol_separability_search(const Dfa& l1, const Dfa& l2,
                                                 const LanguageClass& c, int kmax,
                                                 const StratumBudget& budget = {});

// Exhaustive materialization of the k-th stratum on tiny instances: close
// the previous stratum plus all marked products under intersection, then
// union.  Serves as the independent oracle for the preorder machinery.
std::vector<Dfa> enumerate_stratum(const LanguageClass& c, int k, size_t budget = 50000);

// Stratified pumping lemmas, evaluated through word_leq_k after checking the
// preconditions (exponents at least 2^{k+1}-1; for the two-sided form,
// u^period must be below v at level 0).
bool verify_pumping_1(const LanguageClass& c, int k, const Word& u, int m, int m2,
                      const StratumBudget& budget = {});
bool verify_pumping_2(const LanguageClass& c, int k, const Word& u, const Word& v, int m,
                      int m1, int m2, const StratumBudget& budget = {});

}  // namespace hier
