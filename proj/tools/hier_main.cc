// hier_main.cc -- command-line frontend: classes, preorders, strata,
// separation, witnesses, logic, and the acceptance suite.
//
// Exit codes follow a trichotomy so scripts can tell the cases apart:
//   0  definite answer (Member/NotMember, true/false, all checks passed)
//   1  error (bad flags, unknown basis, witness failing re-verification)
//   2  inconclusive (a budget ran out before a definite answer)
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "hier/hierarchy.hh"
#include "hier/logic.hh"
#include "hier/regex.hh"
#include "hier/strata.hh"
#include "hier/verify.hh"

using namespace hier;
using nlohmann::ordered_json;

namespace {

constexpr int kDefinite = 0;
constexpr int kError = 1;
constexpr int kInconclusive = 2;

// Flag values shared across subcommands; each verb reads only its own.
struct Options {
  std::string basis;
  std::string alphabet;
  std::string regex;
  std::string regex2;
  std::string word;
  std::string word2;
  std::string w;
  std::string w2;
  std::string formula;
  int k = 0;
  int kmax = 2;
  int max_len = 0;
  std::size_t budget = StratumBudget{}.type_cap;
  unsigned seed = SuiteOptions{}.seed;
  bool json = false;
};

Alphabet make_alphabet(const std::string& letters) {
  if (letters.empty()) throw Error("--alphabet is required");
  return Alphabet(letters);
}

// --basis takes a builtin kind or a JSON file ({name, alphabet, languages}).
LanguageClass resolve_basis(const std::string& basis, const std::string& letters) {
  if (basis.ends_with(".json")) {
    std::ifstream in(basis);
    if (!in) throw Error("cannot open basis file: " + basis);
    nlohmann::json j;
    in >> j;
    LanguageClass c = load_class(j);
    if (!letters.empty() && Alphabet(letters) != c.alphabet)
      throw Error("basis file is over {" + c.alphabet.letters() + "}, not {" + letters + "}");
    return c;
  }
  return builtin_basis(basis, make_alphabet(letters));
}

StratumBudget make_budget(std::size_t type_cap) {
  StratumBudget b;
  b.type_cap = type_cap;
  return b;
}

// Exactly one of --regex/--word names the input language.
Dfa input_language(const Alphabet& a, const CLI::Option* regex_opt, const std::string& regex,
                   const CLI::Option* word_opt, const std::string& word) {
  if (static_cast<bool>(*regex_opt) == static_cast<bool>(*word_opt))
    throw Error("provide exactly one of --regex / --word");
  return *regex_opt ? compile_regex(regex, a) : dfa_word(a, word);
}

std::string yes_no(bool b) { return b ? "yes" : "no"; }

void emit(const ordered_json& j) { std::cout << j.dump(2) << "\n"; }

// ---------------------------------------------------------------------------
// Verdict plumbing: every witness and separator is re-verified before it is
// printed; a verdict that fails its own evidence is an error, not an answer.

bool reverify_membership(const StratumVerdict& v, const Dfa& l, const LanguageClass& c,
                         const StratumBudget& budget, bool boolean_level) {
  if (!v.witness) return true;
  const Word& w = v.witness->first;
  const Word& w2 = v.witness->second;
  if (boolean_level) {
    return is_member(w, l) != is_member(w2, l) && word_leq_k(c, v.k, w, w2, budget) &&
           word_leq_k(c, v.k, w2, w, budget);
  }
  return is_member(w, l) && !is_member(w2, l) && word_leq_k(c, v.k, w, w2, budget);
}

bool reverify_separation(const StratumVerdict& v, const Dfa& l1, const Dfa& l2,
                         const LanguageClass& c, const StratumBudget& budget) {
  if (v.separator &&
      !(is_empty_lang(dfa_minus(l1, *v.separator)) &&
        is_empty_lang(dfa_intersect(*v.separator, l2))))
    return false;
  if (v.witness &&
      !(is_member(v.witness->first, l1) && is_member(v.witness->second, l2) &&
        word_leq_k(c, v.k, v.witness->first, v.witness->second, budget)))
    return false;
  return true;
}

void print_verdict(const StratumVerdict& v) {
  std::cout << "status: " << status_name(v.status) << "\n";
  std::cout << "k: " << v.k << "\n";
  if (v.witness)
    std::cout << "witness: \"" << v.witness->first << "\" / \"" << v.witness->second << "\"\n";
  if (v.separator) std::cout << "separator states: " << v.separator->n << "\n";
  if (!v.note.empty()) std::cout << "note: " << v.note << "\n";
  std::cout << "types built: " << v.types_built << "/" << v.type_cap << "\n";
}

int verdict_exit(const StratumVerdict& v) {
  return v.status == StratumVerdict::Status::Inconclusive ? kInconclusive : kDefinite;
}

// ---------------------------------------------------------------------------
// Verbs

int cmd_class(const Options& o) {
  const LanguageClass c = resolve_basis(o.basis, o.alphabet);
  const ClassProperties props = check_properties(c);
  const int p = props.quotienting ? period(c) : 0;
  if (o.json) {
    ordered_json members = ordered_json::array();
    for (size_t i = 0; i < c.members.size(); ++i)
      members.push_back({{"name", c.member_names[i]}, {"states", c.members[i].n}});
    emit({{"name", c.name},
          {"alphabet", c.alphabet.letters()},
          {"members", members},
          {"lattice", props.lattice},
          {"boolean_algebra", props.boolean_algebra},
          {"quotienting", props.quotienting},
          {"period", p}});
    return kDefinite;
  }
  std::cout << "class " << c.name << " over {" << c.alphabet.letters() << "}\n";
  std::cout << "members (" << c.size() << "):";
  for (const std::string& n : c.member_names) std::cout << " " << n;
  std::cout << "\n";
  std::cout << "lattice: " << yes_no(props.lattice)
            << ", boolean algebra: " << yes_no(props.boolean_algebra)
            << ", quotienting: " << yes_no(props.quotienting) << "\n";
  if (props.quotienting) std::cout << "period: " << p << "\n";
  return kDefinite;
}

int cmd_leq(const Options& o) {
  const LanguageClass c = resolve_basis(o.basis, o.alphabet);
  const bool below = word_leq_k(c, o.k, o.w, o.w2, make_budget(o.budget));
  if (o.json)
    emit({{"basis", c.name}, {"k", o.k}, {"w", o.w}, {"w2", o.w2}, {"leq", below}});
  else
    std::cout << (below ? "true" : "false") << "\n";
  return kDefinite;
}

int cmd_period(const Options& o) {
  const LanguageClass c = resolve_basis(o.basis, o.alphabet);
  const int p = period(c);
  if (o.json)
    emit({{"basis", c.name}, {"period", p}});
  else
    std::cout << p << "\n";
  return kDefinite;
}

int cmd_stratum(const Options& o, const std::string& mode, const CLI::Option* regex_opt,
                const CLI::Option* word_opt) {
  const LanguageClass c = resolve_basis(o.basis, o.alphabet);
  const Dfa l = input_language(c.alphabet, regex_opt, o.regex, word_opt, o.word);
  const StratumBudget budget = make_budget(o.budget);
  const bool boolean_level = mode == "bpol-member";
  const StratumVerdict v = boolean_level ? bpol_stratum_member(l, c, o.k, budget)
                                         : pol_stratum_member(l, c, o.k, budget);
  if (!reverify_membership(v, l, c, budget, boolean_level))
    throw Error("witness failed re-verification; refusing to print it");
  if (o.json)
    emit(verdict_to_json(v));
  else
    print_verdict(v);
  return verdict_exit(v);
}

int cmd_separate(const Options& o, const CLI::Option* kmax_opt, const CLI::Option* regex_opt,
                 const CLI::Option* word_opt, const CLI::Option* regex2_opt,
                 const CLI::Option* word2_opt) {
  const LanguageClass c = resolve_basis(o.basis, o.alphabet);
  const Dfa l1 = input_language(c.alphabet, regex_opt, o.regex, word_opt, o.word);
  const Dfa l2 = input_language(c.alphabet, regex2_opt, o.regex2, word2_opt, o.word2);
  const StratumBudget budget = make_budget(o.budget);

  if (*kmax_opt) {
    const SeparabilitySearchResult r = pol_separability_search(l1, l2, c, o.kmax, budget);
    bool any_inconclusive = false;
    for (const StratumVerdict& v : r.per_k) {
      if (!reverify_separation(v, l1, l2, c, budget))
        throw Error("witness failed re-verification; refusing to print it");
      any_inconclusive =
          any_inconclusive || v.status == StratumVerdict::Status::Inconclusive;
    }
    if (o.json) {
      ordered_json per_k = ordered_json::array();
      for (const StratumVerdict& v : r.per_k) per_k.push_back(verdict_to_json(v));
      emit({{"first_separable", r.first_separable}, {"per_k", per_k}});
    } else {
      for (const StratumVerdict& v : r.per_k) {
        std::cout << "k = " << v.k << ": " << status_name(v.status) << "\n";
      }
      if (r.first_separable >= 0)
        std::cout << "first separable stratum: " << r.first_separable << "\n";
      else
        std::cout << "no separable stratum up to k = " << o.kmax << "\n";
    }
    return r.first_separable < 0 && any_inconclusive ? kInconclusive : kDefinite;
  }

  const StratumVerdict v = pol_stratum_separable(l1, l2, c, o.k, budget);
  if (!reverify_separation(v, l1, l2, c, budget))
    throw Error("witness failed re-verification; refusing to print it");
  if (o.json)
    emit(verdict_to_json(v));
  else
    print_verdict(v);
  return verdict_exit(v);
}

int cmd_witness(const Options& o) {
  const LanguageClass c = resolve_basis(o.basis, o.alphabet);
  const WitnessBundle b = strictness_witnesses(c, o.kmax, make_budget(o.budget));
  for (const auto& [u, v] : b.pairs)
    if (is_member(u, b.l) || !is_member(v, b.l))
      throw Error("witness pair failed re-verification; refusing to print it");
  if (o.json) {
    emit(bundle_to_json(b));
    return kDefinite;
  }
  std::cout << "basis: " << b.basis << (b.augmented ? " (augmented with {eps})" : "") << "\n";
  std::cout << "period: " << b.period << "\n";
  std::cout << "generators:";
  for (const Word& w : b.v_words) std::cout << " \"" << w << "\"";
  std::cout << "\n";
  std::cout << "language states: " << b.l.n << "\n";
  for (size_t k = 0; k < b.pairs.size(); ++k) {
    std::cout << "k = " << k << ": u (" << b.pairs[k].first.size() << " letters) outside, v ("
              << b.pairs[k].second.size() << " letters) inside, u <=_" << k << " v\n";
  }
  return kDefinite;
}

int cmd_compile_formula(const Options& o) {
  const LanguageClass c = resolve_basis(o.basis, o.alphabet);
  const FormulaPtr f = parse_formula(o.formula, c);
  const CompileResult r = compile_sentence(f, c);
  RoundTripReport report;
  const bool checked = o.max_len > 0;
  if (checked) report = round_trip_check(f, c, o.max_len);
  if (o.json) {
    ordered_json j{{"formula", f->text()},
                   {"ast", formula_to_json(f)},
                   {"classified", alternation_name(classify(f))},
                   {"target", alternation_name(r.target)},
                   {"claimed_half_index", r.claimed_half_index},
                   {"dfa", dfa_to_json(r.language)}};
    if (checked) {
      j["round_trip"] = {{"words_checked", report.words_checked},
                         {"mismatches", report.mismatches},
                         {"stratum_notes", report.stratum_notes}};
    }
    emit(j);
  } else {
    std::cout << "formula: " << f->text() << "\n";
    std::cout << "classified: " << alternation_name(classify(f)) << "\n";
    std::cout << "target: " << alternation_name(r.target) << "\n";
    std::cout << "claimed half-level index: " << r.claimed_half_index << "\n";
    std::cout << "states: " << r.language.n << "\n";
    if (checked) {
      std::cout << "round trip: " << report.words_checked << " words, "
                << report.mismatches.size() << " mismatches\n";
      for (const std::string& note : report.stratum_notes) std::cout << "  " << note << "\n";
    }
  }
  return checked && !report.ok() ? kError : kDefinite;
}

int cmd_eval_formula(const Options& o) {
  const LanguageClass c = resolve_basis(o.basis, o.alphabet);
  const FormulaPtr f = parse_formula(o.formula, c);
  c.alphabet.check_word(o.word);
  const bool holds = evaluate(f, o.word);
  if (o.json)
    emit({{"formula", f->text()}, {"word", o.word}, {"holds", holds}});
  else
    std::cout << (holds ? "true" : "false") << "\n";
  return kDefinite;
}

int cmd_piece_complement(const Options& o) {
  const Alphabet a = make_alphabet(o.alphabet);
  const PolyExpr e = piece_complement(o.word, a);
  const Dfa lang = eval_poly(e, builtin_basis("wat", a));
  if (o.json) {
    emit({{"piece", o.word}, {"expression", poly_expr_to_json(e)}, {"dfa", dfa_to_json(lang)}});
  } else {
    std::cout << "piece: \"" << o.word << "\"\n";
    std::cout << "monomials: " << e.monomials.size() << ", degree: " << e.degree() << "\n";
    std::cout << "states: " << lang.n << "\n";
    std::cout << poly_expr_to_json(e).dump() << "\n";
  }
  return kDefinite;
}

int cmd_classic(const Options& o) {
  const Alphabet a = make_alphabet(o.alphabet);
  const auto entries = classic_expressions(a);
  bool all_ok = true;
  ordered_json rows = ordered_json::array();
  for (const ClassicExpression& e : entries) {
    const bool ok = equivalent(eval_level(e.expr, builtin_basis(e.basis, a)), e.language);
    all_ok = all_ok && ok;
    if (o.json)
      rows.push_back({{"name", e.name},
                      {"basis", e.basis},
                      {"states", e.language.n},
                      {"expression", level_expr_to_json(e.expr)},
                      {"verified", ok}});
    else
      std::cout << e.name << " over " << e.basis << ": " << e.language.n << " states, "
                << (ok ? "ok" : "FAILED") << "\n";
  }
  if (o.json) emit(rows);
  return all_ok ? kDefinite : kError;
}

int cmd_verify_suite(const Options& o, const CLI::Option* budget_opt) {
  SuiteOptions so;
  so.seed = o.seed;
  if (*budget_opt) so.type_cap = o.budget;  // otherwise the pinned budgets
  const std::vector<CriterionResult> results = run_acceptance_suite(so);
  bool any_fail = false;
  bool any_indefinite = false;
  for (const CriterionResult& r : results) {
    any_fail = any_fail || (!r.pass && !r.inconclusive);
    any_indefinite = any_indefinite || r.inconclusive;
  }
  if (o.json) {
    emit(suite_to_json(results));
  } else {
    for (const CriterionResult& r : results) {
      const char* tag = r.pass ? "PASS" : r.inconclusive ? "INCONCLUSIVE" : "FAIL";
      std::cout << "[" << tag << "] criterion " << r.id << ": " << r.name << " -- " << r.detail
                << " (" << r.seconds << " s)\n";
    }
    std::cout << (any_fail ? "suite failed"
                           : any_indefinite ? "suite inconclusive" : "suite passed")
              << "\n";
  }
  return any_fail ? kError : any_indefinite ? kInconclusive : kDefinite;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"concatenation-hierarchy toolkit: classes, strata, witnesses, logic"};
  app.require_subcommand(1);
  Options o;

  const auto add_basis = [&](CLI::App* sc) {
    sc->add_option("--basis", o.basis, "builtin kind (st0|dd0|at|wat|att:<d>) or a JSON file")
        ->required();
    sc->add_option("--alphabet", o.alphabet, "alphabet letters, e.g. ab");
  };
  const auto add_json = [&](CLI::App* sc) {
    sc->add_flag("--json", o.json, "emit JSON instead of text");
  };
  const auto add_budget = [&](CLI::App* sc) {
    return sc->add_option("--budget", o.budget, "type-table cap for stratum machinery");
  };

  CLI::App* sc_class = app.add_subcommand("class", "describe a language class");
  add_basis(sc_class);
  add_json(sc_class);

  CLI::App* sc_leq = app.add_subcommand("leq", "compare two words in the stratified preorder");
  add_basis(sc_leq);
  sc_leq->add_option("--w", o.w, "left word (empty for epsilon)");
  sc_leq->add_option("--w2", o.w2, "right word");
  sc_leq->add_option("--k", o.k, "stratum index (default 0: canonical preorder)");
  add_budget(sc_leq);
  add_json(sc_leq);

  CLI::App* sc_period = app.add_subcommand("period", "print the class period");
  add_basis(sc_period);
  add_json(sc_period);

  CLI::App* sc_stratum =
      app.add_subcommand("stratum", "membership of a language in a polynomial stratum");
  std::string stratum_mode;
  sc_stratum->add_option("mode", stratum_mode, "member | bpol-member")
      ->required()
      ->check(CLI::IsMember({"member", "bpol-member"}));
  add_basis(sc_stratum);
  CLI::Option* stratum_regex = sc_stratum->add_option("--regex", o.regex, "language as a regex");
  CLI::Option* stratum_word = sc_stratum->add_option("--word", o.word, "language {w}");
  sc_stratum->add_option("--k", o.k, "stratum index")->required();
  add_budget(sc_stratum);
  add_json(sc_stratum);

  CLI::App* sc_separate =
      app.add_subcommand("separate", "separability of two languages by a stratum");
  add_basis(sc_separate);
  CLI::Option* sep_regex = sc_separate->add_option("--regex", o.regex, "first language");
  CLI::Option* sep_word = sc_separate->add_option("--word", o.word, "first language {w}");
  CLI::Option* sep_regex2 = sc_separate->add_option("--regex2", o.regex2, "second language");
  CLI::Option* sep_word2 = sc_separate->add_option("--word2", o.word2, "second language {w}");
  sc_separate->add_option("--k", o.k, "single stratum index");
  CLI::Option* sep_kmax =
      sc_separate->add_option("--kmax", o.kmax, "search strata 0..kmax instead of one k");
  add_budget(sc_separate);
  add_json(sc_separate);

  CLI::App* sc_witness =
      app.add_subcommand("witness", "strictness witness bundle for a basis");
  add_basis(sc_witness);
  sc_witness->add_option("--kmax", o.kmax, "deepest pair to construct (default 2)");
  add_budget(sc_witness);
  add_json(sc_witness);

  CLI::App* sc_compile =
      app.add_subcommand("compile-formula", "compile a sentence to an automaton");
  add_basis(sc_compile);
  sc_compile->add_option("--formula", o.formula, "sentence text")->required();
  sc_compile->add_option("--max-len", o.max_len,
                         "round-trip the compilation on words up to this length");
  add_json(sc_compile);

  CLI::App* sc_eval = app.add_subcommand("eval-formula", "evaluate a sentence on one word");
  add_basis(sc_eval);
  sc_eval->add_option("--formula", o.formula, "sentence text")->required();
  sc_eval->add_option("--word", o.word, "word to test (empty for epsilon)");
  add_json(sc_eval);

  CLI::App* sc_piece =
      app.add_subcommand("piece-complement", "complement of a subword pattern as a union");
  sc_piece->add_option("--alphabet", o.alphabet, "alphabet letters")->required();
  sc_piece->add_option("--word", o.word, "the piece a1..an (empty allowed)");
  add_json(sc_piece);

  CLI::App* sc_classic =
      app.add_subcommand("classic", "the classic low-level expressions, re-verified");
  sc_classic->add_option("--alphabet", o.alphabet, "alphabet letters")->required();
  add_json(sc_classic);

  CLI::App* sc_suite = app.add_subcommand("verify-suite", "run the acceptance suite");
  sc_suite->add_option("--seed", o.seed, "seed for the randomized items");
  CLI::Option* suite_budget = add_budget(sc_suite);
  add_json(sc_suite);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kDefinite : kError;
  }

  try {
    if (*sc_class) return cmd_class(o);
    if (*sc_leq) return cmd_leq(o);
    if (*sc_period) return cmd_period(o);
    if (*sc_stratum) return cmd_stratum(o, stratum_mode, stratum_regex, stratum_word);
    if (*sc_separate)
      return cmd_separate(o, sep_kmax, sep_regex, sep_word, sep_regex2, sep_word2);
    if (*sc_witness) return cmd_witness(o);
    if (*sc_compile) return cmd_compile_formula(o);
    if (*sc_eval) return cmd_eval_formula(o);
    if (*sc_piece) return cmd_piece_complement(o);
    if (*sc_classic) return cmd_classic(o);
    if (*sc_suite) return cmd_verify_suite(o, suite_budget);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kError;
  }
  return kError;
}
