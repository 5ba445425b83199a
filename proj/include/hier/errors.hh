// errors.hh -- exception hierarchy shared by all modules
#pragma once

#include <stdexcept>
#include <string>

namespace hier {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Parsing -------------------------------------------------------------
struct SyntaxError : Error {
  size_t pos;
  SyntaxError(const std::string& what, size_t position)
      : Error(what + " (at position " + std::to_string(position) + ")"), pos(position) {}
};

struct UnknownLetter : Error {
  explicit UnknownLetter(char c)
      : Error(std::string("letter '") + c + "' is not in the alphabet") {}
};

struct AlphabetMismatch : Error {
  AlphabetMismatch() : Error("operands use different alphabets") {}
  explicit AlphabetMismatch(const std::string& what) : Error(what) {}
};

// Class-level preconditions -------------------------------------------
struct NotQuotienting : Error {
  explicit NotQuotienting(const std::string& name)
      : Error("class '" + name + "' is not closed under letter quotients") {}
};

struct NotLattice : Error {
  explicit NotLattice(const std::string& name)
      : Error("class '" + name + "' is not a lattice") {}
};

struct NotInBasis : Error {
  explicit NotInBasis(const std::string& what) : Error(what) {}
};

struct NotInClass : Error {
  explicit NotInClass(const std::string& what) : Error(what) {}
};

struct EpsilonNotInBasis : Error {
  EpsilonNotInBasis() : Error("the singleton {epsilon} is not a member of the basis") {}
};

struct AlphabetTooSmall : Error {
  AlphabetTooSmall() : Error("construction needs an alphabet with at least 2 letters") {}
};

struct UnknownBasis : Error {
  explicit UnknownBasis(const std::string& name)
      : Error("unknown basis '" + name + "'") {}
};

// Budgets and parameter checks ----------------------------------------
struct BudgetExceeded : Error {
  size_t reached;
  int level;  // -1 when not tied to a stratification level
  BudgetExceeded(const std::string& what, size_t count, int lvl = -1)
      : Error(what + " (reached " + std::to_string(count) +
              (lvl >= 0 ? ", level " + std::to_string(lvl) : "") + ")"),
        reached(count), level(lvl) {}
};

struct PreconditionViolated : Error {
  explicit PreconditionViolated(const std::string& what) : Error(what) {}
};

// Expression trees ------------------------------------------------------
struct TagViolation : Error {
  explicit TagViolation(const std::string& what) : Error(what) {}
};

// Logic ----------------------------------------------------------------
struct UnknownLanguage : Error {
  explicit UnknownLanguage(const std::string& name)
      : Error("no class member named '" + name + "'") {}
};

struct UnboundVariable : Error {
  explicit UnboundVariable(const std::string& name)
      : Error("variable '" + name + "' is not bound") {}
};

struct UnknownPredicate : Error {
  explicit UnknownPredicate(const std::string& name)
      : Error("predicate '" + name + "' is not available in this signature") {}
};

struct NotSigmaN : Error {
  explicit NotSigmaN(const std::string& what) : Error(what) {}
};

struct NotInFragment : Error {
  explicit NotInFragment(const std::string& what) : Error(what) {}
};

}  // namespace hier
