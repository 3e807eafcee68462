#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "ullpi/syntax.hpp"

namespace ullpi {

enum class SystemId { ULL, CLL, ILL };

// Ordered name/proposition map. Order is kept for printing only; equality is
// as maps.
struct TypingContext {
  std::vector<std::pair<Name, PropPtr>> entries;

  bool has(const Name& n) const;
  PropPtr lookup(const Name& n) const;  // null when absent
  // False when the name is already present.
  bool insert(const Name& n, PropPtr t);
  TypingContext without(const Name& n) const;
  TypingContext with(const Name& n, PropPtr t) const;  // asserts freshness
  std::size_t size() const { return entries.size(); }
  bool empty() const { return entries.empty(); }
  std::vector<Name> names() const;
};

bool contextEqual(const TypingContext& a, const TypingContext& b);

// Judgment shapes: ULL Γ;Δ ⊢ P :: Λ. CLL stores its sole linear context in
// `right` and keeps `left` empty. ILL requires |right| = 1.
struct Judgment {
  SystemId system = SystemId::ULL;
  TypingContext unrestricted;  // Γ
  TypingContext left;          // Δ
  ProcPtr process;
  TypingContext right;  // Λ
};

bool judgmentEqual(const Judgment& a, const Judgment& b);

// Shape and name invariants shared by parser and checkers; empty string when
// well-formed.
std::string judgmentShapeError(const Judgment& j);

enum class RuleName {
  // ULL (starred per ruleStarred)
  IDR, IDL, CUTR, CUTL, CUTBANG, CUTQUEST, COPYR, COPYL,
  ONE_R, ONE_L, BOT_R, BOT_L, TENSOR_R, TENSOR_L, PAR_R, PAR_L,
  LOLLI_R, LOLLI_L, BANG_R, BANG_L, QUEST_R, QUEST_L,
  // CLL
  CLL_ID, CLL_COPY, CLL_CUT, CLL_CUTREPL, CLL_ONE, CLL_BOT,
  CLL_TENSOR, CLL_PAR, CLL_BANG, CLL_QUEST,
  // ILL
  ILL_ID, ILL_COPY, ILL_CUT, ILL_CUTREPL, ILL_ONE_L, ILL_ONE_R,
  ILL_TENSOR_L, ILL_TENSOR_R, ILL_LOLLI_L, ILL_LOLLI_R, ILL_BANG_L, ILL_BANG_R
};

bool ruleStarred(RuleName r);
std::string ruleLabel(RuleName r);  // star suffix included for starred rules
SystemId ruleSystem(RuleName r);

struct Instantiation {
  PropPtr cutType;               // cut/principal proposition, when one exists
  std::optional<Name> principal; // channel the rule acts on
  std::optional<Name> object;    // bound object / moved name
  std::optional<Name> freshName; // the u of !L / ?R / cut-with-server rules
};

struct Derivation;
using DerivPtr = std::shared_ptr<const Derivation>;

struct Derivation {
  RuleName rule;
  Judgment conclusion;
  std::vector<DerivPtr> premises;
  Instantiation inst;
};

DerivPtr makeDerivation(RuleName rule, Judgment conclusion, std::vector<DerivPtr> premises,
                        Instantiation inst = {});

enum class FailReason {
  NoRuleApplies,
  ContextMismatch,
  MissingAnnotation,
  FragmentViolation,
  SearchBudgetExhausted
};

std::string failReasonLabel(FailReason r);

struct TypingFailure {
  std::string location;  // rendered subprocess nearest the deepest failure
  FailReason reason = FailReason::NoRuleApplies;
  std::vector<RuleName> attempted;
  long budgetUsed = 0;
};

using CheckResult = std::variant<DerivPtr, TypingFailure>;

struct CheckOptions {
  long budget = 100000;  // search nodes
};

// Free-name-directed split of a linear context between two premises.
// Returns nullopt when a name outside `excluded` is free in both or neither.
std::optional<std::pair<TypingContext, TypingContext>> splitLinearContext(
    const TypingContext& delta, const ProcPtr& p, const ProcPtr& q, const std::set<Name>& excluded);

CheckResult checkULL(const Judgment& j, const CheckOptions& opts = {});
CheckResult checkCLL(const Judgment& j, const CheckOptions& opts = {});
CheckResult checkILL(const Judgment& j, const CheckOptions& opts = {});

// Restricts the proof search to starred rules (every sequent then has exactly
// one right-hand assignment).
CheckResult checkULLStarOnly(const Judgment& j, const CheckOptions& opts = {});

struct ValidationResult {
  bool ok = true;
  std::string message;  // first failing node and violated condition
};

// Direct schema matcher, independent of the search: premise counts, context
// arithmetic, duals, freshness, and per-system judgment shapes at every node.
ValidationResult validateDerivation(const Derivation& d);

}  // namespace ullpi
