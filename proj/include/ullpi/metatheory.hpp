#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "ullpi/semantics.hpp"
#include "ullpi/syntax.hpp"
#include "ullpi/typing.hpp"

namespace ullpi {

// Moves the named right-hand assignments of a valid ULL derivation to the
// left at their duals, keeping the process verbatim. Rules that introduced a
// moved name on the right become their left-handed counterparts; every other
// node keeps its rule with the moved names distributed to the premises that
// carry them. Fails (with a message) when a name is not on the right, when
// the input does not validate, or when a ?-introduction used a dual preimage
// that is itself no dual (its !-left form would need a different premise).
std::variant<DerivPtr, std::string> movePropositionsLeft(const DerivPtr& d,
                                                         const std::set<Name>& pi);

// Rebuilds a valid CLL derivation as a ULL derivation of the same process,
// concluding dual(Γ) ; Π^⊥ ⊢ P :: Λ∖Π for some (internally chosen) split of
// the CLL context. Starts with everything on the right and moves names left
// only where a forwarder forces one endpoint across the turnstile.
std::variant<DerivPtr, std::string> cllToUll(const DerivPtr& d);

// Rebuilds a valid ULL derivation as a CLL derivation of the same process:
// left assignments are dualized into the single context, right assignments
// keep their types, and every proposition passes through expandLolli. Total
// on valid inputs.
std::variant<DerivPtr, std::string> ullToCll(const DerivPtr& d);

// Largest right-hand context over all nodes.
int rDegree(const DerivPtr& d);

bool usesOnlyStarRules(const DerivPtr& d);

struct ClassificationReport {
  bool inU = false;      // some ULL derivation exists (under the given hint)
  bool inC = false;      // CLL
  bool inJ = false;      // ILL
  bool inUStar = false;  // ULL derivation using starred rules, r-degree 1
  DerivPtr uDeriv, cDeriv, jDeriv, uStarDeriv;
};

struct ClassifyHints {
  std::optional<Judgment> ull, cll, ill;
};

// Runs the three checkers on the hinted judgments; a closed process defaults
// each missing hint to the all-empty judgment. Open processes need a hint
// for every system (the star verdict reuses the ULL hint).
std::variant<ClassificationReport, std::string> classify(const ProcPtr& p,
                                                         const ClassifyHints& hints = {},
                                                         const CheckOptions& opts = {});

struct LocalityViolation {
  Name receivedName;
  std::string bindingInput;   // rendered input subterm that bound the name
  std::string replicatedUse;  // rendered replicated input using it as subject
};

struct LocalityReport {
  std::vector<LocalityViolation> violations;
};

// Purely syntactic: a name bound by a plain input and used, before any
// rebinding, as the subject of a replicated input.
LocalityReport localityViolations(const ProcPtr& p);

// A process E with fn(E) = {source, target} accepted at
// · ; source:a ⊢ E :: target:a, every forwarder at a proper subformula of a.
// One level by default; `full` recurses until the units, which close without
// forwarders. Fails when some ?-subformula's body has no dual preimage: the
// right-hand ?-introduction it would need has no instance.
std::variant<ProcPtr, std::string> identityExpansion(const PropPtr& a, const Name& source,
                                                     const Name& target, bool full = false);

struct SubjectReductionReport {
  bool pass = false;
  int reductsChecked = 0;
  std::vector<std::string> failures;  // judgment and step that failed to re-check
  std::string error;                  // nonempty when the initial judgment is rejected
};

// Re-checks the same contexts after every one-step reduct of the root and
// along one seeded trace of up to `fuel` steps. A close/wait step on a free
// subject consumes that assignment on both sides; every other step leaves
// the contexts untouched.
SubjectReductionReport subjectReductionCheck(const Judgment& j, int fuel, std::uint64_t seed,
                                             const CheckOptions& opts = {});

struct ProgressReport {
  bool pass = false;
  bool live = false;
  std::size_t redexCount = 0;
  std::string error;  // nonempty for open or rejected judgments
};

// Liveness implies a redex, for accepted judgments with all contexts empty.
ProgressReport progressCheck(const Judgment& j, const CheckOptions& opts = {});

}  // namespace ullpi
