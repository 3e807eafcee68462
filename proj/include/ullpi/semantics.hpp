#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ullpi/syntax.hpp"

namespace ullpi {

enum class StepKind { Communication, ReplicatedCommunication, CloseWait, ForwarderElim };

std::string stepKindLabel(StepKind k);

struct StepLabel {
  StepKind kind;
  Name subject;  // the synchronizing channel
};

struct Redex {
  StepLabel label;
  ProcPtr result;  // canonical form
};

struct ReductionTrace {
  ProcPtr root;
  std::vector<std::pair<StepLabel, ProcPtr>> steps;
};

// All one-step reducts up to structural congruence, each reported once.
// Communication, replicated communication, and close/wait synchronize on any
// shared subject; forwarder elimination needs a restriction-bound endpoint
// and a nonempty rest of scope.
std::vector<Redex> redexes(const ProcPtr& p);

// Indexed reduct; throws std::out_of_range past the redex count.
ProcPtr step(const ProcPtr& p, std::size_t index);

// Up to fuel steps, choosing uniformly among redexes with a deterministic
// generator; stops early when no redex remains.
ReductionTrace reduce(const ProcPtr& p, int fuel, std::uint64_t seed);

// True iff some unguarded parallel component is rooted at a non-replicated
// prefix: output, input, close, or wait.
bool isLive(const ProcPtr& p);

// One line per step: `<index> <kind> <subject> |- <rendered process>`.
std::string renderTrace(const ReductionTrace& t);

}  // namespace ullpi
