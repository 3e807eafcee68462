#pragma once

#include <cstdint>
#include <map>
#include <utility>
#include <vector>

#include "ullpi/syntax.hpp"
#include "ullpi/typing.hpp"

namespace ullpi {

// Weighted random construction of propositions and well-typed judgments.
// Identical configs produce identical output.
struct GenConfig {
  std::uint64_t seed = 0;
  int maxDepth = 4;  // derivation height budget; proposition depth for samplers
  SystemId system = SystemId::ULL;
  // Relative pick weight per connective; absent kinds use defaults that favor
  // units and tensors. Non-positive weights disable a connective.
  std::map<PropKind, double> connectiveWeights;
  // ULL only: every sequent keeps exactly one right-hand assignment and only
  // starred rules appear.
  bool starOnly = false;
};

// Fragment-respecting proposition of at most the given depth (depth 1 = unit).
PropPtr generateProposition(const GenConfig& cfg, int depth);

// A judgment together with a derivation that validates; the judgment
// re-checks under its system's checker. Throws std::runtime_error if the
// internal retry budget (32 attempts) is exhausted.
std::pair<Judgment, DerivPtr> generateWellTyped(const GenConfig& cfg);

// Entry i is generateWellTyped with seed cfg.seed + i.
std::vector<std::pair<Judgment, DerivPtr>> generateCorpus(const GenConfig& cfg, int count);

}  // namespace ullpi
