#include <doctest.h>

#include <set>
#include <string>
#include <variant>
#include <vector>

#include "ullpi/generator.hpp"
#include "ullpi/metatheory.hpp"
#include "ullpi/surface.hpp"
#include "ullpi/syntax.hpp"
#include "ullpi/typing.hpp"

using namespace ullpi;

namespace {

GenConfig cfgFor(SystemId sys, std::uint64_t seed, int depth = 4, bool star = false) {
  GenConfig c;
  c.system = sys;
  c.seed = seed;
  c.maxDepth = depth;
  c.starOnly = star;
  return c;
}

DerivPtr mustCheck(const Judgment& j) {
  CheckResult r = j.system == SystemId::ULL   ? checkULL(j)
                  : j.system == SystemId::CLL ? checkCLL(j)
                                              : checkILL(j);
  if (auto* d = std::get_if<DerivPtr>(&r)) return *d;
  auto& f = std::get<TypingFailure>(r);
  FAIL("rejected: ", failReasonLabel(f.reason), " at ", f.location, " of ", render(j));
  return nullptr;
}

void collectRules(const DerivPtr& d, std::set<RuleName>& out) {
  out.insert(d->rule);
  for (const auto& p : d->premises) collectRules(p, out);
}

bool contextsInFragment(const DerivPtr& d, Fragment f) {
  auto ctxOk = [&](const TypingContext& c) {
    for (const auto& [n, t] : c.entries)
      if (!inFragment(t, f)) return false;
    return true;
  };
  const Judgment& j = d->conclusion;
  if (!ctxOk(j.unrestricted) || !ctxOk(j.left) || !ctxOk(j.right)) return false;
  for (const auto& p : d->premises)
    if (!contextsInFragment(p, f)) return false;
  return true;
}

bool usesKindOnly(const PropPtr& p, const std::set<PropKind>& kinds) {
  if (!kinds.count(p->kind)) return false;
  if (p->left && !usesKindOnly(p->left, kinds)) return false;
  if (p->right && !usesKindOnly(p->right, kinds)) return false;
  return true;
}

}  // namespace

TEST_CASE("proposition generation is deterministic per config") {
  GenConfig c = cfgFor(SystemId::ULL, 17);
  for (int d = 1; d <= 6; ++d) {
    PropPtr a = generateProposition(c, d);
    PropPtr b = generateProposition(c, d);
    CHECK(propEqual(a, b));
    CHECK(render(a) == render(b));
    CHECK(propDepth(a) <= d);
  }
  PropPtr s0 = generateProposition(cfgFor(SystemId::ULL, 0), 5);
  PropPtr s1 = generateProposition(cfgFor(SystemId::ULL, 1), 5);
  PropPtr s2 = generateProposition(cfgFor(SystemId::ULL, 2), 5);
  CHECK((!propEqual(s0, s1) || !propEqual(s1, s2)));
}

TEST_CASE("proposition generation respects fragments") {
  for (std::uint64_t seed = 0; seed < 60; ++seed) {
    CHECK(inFragment(generateProposition(cfgFor(SystemId::ULL, seed), 5), Fragment::FullULL));
    PropPtr c = generateProposition(cfgFor(SystemId::CLL, seed), 5);
    CHECK(inFragment(c, Fragment::CLL));
    CHECK(lolliFree(c));
    CHECK(inFragment(generateProposition(cfgFor(SystemId::ILL, seed), 5), Fragment::ILL));
    CHECK(inFragment(generateProposition(cfgFor(SystemId::ULL, seed, 4, true), 5),
                     Fragment::ILL));
  }
}

TEST_CASE("depth one propositions are units") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    std::string u = render(generateProposition(cfgFor(SystemId::ULL, seed), 1));
    CHECK((u == "1" || u == "bot"));
    CHECK(render(generateProposition(cfgFor(SystemId::ILL, seed), 1)) == "1");
  }
}

TEST_CASE("connective weights steer the sampler") {
  GenConfig onlyOne = cfgFor(SystemId::ULL, 5);
  for (PropKind k : {PropKind::Bottom, PropKind::Tensor, PropKind::Par, PropKind::Lolli,
                     PropKind::OfCourse, PropKind::WhyNot})
    onlyOne.connectiveWeights[k] = 0.0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    onlyOne.seed = seed;
    CHECK(render(generateProposition(onlyOne, 6)) == "1");
  }

  GenConfig tensorish = cfgFor(SystemId::ULL, 5);
  for (PropKind k : {PropKind::Bottom, PropKind::Par, PropKind::Lolli, PropKind::OfCourse,
                     PropKind::WhyNot})
    tensorish.connectiveWeights[k] = 0.0;
  tensorish.connectiveWeights[PropKind::Tensor] = 5.0;
  bool sawTensor = false;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    tensorish.seed = seed;
    PropPtr p = generateProposition(tensorish, 6);
    CHECK(usesKindOnly(p, {PropKind::One, PropKind::Tensor}));
    sawTensor = sawTensor || p->kind == PropKind::Tensor;
  }
  CHECK(sawTensor);
}

TEST_CASE("generated judgments validate and re-check per system") {
  for (SystemId sys : {SystemId::ULL, SystemId::CLL, SystemId::ILL}) {
    for (std::uint64_t seed = 0; seed < 120; ++seed) {
      auto [j, d] = generateWellTyped(cfgFor(sys, seed));
      CHECK(judgmentShapeError(j).empty());
      CHECK(judgmentEqual(j, d->conclusion));
      CHECK(validateDerivation(*d).ok);
      mustCheck(j);
      if (sys == SystemId::CLL) CHECK(j.left.empty());
      if (sys == SystemId::ILL) CHECK(j.right.size() == 1);
    }
  }
}

TEST_CASE("generation is deterministic and seed-sensitive") {
  for (SystemId sys : {SystemId::ULL, SystemId::CLL, SystemId::ILL}) {
    auto [j1, d1] = generateWellTyped(cfgFor(sys, 42));
    auto [j2, d2] = generateWellTyped(cfgFor(sys, 42));
    CHECK(render(j1) == render(j2));
    CHECK(render(*d1) == render(*d2));
  }
  std::set<std::string> distinct;
  for (std::uint64_t seed = 0; seed < 25; ++seed)
    distinct.insert(render(generateWellTyped(cfgFor(SystemId::ULL, seed)).first));
  CHECK(distinct.size() > 10);
}

TEST_CASE("depth budget one produces axioms") {
  for (SystemId sys : {SystemId::ULL, SystemId::CLL, SystemId::ILL}) {
    for (std::uint64_t seed = 0; seed < 15; ++seed) {
      auto [j, d] = generateWellTyped(cfgFor(sys, seed, 1));
      CHECK(d->premises.empty());
      mustCheck(j);
    }
  }
}

TEST_CASE("default ULL generation exercises the distinctive rules") {
  std::set<RuleName> seen;
  for (std::uint64_t seed = 0; seed < 600; ++seed)
    collectRules(generateWellTyped(cfgFor(SystemId::ULL, seed)).second, seen);
  for (RuleName r : {RuleName::IDR, RuleName::IDL, RuleName::CUTR, RuleName::CUTL,
                     RuleName::CUTBANG, RuleName::CUTQUEST, RuleName::COPYR, RuleName::COPYL,
                     RuleName::TENSOR_R, RuleName::PAR_L, RuleName::LOLLI_R, RuleName::LOLLI_L,
                     RuleName::ONE_L, RuleName::BOT_R, RuleName::BANG_R, RuleName::QUEST_L}) {
    INFO("missing rule ", ruleLabel(r));
    CHECK(seen.count(r) == 1);
  }
}

TEST_CASE("star-only generation stays in the star fragment") {
  for (std::uint64_t seed = 0; seed < 150; ++seed) {
    auto [j, d] = generateWellTyped(cfgFor(SystemId::ULL, seed, 4, true));
    CHECK(usesOnlyStarRules(d));
    CHECK(rDegree(d) == 1);
    CHECK(contextsInFragment(d, Fragment::ILL));
    CHECK(std::holds_alternative<DerivPtr>(checkULLStarOnly(j)));
    mustCheck(j);  // the unrestricted checker agrees
  }
}

TEST_CASE("ILL generation uses ILL rules throughout") {
  std::set<RuleName> seen;
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    auto [j, d] = generateWellTyped(cfgFor(SystemId::ILL, seed));
    collectRules(d, seen);
    CHECK(contextsInFragment(d, Fragment::ILL));
  }
  for (RuleName r : seen) CHECK(ruleSystem(r) == SystemId::ILL);
  for (RuleName r : {RuleName::ILL_CUT, RuleName::ILL_CUTREPL, RuleName::ILL_COPY,
                     RuleName::ILL_TENSOR_R, RuleName::ILL_TENSOR_L, RuleName::ILL_LOLLI_R,
                     RuleName::ILL_LOLLI_L, RuleName::ILL_ONE_L})
    CHECK(seen.count(r) == 1);
}

TEST_CASE("CLL generation uses CLL rules throughout") {
  std::set<RuleName> seen;
  for (std::uint64_t seed = 0; seed < 200; ++seed)
    collectRules(generateWellTyped(cfgFor(SystemId::CLL, seed)).second, seen);
  for (RuleName r : seen) CHECK(ruleSystem(r) == SystemId::CLL);
  for (RuleName r : {RuleName::CLL_CUT, RuleName::CLL_CUTREPL, RuleName::CLL_COPY,
                     RuleName::CLL_TENSOR, RuleName::CLL_PAR, RuleName::CLL_BOT,
                     RuleName::CLL_BANG})
    CHECK(seen.count(r) == 1);
}

TEST_CASE("corpus entries step the seed") {
  GenConfig c = cfgFor(SystemId::CLL, 9);
  auto corpus = generateCorpus(c, 25);
  REQUIRE(corpus.size() == 25);
  GenConfig c7 = c;
  c7.seed = 16;
  CHECK(render(corpus[7].first) == render(generateWellTyped(c7).first));
  std::set<std::string> distinct;
  for (const auto& [j, d] : corpus) {
    CHECK(validateDerivation(*d).ok);
    distinct.insert(render(j));
  }
  CHECK(distinct.size() > 10);
}

TEST_CASE("generated cut annotations satisfy the checkers") {
  // Every restriction directly above a parallel body must carry an
  // annotation, or the checkers stop with MissingAnnotation.
  std::vector<ProcPtr> stack;
  for (std::uint64_t seed = 0; seed < 80; ++seed) {
    auto [j, d] = generateWellTyped(cfgFor(SystemId::ULL, seed, 5));
    stack.push_back(j.process);
    while (!stack.empty()) {
      ProcPtr p = stack.back();
      stack.pop_back();
      if (p->kind == ProcKind::Restriction && p->left->kind == ProcKind::Parallel)
        CHECK(p->annotation != nullptr);
      if (p->left) stack.push_back(p->left);
      if (p->right) stack.push_back(p->right);
    }
  }
}
