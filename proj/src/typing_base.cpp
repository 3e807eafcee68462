#include <algorithm>
#include <cassert>

#include "ullpi/typing.hpp"

namespace ullpi {

bool TypingContext::has(const Name& n) const {
  return std::any_of(entries.begin(), entries.end(), [&](const auto& e) { return e.first == n; });
}

PropPtr TypingContext::lookup(const Name& n) const {
  for (const auto& [name, type] : entries)
    if (name == n) return type;
  return nullptr;
}

bool TypingContext::insert(const Name& n, PropPtr t) {
  if (has(n)) return false;
  entries.emplace_back(n, std::move(t));
  return true;
}

TypingContext TypingContext::without(const Name& n) const {
  TypingContext out;
  for (const auto& e : entries)
    if (e.first != n) out.entries.push_back(e);
  return out;
}

TypingContext TypingContext::with(const Name& n, PropPtr t) const {
  TypingContext out = *this;
  bool fresh = out.insert(n, std::move(t));
  assert(fresh);
  (void)fresh;
  return out;
}

std::vector<Name> TypingContext::names() const {
  std::vector<Name> out;
  out.reserve(entries.size());
  for (const auto& e : entries) out.push_back(e.first);
  return out;
}

bool contextEqual(const TypingContext& a, const TypingContext& b) {
  if (a.size() != b.size()) return false;
  for (const auto& [n, t] : a.entries) {
    PropPtr other = b.lookup(n);
    if (!other || !propEqual(t, other)) return false;
  }
  return true;
}

bool judgmentEqual(const Judgment& a, const Judgment& b) {
  return a.system == b.system && contextEqual(a.unrestricted, b.unrestricted) &&
         contextEqual(a.left, b.left) && contextEqual(a.right, b.right) &&
         procEqual(a.process, b.process);
}

std::string judgmentShapeError(const Judgment& j) {
  std::set<Name> seen;
  for (const TypingContext* ctx : {&j.unrestricted, &j.left, &j.right})
    for (const auto& [n, t] : ctx->entries)
      if (!seen.insert(n).second) return "duplicate name '" + n + "' across contexts";
  if (j.system == SystemId::ILL && j.right.size() != 1)
    return "an ill judgment needs exactly one right entry, got " + std::to_string(j.right.size());
  if (j.system == SystemId::CLL && !j.left.empty())
    return "a cll judgment carries no left context";
  return "";
}

bool ruleStarred(RuleName r) {
  switch (r) {
    case RuleName::IDR:
    case RuleName::CUTR:
    case RuleName::CUTBANG:
    case RuleName::COPYL:
    case RuleName::ONE_R:
    case RuleName::ONE_L:
    case RuleName::TENSOR_R:
    case RuleName::TENSOR_L:
    case RuleName::LOLLI_R:
    case RuleName::LOLLI_L:
    case RuleName::BANG_R:
    case RuleName::BANG_L: return true;
    default: return false;
  }
}

std::string ruleLabel(RuleName r) {
  switch (r) {
    case RuleName::IDR: return "idR*";
    case RuleName::IDL: return "idL";
    case RuleName::CUTR: return "cutR*";
    case RuleName::CUTL: return "cutL";
    case RuleName::CUTBANG: return "cut!*";
    case RuleName::CUTQUEST: return "cut?";
    case RuleName::COPYR: return "copyR";
    case RuleName::COPYL: return "copyL*";
    case RuleName::ONE_R: return "1R*";
    case RuleName::ONE_L: return "1L*";
    case RuleName::BOT_R: return "botR";
    case RuleName::BOT_L: return "botL";
    case RuleName::TENSOR_R: return "tensorR*";
    case RuleName::TENSOR_L: return "tensorL*";
    case RuleName::PAR_R: return "parR";
    case RuleName::PAR_L: return "parL";
    case RuleName::LOLLI_R: return "lolliR*";
    case RuleName::LOLLI_L: return "lolliL*";
    case RuleName::BANG_R: return "bangR*";
    case RuleName::BANG_L: return "bangL*";
    case RuleName::QUEST_R: return "questR";
    case RuleName::QUEST_L: return "questL";
    case RuleName::CLL_ID: return "id";
    case RuleName::CLL_COPY: return "copy";
    case RuleName::CLL_CUT: return "cut";
    case RuleName::CLL_CUTREPL: return "cut!";
    case RuleName::CLL_ONE: return "1";
    case RuleName::CLL_BOT: return "bot";
    case RuleName::CLL_TENSOR: return "tensor";
    case RuleName::CLL_PAR: return "par";
    case RuleName::CLL_BANG: return "bang";
    case RuleName::CLL_QUEST: return "quest";
    case RuleName::ILL_ID: return "id";
    case RuleName::ILL_COPY: return "copy";
    case RuleName::ILL_CUT: return "cut";
    case RuleName::ILL_CUTREPL: return "cut!";
    case RuleName::ILL_ONE_L: return "1L";
    case RuleName::ILL_ONE_R: return "1R";
    case RuleName::ILL_TENSOR_L: return "tensorL";
    case RuleName::ILL_TENSOR_R: return "tensorR";
    case RuleName::ILL_LOLLI_L: return "lolliL";
    case RuleName::ILL_LOLLI_R: return "lolliR";
    case RuleName::ILL_BANG_L: return "bangL";
    case RuleName::ILL_BANG_R: return "bangR";
  }
  return "?";
}

SystemId ruleSystem(RuleName r) {
  if (r >= RuleName::ILL_ID) return SystemId::ILL;
  if (r >= RuleName::CLL_ID) return SystemId::CLL;
  return SystemId::ULL;
}

std::string failReasonLabel(FailReason r) {
  switch (r) {
    case FailReason::NoRuleApplies: return "no rule applies";
    case FailReason::ContextMismatch: return "context mismatch";
    case FailReason::MissingAnnotation: return "missing annotation";
    case FailReason::FragmentViolation: return "fragment violation";
    case FailReason::SearchBudgetExhausted: return "search budget exhausted";
  }
  return "?";
}

DerivPtr makeDerivation(RuleName rule, Judgment conclusion, std::vector<DerivPtr> premises,
                        Instantiation inst) {
  auto d = std::make_shared<Derivation>();
  d->rule = rule;
  d->conclusion = std::move(conclusion);
  d->premises = std::move(premises);
  d->inst = std::move(inst);
  return d;
}

std::optional<std::pair<TypingContext, TypingContext>> splitLinearContext(
    const TypingContext& delta, const ProcPtr& p, const ProcPtr& q,
    const std::set<Name>& excluded) {
  std::set<Name> fp = freeNames(p), fq = freeNames(q);
  TypingContext first, second;
  for (const auto& [n, t] : delta.entries) {
    if (excluded.count(n)) continue;
    bool inP = fp.count(n) > 0, inQ = fq.count(n) > 0;
    if (inP == inQ) return std::nullopt;
    (inP ? first : second).insert(n, t);
  }
  return std::make_pair(std::move(first), std::move(second));
}

}  // namespace ullpi
