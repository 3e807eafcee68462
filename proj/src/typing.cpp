#include <algorithm>
#include <map>

#include "ullpi/surface.hpp"
#include "ullpi/typing.hpp"

namespace ullpi {
namespace {

int reasonRank(FailReason r) {
  switch (r) {
    case FailReason::NoRuleApplies: return 0;
    case FailReason::ContextMismatch: return 1;
    case FailReason::MissingAnnotation: return 2;
    case FailReason::FragmentViolation: return 3;
    case FailReason::SearchBudgetExhausted: return 4;
  }
  return 0;
}

// Rules tried at one node, with the most specific local failure reason.
struct Attempt {
  std::vector<RuleName> rules;
  FailReason best = FailReason::NoRuleApplies;

  void tried(RuleName r) {
    if (std::find(rules.begin(), rules.end(), r) == rules.end()) rules.push_back(r);
  }
  void raise(FailReason r) {
    if (reasonRank(r) > reasonRank(best)) best = r;
  }
};

std::set<Name> contextNames(const Judgment& j) {
  std::set<Name> out;
  for (const TypingContext* ctx : {&j.unrestricted, &j.left, &j.right})
    for (const auto& [n, t] : ctx->entries) out.insert(n);
  return out;
}

std::string sortedCtxKey(const TypingContext& ctx) {
  std::vector<std::string> parts;
  parts.reserve(ctx.size());
  for (const auto& [n, t] : ctx.entries) parts.push_back(n + ":" + render(t));
  std::sort(parts.begin(), parts.end());
  std::string out;
  for (const std::string& s : parts) out += s + ",";
  return out;
}

Judgment mk(const Judgment& base, TypingContext g, TypingContext l, ProcPtr p, TypingContext r) {
  Judgment out;
  out.system = base.system;
  out.unrestricted = std::move(g);
  out.left = std::move(l);
  out.process = std::move(p);
  out.right = std::move(r);
  return out;
}

struct Searcher {
  SystemId system;
  long maxNodes;
  bool starOnly;
  long used = 0;
  bool tainted = false;
  std::map<std::string, FailReason> failMemo{};
  int deepestDepth = -1;
  TypingFailure deepest{};

  static std::string memoKey(const Judgment& j) {
    return sortedCtxKey(j.unrestricted) + ";" + sortedCtxKey(j.left) + "|" + render(j.process) +
           "|" + sortedCtxKey(j.right);
  }

  void noteFail(const Judgment& j, int depth, FailReason reason, std::vector<RuleName> attempted) {
    if (depth <= deepestDepth) return;
    deepestDepth = depth;
    deepest.location = render(j.process);
    deepest.reason = reason;
    deepest.attempted = std::move(attempted);
  }

  bool invariantsOk(const Judgment& j) const {
    std::set<Name> seen;
    for (const TypingContext* ctx : {&j.unrestricted, &j.left, &j.right})
      for (const auto& [n, t] : ctx->entries)
        if (!seen.insert(n).second) return false;
    std::set<Name> fn = freeNames(j.process);
    for (const TypingContext* ctx : {&j.left, &j.right})
      for (const auto& [n, t] : ctx->entries)
        if (!fn.count(n)) return false;
    for (const Name& n : fn)
      if (!seen.count(n)) return false;
    return true;
  }

  // Bound name entering a premise context must not collide with the
  // conclusion's context names; rename apart when it would.
  static std::pair<Name, ProcPtr> apartBound(const Name& y, const ProcPtr& cont,
                                             const std::set<Name>& ctxNames) {
    if (!ctxNames.count(y)) return {y, cont};
    std::set<Name> avoid = ctxNames;
    for (const Name& n : freeNames(cont)) avoid.insert(n);
    Name fresh = freshName(y, avoid);
    return {fresh, substitute(cont, fresh, y)};
  }

  std::optional<DerivPtr> try1(RuleName rule, const Judgment& concl, Judgment prem,
                               Instantiation inst, int depth, Attempt& att) {
    att.tried(rule);
    auto d = goal(prem, depth + 1);
    if (!d) return std::nullopt;
    return makeDerivation(rule, concl, {*d}, std::move(inst));
  }

  std::optional<DerivPtr> try2(RuleName rule, const Judgment& concl, Judgment prem1,
                               Judgment prem2, Instantiation inst, int depth, Attempt& att) {
    att.tried(rule);
    auto a = goal(prem1, depth + 1);
    if (!a) return std::nullopt;
    auto b = goal(prem2, depth + 1);
    if (!b) return std::nullopt;
    return makeDerivation(rule, concl, {*a, *b}, std::move(inst));
  }

  std::optional<DerivPtr> goal(const Judgment& j, int depth) {
    if (++used > maxNodes) {
      tainted = true;
      return std::nullopt;
    }
    if (!invariantsOk(j)) {
      noteFail(j, depth, FailReason::ContextMismatch, {});
      return std::nullopt;
    }
    if (starOnly && j.right.size() != 1) {
      noteFail(j, depth, FailReason::ContextMismatch, {});
      return std::nullopt;
    }
    std::string key = memoKey(j);
    if (auto it = failMemo.find(key); it != failMemo.end()) {
      noteFail(j, depth, it->second, {});
      return std::nullopt;
    }
    Attempt att;
    std::optional<DerivPtr> result;
    switch (system) {
      case SystemId::ULL: result = dispatchULL(j, depth, att); break;
      case SystemId::CLL: result = dispatchCLL(j, depth, att); break;
      case SystemId::ILL: result = dispatchILL(j, depth, att); break;
    }
    if (!result) result = structuralMoves(j, depth, att);
    if (!result) {
      if (!tainted) failMemo.emplace(std::move(key), att.best);
      noteFail(j, depth, att.best, std::move(att.rules));
    }
    return result;
  }

  bool allowed(RuleName r) const { return !starOnly || ruleStarred(r); }

  // Cut propositions to try for an annotation: the annotation itself, then its
  // dual (covers the component-swapped reading of `new x : A`).
  static std::vector<PropPtr> cutCandidates(const PropPtr& ann, bool withDual) {
    std::vector<PropPtr> out{ann};
    if (withDual) {
      PropPtr d = dual(ann);
      if (!propEqual(d, ann)) out.push_back(d);
    }
    return out;
  }

  // ---------------------------------------------------------------- ULL

  std::optional<DerivPtr> dispatchULL(const Judgment& j, int depth, Attempt& att) {
    const ProcPtr& p = j.process;
    switch (p->kind) {
      case ProcKind::Forwarder: {
        if (j.left.size() == 1 && j.right.size() == 1) {
          att.tried(RuleName::IDR);
          const auto& [ln, lt] = j.left.entries[0];
          const auto& [rn, rt] = j.right.entries[0];
          bool ends = (ln == p->a && rn == p->b) || (ln == p->b && rn == p->a);
          if (ends && propEqual(lt, rt))
            return makeDerivation(RuleName::IDR, j, {}, {lt, ln, rn, {}});
          att.raise(FailReason::ContextMismatch);
        }
        if (allowed(RuleName::IDL) && j.left.size() == 2 && j.right.empty()) {
          att.tried(RuleName::IDL);
          PropPtr ta = j.left.lookup(p->a), tb = j.left.lookup(p->b);
          if (ta && tb && (propEqual(tb, dual(ta)) || propEqual(ta, dual(tb))))
            return makeDerivation(RuleName::IDL, j, {}, {ta, p->a, p->b, {}});
          att.raise(FailReason::ContextMismatch);
        }
        return std::nullopt;
      }
      case ProcKind::Close: {
        if (allowed(RuleName::ONE_R) && j.left.empty() && j.right.size() == 1) {
          att.tried(RuleName::ONE_R);
          const auto& [n, t] = j.right.entries[0];
          if (n == p->a && t->kind == PropKind::One)
            return makeDerivation(RuleName::ONE_R, j, {}, {t, n, {}, {}});
          att.raise(FailReason::ContextMismatch);
        }
        if (allowed(RuleName::BOT_L) && j.right.empty() && j.left.size() == 1) {
          att.tried(RuleName::BOT_L);
          const auto& [n, t] = j.left.entries[0];
          if (n == p->a && t->kind == PropKind::Bottom)
            return makeDerivation(RuleName::BOT_L, j, {}, {t, n, {}, {}});
          att.raise(FailReason::ContextMismatch);
        }
        return std::nullopt;
      }
      case ProcKind::Wait: {
        if (allowed(RuleName::ONE_L)) {
          if (PropPtr t = j.left.lookup(p->a); t && t->kind == PropKind::One) {
            Judgment prem = mk(j, j.unrestricted, j.left.without(p->a), p->left, j.right);
            if (auto d = try1(RuleName::ONE_L, j, std::move(prem), {t, p->a, {}, {}}, depth, att))
              return d;
          }
        }
        if (allowed(RuleName::BOT_R)) {
          if (PropPtr t = j.right.lookup(p->a); t && t->kind == PropKind::Bottom) {
            Judgment prem = mk(j, j.unrestricted, j.left, p->left, j.right.without(p->a));
            if (auto d = try1(RuleName::BOT_R, j, std::move(prem), {t, p->a, {}, {}}, depth, att))
              return d;
          }
        }
        return std::nullopt;
      }
      case ProcKind::Input: {
        auto [y, cont] = apartBound(p->b, p->left, contextNames(j));
        const Name& x = p->a;
        if (allowed(RuleName::TENSOR_L)) {
          if (PropPtr t = j.left.lookup(x); t && t->kind == PropKind::Tensor) {
            Judgment prem = mk(j, j.unrestricted,
                               j.left.without(x).with(y, t->left).with(x, t->right), cont, j.right);
            if (auto d = try1(RuleName::TENSOR_L, j, std::move(prem), {t, x, y, {}}, depth, att))
              return d;
          }
        }
        if (allowed(RuleName::PAR_R)) {
          if (PropPtr t = j.right.lookup(x); t && t->kind == PropKind::Par) {
            Judgment prem = mk(j, j.unrestricted, j.left, cont,
                               j.right.without(x).with(x, t->right).with(y, t->left));
            if (auto d = try1(RuleName::PAR_R, j, std::move(prem), {t, x, y, {}}, depth, att))
              return d;
          }
        }
        if (allowed(RuleName::LOLLI_R)) {
          if (PropPtr t = j.right.lookup(x); t && t->kind == PropKind::Lolli) {
            Judgment prem = mk(j, j.unrestricted, j.left.with(y, t->left), cont,
                               j.right.without(x).with(x, t->right));
            if (auto d = try1(RuleName::LOLLI_R, j, std::move(prem), {t, x, y, {}}, depth, att))
              return d;
          }
        }
        return std::nullopt;
      }
      case ProcKind::ReplicatedInput: {
        std::set<Name> gnames;
        for (const auto& [n, t] : j.unrestricted.entries) gnames.insert(n);
        auto [y, cont] = apartBound(p->b, p->left, gnames);
        const Name& x = p->a;
        if (allowed(RuleName::BANG_R) && j.left.empty() && j.right.size() == 1) {
          const auto& [n, t] = j.right.entries[0];
          if (n == x && t->kind == PropKind::OfCourse) {
            TypingContext r;
            r.insert(y, t->left);
            Judgment prem = mk(j, j.unrestricted, {}, cont, std::move(r));
            if (auto d = try1(RuleName::BANG_R, j, std::move(prem), {t, x, y, {}}, depth, att))
              return d;
          }
        }
        if (allowed(RuleName::QUEST_L) && j.right.empty() && j.left.size() == 1) {
          const auto& [n, t] = j.left.entries[0];
          if (n == x && t->kind == PropKind::WhyNot) {
            TypingContext l;
            l.insert(y, t->left);
            Judgment prem = mk(j, j.unrestricted, std::move(l), cont, {});
            if (auto d = try1(RuleName::QUEST_L, j, std::move(prem), {t, x, y, {}}, depth, att))
              return d;
          }
        }
        return std::nullopt;
      }
      case ProcKind::Restriction: return ullRestriction(j, depth, att);
      default: return std::nullopt;  // Inaction, free Output, bare Parallel
    }
  }

  std::optional<DerivPtr> ullRestriction(const Judgment& j, int depth, Attempt& att) {
    std::set<Name> ctxNames = contextNames(j);
    auto [x, body] = apartBound(j.process->a, j.process->left, ctxNames);
    PropPtr ann = j.process->annotation;

    if (body->kind == ProcKind::Parallel) {
      if (!ann) {
        att.tried(RuleName::CUTR);
        att.raise(FailReason::MissingAnnotation);
        return std::nullopt;
      }
      std::vector<PropPtr> cands = cutCandidates(ann, true);
      std::pair<ProcPtr, ProcPtr> orders[2] = {{body->left, body->right},
                                               {body->right, body->left}};
      for (const PropPtr& A : cands) {
        for (const auto& [P, Q] : orders) {
          auto ds = splitLinearContext(j.left, P, Q, {});
          auto rs = splitLinearContext(j.right, P, Q, {});
          if (!ds || !rs) {
            att.tried(RuleName::CUTR);
            att.raise(FailReason::ContextMismatch);
            continue;
          }
          Judgment p1 = mk(j, j.unrestricted, ds->first, P, rs->first.with(x, A));
          Judgment p2 = mk(j, j.unrestricted, ds->second.with(x, A), Q, rs->second);
          if (auto d = try2(RuleName::CUTR, j, std::move(p1), std::move(p2), {A, x, {}, {}},
                            depth, att))
            return d;
        }
      }
      if (allowed(RuleName::CUTL)) {
        for (const PropPtr& A : cands) {
          for (const auto& [P, Q] : orders) {
            auto ds = splitLinearContext(j.left, P, Q, {});
            auto rs = splitLinearContext(j.right, P, Q, {});
            if (!ds || !rs) continue;
            Judgment p1 = mk(j, j.unrestricted, ds->first.with(x, A), P, rs->first);
            Judgment p2 = mk(j, j.unrestricted, ds->second.with(x, dual(A)), Q, rs->second);
            if (auto d = try2(RuleName::CUTL, j, std::move(p1), std::move(p2), {A, x, {}, {}},
                              depth, att))
              return d;
          }
        }
      }
      auto serverSide = [&](const ProcPtr& P) {
        return P->kind == ProcKind::ReplicatedInput && P->a == x;
      };
      std::set<Name> gnames;
      for (const auto& [n, t] : j.unrestricted.entries) gnames.insert(n);
      gnames.insert(x);
      for (const auto& [P, Q] : orders) {
        if (!serverSide(P)) continue;
        auto [w, P0] = apartBound(P->b, P->left, gnames);
        for (const PropPtr& A : cands) {
          TypingContext serverRight;
          serverRight.insert(w, A);
          Judgment p1 = mk(j, j.unrestricted, {}, P0, std::move(serverRight));
          Judgment p2 = mk(j, j.unrestricted.with(x, A), j.left, Q, j.right);
          if (auto d = try2(RuleName::CUTBANG, j, std::move(p1), std::move(p2), {A, x, w, x},
                            depth, att))
            return d;
        }
      }
      if (allowed(RuleName::CUTQUEST)) {
        for (const auto& [P, Q] : orders) {
          if (!serverSide(P)) continue;
          auto [w, P0] = apartBound(P->b, P->left, gnames);
          for (const PropPtr& T : cands) {
            TypingContext serverLeft;
            serverLeft.insert(w, T);
            for (const PropPtr& theta : dualPreimages(T)) {
              Judgment p1 = mk(j, j.unrestricted, serverLeft, P0, {});
              Judgment p2 = mk(j, j.unrestricted.with(x, theta), j.left, Q, j.right);
              if (auto d = try2(RuleName::CUTQUEST, j, std::move(p1), std::move(p2),
                                {T, x, w, x}, depth, att))
                return d;
            }
          }
        }
      }
      return std::nullopt;
    }

    if (body->kind == ProcKind::Output && body->b == x) {
      const Name& s = body->a;
      ProcPtr cont = body->left;
      if (PropPtr A = j.unrestricted.lookup(s)) {
        if (allowed(RuleName::COPYR)) {
          Judgment prem = mk(j, j.unrestricted, j.left, cont, j.right.with(x, dual(A)));
          if (auto d = try1(RuleName::COPYR, j, std::move(prem), {A, s, x, {}}, depth, att))
            return d;
        }
        Judgment prem = mk(j, j.unrestricted, j.left.with(x, A), cont, j.right);
        if (auto d = try1(RuleName::COPYL, j, std::move(prem), {A, s, x, {}}, depth, att))
          return d;
      }
      if (cont->kind != ProcKind::Parallel) return std::nullopt;
      std::pair<ProcPtr, ProcPtr> orders[2] = {{cont->left, cont->right},
                                               {cont->right, cont->left}};
      if (PropPtr t = j.right.lookup(s); t && t->kind == PropKind::Tensor) {
        TypingContext rrest = j.right.without(s);
        for (const auto& [P, Q] : orders) {
          auto ds = splitLinearContext(j.left, P, Q, {});
          auto rs = splitLinearContext(rrest, P, Q, {});
          if (!ds || !rs) {
            att.tried(RuleName::TENSOR_R);
            att.raise(FailReason::ContextMismatch);
            continue;
          }
          Judgment p1 = mk(j, j.unrestricted, ds->first, P, rs->first.with(x, t->left));
          Judgment p2 = mk(j, j.unrestricted, ds->second, Q, rs->second.with(s, t->right));
          if (auto d = try2(RuleName::TENSOR_R, j, std::move(p1), std::move(p2), {t, s, x, {}},
                            depth, att))
            return d;
        }
      }
      if (PropPtr t = j.left.lookup(s); t && t->kind == PropKind::Par && allowed(RuleName::PAR_L)) {
        TypingContext lrest = j.left.without(s);
        for (const auto& [P, Q] : orders) {
          auto ds = splitLinearContext(lrest, P, Q, {});
          auto rs = splitLinearContext(j.right, P, Q, {});
          if (!ds || !rs) {
            att.tried(RuleName::PAR_L);
            att.raise(FailReason::ContextMismatch);
            continue;
          }
          Judgment p1 = mk(j, j.unrestricted, ds->first.with(x, t->left), P, rs->first);
          Judgment p2 = mk(j, j.unrestricted, ds->second.with(s, t->right), Q, rs->second);
          if (auto d = try2(RuleName::PAR_L, j, std::move(p1), std::move(p2), {t, s, x, {}},
                            depth, att))
            return d;
        }
      }
      if (PropPtr t = j.left.lookup(s); t && t->kind == PropKind::Lolli) {
        TypingContext lrest = j.left.without(s);
        for (const auto& [P, Q] : orders) {
          auto ds = splitLinearContext(lrest, P, Q, {});
          auto rs = splitLinearContext(j.right, P, Q, {});
          if (!ds || !rs) {
            att.tried(RuleName::LOLLI_L);
            att.raise(FailReason::ContextMismatch);
            continue;
          }
          Judgment p1 = mk(j, j.unrestricted, ds->first, P, rs->first.with(x, t->left));
          Judgment p2 = mk(j, j.unrestricted, ds->second.with(s, t->right), Q, rs->second);
          if (auto d = try2(RuleName::LOLLI_L, j, std::move(p1), std::move(p2), {t, s, x, {}},
                            depth, att))
            return d;
        }
      }
      return std::nullopt;
    }
    return std::nullopt;
  }

  // ---------------------------------------------------------------- CLL
  // One-sided: the linear context lives in j.right, j.left stays empty.

  std::optional<DerivPtr> dispatchCLL(const Judgment& j, int depth, Attempt& att) {
    const ProcPtr& p = j.process;
    switch (p->kind) {
      case ProcKind::Forwarder: {
        if (j.right.size() == 2) {
          att.tried(RuleName::CLL_ID);
          PropPtr ta = j.right.lookup(p->a), tb = j.right.lookup(p->b);
          if (ta && tb && (propEqual(tb, dual(ta)) || propEqual(ta, dual(tb))))
            return makeDerivation(RuleName::CLL_ID, j, {}, {ta, p->a, p->b, {}});
          att.raise(FailReason::ContextMismatch);
        }
        return std::nullopt;
      }
      case ProcKind::Close: {
        if (j.right.size() == 1) {
          att.tried(RuleName::CLL_ONE);
          const auto& [n, t] = j.right.entries[0];
          if (n == p->a && t->kind == PropKind::One)
            return makeDerivation(RuleName::CLL_ONE, j, {}, {t, n, {}, {}});
          att.raise(FailReason::ContextMismatch);
        }
        return std::nullopt;
      }
      case ProcKind::Wait: {
        if (PropPtr t = j.right.lookup(p->a); t && t->kind == PropKind::Bottom) {
          Judgment prem = mk(j, j.unrestricted, {}, p->left, j.right.without(p->a));
          if (auto d = try1(RuleName::CLL_BOT, j, std::move(prem), {t, p->a, {}, {}}, depth, att))
            return d;
        }
        return std::nullopt;
      }
      case ProcKind::Input: {
        auto [y, cont] = apartBound(p->b, p->left, contextNames(j));
        if (PropPtr t = j.right.lookup(p->a); t && t->kind == PropKind::Par) {
          Judgment prem = mk(j, j.unrestricted, {}, cont,
                             j.right.without(p->a).with(p->a, t->right).with(y, t->left));
          if (auto d = try1(RuleName::CLL_PAR, j, std::move(prem), {t, p->a, y, {}}, depth, att))
            return d;
        }
        return std::nullopt;
      }
      case ProcKind::ReplicatedInput: {
        std::set<Name> gnames;
        for (const auto& [n, t] : j.unrestricted.entries) gnames.insert(n);
        auto [y, cont] = apartBound(p->b, p->left, gnames);
        if (j.right.size() == 1) {
          const auto& [n, t] = j.right.entries[0];
          if (n == p->a && t->kind == PropKind::OfCourse) {
            TypingContext r;
            r.insert(y, t->left);
            Judgment prem = mk(j, j.unrestricted, {}, cont, std::move(r));
            if (auto d = try1(RuleName::CLL_BANG, j, std::move(prem), {t, p->a, y, {}}, depth,
                              att))
              return d;
          }
        }
        return std::nullopt;
      }
      case ProcKind::Restriction: return cllRestriction(j, depth, att);
      default: return std::nullopt;
    }
  }

  std::optional<DerivPtr> cllRestriction(const Judgment& j, int depth, Attempt& att) {
    std::set<Name> ctxNames = contextNames(j);
    auto [x, body] = apartBound(j.process->a, j.process->left, ctxNames);
    PropPtr ann = j.process->annotation;

    if (body->kind == ProcKind::Parallel) {
      if (!ann) {
        att.tried(RuleName::CLL_CUT);
        att.raise(FailReason::MissingAnnotation);
        return std::nullopt;
      }
      if (!lolliFree(ann)) {
        att.tried(RuleName::CLL_CUT);
        att.raise(FailReason::FragmentViolation);
        return std::nullopt;
      }
      std::vector<PropPtr> cands = cutCandidates(ann, true);
      std::pair<ProcPtr, ProcPtr> orders[2] = {{body->left, body->right},
                                               {body->right, body->left}};
      for (const PropPtr& A : cands)
        for (const auto& [P, Q] : orders) {
          auto rs = splitLinearContext(j.right, P, Q, {});
          if (!rs) {
            att.tried(RuleName::CLL_CUT);
            att.raise(FailReason::ContextMismatch);
            continue;
          }
          Judgment p1 = mk(j, j.unrestricted, {}, P, rs->first.with(x, A));
          Judgment p2 = mk(j, j.unrestricted, {}, Q, rs->second.with(x, dual(A)));
          if (auto d = try2(RuleName::CLL_CUT, j, std::move(p1), std::move(p2), {A, x, {}, {}},
                            depth, att))
            return d;
        }
      for (const auto& [P, Q] : orders) {
        if (P->kind != ProcKind::ReplicatedInput || P->a != x) continue;
        std::set<Name> gnames;
        for (const auto& [n, t] : j.unrestricted.entries) gnames.insert(n);
        gnames.insert(x);
        auto [w, P0] = apartBound(P->b, P->left, gnames);
        for (const PropPtr& T : cands) {
          TypingContext serverRight;
          serverRight.insert(w, T);
          Judgment p1 = mk(j, j.unrestricted, {}, P0, std::move(serverRight));
          Judgment p2 = mk(j, j.unrestricted.with(x, dual(T)), {}, Q, j.right);
          if (auto d = try2(RuleName::CLL_CUTREPL, j, std::move(p1), std::move(p2), {T, x, w, x},
                            depth, att))
            return d;
        }
      }
      return std::nullopt;
    }

    if (body->kind == ProcKind::Output && body->b == x) {
      const Name& s = body->a;
      ProcPtr cont = body->left;
      if (PropPtr A = j.unrestricted.lookup(s)) {
        Judgment prem = mk(j, j.unrestricted, {}, cont, j.right.with(x, A));
        if (auto d = try1(RuleName::CLL_COPY, j, std::move(prem), {A, s, x, {}}, depth, att))
          return d;
      }
      if (cont->kind != ProcKind::Parallel) return std::nullopt;
      if (PropPtr t = j.right.lookup(s); t && t->kind == PropKind::Tensor) {
        TypingContext rrest = j.right.without(s);
        std::pair<ProcPtr, ProcPtr> orders[2] = {{cont->left, cont->right},
                                                 {cont->right, cont->left}};
        for (const auto& [P, Q] : orders) {
          auto rs = splitLinearContext(rrest, P, Q, {});
          if (!rs) {
            att.tried(RuleName::CLL_TENSOR);
            att.raise(FailReason::ContextMismatch);
            continue;
          }
          Judgment p1 = mk(j, j.unrestricted, {}, P, rs->first.with(x, t->left));
          Judgment p2 = mk(j, j.unrestricted, {}, Q, rs->second.with(s, t->right));
          if (auto d = try2(RuleName::CLL_TENSOR, j, std::move(p1), std::move(p2), {t, s, x, {}},
                            depth, att))
            return d;
        }
      }
      return std::nullopt;
    }
    return std::nullopt;
  }

  // ---------------------------------------------------------------- ILL

  std::optional<DerivPtr> dispatchILL(const Judgment& j, int depth, Attempt& att) {
    const ProcPtr& p = j.process;
    const Name& zname = j.right.entries[0].first;
    const PropPtr& ztype = j.right.entries[0].second;
    switch (p->kind) {
      case ProcKind::Forwarder: {
        if (j.left.size() == 1) {
          att.tried(RuleName::ILL_ID);
          const auto& [ln, lt] = j.left.entries[0];
          bool ends = (ln == p->a && zname == p->b) || (ln == p->b && zname == p->a);
          if (ends && propEqual(lt, ztype))
            return makeDerivation(RuleName::ILL_ID, j, {}, {lt, ln, zname, {}});
          att.raise(FailReason::ContextMismatch);
        }
        return std::nullopt;
      }
      case ProcKind::Close: {
        if (j.left.empty()) {
          att.tried(RuleName::ILL_ONE_R);
          if (zname == p->a && ztype->kind == PropKind::One)
            return makeDerivation(RuleName::ILL_ONE_R, j, {}, {ztype, zname, {}, {}});
          att.raise(FailReason::ContextMismatch);
        }
        return std::nullopt;
      }
      case ProcKind::Wait: {
        if (PropPtr t = j.left.lookup(p->a); t && t->kind == PropKind::One) {
          Judgment prem = mk(j, j.unrestricted, j.left.without(p->a), p->left, j.right);
          if (auto d = try1(RuleName::ILL_ONE_L, j, std::move(prem), {t, p->a, {}, {}}, depth,
                            att))
            return d;
        }
        return std::nullopt;
      }
      case ProcKind::Input: {
        auto [y, cont] = apartBound(p->b, p->left, contextNames(j));
        if (PropPtr t = j.left.lookup(p->a); t && t->kind == PropKind::Tensor) {
          Judgment prem = mk(j, j.unrestricted,
                             j.left.without(p->a).with(y, t->left).with(p->a, t->right), cont,
                             j.right);
          if (auto d = try1(RuleName::ILL_TENSOR_L, j, std::move(prem), {t, p->a, y, {}}, depth,
                            att))
            return d;
        }
        if (p->a == zname && ztype->kind == PropKind::Lolli) {
          TypingContext r;
          r.insert(zname, ztype->right);
          Judgment prem = mk(j, j.unrestricted, j.left.with(y, ztype->left), cont, std::move(r));
          if (auto d = try1(RuleName::ILL_LOLLI_R, j, std::move(prem), {ztype, zname, y, {}},
                            depth, att))
            return d;
        }
        return std::nullopt;
      }
      case ProcKind::ReplicatedInput: {
        std::set<Name> gnames;
        for (const auto& [n, t] : j.unrestricted.entries) gnames.insert(n);
        auto [y, cont] = apartBound(p->b, p->left, gnames);
        if (j.left.empty() && p->a == zname && ztype->kind == PropKind::OfCourse) {
          TypingContext r;
          r.insert(y, ztype->left);
          Judgment prem = mk(j, j.unrestricted, {}, cont, std::move(r));
          if (auto d = try1(RuleName::ILL_BANG_R, j, std::move(prem), {ztype, zname, y, {}},
                            depth, att))
            return d;
        }
        return std::nullopt;
      }
      case ProcKind::Restriction: return illRestriction(j, depth, att);
      default: return std::nullopt;
    }
  }

  std::optional<DerivPtr> illRestriction(const Judgment& j, int depth, Attempt& att) {
    std::set<Name> ctxNames = contextNames(j);
    auto [x, body] = apartBound(j.process->a, j.process->left, ctxNames);
    PropPtr ann = j.process->annotation;
    const Name& zname = j.right.entries[0].first;

    if (body->kind == ProcKind::Parallel) {
      if (!ann) {
        att.tried(RuleName::ILL_CUT);
        att.raise(FailReason::MissingAnnotation);
        return std::nullopt;
      }
      if (!inFragment(ann, Fragment::ILL)) {
        att.tried(RuleName::ILL_CUT);
        att.raise(FailReason::FragmentViolation);
        return std::nullopt;
      }
      std::pair<ProcPtr, ProcPtr> orders[2] = {{body->left, body->right},
                                               {body->right, body->left}};
      for (const auto& [P, Q] : orders) {
        std::set<Name> fq = freeNames(Q);
        if (!fq.count(zname)) continue;  // the right channel stays with Q
        auto ds = splitLinearContext(j.left, P, Q, {});
        if (!ds) {
          att.tried(RuleName::ILL_CUT);
          att.raise(FailReason::ContextMismatch);
          continue;
        }
        TypingContext r1;
        r1.insert(x, ann);
        Judgment p1 = mk(j, j.unrestricted, ds->first, P, std::move(r1));
        Judgment p2 = mk(j, j.unrestricted, ds->second.with(x, ann), Q, j.right);
        if (auto d = try2(RuleName::ILL_CUT, j, std::move(p1), std::move(p2), {ann, x, {}, {}},
                          depth, att))
          return d;
      }
      for (const auto& [P, Q] : orders) {
        if (P->kind != ProcKind::ReplicatedInput || P->a != x) continue;
        std::set<Name> gnames;
        for (const auto& [n, t] : j.unrestricted.entries) gnames.insert(n);
        gnames.insert(x);
        auto [w, P0] = apartBound(P->b, P->left, gnames);
        TypingContext serverRight;
        serverRight.insert(w, ann);
        Judgment p1 = mk(j, j.unrestricted, {}, P0, std::move(serverRight));
        Judgment p2 = mk(j, j.unrestricted.with(x, ann), j.left, Q, j.right);
        if (auto d = try2(RuleName::ILL_CUTREPL, j, std::move(p1), std::move(p2), {ann, x, w, x},
                          depth, att))
          return d;
      }
      return std::nullopt;
    }

    if (body->kind == ProcKind::Output && body->b == x) {
      const Name& s = body->a;
      ProcPtr cont = body->left;
      if (PropPtr A = j.unrestricted.lookup(s)) {
        Judgment prem = mk(j, j.unrestricted, j.left.with(x, A), cont, j.right);
        if (auto d = try1(RuleName::ILL_COPY, j, std::move(prem), {A, s, x, {}}, depth, att))
          return d;
      }
      if (cont->kind != ProcKind::Parallel) return std::nullopt;
      std::pair<ProcPtr, ProcPtr> orders[2] = {{cont->left, cont->right},
                                               {cont->right, cont->left}};
      if (s == zname && j.right.entries[0].second->kind == PropKind::Tensor) {
        const PropPtr& t = j.right.entries[0].second;
        for (const auto& [P, Q] : orders) {
          auto ds = splitLinearContext(j.left, P, Q, {});
          if (!ds) {
            att.tried(RuleName::ILL_TENSOR_R);
            att.raise(FailReason::ContextMismatch);
            continue;
          }
          TypingContext r1, r2;
          r1.insert(x, t->left);
          r2.insert(s, t->right);
          Judgment p1 = mk(j, j.unrestricted, ds->first, P, std::move(r1));
          Judgment p2 = mk(j, j.unrestricted, ds->second, Q, std::move(r2));
          if (auto d = try2(RuleName::ILL_TENSOR_R, j, std::move(p1), std::move(p2),
                            {t, s, x, {}}, depth, att))
            return d;
        }
      }
      if (PropPtr t = j.left.lookup(s); t && t->kind == PropKind::Lolli) {
        TypingContext lrest = j.left.without(s);
        for (const auto& [P, Q] : orders) {
          std::set<Name> fq = freeNames(Q);
          if (!fq.count(zname)) continue;
          auto ds = splitLinearContext(lrest, P, Q, {});
          if (!ds) {
            att.tried(RuleName::ILL_LOLLI_L);
            att.raise(FailReason::ContextMismatch);
            continue;
          }
          TypingContext r1;
          r1.insert(x, t->left);
          Judgment p1 = mk(j, j.unrestricted, ds->first, P, std::move(r1));
          Judgment p2 = mk(j, j.unrestricted, ds->second.with(s, t->right), Q, j.right);
          if (auto d = try2(RuleName::ILL_LOLLI_L, j, std::move(p1), std::move(p2), {t, s, x, {}},
                            depth, att))
            return d;
        }
      }
      return std::nullopt;
    }
    return std::nullopt;
  }

  // ------------------------------------------------- structural moves
  // Tried lazily after the primary dispatch fails; each consumes one
  // exponential assignment, so the chain terminates.

  std::optional<DerivPtr> structuralMoves(const Judgment& j, int depth, Attempt& att) {
    std::set<Name> ctxNames = contextNames(j);
    std::set<Name> avoid = ctxNames;
    for (const Name& n : freeNames(j.process)) avoid.insert(n);
    if (system == SystemId::ULL || system == SystemId::ILL) {
      RuleName rule = system == SystemId::ULL ? RuleName::BANG_L : RuleName::ILL_BANG_L;
      for (const auto& [z, t] : j.left.entries) {
        if (t->kind != PropKind::OfCourse) continue;
        Name u = freshName("u", avoid);
        Judgment prem = mk(j, j.unrestricted.with(u, t->left), j.left.without(z),
                           substitute(j.process, u, z), j.right);
        if (auto d = try1(rule, j, std::move(prem), {t, z, {}, u}, depth, att)) return d;
      }
    }
    if (system == SystemId::ULL && !starOnly) {
      for (const auto& [z, t] : j.right.entries) {
        if (t->kind != PropKind::WhyNot) continue;
        Name u = freshName("u", avoid);
        for (const PropPtr& theta : dualPreimages(t->left)) {
          Judgment prem = mk(j, j.unrestricted.with(u, theta), j.left,
                             substitute(j.process, u, z), j.right.without(z));
          if (auto d = try1(RuleName::QUEST_R, j, std::move(prem), {theta, z, {}, u}, depth, att))
            return d;
        }
      }
    }
    if (system == SystemId::CLL) {
      for (const auto& [z, t] : j.right.entries) {
        if (t->kind != PropKind::WhyNot) continue;
        Name u = freshName("u", avoid);
        Judgment prem = mk(j, j.unrestricted.with(u, t->left), {}, substitute(j.process, u, z),
                           j.right.without(z));
        if (auto d = try1(RuleName::CLL_QUEST, j, std::move(prem), {t, z, {}, u}, depth, att))
          return d;
      }
    }
    return std::nullopt;
  }
};

bool fragmentOk(const Judgment& j) {
  Fragment frag = j.system == SystemId::ILL ? Fragment::ILL : Fragment::CLL;
  if (j.system == SystemId::ULL) return true;
  for (const TypingContext* ctx : {&j.unrestricted, &j.left, &j.right})
    for (const auto& [n, t] : ctx->entries)
      if (!inFragment(t, frag)) return false;
  return true;
}

CheckResult runCheck(const Judgment& j, SystemId expected, const CheckOptions& opts,
                     bool starOnly) {
  auto failWith = [&](FailReason r) {
    TypingFailure f;
    f.location = j.process ? render(j.process) : "";
    f.reason = r;
    return f;
  };
  if (!j.process || j.system != expected) return failWith(FailReason::FragmentViolation);
  std::string shape = judgmentShapeError(j);
  if (!shape.empty())
    return failWith(shape.find("duplicate") != std::string::npos ? FailReason::ContextMismatch
                                                                 : FailReason::FragmentViolation);
  if (!fragmentOk(j)) return failWith(FailReason::FragmentViolation);
  Searcher s{j.system, opts.budget, starOnly};
  auto d = s.goal(j, 0);
  if (d) return *d;
  TypingFailure f;
  if (s.tainted) {
    f.location = render(j.process);
    f.reason = FailReason::SearchBudgetExhausted;
  } else {
    f = s.deepest;
  }
  f.budgetUsed = s.used;
  return f;
}

}  // namespace

CheckResult checkULL(const Judgment& j, const CheckOptions& opts) {
  return runCheck(j, SystemId::ULL, opts, false);
}

CheckResult checkCLL(const Judgment& j, const CheckOptions& opts) {
  return runCheck(j, SystemId::CLL, opts, false);
}

CheckResult checkILL(const Judgment& j, const CheckOptions& opts) {
  return runCheck(j, SystemId::ILL, opts, false);
}

CheckResult checkULLStarOnly(const Judgment& j, const CheckOptions& opts) {
  return runCheck(j, SystemId::ULL, opts, true);
}

}  // namespace ullpi
