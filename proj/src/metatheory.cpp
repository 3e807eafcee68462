#include "ullpi/metatheory.hpp"

#include <algorithm>
#include <map>
#include <utility>

#include "ullpi/surface.hpp"

namespace ullpi {
namespace {

CheckResult checkAny(const Judgment& j, const CheckOptions& opts) {
  switch (j.system) {
    case SystemId::CLL: return checkCLL(j, opts);
    case SystemId::ILL: return checkILL(j, opts);
    default: return checkULL(j, opts);
  }
}

std::string failureSummary(const TypingFailure& f) {
  return failReasonLabel(f.reason) + " at [" + f.location + "]";
}

// ------------------------------------------------------------------ mover
//
// Recursion invariant: pi names all sit in the node's right context and stay
// free in the process. A node whose rule introduced a moved name on the right
// becomes the left rule for the dual connective; the object names freed by
// that switch join the premise's moving set. Everything else distributes pi
// to the premises that carry each name and keeps its rule.

struct MplError {
  std::string message;
};

Judgment moveConcl(const Judgment& j, const std::set<Name>& pi) {
  Judgment out;
  out.system = SystemId::ULL;
  out.unrestricted = j.unrestricted;
  out.left = j.left;
  out.process = j.process;
  for (const auto& [n, t] : j.right.entries) {
    if (pi.count(n))
      out.left.insert(n, dual(t));
    else
      out.right.insert(n, t);
  }
  return out;
}

DerivPtr mplNode(const DerivPtr& d, const std::set<Name>& pi);

DerivPtr mplGeneric(const DerivPtr& d, const std::set<Name>& pi) {
  std::set<Name> seen;
  std::vector<DerivPtr> prems;
  for (const DerivPtr& pr : d->premises) {
    std::set<Name> sub;
    for (const Name& n : pi)
      if (pr->conclusion.right.has(n)) {
        sub.insert(n);
        seen.insert(n);
      }
    prems.push_back(mplNode(pr, sub));
  }
  if (seen.size() != pi.size())
    throw MplError{"a moved assignment is not introduced on the right below [" +
                   render(d->conclusion) + "]"};
  return makeDerivation(d->rule, moveConcl(d->conclusion, pi), std::move(prems), d->inst);
}

DerivPtr mplNode(const DerivPtr& d, const std::set<Name>& pi) {
  if (pi.empty()) return d;
  const Judgment& j = d->conclusion;
  // Premise moving set for a switched node: surviving pi names plus the
  // premise's right-hand names that the conclusion does not carry (the
  // rule's own objects, which the left form needs on the left).
  auto premMove = [&](const Judgment& prem) {
    std::set<Name> sub;
    for (const Name& n : pi)
      if (prem.right.has(n)) sub.insert(n);
    for (const auto& [n, t] : prem.right.entries)
      if (!j.right.has(n)) sub.insert(n);
    return sub;
  };
  auto transform = [&](RuleName rule, Instantiation inst) {
    std::vector<DerivPtr> prems;
    for (const DerivPtr& pr : d->premises) prems.push_back(mplNode(pr, premMove(pr->conclusion)));
    return makeDerivation(rule, moveConcl(j, pi), std::move(prems), std::move(inst));
  };
  switch (d->rule) {
    case RuleName::IDR:
      return transform(RuleName::IDL, d->inst);
    case RuleName::ONE_R:
      return transform(RuleName::BOT_L, {bottom(), j.process->a, {}, {}});
    case RuleName::BOT_R:
      if (pi.count(j.process->a))
        return transform(RuleName::ONE_L, {one(), j.process->a, {}, {}});
      break;
    case RuleName::TENSOR_R: {
      const Name& s = j.process->left->a;
      if (pi.count(s))
        return transform(RuleName::PAR_L, {dual(j.right.lookup(s)), s, j.process->a, {}});
      break;
    }
    case RuleName::PAR_R:
    case RuleName::LOLLI_R: {
      const Name& s = j.process->a;
      if (pi.count(s))
        return transform(RuleName::TENSOR_L, {dual(j.right.lookup(s)), s, j.process->b, {}});
      break;
    }
    case RuleName::BANG_R: {
      const Name& s = j.process->a;
      return transform(RuleName::QUEST_L, {dual(j.right.lookup(s)), s, j.process->b, {}});
    }
    case RuleName::QUEST_R: {
      const Judgment& pj = d->premises[0]->conclusion;
      Name z;
      PropPtr zt;
      for (const auto& [n, ty] : j.right.entries)
        if (!pj.right.has(n)) {
          z = n;
          zt = ty;
          break;
        }
      if (!zt || !pi.count(z)) break;
      Name u;
      PropPtr theta;
      for (const auto& [n, ty] : pj.unrestricted.entries)
        if (!j.unrestricted.has(n)) {
          u = n;
          theta = ty;
        }
      if (!theta) throw MplError{"malformed ?-introduction node"};
      // The !-left form keeps the same premise, so the persistent entry must
      // already be the dual of the body.
      if (!propEqual(theta, dual(zt->left)))
        throw MplError{"cannot move " + z + " left: its ?-introduction binds " + u + " at " +
                       render(theta) + ", which is not the dual of " + render(zt->left)};
      return transform(RuleName::BANG_L, {dual(zt), z, {}, u});
    }
    default:
      break;
  }
  return mplGeneric(d, pi);
}

// ------------------------------------------------------------- CLL -> ULL
//
// Every context name gets a side: R keeps its type on the right, L lands on
// the left at the dual. All sides start R; a forwarder with both endpoints
// right has no two-sided axiom and reports its endpoints, which the nearest
// node that chose a side for one of them (cut, copy, cut-with-server, or the
// root) flips. Names forced by a connective chain their failures to the
// principal instead.

enum class Side { L, R };

struct SideFail {
  std::set<Name> names;
};

struct TransError {
  std::string message;
};

using SideMap = std::map<Name, Side>;
using TransResult = std::variant<DerivPtr, SideFail>;

struct CllToUll {
  long steps = 0;

  Judgment ullJudgment(const Judgment& j, const SideMap& side) const {
    Judgment out;
    out.system = SystemId::ULL;
    for (const auto& [n, t] : j.unrestricted.entries) out.unrestricted.insert(n, dual(t));
    for (const auto& [n, t] : j.right.entries) {
      auto it = side.find(n);
      if (it == side.end()) throw TransError{"no side chosen for " + n};
      if (it->second == Side::R)
        out.right.insert(n, t);
      else
        out.left.insert(n, dual(t));
    }
    out.process = j.process;
    return out;
  }

  // Premise whose fresh right-hand names take the principal's side; their
  // failures are the principal's failures.
  TransResult forced(const DerivPtr& pr, const Judgment& parent, SideMap side, Side s,
                     const Name& chainTo) {
    std::set<Name> fresh;
    for (const auto& [n, t] : pr->conclusion.right.entries)
      if (!parent.right.has(n)) {
        side[n] = s;
        fresh.insert(n);
      }
    TransResult r = translate(pr, std::move(side));
    if (auto* f = std::get_if<SideFail>(&r)) {
      SideFail out;
      for (const Name& n : f->names) out.names.insert(fresh.count(n) ? chainTo : n);
      return out;
    }
    return r;
  }

  // Free side choice for one bound name: preferred side first, flip when the
  // failure blames the name.
  std::variant<std::pair<Side, DerivPtr>, SideFail> tryBoth(const DerivPtr& pr, SideMap side,
                                                            const Name& n, Side pref) {
    side[n] = pref;
    TransResult r1 = translate(pr, side);
    if (auto* dp = std::get_if<DerivPtr>(&r1)) return std::pair<Side, DerivPtr>{pref, *dp};
    SideFail f1 = std::get<SideFail>(r1);
    if (!f1.names.count(n)) return f1;
    Side other = pref == Side::R ? Side::L : Side::R;
    side[n] = other;
    TransResult r2 = translate(pr, side);
    if (auto* dp = std::get_if<DerivPtr>(&r2)) return std::pair<Side, DerivPtr>{other, *dp};
    SideFail out;
    for (const Name& m : f1.names)
      if (m != n) out.names.insert(m);
    for (const Name& m : std::get<SideFail>(r2).names)
      if (m != n) out.names.insert(m);
    if (out.names.empty()) throw TransError{"no side works for the bound name " + n};
    return out;
  }

  TransResult translate(const DerivPtr& d, SideMap side) {
    if (++steps > 2000000) throw TransError{"side-assignment search exceeded its budget"};
    const Judgment& j = d->conclusion;
    const ProcPtr& p = j.process;
    switch (d->rule) {
      case RuleName::CLL_ID: {
        Side sa = side.at(p->a), sb = side.at(p->b);
        if (sa == Side::R && sb == Side::R) return SideFail{{p->a, p->b}};
        RuleName r = (sa == Side::L && sb == Side::L) ? RuleName::IDL : RuleName::IDR;
        return makeDerivation(r, ullJudgment(j, side), {}, d->inst);
      }
      case RuleName::CLL_ONE: {
        RuleName r = side.at(p->a) == Side::R ? RuleName::ONE_R : RuleName::BOT_L;
        return makeDerivation(r, ullJudgment(j, side), {}, d->inst);
      }
      case RuleName::CLL_BOT: {
        TransResult sub = translate(d->premises[0], side);
        if (std::holds_alternative<SideFail>(sub)) return sub;
        RuleName r = side.at(p->a) == Side::R ? RuleName::BOT_R : RuleName::ONE_L;
        return makeDerivation(r, ullJudgment(j, side), {std::get<DerivPtr>(sub)}, d->inst);
      }
      case RuleName::CLL_TENSOR: {
        const Name& s = p->left->a;
        Side ss = side.at(s);
        std::vector<DerivPtr> prems;
        for (const DerivPtr& pr : d->premises) {
          TransResult r = forced(pr, j, side, ss, s);
          if (std::holds_alternative<SideFail>(r)) return r;
          prems.push_back(std::get<DerivPtr>(r));
        }
        RuleName r = ss == Side::R ? RuleName::TENSOR_R : RuleName::PAR_L;
        return makeDerivation(r, ullJudgment(j, side), std::move(prems), d->inst);
      }
      case RuleName::CLL_PAR: {
        const Name& s = p->a;
        Side ss = side.at(s);
        TransResult sub = forced(d->premises[0], j, side, ss, s);
        if (std::holds_alternative<SideFail>(sub)) return sub;
        RuleName r = ss == Side::R ? RuleName::PAR_R : RuleName::TENSOR_L;
        return makeDerivation(r, ullJudgment(j, side), {std::get<DerivPtr>(sub)}, d->inst);
      }
      case RuleName::CLL_BANG: {
        const Name& s = p->a;
        Side ss = side.at(s);
        TransResult sub = forced(d->premises[0], j, side, ss, s);
        if (std::holds_alternative<SideFail>(sub)) return sub;
        RuleName r = ss == Side::R ? RuleName::BANG_R : RuleName::QUEST_L;
        return makeDerivation(r, ullJudgment(j, side), {std::get<DerivPtr>(sub)}, d->inst);
      }
      case RuleName::CLL_QUEST: {
        const Judgment& pj = d->premises[0]->conclusion;
        Name z;
        bool found = false;
        for (const auto& [n, t] : j.right.entries)
          if (!pj.right.has(n)) {
            z = n;
            found = true;
            break;
          }
        if (!found) throw TransError{"malformed ?-node"};
        TransResult sub = translate(d->premises[0], side);
        if (std::holds_alternative<SideFail>(sub)) return sub;
        RuleName r = side.at(z) == Side::R ? RuleName::QUEST_R : RuleName::BANG_L;
        return makeDerivation(r, ullJudgment(j, side), {std::get<DerivPtr>(sub)}, d->inst);
      }
      case RuleName::CLL_COPY: {
        const Name& x = p->a;  // fresh client endpoint
        auto got = tryBoth(d->premises[0], side, x, Side::R);
        if (auto* f = std::get_if<SideFail>(&got)) return *f;
        auto [sx, sub] = std::get<std::pair<Side, DerivPtr>>(got);
        RuleName r = sx == Side::R ? RuleName::COPYR : RuleName::COPYL;
        return makeDerivation(r, ullJudgment(j, side), {sub}, d->inst);
      }
      case RuleName::CLL_CUT: {
        const Name& x = p->a;
        const DerivPtr &pa = d->premises[0], &pb = d->premises[1];
        // cached per-premise translations under each side of x
        std::map<int, TransResult> memo;
        auto attempt = [&](int which, Side s) -> TransResult& {
          int key = which * 2 + (s == Side::R ? 1 : 0);
          auto it = memo.find(key);
          if (it == memo.end()) {
            SideMap m = side;
            m[x] = s;
            it = memo.emplace(key, translate(which == 0 ? pa : pb, std::move(m))).first;
          }
          return it->second;
        };
        const std::pair<Side, Side> combos[3] = {{Side::R, Side::L},
                                                 {Side::L, Side::R},
                                                 {Side::L, Side::L}};
        SideFail gathered;
        for (const auto& [sa, sb] : combos) {
          TransResult& ra = attempt(0, sa);
          if (auto* f = std::get_if<SideFail>(&ra)) {
            for (const Name& n : f->names)
              if (n != x) gathered.names.insert(n);
            continue;
          }
          TransResult& rb = attempt(1, sb);
          if (auto* f = std::get_if<SideFail>(&rb)) {
            for (const Name& n : f->names)
              if (n != x) gathered.names.insert(n);
            continue;
          }
          DerivPtr da = std::get<DerivPtr>(ra), db = std::get<DerivPtr>(rb);
          Instantiation inst = d->inst;
          if (sa == Side::R)  // CUTR as stored
            return makeDerivation(RuleName::CUTR, ullJudgment(j, side), {da, db}, inst);
          if (sb == Side::R)  // CUTR with the premises the other way round
            return makeDerivation(RuleName::CUTR, ullJudgment(j, side), {db, da}, inst);
          return makeDerivation(RuleName::CUTL, ullJudgment(j, side), {da, db}, inst);
        }
        if (gathered.names.empty())
          throw TransError{"no side assignment composes the cut on " + x};
        return gathered;
      }
      case RuleName::CLL_CUTREPL: {
        // client premise extends the persistent context
        bool clientIsSecond =
            d->premises[1]->conclusion.unrestricted.size() > j.unrestricted.size();
        const DerivPtr& server = d->premises[clientIsSecond ? 0 : 1];
        const DerivPtr& client = d->premises[clientIsSecond ? 1 : 0];
        const Name& w = server->conclusion.right.entries[0].first;
        auto got = tryBoth(server, side, w, Side::R);
        if (auto* f = std::get_if<SideFail>(&got)) return *f;
        auto [sw, ds] = std::get<std::pair<Side, DerivPtr>>(got);
        TransResult rc = translate(client, side);
        if (std::holds_alternative<SideFail>(rc)) return rc;
        RuleName r = sw == Side::R ? RuleName::CUTBANG : RuleName::CUTQUEST;
        return makeDerivation(r, ullJudgment(j, side), {ds, std::get<DerivPtr>(rc)}, d->inst);
      }
      default:
        throw TransError{"not a one-sided rule: " + ruleLabel(d->rule)};
    }
  }
};

// ------------------------------------------------------------- ULL -> CLL

PropPtr eDual(const PropPtr& t) { return dual(expandLolli(t)); }

Judgment cllJudgment(const Judgment& j) {
  Judgment out;
  out.system = SystemId::CLL;
  for (const auto& [n, t] : j.unrestricted.entries) out.unrestricted.insert(n, eDual(t));
  for (const auto& [n, t] : j.left.entries) out.right.insert(n, eDual(t));
  for (const auto& [n, t] : j.right.entries) out.right.insert(n, expandLolli(t));
  out.process = j.process;
  return out;
}

RuleName cllRuleFor(RuleName r) {
  switch (r) {
    case RuleName::IDR:
    case RuleName::IDL: return RuleName::CLL_ID;
    case RuleName::ONE_R:
    case RuleName::BOT_L: return RuleName::CLL_ONE;
    case RuleName::ONE_L:
    case RuleName::BOT_R: return RuleName::CLL_BOT;
    case RuleName::TENSOR_R:
    case RuleName::PAR_L:
    case RuleName::LOLLI_L: return RuleName::CLL_TENSOR;
    case RuleName::PAR_R:
    case RuleName::TENSOR_L:
    case RuleName::LOLLI_R: return RuleName::CLL_PAR;
    case RuleName::BANG_R:
    case RuleName::QUEST_L: return RuleName::CLL_BANG;
    case RuleName::BANG_L:
    case RuleName::QUEST_R: return RuleName::CLL_QUEST;
    case RuleName::COPYR:
    case RuleName::COPYL: return RuleName::CLL_COPY;
    case RuleName::CUTR:
    case RuleName::CUTL: return RuleName::CLL_CUT;
    case RuleName::CUTBANG:
    case RuleName::CUTQUEST: return RuleName::CLL_CUTREPL;
    default: throw TransError{"not a two-sided rule: " + ruleLabel(r)};
  }
}

DerivPtr ullToCllNode(const DerivPtr& d) {
  std::vector<DerivPtr> prems;
  for (const DerivPtr& pr : d->premises) prems.push_back(ullToCllNode(pr));
  Instantiation inst = d->inst;
  if (inst.cutType) inst.cutType = expandLolli(inst.cutType);
  return makeDerivation(cllRuleFor(d->rule), cllJudgment(d->conclusion), std::move(prems),
                        std::move(inst));
}

// -------------------------------------------------------------- expansion

struct ExpandError {
  std::string message;
};

ProcPtr expandId(const PropPtr& a, const Name& s, const Name& t, bool full);

ProcPtr expandSub(const PropPtr& a, const Name& s, const Name& t, bool full) {
  return full ? expandId(a, s, t, true) : forwarder(s, t);
}

ProcPtr expandId(const PropPtr& a, const Name& s, const Name& t, bool full) {
  std::set<Name> avoid{s, t};
  switch (a->kind) {
    case PropKind::One:
      return wait(s, close(t));
    case PropKind::Bottom:
      return wait(t, close(s));
    case PropKind::Tensor: {
      Name z = freshName("z", avoid);
      avoid.insert(z);
      Name w = freshName("w", avoid);
      return input(s, z,
                   restriction(w, nullptr,
                               output(t, w,
                                      parallel(expandSub(a->left, z, w, full),
                                               expandSub(a->right, s, t, full)))));
    }
    case PropKind::Par: {
      Name w = freshName("w", avoid);
      avoid.insert(w);
      Name z = freshName("z", avoid);
      return input(t, w,
                   restriction(z, nullptr,
                               output(s, z,
                                      parallel(expandSub(a->left, z, w, full),
                                               expandSub(a->right, s, t, full)))));
    }
    case PropKind::Lolli: {
      // native form: the source provides the argument the target receives
      Name w = freshName("w", avoid);
      avoid.insert(w);
      Name z = freshName("z", avoid);
      return input(t, w,
                   restriction(z, nullptr,
                               output(s, z,
                                      parallel(expandSub(a->left, w, z, full),
                                               expandSub(a->right, s, t, full)))));
    }
    case PropKind::OfCourse: {
      Name w = freshName("w", avoid);
      avoid.insert(w);
      Name z = freshName("z", avoid);
      return replicatedInput(t, w,
                             restriction(z, nullptr,
                                         output(s, z, expandSub(a->left, z, w, full))));
    }
    case PropKind::WhyNot: {
      if (dualPreimages(a->left).empty())
        throw ExpandError{"no dual preimage exists for " + render(a->left) +
                          ", so the right-hand ?-introduction has no instance"};
      Name w = freshName("w", avoid);
      avoid.insert(w);
      Name z = freshName("z", avoid);
      return replicatedInput(s, w,
                             restriction(z, nullptr,
                                         output(t, z, expandSub(a->left, w, z, full))));
    }
  }
  throw ExpandError{"unknown proposition"};
}

}  // namespace

// --------------------------------------------------------------- exports

std::variant<DerivPtr, std::string> movePropositionsLeft(const DerivPtr& d,
                                                         const std::set<Name>& pi) {
  if (!d) return std::string("no derivation given");
  if (auto v = validateDerivation(*d); !v.ok) return "input does not validate: " + v.message;
  if (d->conclusion.system != SystemId::ULL)
    return std::string("the proposition mover expects a two-sided derivation");
  for (const Name& n : pi)
    if (!d->conclusion.right.has(n)) return "not a right-hand assignment: " + n;
  try {
    return mplNode(d, pi);
  } catch (const MplError& e) {
    return e.message;
  }
}

std::variant<DerivPtr, std::string> cllToUll(const DerivPtr& d) {
  if (!d) return std::string("no derivation given");
  if (auto v = validateDerivation(*d); !v.ok) return "input does not validate: " + v.message;
  if (d->conclusion.system != SystemId::CLL)
    return std::string("cllToUll expects a one-sided classical derivation");
  CllToUll tr;
  SideMap side;
  for (const auto& [n, t] : d->conclusion.right.entries) side[n] = Side::R;
  try {
    for (std::size_t pass = 0; pass <= side.size(); ++pass) {
      TransResult r = tr.translate(d, side);
      if (auto* dp = std::get_if<DerivPtr>(&r)) return *dp;
      const SideFail& f = std::get<SideFail>(r);
      bool flipped = false;
      for (const Name& n : f.names) {
        auto it = side.find(n);
        if (it != side.end() && it->second == Side::R) {
          it->second = Side::L;
          flipped = true;
          break;
        }
      }
      if (!flipped) {
        std::string names;
        for (const Name& n : f.names) names += (names.empty() ? "" : ", ") + n;
        return "no context split yields a two-sided derivation (blocked on: " + names + ")";
      }
    }
    return std::string("exhausted context-split attempts");
  } catch (const TransError& e) {
    return e.message;
  }
}

std::variant<DerivPtr, std::string> ullToCll(const DerivPtr& d) {
  if (!d) return std::string("no derivation given");
  if (auto v = validateDerivation(*d); !v.ok) return "input does not validate: " + v.message;
  if (d->conclusion.system != SystemId::ULL)
    return std::string("ullToCll expects a two-sided derivation");
  try {
    return ullToCllNode(d);
  } catch (const TransError& e) {
    return e.message;
  }
}

int rDegree(const DerivPtr& d) {
  if (!d) return 0;
  int m = static_cast<int>(d->conclusion.right.size());
  for (const DerivPtr& pr : d->premises) m = std::max(m, rDegree(pr));
  return m;
}

bool usesOnlyStarRules(const DerivPtr& d) {
  if (!d || !ruleStarred(d->rule)) return false;
  for (const DerivPtr& pr : d->premises)
    if (!usesOnlyStarRules(pr)) return false;
  return true;
}

std::variant<ClassificationReport, std::string> classify(const ProcPtr& p,
                                                         const ClassifyHints& hints,
                                                         const CheckOptions& opts) {
  if (!p) return std::string("no process given");
  bool closed = freeNames(p).empty();
  std::string err;
  auto prep = [&](SystemId sys, const std::optional<Judgment>& h) -> std::optional<Judgment> {
    if (h) {
      if (h->system != sys) {
        err = "hint judgment is tagged for a different system";
        return std::nullopt;
      }
      if (!alphaEquivalent(h->process, p)) {
        err = "hint judgment is about a different process";
        return std::nullopt;
      }
      return *h;
    }
    if (!closed) {
      err = "an open process needs a hint judgment for every system";
      return std::nullopt;
    }
    Judgment j;
    j.system = sys;
    j.process = p;
    return j;
  };
  auto ju = prep(SystemId::ULL, hints.ull);
  if (!ju) return err;
  auto jc = prep(SystemId::CLL, hints.cll);
  if (!jc) return err;
  auto ji = prep(SystemId::ILL, hints.ill);
  if (!ji) return err;
  ClassificationReport rep;
  if (auto r = checkULL(*ju, opts); auto* dp = std::get_if<DerivPtr>(&r)) {
    rep.inU = true;
    rep.uDeriv = *dp;
  }
  if (auto r = checkCLL(*jc, opts); auto* dp = std::get_if<DerivPtr>(&r)) {
    rep.inC = true;
    rep.cDeriv = *dp;
  }
  if (auto r = checkILL(*ji, opts); auto* dp = std::get_if<DerivPtr>(&r)) {
    rep.inJ = true;
    rep.jDeriv = *dp;
  }
  if (auto r = checkULLStarOnly(*ju, opts); auto* dp = std::get_if<DerivPtr>(&r)) {
    rep.inUStar = rDegree(*dp) == 1;
    if (rep.inUStar) rep.uStarDeriv = *dp;
  }
  return rep;
}

namespace {

void scanSubject(const ProcPtr& q, const Name& y, const std::string& binder,
                 std::vector<LocalityViolation>& out) {
  if (!q) return;
  switch (q->kind) {
    case ProcKind::Inaction:
    case ProcKind::Forwarder:
    case ProcKind::Close:
      return;
    case ProcKind::Restriction:
      if (q->a == y) return;
      scanSubject(q->left, y, binder, out);
      return;
    case ProcKind::Parallel:
      scanSubject(q->left, y, binder, out);
      scanSubject(q->right, y, binder, out);
      return;
    case ProcKind::Output:
    case ProcKind::Wait:
      scanSubject(q->left, y, binder, out);
      return;
    case ProcKind::Input:
      if (q->b == y) return;
      scanSubject(q->left, y, binder, out);
      return;
    case ProcKind::ReplicatedInput:
      if (q->a == y) out.push_back({y, binder, render(q)});
      if (q->b != y) scanSubject(q->left, y, binder, out);
      return;
  }
}

void walkLocality(const ProcPtr& p, std::vector<LocalityViolation>& out) {
  if (!p) return;
  if (p->kind == ProcKind::Input) scanSubject(p->left, p->b, render(p), out);
  if (p->left) walkLocality(p->left, out);
  if (p->right) walkLocality(p->right, out);
}

}  // namespace

LocalityReport localityViolations(const ProcPtr& p) {
  LocalityReport rep;
  walkLocality(p, rep.violations);
  return rep;
}

std::variant<ProcPtr, std::string> identityExpansion(const PropPtr& a, const Name& source,
                                                     const Name& target, bool full) {
  if (!a) return std::string("no proposition given");
  if (source == target) return std::string("source and target must differ");
  try {
    return expandId(a, source, target, full);
  } catch (const ExpandError& e) {
    return e.message;
  }
}

SubjectReductionReport subjectReductionCheck(const Judgment& j, int fuel, std::uint64_t seed,
                                             const CheckOptions& opts) {
  SubjectReductionReport rep;
  CheckResult first = checkAny(j, opts);
  if (auto* f = std::get_if<TypingFailure>(&first)) {
    rep.error = "initial judgment rejected: " + failureSummary(*f);
    return rep;
  }
  auto adjust = [](Judgment g, const StepLabel& lab, const ProcPtr& q) {
    g.process = q;
    // A synchronization on a free channel consumes its assignments; bound
    // channels never appear in the contexts.
    if (lab.kind == StepKind::CloseWait) {
      if (g.left.has(lab.subject)) g.left = g.left.without(lab.subject);
      if (g.right.has(lab.subject)) g.right = g.right.without(lab.subject);
    }
    return g;
  };
  auto note = [&](const Judgment& g, const StepLabel& lab) {
    ++rep.reductsChecked;
    CheckResult r = checkAny(g, opts);
    if (auto* f = std::get_if<TypingFailure>(&r))
      rep.failures.push_back(render(g) + "  (after " + stepKindLabel(lab.kind) + " on " +
                             lab.subject + "): " + failureSummary(*f));
  };
  for (const Redex& r : redexes(j.process)) note(adjust(j, r.label, r.result), r.label);
  ReductionTrace tr = reduce(j.process, fuel, seed);
  Judgment cur = j;
  for (const auto& [lab, q] : tr.steps) {
    cur = adjust(cur, lab, q);
    note(cur, lab);
  }
  rep.pass = rep.failures.empty();
  return rep;
}

ProgressReport progressCheck(const Judgment& j, const CheckOptions& opts) {
  ProgressReport rep;
  if (!j.unrestricted.empty() || !j.left.empty() || !j.right.empty()) {
    rep.error = "progress needs all three contexts empty";
    return rep;
  }
  CheckResult r = checkAny(j, opts);
  if (auto* f = std::get_if<TypingFailure>(&r)) {
    rep.error = "initial judgment rejected: " + failureSummary(*f);
    return rep;
  }
  rep.live = isLive(j.process);
  rep.redexCount = redexes(j.process).size();
  rep.pass = !rep.live || rep.redexCount > 0;
  return rep;
}

}  // namespace ullpi
