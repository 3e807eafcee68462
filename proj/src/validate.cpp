// Direct schema matcher for derivations: each node is checked against its
// rule's context arithmetic and process shape, without consulting the search
// used to build it. Component order and forwarder/cut orientation are
// accepted either way round; bound names are compared up to alpha-renaming
// by rebuilding the conclusion process from the premises.
#include <map>

#include "ullpi/surface.hpp"
#include "ullpi/typing.hpp"

namespace ullpi {
namespace {

using Entry = std::pair<Name, PropPtr>;

std::map<Name, PropPtr> asMap(const TypingContext& ctx) {
  std::map<Name, PropPtr> out;
  for (const auto& [n, t] : ctx.entries) out.emplace(n, t);
  return out;
}

bool mapsEqual(const std::map<Name, PropPtr>& a, const std::map<Name, PropPtr>& b) {
  if (a.size() != b.size()) return false;
  for (const auto& [n, t] : a) {
    auto it = b.find(n);
    if (it == b.end() || !propEqual(t, it->second)) return false;
  }
  return true;
}

bool ctxEquals(const TypingContext& a, const TypingContext& b) {
  return mapsEqual(asMap(a), asMap(b));
}

// bigger == smaller + one extra entry; returns that entry.
std::optional<Entry> soleExtra(const TypingContext& bigger, const TypingContext& smaller) {
  auto sm = asMap(smaller);
  if (bigger.size() != smaller.size() + 1) return std::nullopt;
  std::optional<Entry> extra;
  for (const auto& [n, t] : bigger.entries) {
    auto it = sm.find(n);
    if (it != sm.end()) {
      if (!propEqual(t, it->second)) return std::nullopt;
      sm.erase(it);
    } else if (extra) {
      return std::nullopt;
    } else {
      extra = Entry{n, t};
    }
  }
  if (!sm.empty()) return std::nullopt;
  return extra;
}

// whole == a ⊎ b (disjoint union as maps).
bool splitsInto(const TypingContext& whole, const TypingContext& a, const TypingContext& b) {
  auto wm = asMap(whole);
  if (a.size() + b.size() != wm.size()) return false;
  for (const TypingContext* part : {&a, &b})
    for (const auto& [n, t] : part->entries) {
      auto it = wm.find(n);
      if (it == wm.end() || !propEqual(t, it->second)) return false;
      wm.erase(it);
    }
  return wm.empty();
}

bool dualPair(const PropPtr& a, const PropPtr& b) {
  return propEqual(b, dual(a)) || propEqual(a, dual(b));
}

struct Validator {
  std::string err;

  bool fail(const Derivation& d, const std::string& why) {
    if (err.empty())
      err = std::string(ruleLabel(d.rule)) + " at [" + render(d.conclusion) + "]: " + why;
    return false;
  }

  bool invariants(const Derivation& d) {
    const Judgment& j = d.conclusion;
    std::string shape = judgmentShapeError(j);
    if (!shape.empty()) return fail(d, shape);
    if (!j.process) return fail(d, "missing process");
    std::set<Name> fn = freeNames(j.process);
    std::set<Name> all;
    for (const TypingContext* ctx : {&j.unrestricted, &j.left, &j.right})
      for (const auto& [n, t] : ctx->entries) all.insert(n);
    for (const TypingContext* ctx : {&j.left, &j.right})
      for (const auto& [n, t] : ctx->entries)
        if (!fn.count(n)) return fail(d, "linear name " + n + " not free in process");
    for (const Name& n : fn)
      if (!all.count(n)) return fail(d, "free name " + n + " not in any context");
    if (ruleSystem(d.rule) != j.system) return fail(d, "rule belongs to another system");
    for (const DerivPtr& p : d.premises) {
      if (!p) return fail(d, "null premise");
      if (p->conclusion.system != j.system) return fail(d, "premise system mismatch");
      std::string premShape = judgmentShapeError(p->conclusion);
      if (!premShape.empty()) return fail(d, "premise: " + premShape);
    }
    return true;
  }

  bool arity(const Derivation& d, size_t n) {
    if (d.premises.size() != n)
      return fail(d, "expected " + std::to_string(n) + " premises, got " +
                         std::to_string(d.premises.size()));
    return true;
  }

  // Conclusion process must match the rebuilt wrapper up to alpha-renaming.
  bool matches(const Derivation& d, const ProcPtr& expected) {
    if (!alphaEquivalent(d.conclusion.process, expected))
      return fail(d, "process does not match the rule's conclusion shape");
    return true;
  }

  bool node(const Derivation& d) {
    if (!invariants(d)) return false;
    if (!schema(d)) return false;
    for (const DerivPtr& p : d.premises)
      if (!node(*p)) return false;
    return true;
  }

  bool schema(const Derivation& d);

  // --- shared shapes ---------------------------------------------------

  // Forwarder axiom over one left and one right entry with equal types.
  bool twoSidedId(const Derivation& d) {
    const Judgment& j = d.conclusion;
    if (!arity(d, 0)) return false;
    const ProcPtr& p = j.process;
    if (p->kind != ProcKind::Forwarder) return fail(d, "process is not a forwarder");
    if (j.left.size() != 1 || j.right.size() != 1) return fail(d, "contexts are not singletons");
    const auto& [ln, lt] = j.left.entries[0];
    const auto& [rn, rt] = j.right.entries[0];
    bool ends = (ln == p->a && rn == p->b) || (ln == p->b && rn == p->a);
    if (!ends) return fail(d, "context names do not match the forwarder endpoints");
    if (!propEqual(lt, rt)) return fail(d, "endpoint types differ");
    return true;
  }

  // Unary rename move: premise swaps a persistent name u for a linear x.
  bool renameMove(const Derivation& d, const TypingContext& conclLinear,
                  const TypingContext& premLinear, bool questSide) {
    const Judgment& j = d.conclusion;
    const Judgment& pj = d.premises[0]->conclusion;
    auto u = soleExtra(pj.unrestricted, j.unrestricted);
    if (!u) return fail(d, "premise must extend the persistent context by one entry");
    auto x = soleExtra(conclLinear, premLinear);
    if (!x) return fail(d, "conclusion must extend the premise's linear context by one entry");
    PropKind wrap = questSide ? PropKind::WhyNot : PropKind::OfCourse;
    if (x->second->kind != wrap) return fail(d, "moved type has the wrong outer connective");
    bool typeOk;
    if (j.system == SystemId::ULL && questSide)
      typeOk = propEqual(x->second->left, dual(u->second));
    else
      typeOk = propEqual(x->second->left, u->second);
    if (!typeOk) return fail(d, "moved type does not match the persistent entry");
    return matches(d, substitute(pj.process, x->first, u->first));
  }
};

bool Validator::schema(const Derivation& d) {
  const Judgment& j = d.conclusion;
  const ProcPtr& p = j.process;
  auto prem = [&](size_t i) -> const Judgment& { return d.premises[i]->conclusion; };

  switch (d.rule) {
    // ------------------------------------------------------------- ULL
    case RuleName::IDR: return twoSidedId(d);

    case RuleName::IDL: {
      if (!arity(d, 0)) return false;
      if (p->kind != ProcKind::Forwarder) return fail(d, "process is not a forwarder");
      if (j.left.size() != 2 || !j.right.empty()) return fail(d, "needs two left entries only");
      PropPtr ta = j.left.lookup(p->a), tb = j.left.lookup(p->b);
      if (!ta || !tb) return fail(d, "endpoints missing from the left context");
      if (!dualPair(ta, tb)) return fail(d, "endpoint types are not dual");
      return true;
    }

    case RuleName::ONE_R: {
      if (!arity(d, 0)) return false;
      if (p->kind != ProcKind::Close) return fail(d, "process is not a close");
      if (!j.left.empty() || j.right.size() != 1) return fail(d, "contexts must be empty/singleton");
      const auto& [n, t] = j.right.entries[0];
      if (n != p->a || t->kind != PropKind::One) return fail(d, "subject must be right at 1");
      return true;
    }

    case RuleName::BOT_L: {
      if (!arity(d, 0)) return false;
      if (p->kind != ProcKind::Close) return fail(d, "process is not a close");
      if (!j.right.empty() || j.left.size() != 1) return fail(d, "contexts must be singleton/empty");
      const auto& [n, t] = j.left.entries[0];
      if (n != p->a || t->kind != PropKind::Bottom) return fail(d, "subject must be left at bot");
      return true;
    }

    case RuleName::ONE_L:
    case RuleName::BOT_R: {
      if (!arity(d, 1)) return false;
      if (p->kind != ProcKind::Wait) return fail(d, "process is not a wait");
      bool leftSide = d.rule == RuleName::ONE_L;
      const TypingContext& principalCtx = leftSide ? j.left : j.right;
      PropPtr t = principalCtx.lookup(p->a);
      if (!t) return fail(d, "subject missing from the principal context");
      if (t->kind != (leftSide ? PropKind::One : PropKind::Bottom))
        return fail(d, "principal type has the wrong connective");
      const Judgment& pj = prem(0);
      if (!ctxEquals(pj.unrestricted, j.unrestricted)) return fail(d, "persistent context changed");
      if (!ctxEquals(pj.left, leftSide ? j.left.without(p->a) : j.left))
        return fail(d, "left context mismatch");
      if (!ctxEquals(pj.right, leftSide ? j.right : j.right.without(p->a)))
        return fail(d, "right context mismatch");
      return matches(d, wait(p->a, pj.process));
    }

    case RuleName::TENSOR_L: {
      if (!arity(d, 1)) return false;
      if (p->kind != ProcKind::Input) return fail(d, "process is not an input");
      PropPtr t = j.left.lookup(p->a);
      if (!t || t->kind != PropKind::Tensor) return fail(d, "subject must be left at a tensor");
      const Judgment& pj = prem(0);
      if (!ctxEquals(pj.unrestricted, j.unrestricted)) return fail(d, "persistent context changed");
      if (!ctxEquals(pj.right, j.right)) return fail(d, "right context changed");
      PropPtr bx = pj.left.lookup(p->a);
      if (!bx || !propEqual(bx, t->right)) return fail(d, "subject keeps the second component");
      auto y = soleExtra(pj.left.without(p->a), j.left.without(p->a));
      if (!y || !propEqual(y->second, t->left)) return fail(d, "object entry mismatch");
      return matches(d, input(p->a, y->first, pj.process));
    }

    case RuleName::PAR_R: {
      if (!arity(d, 1)) return false;
      if (p->kind != ProcKind::Input) return fail(d, "process is not an input");
      PropPtr t = j.right.lookup(p->a);
      if (!t || t->kind != PropKind::Par) return fail(d, "subject must be right at a par");
      const Judgment& pj = prem(0);
      if (!ctxEquals(pj.unrestricted, j.unrestricted)) return fail(d, "persistent context changed");
      if (!ctxEquals(pj.left, j.left)) return fail(d, "left context changed");
      PropPtr bx = pj.right.lookup(p->a);
      if (!bx || !propEqual(bx, t->right)) return fail(d, "subject keeps the second component");
      auto y = soleExtra(pj.right.without(p->a), j.right.without(p->a));
      if (!y || !propEqual(y->second, t->left)) return fail(d, "object entry mismatch");
      return matches(d, input(p->a, y->first, pj.process));
    }

    case RuleName::LOLLI_R: {
      if (!arity(d, 1)) return false;
      if (p->kind != ProcKind::Input) return fail(d, "process is not an input");
      PropPtr t = j.right.lookup(p->a);
      if (!t || t->kind != PropKind::Lolli) return fail(d, "subject must be right at a lolli");
      const Judgment& pj = prem(0);
      if (!ctxEquals(pj.unrestricted, j.unrestricted)) return fail(d, "persistent context changed");
      PropPtr bx = pj.right.lookup(p->a);
      if (!bx || !propEqual(bx, t->right)) return fail(d, "subject keeps the target type");
      if (!ctxEquals(pj.right.without(p->a), j.right.without(p->a)))
        return fail(d, "right context mismatch");
      auto y = soleExtra(pj.left, j.left);
      if (!y || !propEqual(y->second, t->left)) return fail(d, "object entry mismatch");
      return matches(d, input(p->a, y->first, pj.process));
    }

    case RuleName::TENSOR_R:
    case RuleName::PAR_L:
    case RuleName::LOLLI_L: {
      if (!arity(d, 2)) return false;
      if (p->kind != ProcKind::Restriction || p->left->kind != ProcKind::Output ||
          p->left->b != p->a || p->left->left->kind != ProcKind::Parallel)
        return fail(d, "process is not a bound output over a parallel");
      const Name& s = p->left->a;
      const Judgment &p1 = prem(0), &p2 = prem(1);
      if (!ctxEquals(p1.unrestricted, j.unrestricted) ||
          !ctxEquals(p2.unrestricted, j.unrestricted))
        return fail(d, "persistent context changed");
      bool principalLeft = d.rule != RuleName::TENSOR_R;
      const TypingContext& principalCtx = principalLeft ? j.left : j.right;
      PropPtr t = principalCtx.lookup(s);
      PropKind want = d.rule == RuleName::TENSOR_R ? PropKind::Tensor
                      : d.rule == RuleName::PAR_L  ? PropKind::Par
                                                   : PropKind::Lolli;
      if (!t || t->kind != want) return fail(d, "principal type has the wrong connective");
      // First premise holds the object at the first component; with PAR_L it
      // sits on the left, otherwise on the right (LOLLI_L sends, so the
      // object is a fresh right entry of the first premise). The object is
      // the entry absent from the conclusion contexts.
      bool objLeft = d.rule == RuleName::PAR_L;
      std::optional<Entry> obj;
      const TypingContext& p1obj = objLeft ? p1.left : p1.right;
      const TypingContext& conclSame = objLeft ? j.left : j.right;
      auto conclMap = asMap(conclSame);
      for (const auto& [n, tt] : p1obj.entries)
        if (!conclMap.count(n)) {
          if (obj) return fail(d, "first premise adds more than one new entry");
          obj = Entry{n, tt};
        }
      if (!obj || !propEqual(obj->second, t->left))
        return fail(d, "object entry missing or mistyped in the first premise");
      PropPtr sx = (principalLeft ? p2.left : p2.right).lookup(s);
      if (!sx || !propEqual(sx, t->right))
        return fail(d, "subject must continue at the second component");
      // Context arithmetic per rule.
      TypingContext p1l = objLeft ? p1.left.without(obj->first) : p1.left;
      TypingContext p1r = !objLeft ? p1.right.without(obj->first) : p1.right;
      TypingContext p2l = principalLeft ? p2.left.without(s) : p2.left;
      TypingContext p2r = !principalLeft ? p2.right.without(s) : p2.right;
      TypingContext wholeL = principalLeft ? j.left.without(s) : j.left;
      TypingContext wholeR = !principalLeft ? j.right.without(s) : j.right;
      if (!splitsInto(wholeL, p1l, p2l)) return fail(d, "left context split mismatch");
      if (!splitsInto(wholeR, p1r, p2r)) return fail(d, "right context split mismatch");
      ProcPtr a = restriction(obj->first, nullptr,
                              output(s, obj->first, parallel(p1.process, p2.process)));
      ProcPtr b = restriction(obj->first, nullptr,
                              output(s, obj->first, parallel(p2.process, p1.process)));
      if (!alphaEquivalent(j.process, a) && !alphaEquivalent(j.process, b))
        return fail(d, "process does not match the rule's conclusion shape");
      return true;
    }

    case RuleName::BANG_R:
    case RuleName::QUEST_L: {
      if (!arity(d, 1)) return false;
      if (p->kind != ProcKind::ReplicatedInput) return fail(d, "process is not a replicated input");
      bool rightSide = d.rule == RuleName::BANG_R;
      const TypingContext& principalCtx = rightSide ? j.right : j.left;
      const TypingContext& otherCtx = rightSide ? j.left : j.right;
      if (principalCtx.size() != 1 || !otherCtx.empty())
        return fail(d, "contexts must be singleton/empty");
      const auto& [n, t] = principalCtx.entries[0];
      if (n != p->a) return fail(d, "subject missing from the principal context");
      if (t->kind != (rightSide ? PropKind::OfCourse : PropKind::WhyNot))
        return fail(d, "principal type has the wrong connective");
      const Judgment& pj = prem(0);
      if (!ctxEquals(pj.unrestricted, j.unrestricted)) return fail(d, "persistent context changed");
      const TypingContext& premPrincipal = rightSide ? pj.right : pj.left;
      const TypingContext& premOther = rightSide ? pj.left : pj.right;
      if (premPrincipal.size() != 1 || !premOther.empty())
        return fail(d, "premise contexts must be singleton/empty");
      const auto& [yn, yt] = premPrincipal.entries[0];
      if (!propEqual(yt, t->left)) return fail(d, "object type mismatch");
      return matches(d, replicatedInput(p->a, yn, pj.process));
    }

    case RuleName::BANG_L: return renameMove(d, j.left, prem(0).left, false);
    case RuleName::QUEST_R: return renameMove(d, j.right, prem(0).right, true);

    case RuleName::COPYR:
    case RuleName::COPYL: {
      if (!arity(d, 1)) return false;
      if (p->kind != ProcKind::Restriction || p->left->kind != ProcKind::Output ||
          p->left->b != p->a)
        return fail(d, "process is not a bound output");
      const Name& u = p->left->a;
      PropPtr A = j.unrestricted.lookup(u);
      if (!A) return fail(d, "subject is not a persistent name");
      const Judgment& pj = prem(0);
      if (!ctxEquals(pj.unrestricted, j.unrestricted)) return fail(d, "persistent context changed");
      bool rightSide = d.rule == RuleName::COPYR;
      if (!ctxEquals(rightSide ? pj.left : pj.right, rightSide ? j.left : j.right))
        return fail(d, "untouched context changed");
      auto x = soleExtra(rightSide ? pj.right : pj.left, rightSide ? j.right : j.left);
      if (!x) return fail(d, "premise must add exactly one entry for the object");
      PropPtr wantT = rightSide ? dual(A) : A;
      if (!propEqual(x->second, wantT)) return fail(d, "object type mismatch");
      return matches(d, restriction(x->first, nullptr, output(u, x->first, pj.process)));
    }

    case RuleName::CUTR: {
      if (!arity(d, 2)) return false;
      if (p->kind != ProcKind::Restriction || p->left->kind != ProcKind::Parallel)
        return fail(d, "process is not a restricted parallel");
      const Judgment &p1 = prem(0), &p2 = prem(1);
      if (!ctxEquals(p1.unrestricted, j.unrestricted) ||
          !ctxEquals(p2.unrestricted, j.unrestricted))
        return fail(d, "persistent context changed");
      std::optional<Entry> x;
      auto conclR = asMap(j.right);
      for (const auto& [n, t] : p1.right.entries)
        if (!conclR.count(n)) {
          if (x) return fail(d, "first premise adds more than one right entry");
          x = Entry{n, t};
        }
      if (!x) return fail(d, "cut channel missing from the first premise");
      PropPtr other = p2.left.lookup(x->first);
      if (!other || !propEqual(other, x->second))
        return fail(d, "premises disagree on the cut proposition");
      if (!splitsInto(j.left, p1.left, p2.left.without(x->first)))
        return fail(d, "left context split mismatch");
      if (!splitsInto(j.right, p1.right.without(x->first), p2.right))
        return fail(d, "right context split mismatch");
      ProcPtr a = restriction(x->first, nullptr, parallel(p1.process, p2.process));
      ProcPtr b = restriction(x->first, nullptr, parallel(p2.process, p1.process));
      if (!alphaEquivalent(j.process, a) && !alphaEquivalent(j.process, b))
        return fail(d, "process does not match the rule's conclusion shape");
      return true;
    }

    case RuleName::CUTL: {
      if (!arity(d, 2)) return false;
      if (p->kind != ProcKind::Restriction || p->left->kind != ProcKind::Parallel)
        return fail(d, "process is not a restricted parallel");
      const Judgment &p1 = prem(0), &p2 = prem(1);
      if (!ctxEquals(p1.unrestricted, j.unrestricted) ||
          !ctxEquals(p2.unrestricted, j.unrestricted))
        return fail(d, "persistent context changed");
      auto conclL = asMap(j.left);
      std::optional<Entry> x1, x2;
      for (const auto& [n, t] : p1.left.entries)
        if (!conclL.count(n)) {
          if (x1) return fail(d, "first premise adds more than one left entry");
          x1 = Entry{n, t};
        }
      for (const auto& [n, t] : p2.left.entries)
        if (!conclL.count(n)) {
          if (x2) return fail(d, "second premise adds more than one left entry");
          x2 = Entry{n, t};
        }
      if (!x1 || !x2 || x1->first != x2->first)
        return fail(d, "premises do not share a cut channel");
      if (!dualPair(x1->second, x2->second))
        return fail(d, "cut propositions are not dual");
      if (!splitsInto(j.left, p1.left.without(x1->first), p2.left.without(x1->first)))
        return fail(d, "left context split mismatch");
      if (!splitsInto(j.right, p1.right, p2.right)) return fail(d, "right context split mismatch");
      ProcPtr a = restriction(x1->first, nullptr, parallel(p1.process, p2.process));
      ProcPtr b = restriction(x1->first, nullptr, parallel(p2.process, p1.process));
      if (!alphaEquivalent(j.process, a) && !alphaEquivalent(j.process, b))
        return fail(d, "process does not match the rule's conclusion shape");
      return true;
    }

    case RuleName::CUTBANG:
    case RuleName::CUTQUEST: {
      if (!arity(d, 2)) return false;
      if (p->kind != ProcKind::Restriction || p->left->kind != ProcKind::Parallel)
        return fail(d, "process is not a restricted parallel");
      const Judgment &p1 = prem(0), &p2 = prem(1);
      bool bang = d.rule == RuleName::CUTBANG;
      const TypingContext& objCtx = bang ? p1.right : p1.left;
      const TypingContext& objOther = bang ? p1.left : p1.right;
      if (objCtx.size() != 1 || !objOther.empty())
        return fail(d, "server premise contexts must be singleton/empty");
      if (!ctxEquals(p1.unrestricted, j.unrestricted)) return fail(d, "persistent context changed");
      const auto& [w, wt] = objCtx.entries[0];
      auto u = soleExtra(p2.unrestricted, j.unrestricted);
      if (!u) return fail(d, "client premise must extend the persistent context by one entry");
      bool typeOk = bang ? propEqual(wt, u->second) : propEqual(wt, dual(u->second));
      if (!typeOk) return fail(d, "server object and persistent entry types do not align");
      if (!ctxEquals(p2.left, j.left) || !ctxEquals(p2.right, j.right))
        return fail(d, "client premise must keep the linear contexts");
      ProcPtr server = replicatedInput(u->first, w, p1.process);
      ProcPtr a = restriction(u->first, nullptr, parallel(server, p2.process));
      ProcPtr b = restriction(u->first, nullptr, parallel(p2.process, server));
      if (!alphaEquivalent(j.process, a) && !alphaEquivalent(j.process, b))
        return fail(d, "process does not match the rule's conclusion shape");
      return true;
    }

    // ------------------------------------------------------------- CLL
    case RuleName::CLL_ID: {
      if (!arity(d, 0)) return false;
      if (p->kind != ProcKind::Forwarder) return fail(d, "process is not a forwarder");
      if (j.right.size() != 2) return fail(d, "needs exactly two entries");
      PropPtr ta = j.right.lookup(p->a), tb = j.right.lookup(p->b);
      if (!ta || !tb) return fail(d, "endpoints missing from the context");
      if (!dualPair(ta, tb)) return fail(d, "endpoint types are not dual");
      return true;
    }

    case RuleName::CLL_ONE: {
      if (!arity(d, 0)) return false;
      if (p->kind != ProcKind::Close) return fail(d, "process is not a close");
      if (j.right.size() != 1) return fail(d, "context must be a singleton");
      const auto& [n, t] = j.right.entries[0];
      if (n != p->a || t->kind != PropKind::One) return fail(d, "subject must sit at 1");
      return true;
    }

    case RuleName::CLL_BOT: {
      if (!arity(d, 1)) return false;
      if (p->kind != ProcKind::Wait) return fail(d, "process is not a wait");
      PropPtr t = j.right.lookup(p->a);
      if (!t || t->kind != PropKind::Bottom) return fail(d, "subject must sit at bot");
      const Judgment& pj = prem(0);
      if (!ctxEquals(pj.unrestricted, j.unrestricted)) return fail(d, "persistent context changed");
      if (!ctxEquals(pj.right, j.right.without(p->a))) return fail(d, "context mismatch");
      return matches(d, wait(p->a, pj.process));
    }

    case RuleName::CLL_PAR: {
      if (!arity(d, 1)) return false;
      if (p->kind != ProcKind::Input) return fail(d, "process is not an input");
      PropPtr t = j.right.lookup(p->a);
      if (!t || t->kind != PropKind::Par) return fail(d, "subject must sit at a par");
      const Judgment& pj = prem(0);
      if (!ctxEquals(pj.unrestricted, j.unrestricted)) return fail(d, "persistent context changed");
      PropPtr bx = pj.right.lookup(p->a);
      if (!bx || !propEqual(bx, t->right)) return fail(d, "subject keeps the second component");
      auto y = soleExtra(pj.right.without(p->a), j.right.without(p->a));
      if (!y || !propEqual(y->second, t->left)) return fail(d, "object entry mismatch");
      return matches(d, input(p->a, y->first, pj.process));
    }

    case RuleName::CLL_TENSOR: {
      if (!arity(d, 2)) return false;
      if (p->kind != ProcKind::Restriction || p->left->kind != ProcKind::Output ||
          p->left->b != p->a || p->left->left->kind != ProcKind::Parallel)
        return fail(d, "process is not a bound output over a parallel");
      const Name& s = p->left->a;
      PropPtr t = j.right.lookup(s);
      if (!t || t->kind != PropKind::Tensor) return fail(d, "subject must sit at a tensor");
      const Judgment &p1 = prem(0), &p2 = prem(1);
      if (!ctxEquals(p1.unrestricted, j.unrestricted) ||
          !ctxEquals(p2.unrestricted, j.unrestricted))
        return fail(d, "persistent context changed");
      auto conclR = asMap(j.right.without(s));
      std::optional<Entry> obj;
      for (const auto& [n, tt] : p1.right.entries)
        if (!conclR.count(n) && n != s) {
          if (obj) return fail(d, "first premise adds more than one new entry");
          obj = Entry{n, tt};
        }
      if (!obj || !propEqual(obj->second, t->left))
        return fail(d, "object entry missing or mistyped in the first premise");
      PropPtr sx = p2.right.lookup(s);
      if (!sx || !propEqual(sx, t->right))
        return fail(d, "subject must continue at the second component");
      if (!splitsInto(j.right.without(s), p1.right.without(obj->first), p2.right.without(s)))
        return fail(d, "context split mismatch");
      ProcPtr a = restriction(obj->first, nullptr,
                              output(s, obj->first, parallel(p1.process, p2.process)));
      ProcPtr b = restriction(obj->first, nullptr,
                              output(s, obj->first, parallel(p2.process, p1.process)));
      if (!alphaEquivalent(j.process, a) && !alphaEquivalent(j.process, b))
        return fail(d, "process does not match the rule's conclusion shape");
      return true;
    }

    case RuleName::CLL_BANG: {
      if (!arity(d, 1)) return false;
      if (p->kind != ProcKind::ReplicatedInput) return fail(d, "process is not a replicated input");
      if (j.right.size() != 1) return fail(d, "context must be a singleton");
      const auto& [n, t] = j.right.entries[0];
      if (n != p->a || t->kind != PropKind::OfCourse) return fail(d, "subject must sit at a bang");
      const Judgment& pj = prem(0);
      if (!ctxEquals(pj.unrestricted, j.unrestricted)) return fail(d, "persistent context changed");
      if (pj.right.size() != 1) return fail(d, "premise context must be a singleton");
      const auto& [yn, yt] = pj.right.entries[0];
      if (!propEqual(yt, t->left)) return fail(d, "object type mismatch");
      return matches(d, replicatedInput(p->a, yn, pj.process));
    }

    case RuleName::CLL_QUEST: return renameMove(d, j.right, prem(0).right, true);

    case RuleName::CLL_COPY: {
      if (!arity(d, 1)) return false;
      if (p->kind != ProcKind::Restriction || p->left->kind != ProcKind::Output ||
          p->left->b != p->a)
        return fail(d, "process is not a bound output");
      const Name& u = p->left->a;
      PropPtr A = j.unrestricted.lookup(u);
      if (!A) return fail(d, "subject is not a persistent name");
      const Judgment& pj = prem(0);
      if (!ctxEquals(pj.unrestricted, j.unrestricted)) return fail(d, "persistent context changed");
      auto x = soleExtra(pj.right, j.right);
      if (!x) return fail(d, "premise must add exactly one entry for the object");
      if (!propEqual(x->second, A)) return fail(d, "object type mismatch");
      return matches(d, restriction(x->first, nullptr, output(u, x->first, pj.process)));
    }

    case RuleName::CLL_CUT: {
      if (!arity(d, 2)) return false;
      if (p->kind != ProcKind::Restriction || p->left->kind != ProcKind::Parallel)
        return fail(d, "process is not a restricted parallel");
      const Judgment &p1 = prem(0), &p2 = prem(1);
      if (!ctxEquals(p1.unrestricted, j.unrestricted) ||
          !ctxEquals(p2.unrestricted, j.unrestricted))
        return fail(d, "persistent context changed");
      auto conclR = asMap(j.right);
      std::optional<Entry> x1, x2;
      for (const auto& [n, t] : p1.right.entries)
        if (!conclR.count(n)) {
          if (x1) return fail(d, "first premise adds more than one entry");
          x1 = Entry{n, t};
        }
      for (const auto& [n, t] : p2.right.entries)
        if (!conclR.count(n)) {
          if (x2) return fail(d, "second premise adds more than one entry");
          x2 = Entry{n, t};
        }
      if (!x1 || !x2 || x1->first != x2->first)
        return fail(d, "premises do not share a cut channel");
      if (!dualPair(x1->second, x2->second)) return fail(d, "cut propositions are not dual");
      if (!splitsInto(j.right, p1.right.without(x1->first), p2.right.without(x1->first)))
        return fail(d, "context split mismatch");
      ProcPtr a = restriction(x1->first, nullptr, parallel(p1.process, p2.process));
      ProcPtr b = restriction(x1->first, nullptr, parallel(p2.process, p1.process));
      if (!alphaEquivalent(j.process, a) && !alphaEquivalent(j.process, b))
        return fail(d, "process does not match the rule's conclusion shape");
      return true;
    }

    case RuleName::CLL_CUTREPL: {
      if (!arity(d, 2)) return false;
      if (p->kind != ProcKind::Restriction || p->left->kind != ProcKind::Parallel)
        return fail(d, "process is not a restricted parallel");
      const Judgment &p1 = prem(0), &p2 = prem(1);
      if (p1.right.size() != 1) return fail(d, "server premise context must be a singleton");
      if (!ctxEquals(p1.unrestricted, j.unrestricted)) return fail(d, "persistent context changed");
      const auto& [w, wt] = p1.right.entries[0];
      auto u = soleExtra(p2.unrestricted, j.unrestricted);
      if (!u) return fail(d, "client premise must extend the persistent context by one entry");
      if (!propEqual(wt, dual(u->second)) && !propEqual(u->second, dual(wt)))
        return fail(d, "server object and persistent entry types are not dual");
      if (!ctxEquals(p2.right, j.right)) return fail(d, "client premise must keep the context");
      ProcPtr server = replicatedInput(u->first, w, p1.process);
      ProcPtr a = restriction(u->first, nullptr, parallel(server, p2.process));
      ProcPtr b = restriction(u->first, nullptr, parallel(p2.process, server));
      if (!alphaEquivalent(j.process, a) && !alphaEquivalent(j.process, b))
        return fail(d, "process does not match the rule's conclusion shape");
      return true;
    }

    // ------------------------------------------------------------- ILL
    case RuleName::ILL_ID: return twoSidedId(d);

    case RuleName::ILL_ONE_R: {
      if (!arity(d, 0)) return false;
      if (p->kind != ProcKind::Close) return fail(d, "process is not a close");
      if (!j.left.empty()) return fail(d, "left context must be empty");
      const auto& [n, t] = j.right.entries[0];
      if (n != p->a || t->kind != PropKind::One) return fail(d, "subject must be right at 1");
      return true;
    }

    case RuleName::ILL_ONE_L: {
      if (!arity(d, 1)) return false;
      if (p->kind != ProcKind::Wait) return fail(d, "process is not a wait");
      PropPtr t = j.left.lookup(p->a);
      if (!t || t->kind != PropKind::One) return fail(d, "subject must be left at 1");
      const Judgment& pj = prem(0);
      if (!ctxEquals(pj.unrestricted, j.unrestricted)) return fail(d, "persistent context changed");
      if (!ctxEquals(pj.left, j.left.without(p->a))) return fail(d, "left context mismatch");
      if (!ctxEquals(pj.right, j.right)) return fail(d, "right context changed");
      return matches(d, wait(p->a, pj.process));
    }

    case RuleName::ILL_TENSOR_L: {
      if (!arity(d, 1)) return false;
      if (p->kind != ProcKind::Input) return fail(d, "process is not an input");
      PropPtr t = j.left.lookup(p->a);
      if (!t || t->kind != PropKind::Tensor) return fail(d, "subject must be left at a tensor");
      const Judgment& pj = prem(0);
      if (!ctxEquals(pj.unrestricted, j.unrestricted)) return fail(d, "persistent context changed");
      if (!ctxEquals(pj.right, j.right)) return fail(d, "right context changed");
      PropPtr bx = pj.left.lookup(p->a);
      if (!bx || !propEqual(bx, t->right)) return fail(d, "subject keeps the second component");
      auto y = soleExtra(pj.left.without(p->a), j.left.without(p->a));
      if (!y || !propEqual(y->second, t->left)) return fail(d, "object entry mismatch");
      return matches(d, input(p->a, y->first, pj.process));
    }

    case RuleName::ILL_TENSOR_R: {
      if (!arity(d, 2)) return false;
      if (p->kind != ProcKind::Restriction || p->left->kind != ProcKind::Output ||
          p->left->b != p->a || p->left->left->kind != ProcKind::Parallel)
        return fail(d, "process is not a bound output over a parallel");
      const Name& s = p->left->a;
      const auto& [zn, zt] = j.right.entries[0];
      if (s != zn || zt->kind != PropKind::Tensor) return fail(d, "subject must be right at a tensor");
      const Judgment &p1 = prem(0), &p2 = prem(1);
      if (!ctxEquals(p1.unrestricted, j.unrestricted) ||
          !ctxEquals(p2.unrestricted, j.unrestricted))
        return fail(d, "persistent context changed");
      const auto& [yn, yt] = p1.right.entries[0];
      if (!propEqual(yt, zt->left)) return fail(d, "object type mismatch");
      const auto& [sn, st] = p2.right.entries[0];
      if (sn != s || !propEqual(st, zt->right))
        return fail(d, "subject must continue at the second component");
      if (!splitsInto(j.left, p1.left, p2.left)) return fail(d, "left context split mismatch");
      ProcPtr a = restriction(yn, nullptr, output(s, yn, parallel(p1.process, p2.process)));
      ProcPtr b = restriction(yn, nullptr, output(s, yn, parallel(p2.process, p1.process)));
      if (!alphaEquivalent(j.process, a) && !alphaEquivalent(j.process, b))
        return fail(d, "process does not match the rule's conclusion shape");
      return true;
    }

    case RuleName::ILL_LOLLI_R: {
      if (!arity(d, 1)) return false;
      if (p->kind != ProcKind::Input) return fail(d, "process is not an input");
      const auto& [zn, zt] = j.right.entries[0];
      if (p->a != zn || zt->kind != PropKind::Lolli)
        return fail(d, "subject must be right at a lolli");
      const Judgment& pj = prem(0);
      if (!ctxEquals(pj.unrestricted, j.unrestricted)) return fail(d, "persistent context changed");
      const auto& [pn, pt] = pj.right.entries[0];
      if (pn != zn || !propEqual(pt, zt->right)) return fail(d, "subject keeps the target type");
      auto y = soleExtra(pj.left, j.left);
      if (!y || !propEqual(y->second, zt->left)) return fail(d, "object entry mismatch");
      return matches(d, input(p->a, y->first, pj.process));
    }

    case RuleName::ILL_LOLLI_L: {
      if (!arity(d, 2)) return false;
      if (p->kind != ProcKind::Restriction || p->left->kind != ProcKind::Output ||
          p->left->b != p->a || p->left->left->kind != ProcKind::Parallel)
        return fail(d, "process is not a bound output over a parallel");
      const Name& s = p->left->a;
      PropPtr t = j.left.lookup(s);
      if (!t || t->kind != PropKind::Lolli) return fail(d, "subject must be left at a lolli");
      const Judgment &p1 = prem(0), &p2 = prem(1);
      if (!ctxEquals(p1.unrestricted, j.unrestricted) ||
          !ctxEquals(p2.unrestricted, j.unrestricted))
        return fail(d, "persistent context changed");
      const auto& [yn, yt] = p1.right.entries[0];
      if (!propEqual(yt, t->left)) return fail(d, "object type mismatch");
      if (!ctxEquals(p2.right, j.right)) return fail(d, "right context changed");
      PropPtr sx = p2.left.lookup(s);
      if (!sx || !propEqual(sx, t->right))
        return fail(d, "subject must continue at the second component");
      if (!splitsInto(j.left.without(s), p1.left, p2.left.without(s)))
        return fail(d, "left context split mismatch");
      ProcPtr a = restriction(yn, nullptr, output(s, yn, parallel(p1.process, p2.process)));
      ProcPtr b = restriction(yn, nullptr, output(s, yn, parallel(p2.process, p1.process)));
      if (!alphaEquivalent(j.process, a) && !alphaEquivalent(j.process, b))
        return fail(d, "process does not match the rule's conclusion shape");
      return true;
    }

    case RuleName::ILL_BANG_R: {
      if (!arity(d, 1)) return false;
      if (p->kind != ProcKind::ReplicatedInput) return fail(d, "process is not a replicated input");
      if (!j.left.empty()) return fail(d, "left context must be empty");
      const auto& [n, t] = j.right.entries[0];
      if (n != p->a || t->kind != PropKind::OfCourse) return fail(d, "subject must sit at a bang");
      const Judgment& pj = prem(0);
      if (!ctxEquals(pj.unrestricted, j.unrestricted)) return fail(d, "persistent context changed");
      if (!pj.left.empty()) return fail(d, "premise left context must be empty");
      const auto& [yn, yt] = pj.right.entries[0];
      if (!propEqual(yt, t->left)) return fail(d, "object type mismatch");
      return matches(d, replicatedInput(p->a, yn, pj.process));
    }

    case RuleName::ILL_BANG_L: return renameMove(d, j.left, prem(0).left, false);

    case RuleName::ILL_COPY: {
      if (!arity(d, 1)) return false;
      if (p->kind != ProcKind::Restriction || p->left->kind != ProcKind::Output ||
          p->left->b != p->a)
        return fail(d, "process is not a bound output");
      const Name& u = p->left->a;
      PropPtr A = j.unrestricted.lookup(u);
      if (!A) return fail(d, "subject is not a persistent name");
      const Judgment& pj = prem(0);
      if (!ctxEquals(pj.unrestricted, j.unrestricted)) return fail(d, "persistent context changed");
      if (!ctxEquals(pj.right, j.right)) return fail(d, "right context changed");
      auto x = soleExtra(pj.left, j.left);
      if (!x || !propEqual(x->second, A)) return fail(d, "object entry mismatch");
      return matches(d, restriction(x->first, nullptr, output(u, x->first, pj.process)));
    }

    case RuleName::ILL_CUT: {
      if (!arity(d, 2)) return false;
      if (p->kind != ProcKind::Restriction || p->left->kind != ProcKind::Parallel)
        return fail(d, "process is not a restricted parallel");
      const Judgment &p1 = prem(0), &p2 = prem(1);
      if (!ctxEquals(p1.unrestricted, j.unrestricted) ||
          !ctxEquals(p2.unrestricted, j.unrestricted))
        return fail(d, "persistent context changed");
      const auto& [xn, xt] = p1.right.entries[0];
      PropPtr other = p2.left.lookup(xn);
      if (!other || !propEqual(other, xt))
        return fail(d, "premises disagree on the cut proposition");
      if (!ctxEquals(p2.right, j.right)) return fail(d, "right context changed");
      if (!splitsInto(j.left, p1.left, p2.left.without(xn)))
        return fail(d, "left context split mismatch");
      ProcPtr a = restriction(xn, nullptr, parallel(p1.process, p2.process));
      ProcPtr b = restriction(xn, nullptr, parallel(p2.process, p1.process));
      if (!alphaEquivalent(j.process, a) && !alphaEquivalent(j.process, b))
        return fail(d, "process does not match the rule's conclusion shape");
      return true;
    }

    case RuleName::ILL_CUTREPL: {
      if (!arity(d, 2)) return false;
      if (p->kind != ProcKind::Restriction || p->left->kind != ProcKind::Parallel)
        return fail(d, "process is not a restricted parallel");
      const Judgment &p1 = prem(0), &p2 = prem(1);
      if (!p1.left.empty()) return fail(d, "server premise left context must be empty");
      if (!ctxEquals(p1.unrestricted, j.unrestricted)) return fail(d, "persistent context changed");
      const auto& [w, wt] = p1.right.entries[0];
      auto u = soleExtra(p2.unrestricted, j.unrestricted);
      if (!u) return fail(d, "client premise must extend the persistent context by one entry");
      if (!propEqual(wt, u->second))
        return fail(d, "server object and persistent entry types do not align");
      if (!ctxEquals(p2.left, j.left) || !ctxEquals(p2.right, j.right))
        return fail(d, "client premise must keep the linear contexts");
      ProcPtr server = replicatedInput(u->first, w, p1.process);
      ProcPtr a = restriction(u->first, nullptr, parallel(server, p2.process));
      ProcPtr b = restriction(u->first, nullptr, parallel(p2.process, server));
      if (!alphaEquivalent(j.process, a) && !alphaEquivalent(j.process, b))
        return fail(d, "process does not match the rule's conclusion shape");
      return true;
    }
  }
  return fail(d, "unknown rule");
}

}  // namespace

ValidationResult validateDerivation(const Derivation& d) {
  Validator v;
  bool ok = v.node(d);
  return {ok, ok ? "" : v.err};
}

}  // namespace ullpi
