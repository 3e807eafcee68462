#include "ullpi/syntax.hpp"

#include <algorithm>
#include <cassert>
#include <map>
#include <sstream>

namespace ullpi {

namespace {

PropPtr mk(PropKind k, PropPtr l = nullptr, PropPtr r = nullptr) {
  auto p = std::make_shared<Proposition>();
  p->kind = k;
  p->left = std::move(l);
  p->right = std::move(r);
  return p;
}

}  // namespace

PropPtr one() {
  static const PropPtr p = mk(PropKind::One);
  return p;
}

PropPtr bottom() {
  static const PropPtr p = mk(PropKind::Bottom);
  return p;
}

PropPtr tensor(PropPtr a, PropPtr b) { return mk(PropKind::Tensor, std::move(a), std::move(b)); }
PropPtr par(PropPtr a, PropPtr b) { return mk(PropKind::Par, std::move(a), std::move(b)); }
PropPtr lolli(PropPtr a, PropPtr b) { return mk(PropKind::Lolli, std::move(a), std::move(b)); }
PropPtr ofCourse(PropPtr a) { return mk(PropKind::OfCourse, std::move(a)); }
PropPtr whyNot(PropPtr a) { return mk(PropKind::WhyNot, std::move(a)); }

bool propEqual(const PropPtr& a, const PropPtr& b) {
  if (a == b) return true;
  if (!a || !b) return false;
  if (a->kind != b->kind) return false;
  switch (a->kind) {
    case PropKind::One:
    case PropKind::Bottom:
      return true;
    case PropKind::OfCourse:
    case PropKind::WhyNot:
      return propEqual(a->left, b->left);
    default:
      return propEqual(a->left, b->left) && propEqual(a->right, b->right);
  }
}

int propDepth(const PropPtr& a) {
  switch (a->kind) {
    case PropKind::One:
    case PropKind::Bottom:
      return 1;
    case PropKind::OfCourse:
    case PropKind::WhyNot:
      return 1 + propDepth(a->left);
    default:
      return 1 + std::max(propDepth(a->left), propDepth(a->right));
  }
}

PropPtr dual(const PropPtr& a) {
  switch (a->kind) {
    case PropKind::One:
      return bottom();
    case PropKind::Bottom:
      return one();
    case PropKind::Tensor:
      return par(dual(a->left), dual(a->right));
    case PropKind::Par:
      return tensor(dual(a->left), dual(a->right));
    case PropKind::Lolli:
      // (A -o B)^⊥ = A ⊗ B^⊥, the A untouched.
      return tensor(a->left, dual(a->right));
    case PropKind::OfCourse:
      return whyNot(dual(a->left));
    case PropKind::WhyNot:
      return ofCourse(dual(a->left));
  }
  return nullptr;
}

PropPtr expandLolli(const PropPtr& a) {
  switch (a->kind) {
    case PropKind::One:
    case PropKind::Bottom:
      return a;
    case PropKind::Tensor:
      return tensor(expandLolli(a->left), expandLolli(a->right));
    case PropKind::Par:
      return par(expandLolli(a->left), expandLolli(a->right));
    case PropKind::Lolli:
      // A -o B = A^⊥ ℘ B; expanding before dualizing keeps the result Lolli-free.
      return par(dual(expandLolli(a->left)), expandLolli(a->right));
    case PropKind::OfCourse:
      return ofCourse(expandLolli(a->left));
    case PropKind::WhyNot:
      return whyNot(expandLolli(a->left));
  }
  return nullptr;
}

bool lolliFree(const PropPtr& a) {
  switch (a->kind) {
    case PropKind::One:
    case PropKind::Bottom:
      return true;
    case PropKind::Lolli:
      return false;
    case PropKind::OfCourse:
    case PropKind::WhyNot:
      return lolliFree(a->left);
    default:
      return lolliFree(a->left) && lolliFree(a->right);
  }
}

std::vector<PropPtr> dualPreimages(const PropPtr& a, std::size_t cap) {
  std::vector<PropPtr> out;
  auto push = [&](PropPtr p) {
    if (out.size() >= cap) return;
    for (const auto& q : out)
      if (propEqual(q, p)) return;
    out.push_back(std::move(p));
  };
  switch (a->kind) {
    case PropKind::One:
      push(bottom());
      break;
    case PropKind::Bottom:
      push(one());
      break;
    case PropKind::Tensor: {
      auto pl = dualPreimages(a->left, cap);
      auto pr = dualPreimages(a->right, cap);
      for (const auto& l : pl)
        for (const auto& r : pr) push(par(l, r));
      for (const auto& r : pr) push(lolli(a->left, r));
      break;
    }
    case PropKind::Par: {
      auto pl = dualPreimages(a->left, cap);
      auto pr = dualPreimages(a->right, cap);
      for (const auto& l : pl)
        for (const auto& r : pr) push(tensor(l, r));
      break;
    }
    case PropKind::Lolli:
      break;  // dual never produces a Lolli root
    case PropKind::OfCourse:
      for (const auto& b : dualPreimages(a->left, cap)) push(whyNot(b));
      break;
    case PropKind::WhyNot:
      for (const auto& b : dualPreimages(a->left, cap)) push(ofCourse(b));
      break;
  }
  // Canonical candidate first: dual(a) whenever it is a genuine preimage.
  PropPtr canon = dual(a);
  if (propEqual(dual(canon), a)) {
    std::size_t at = out.size();
    for (std::size_t i = 0; i < out.size(); ++i)
      if (propEqual(out[i], canon)) {
        at = i;
        break;
      }
    if (at == out.size()) {
      out.insert(out.begin(), canon);
    } else if (at != 0) {
      std::rotate(out.begin(), out.begin() + at, out.begin() + at + 1);
    }
  }
  return out;
}

bool inFragment(const PropPtr& a, Fragment f) {
  switch (f) {
    case Fragment::FullULL:
      return true;
    case Fragment::CLL:
      return lolliFree(a);
    case Fragment::ILL:
      switch (a->kind) {
        case PropKind::One:
          return true;
        case PropKind::Bottom:
        case PropKind::Par:
        case PropKind::WhyNot:
          return false;
        case PropKind::OfCourse:
          return inFragment(a->left, f);
        default:
          return inFragment(a->left, f) && inFragment(a->right, f);
      }
  }
  return false;
}

// ---------------------------------------------------------------------------
// Processes

namespace {

std::shared_ptr<Process> mkp(ProcKind k) {
  auto p = std::make_shared<Process>();
  p->kind = k;
  return p;
}

}  // namespace

ProcPtr inaction() {
  static const ProcPtr p = mkp(ProcKind::Inaction);
  return p;
}

ProcPtr forwarder(Name a, Name b) {
  auto p = mkp(ProcKind::Forwarder);
  p->a = std::move(a);
  p->b = std::move(b);
  return p;
}

ProcPtr restriction(Name bound, PropPtr annotation, ProcPtr body) {
  auto p = mkp(ProcKind::Restriction);
  p->a = std::move(bound);
  p->annotation = std::move(annotation);
  p->left = std::move(body);
  return p;
}

ProcPtr parallel(ProcPtr a, ProcPtr b) {
  auto p = mkp(ProcKind::Parallel);
  p->left = std::move(a);
  p->right = std::move(b);
  return p;
}

ProcPtr output(Name subject, Name object, ProcPtr cont) {
  auto p = mkp(ProcKind::Output);
  p->a = std::move(subject);
  p->b = std::move(object);
  p->left = std::move(cont);
  return p;
}

ProcPtr input(Name subject, Name bound, ProcPtr cont) {
  auto p = mkp(ProcKind::Input);
  p->a = std::move(subject);
  p->b = std::move(bound);
  p->left = std::move(cont);
  return p;
}

ProcPtr replicatedInput(Name subject, Name bound, ProcPtr cont) {
  auto p = mkp(ProcKind::ReplicatedInput);
  p->a = std::move(subject);
  p->b = std::move(bound);
  p->left = std::move(cont);
  return p;
}

ProcPtr close(Name subject) {
  auto p = mkp(ProcKind::Close);
  p->a = std::move(subject);
  return p;
}

ProcPtr wait(Name subject, ProcPtr cont) {
  auto p = mkp(ProcKind::Wait);
  p->a = std::move(subject);
  p->left = std::move(cont);
  return p;
}

bool procEqual(const ProcPtr& p, const ProcPtr& q) {
  if (p == q) return true;
  if (!p || !q || p->kind != q->kind) return false;
  if (p->a != q->a || p->b != q->b) return false;
  if ((p->annotation == nullptr) != (q->annotation == nullptr)) return false;
  if (p->annotation && !propEqual(p->annotation, q->annotation)) return false;
  if ((p->left == nullptr) != (q->left == nullptr)) return false;
  if (p->left && !procEqual(p->left, q->left)) return false;
  if ((p->right == nullptr) != (q->right == nullptr)) return false;
  if (p->right && !procEqual(p->right, q->right)) return false;
  return true;
}

namespace {

void collectFree(const ProcPtr& p, std::set<Name>& bound, std::set<Name>& out) {
  switch (p->kind) {
    case ProcKind::Inaction:
      return;
    case ProcKind::Forwarder:
      if (!bound.count(p->a)) out.insert(p->a);
      if (!bound.count(p->b)) out.insert(p->b);
      return;
    case ProcKind::Close:
      if (!bound.count(p->a)) out.insert(p->a);
      return;
    case ProcKind::Wait:
      if (!bound.count(p->a)) out.insert(p->a);
      collectFree(p->left, bound, out);
      return;
    case ProcKind::Output:
      if (!bound.count(p->a)) out.insert(p->a);
      if (!bound.count(p->b)) out.insert(p->b);
      collectFree(p->left, bound, out);
      return;
    case ProcKind::Input:
    case ProcKind::ReplicatedInput: {
      if (!bound.count(p->a)) out.insert(p->a);
      bool added = bound.insert(p->b).second;
      collectFree(p->left, bound, out);
      if (added) bound.erase(p->b);
      return;
    }
    case ProcKind::Restriction: {
      bool added = bound.insert(p->a).second;
      collectFree(p->left, bound, out);
      if (added) bound.erase(p->a);
      return;
    }
    case ProcKind::Parallel:
      collectFree(p->left, bound, out);
      collectFree(p->right, bound, out);
      return;
  }
}

}  // namespace

std::set<Name> freeNames(const ProcPtr& p) {
  std::set<Name> bound, out;
  collectFree(p, bound, out);
  return out;
}

Name freshName(const Name& stem, const std::set<Name>& avoid) {
  if (!avoid.count(stem)) return stem;
  for (unsigned long i = 1;; ++i) {
    Name cand = stem + std::to_string(i);
    if (!avoid.count(cand)) return cand;
  }
}

ProcPtr substitute(const ProcPtr& p, const Name& replacement, const Name& target) {
  if (replacement == target) return p;
  auto rn = [&](const Name& n) { return n == target ? replacement : n; };
  switch (p->kind) {
    case ProcKind::Inaction:
      return p;
    case ProcKind::Forwarder:
      return forwarder(rn(p->a), rn(p->b));
    case ProcKind::Close:
      return close(rn(p->a));
    case ProcKind::Wait:
      return wait(rn(p->a), substitute(p->left, replacement, target));
    case ProcKind::Output:
      return output(rn(p->a), rn(p->b), substitute(p->left, replacement, target));
    case ProcKind::Input:
    case ProcKind::ReplicatedInput: {
      Name subj = rn(p->a);
      ProcPtr cont = p->left;
      Name b = p->b;
      if (b == target) {  // target shadowed below
        if (subj == p->a && cont == p->left) return p;
        return p->kind == ProcKind::Input ? input(subj, b, cont) : replicatedInput(subj, b, cont);
      }
      if (b == replacement) {  // would capture: rename the binder first
        std::set<Name> avoid = freeNames(cont);
        avoid.insert(replacement);
        avoid.insert(target);
        Name nb = freshName(b, avoid);
        cont = substitute(cont, nb, b);
        b = nb;
      }
      cont = substitute(cont, replacement, target);
      return p->kind == ProcKind::Input ? input(subj, b, cont) : replicatedInput(subj, b, cont);
    }
    case ProcKind::Restriction: {
      ProcPtr body = p->left;
      Name x = p->a;
      if (x == target) return p;
      if (x == replacement) {
        std::set<Name> avoid = freeNames(body);
        avoid.insert(replacement);
        avoid.insert(target);
        Name nx = freshName(x, avoid);
        body = substitute(body, nx, x);
        x = nx;
      }
      return restriction(x, p->annotation, substitute(body, replacement, target));
    }
    case ProcKind::Parallel:
      return parallel(substitute(p->left, replacement, target),
                      substitute(p->right, replacement, target));
  }
  return p;
}

namespace {

bool alphaEq(const ProcPtr& p, const ProcPtr& q, std::map<Name, long>& ep, std::map<Name, long>& eq,
             long& counter) {
  if (p->kind != q->kind) return false;
  auto same = [&](const Name& a, const Name& b) {
    auto ip = ep.find(a);
    auto iq = eq.find(b);
    if (ip == ep.end() && iq == eq.end()) return a == b;
    if (ip == ep.end() || iq == eq.end()) return false;
    return ip->second == iq->second;
  };
  auto withBinder = [&](const Name& a, const Name& b, auto cont) {
    long id = counter++;
    auto oldP = ep.find(a) == ep.end() ? std::optional<long>{} : std::optional<long>{ep[a]};
    auto oldQ = eq.find(b) == eq.end() ? std::optional<long>{} : std::optional<long>{eq[b]};
    ep[a] = id;
    eq[b] = id;
    bool r = cont();
    if (oldP)
      ep[a] = *oldP;
    else
      ep.erase(a);
    if (oldQ)
      eq[b] = *oldQ;
    else
      eq.erase(b);
    return r;
  };
  switch (p->kind) {
    case ProcKind::Inaction:
      return true;
    case ProcKind::Forwarder:
      return same(p->a, q->a) && same(p->b, q->b);
    case ProcKind::Close:
      return same(p->a, q->a);
    case ProcKind::Wait:
      return same(p->a, q->a) && alphaEq(p->left, q->left, ep, eq, counter);
    case ProcKind::Output:
      return same(p->a, q->a) && same(p->b, q->b) && alphaEq(p->left, q->left, ep, eq, counter);
    case ProcKind::Input:
    case ProcKind::ReplicatedInput:
      return same(p->a, q->a) &&
             withBinder(p->b, q->b, [&] { return alphaEq(p->left, q->left, ep, eq, counter); });
    case ProcKind::Restriction:
      return withBinder(p->a, q->a, [&] { return alphaEq(p->left, q->left, ep, eq, counter); });
    case ProcKind::Parallel:
      return alphaEq(p->left, q->left, ep, eq, counter) &&
             alphaEq(p->right, q->right, ep, eq, counter);
  }
  return false;
}

}  // namespace

bool alphaEquivalent(const ProcPtr& p, const ProcPtr& q) {
  std::map<Name, long> ep, eq;
  long counter = 0;
  return alphaEq(p, q, ep, eq, counter);
}

// ---------------------------------------------------------------------------
// Canonical forms

namespace {

// Drops inert units and dead binders; both rewrites are derivable from the
// congruence equations, so the class is unchanged.
ProcPtr simplify(const ProcPtr& p) {
  switch (p->kind) {
    case ProcKind::Parallel: {
      ProcPtr l = simplify(p->left);
      ProcPtr r = simplify(p->right);
      if (l->kind == ProcKind::Inaction) return r;
      if (r->kind == ProcKind::Inaction) return l;
      return parallel(l, r);
    }
    case ProcKind::Restriction: {
      ProcPtr body = simplify(p->left);
      if (body->kind == ProcKind::Inaction) return inaction();
      if (!freeNames(body).count(p->a)) return body;
      return restriction(p->a, p->annotation, body);
    }
    case ProcKind::Wait:
      return wait(p->a, simplify(p->left));
    case ProcKind::Output:
      return output(p->a, p->b, simplify(p->left));
    case ProcKind::Input:
      return input(p->a, p->b, simplify(p->left));
    case ProcKind::ReplicatedInput:
      return replicatedInput(p->a, p->b, simplify(p->left));
    default:
      return p;
  }
}

using Env = std::map<Name, std::string>;

struct Canonizer {
  long branchBudget = 2048;

  std::string tok(const Env& env, const Name& n) {
    auto it = env.find(n);
    return it == env.end() ? "f:" + n : it->second;
  }

  // Canonical (term, key) for a component whose root is not Parallel or
  // Restriction. depth tags binder tokens so nesting levels cannot alias.
  std::pair<ProcPtr, std::string> canon(const ProcPtr& p, const Env& env, int depth, long& vcnt) {
    switch (p->kind) {
      case ProcKind::Inaction:
        return {p, "0"};
      case ProcKind::Forwarder: {
        std::string ta = tok(env, p->a), tb = tok(env, p->b);
        if (tb < ta) return {forwarder(p->b, p->a), "fw(" + tb + "," + ta + ")"};
        return {forwarder(p->a, p->b), "fw(" + ta + "," + tb + ")"};
      }
      case ProcKind::Close:
        return {p, "cl(" + tok(env, p->a) + ")"};
      case ProcKind::Wait: {
        auto [c, k] = canon(p->left, env, depth, vcnt);
        return {wait(p->a, c), "wt(" + tok(env, p->a) + ";" + k + ")"};
      }
      case ProcKind::Output: {
        auto [c, k] = canon(p->left, env, depth, vcnt);
        return {output(p->a, p->b, c),
                "out(" + tok(env, p->a) + "," + tok(env, p->b) + ";" + k + ")"};
      }
      case ProcKind::Input:
      case ProcKind::ReplicatedInput: {
        Env env2 = env;
        env2[p->b] = "v" + std::to_string(depth) + "_" + std::to_string(vcnt++);
        auto [c, k] = canon(p->left, env2, depth, vcnt);
        const char* tag = p->kind == ProcKind::Input ? "in(" : "rep(";
        ProcPtr t = p->kind == ProcKind::Input ? input(p->a, p->b, c)
                                               : replicatedInput(p->a, p->b, c);
        return {t, tag + tok(env, p->a) + ";" + k + ")"};
      }
      case ProcKind::Restriction:
      case ProcKind::Parallel:
        return canonGroup(p, env, depth);
    }
    return {p, "?"};
  }

  struct Binder {
    Name name;
    PropPtr ann;
  };

  // Peels every restriction and parallel node reachable without crossing a
  // prefix; shadowing binders are renamed so the telescope is collision-free.
  void collect(const ProcPtr& p, std::vector<Binder>& binders, std::vector<ProcPtr>& comps,
               std::set<Name>& seen) {
    if (p->kind == ProcKind::Parallel) {
      collect(p->left, binders, comps, seen);
      collect(p->right, binders, comps, seen);
      return;
    }
    if (p->kind == ProcKind::Restriction) {
      Name x = p->a;
      ProcPtr body = p->left;
      if (seen.count(x)) {
        std::set<Name> avoid = seen;
        for (const auto& n : freeNames(body)) avoid.insert(n);
        Name nx = freshName(x, avoid);
        body = substitute(body, nx, x);
        x = nx;
      }
      seen.insert(x);
      binders.push_back({x, p->annotation});
      collect(body, binders, comps, seen);
      return;
    }
    if (p->kind == ProcKind::Inaction) return;
    comps.push_back(p);
  }

  struct GroupState {
    std::vector<Binder> binders;
    std::vector<ProcPtr> comps;
  };

  std::string markedKey(const GroupState& st, std::size_t bi, const Env& env, int depth) {
    Env env2 = env;
    for (std::size_t j = 0; j < st.binders.size(); ++j)
      env2[st.binders[j].name] = j == bi ? "B!" : "B?";
    std::vector<std::string> keys;
    for (const auto& c : st.comps) {
      if (!freeNames(c).count(st.binders[bi].name)) continue;
      long v = 0;
      keys.push_back(canon(c, env2, depth + 1, v).second);
    }
    std::sort(keys.begin(), keys.end());
    std::string out;
    for (const auto& k : keys) out += k + "|";
    return out;
  }

  // Narrows binders into minimal component groups, then fixes the order of
  // the binders that span everything and emits the canonical group.
  std::pair<ProcPtr, std::string> finishGroup(GroupState st, const Env& env, int depth) {
    for (;;) {
      if (st.comps.empty()) return {inaction(), "0"};
      // Candidate narrowings: binders covering a strict subset of components.
      std::vector<std::size_t> cands;
      std::string bestKey;
      std::size_t bestSize = 0;
      for (std::size_t i = 0; i < st.binders.size(); ++i) {
        std::size_t sz = 0;
        for (const auto& c : st.comps)
          if (freeNames(c).count(st.binders[i].name)) ++sz;
        if (sz == 0) {  // dead binder
          st.binders.erase(st.binders.begin() + i);
          --i;
          continue;
        }
        if (sz >= st.comps.size() || st.comps.size() == 1) continue;
        std::string mk = markedKey(st, i, env, depth);
        if (cands.empty() || sz < bestSize || (sz == bestSize && mk < bestKey)) {
          cands.assign(1, i);
          bestSize = sz;
          bestKey = mk;
        } else if (sz == bestSize && mk == bestKey) {
          cands.push_back(i);
        }
      }
      if (cands.empty()) break;
      if (cands.size() > 1 && branchBudget > 0) {
        // Residual tie: explore each choice, keep the least key.
        std::pair<ProcPtr, std::string> best{nullptr, ""};
        for (std::size_t ci : cands) {
          if (--branchBudget < 0) break;
          GroupState st2 = st;
          narrowAt(st2, ci);
          auto r = finishGroup(std::move(st2), env, depth);
          if (!best.first || r.second < best.second) best = r;
        }
        if (best.first) return best;
      }
      // Deterministic fallback: least binder name among the tied.
      std::size_t pick = cands[0];
      for (std::size_t ci : cands)
        if (st.binders[ci].name < st.binders[pick].name) pick = ci;
      narrowAt(st, pick);
    }
    return emitGroup(st, env, depth);
  }

  void narrowAt(GroupState& st, std::size_t bi) {
    Binder b = st.binders[bi];
    st.binders.erase(st.binders.begin() + bi);
    ProcPtr merged = nullptr;
    std::vector<ProcPtr> rest;
    for (const auto& c : st.comps) {
      if (freeNames(c).count(b.name)) {
        merged = merged ? parallel(merged, c) : c;
      } else {
        rest.push_back(c);
      }
    }
    rest.push_back(restriction(b.name, b.ann, merged));
    st.comps = std::move(rest);
  }

  std::pair<ProcPtr, std::string> emitGroup(const GroupState& st, const Env& env, int depth) {
    // Every remaining binder spans all components; choose their order by
    // minimizing the group key (exhaustive up to 6, marked-key sort beyond).
    std::vector<std::size_t> order(st.binders.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    auto evaluate = [&](const std::vector<std::size_t>& ord) {
      Env env2 = env;
      for (std::size_t i = 0; i < ord.size(); ++i)
        env2[st.binders[ord[i]].name] = "n" + std::to_string(depth) + "_" + std::to_string(i);
      std::vector<std::pair<std::string, ProcPtr>> keyed;
      for (const auto& c : st.comps) {
        long v = 0;
        auto [t, k] = canon(c, env2, depth + 1, v);
        int rank = c->kind == ProcKind::ReplicatedInput ? 0 : 1;
        keyed.emplace_back(std::to_string(rank) + k, t);
      }
      std::stable_sort(keyed.begin(), keyed.end(),
                       [](const auto& x, const auto& y) { return x.first < y.first; });
      std::string key = "nu" + std::to_string(ord.size()) + "(";
      for (const auto& [k, t] : keyed) key += k + "|";
      key += ")";
      return std::make_pair(key, keyed);
    };
    std::vector<std::size_t> bestOrder = order;
    if (st.binders.size() >= 2 && st.binders.size() <= 6) {
      std::string bestKey;
      std::vector<std::size_t> perm = order;
      std::sort(perm.begin(), perm.end());
      bool first = true;
      do {
        if (--branchBudget < 0 && !first) break;
        auto [k, keyed] = evaluate(perm);
        if (first || k < bestKey) {
          bestKey = k;
          bestOrder = perm;
        }
        first = false;
      } while (std::next_permutation(perm.begin(), perm.end()));
    } else if (st.binders.size() > 6) {
      GroupState tmp = st;
      std::vector<std::pair<std::string, std::size_t>> keys;
      for (std::size_t i = 0; i < st.binders.size(); ++i)
        keys.emplace_back(markedKey(tmp, i, env, depth) + "~" + st.binders[i].name, i);
      std::sort(keys.begin(), keys.end());
      bestOrder.clear();
      for (const auto& [k, i] : keys) bestOrder.push_back(i);
    }
    auto [key, keyed] = evaluate(bestOrder);
    ProcPtr body = nullptr;
    for (auto it = keyed.rbegin(); it != keyed.rend(); ++it)
      body = body ? parallel(it->second, body) : it->second;
    if (!body) body = inaction();
    for (auto it = bestOrder.rbegin(); it != bestOrder.rend(); ++it)
      body = restriction(st.binders[*it].name, st.binders[*it].ann, body);
    return {body, key};
  }

  std::pair<ProcPtr, std::string> canonGroup(const ProcPtr& p, const Env& env, int depth) {
    GroupState st;
    std::set<Name> seen;
    for (const auto& [n, t] : env) seen.insert(n);
    for (const auto& n : freeNames(p)) seen.insert(n);
    collect(p, st.binders, st.comps, seen);
    if (st.comps.empty()) return {inaction(), "0"};
    if (st.binders.empty() && st.comps.size() == 1) {
      long v = 0;
      return canon(st.comps[0], env, depth, v);
    }
    return finishGroup(std::move(st), env, depth);
  }
};

std::pair<ProcPtr, std::string> canonicalize(const ProcPtr& p) {
  ProcPtr s = simplify(p);
  Canonizer cz;
  long v = 0;
  return cz.canon(s, {}, 0, v);
}

}  // namespace

ProcPtr canonicalForm(const ProcPtr& p) { return canonicalize(p).first; }

std::string canonicalKey(const ProcPtr& p) { return canonicalize(p).second; }

bool structurallyCongruent(const ProcPtr& p, const ProcPtr& q) {
  return canonicalKey(p) == canonicalKey(q);
}

}  // namespace ullpi
