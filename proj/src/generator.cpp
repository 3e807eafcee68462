#include "ullpi/generator.hpp"

#include <algorithm>
#include <cstddef>
#include <initializer_list>
#include <optional>
#include <random>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace ullpi {

namespace {

double defaultWeight(PropKind k) {
  switch (k) {
    case PropKind::One: return 2.0;
    case PropKind::Tensor: return 2.0;
    case PropKind::WhyNot: return 0.5;
    default: return 1.0;
  }
}

const std::vector<PropKind>& fragmentKinds(SystemId sys, bool starOnly) {
  static const std::vector<PropKind> full = {PropKind::One,   PropKind::Bottom,
                                             PropKind::Tensor, PropKind::Par,
                                             PropKind::Lolli,  PropKind::OfCourse,
                                             PropKind::WhyNot};
  static const std::vector<PropKind> noLolli = {PropKind::One, PropKind::Bottom,
                                                PropKind::Tensor, PropKind::Par,
                                                PropKind::OfCourse, PropKind::WhyNot};
  static const std::vector<PropKind> positive = {PropKind::One, PropKind::Tensor,
                                                 PropKind::Lolli, PropKind::OfCourse};
  if (sys == SystemId::ILL || (sys == SystemId::ULL && starOnly)) return positive;
  if (sys == SystemId::CLL) return noLolli;
  return full;
}

// Entry that must appear, with this exact type, in the conclusion of the
// node being generated. At most one is ever in flight; rules that cannot
// carry it through a premise are only picked requirement-free.
struct Req {
  bool left = true;  // CLL requirements sit on the right, singleton ones on the left
  Name name;
  PropPtr type;
};

struct Node {
  Judgment j;
  DerivPtr d;
};

// Rule spelling for the three singleton-right tree shapes (ULL starred rules
// and ILL share every schema).
struct SingletonRules {
  SystemId sys;
  RuleName id, oneR, oneL, tensorL, lolliR, cut, tensorR, lolliL, cutRepl, copy, bangR;
};

constexpr SingletonRules kStarRules{SystemId::ULL,
                                    RuleName::IDR,      RuleName::ONE_R,
                                    RuleName::ONE_L,    RuleName::TENSOR_L,
                                    RuleName::LOLLI_R,  RuleName::CUTR,
                                    RuleName::TENSOR_R, RuleName::LOLLI_L,
                                    RuleName::CUTBANG,  RuleName::COPYL,
                                    RuleName::BANG_R};

constexpr SingletonRules kIllRules{SystemId::ILL,
                                   RuleName::ILL_ID,       RuleName::ILL_ONE_R,
                                   RuleName::ILL_ONE_L,    RuleName::ILL_TENSOR_L,
                                   RuleName::ILL_LOLLI_R,  RuleName::ILL_CUT,
                                   RuleName::ILL_TENSOR_R, RuleName::ILL_LOLLI_L,
                                   RuleName::ILL_CUTREPL,  RuleName::ILL_COPY,
                                   RuleName::ILL_BANG_R};

TypingContext mergeCtx(const TypingContext& a, const TypingContext& b) {
  TypingContext out = a;
  for (const auto& [n, t] : b.entries) out.insert(n, t);
  return out;
}

struct Gen {
  const GenConfig& cfg;
  std::mt19937_64 rng;
  long counter = 0;
  SystemId jsys = SystemId::ULL;  // system tag stamped on produced judgments
  std::set<Name> pinned;          // names no later rule may touch or fold

  explicit Gen(const GenConfig& c) : cfg(c), rng(c.seed) {}

  Name fresh(const char* stem) { return stem + std::to_string(++counter); }

  double unit() { return double(rng() >> 11) * 0x1.0p-53; }

  bool coin(double p) { return unit() < p; }

  std::size_t pickWeighted(const std::vector<double>& w) {
    double total = 0;
    for (double x : w) total += std::max(x, 0.0);
    if (total <= 0) return 0;
    double r = unit() * total, acc = 0;
    for (std::size_t i = 0; i + 1 < w.size(); ++i) {
      acc += std::max(w[i], 0.0);
      if (r < acc) return i;
    }
    return w.size() - 1;
  }

  std::size_t pickIndex(std::size_t n) { return std::size_t(rng() % n); }

  double weightOf(PropKind k) const {
    auto it = cfg.connectiveWeights.find(k);
    return it != cfg.connectiveWeights.end() ? it->second : defaultWeight(k);
  }

  // ------------------------------------------------------------ propositions

  PropPtr prop(int depth) {
    const auto& kinds = fragmentKinds(cfg.system, cfg.starOnly);
    std::vector<PropKind> avail;
    std::vector<double> w;
    for (PropKind k : kinds) {
      bool leaf = k == PropKind::One || k == PropKind::Bottom;
      if (depth <= 1 && !leaf) continue;
      double wk = weightOf(k);
      if (wk <= 0) continue;
      avail.push_back(k);
      w.push_back(wk);
    }
    if (avail.empty()) return one();
    switch (avail[pickWeighted(w)]) {
      case PropKind::One: return one();
      case PropKind::Bottom: return bottom();
      case PropKind::Tensor: return tensor(prop(depth - 1), prop(depth - 1));
      case PropKind::Par: return par(prop(depth - 1), prop(depth - 1));
      case PropKind::Lolli: return lolli(prop(depth - 1), prop(depth - 1));
      case PropKind::OfCourse: return ofCourse(prop(depth - 1));
      case PropKind::WhyNot: return whyNot(prop(depth - 1));
    }
    return one();
  }

  int typeDepth(int depth) const { return std::min(depth, 3); }

  // Types a replicated provider can offer: units under tensor and of-course.
  PropPtr srvProp(int depth) {
    double wOne = std::max(weightOf(PropKind::One), 0.0);
    double wTen = depth > 1 ? std::max(weightOf(PropKind::Tensor), 0.0) : 0.0;
    double wBang = depth > 1 ? std::max(weightOf(PropKind::OfCourse), 0.0) : 0.0;
    if (wOne + wTen + wBang <= 0) return one();
    switch (pickWeighted({wOne, wTen, wBang})) {
      case 1: return tensor(srvProp(depth - 1), srvProp(depth - 1));
      case 2: return ofCourse(srvProp(depth - 1));
      default: return one();
    }
  }

  // ------------------------------------------------------------ scaffolding

  Judgment baseJudgment(const TypingContext& gamma) const {
    Judgment j;
    j.system = jsys;
    j.unrestricted = gamma;
    return j;
  }

  static std::optional<Name> protectedName(const std::optional<Req>& req, bool leftSide) {
    if (req && req->left == leftSide) return req->name;
    return std::nullopt;
  }

  // Context entries whose name is neither the protected one nor pinned.
  std::vector<std::size_t> eligible(const TypingContext& c,
                                    const std::optional<Name>& keep) const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < c.entries.size(); ++i) {
      const Name& n = c.entries[i].first;
      if (keep && n == *keep) continue;
      if (pinned.count(n)) continue;
      out.push_back(i);
    }
    return out;
  }

  std::pair<std::size_t, std::size_t> pickTwo(const std::vector<std::size_t>& el) {
    std::size_t i = pickIndex(el.size());
    std::size_t k = pickIndex(el.size() - 1);
    if (k >= i) ++k;
    return {el[i], el[k]};
  }

  // -------------------------------------------------- replicated providers
  // Γ; · ⊢ P :: w:A with A in the provider skeleton, in any of the systems.

  Node srvRight(const Name& w, const PropPtr& A, const TypingContext& gamma) {
    Judgment j = baseJudgment(gamma);
    j.right.insert(w, A);
    switch (A->kind) {
      case PropKind::One: {
        j.process = close(w);
        RuleName r = jsys == SystemId::CLL   ? RuleName::CLL_ONE
                     : jsys == SystemId::ILL ? RuleName::ILL_ONE_R
                                             : RuleName::ONE_R;
        return {j, makeDerivation(r, j, {}, {A, w, {}, {}})};
      }
      case PropKind::Tensor: {
        Name y = fresh("y");
        Node p1 = srvRight(y, A->left, gamma);
        Node p2 = srvRight(w, A->right, gamma);
        j.process = restriction(y, nullptr,
                                output(w, y, parallel(p1.j.process, p2.j.process)));
        RuleName r = jsys == SystemId::CLL   ? RuleName::CLL_TENSOR
                     : jsys == SystemId::ILL ? RuleName::ILL_TENSOR_R
                                             : RuleName::TENSOR_R;
        return {j, makeDerivation(r, j, {p1.d, p2.d}, {A, w, y, {}})};
      }
      case PropKind::OfCourse: {
        Name y = fresh("y");
        Node p1 = srvRight(y, A->left, gamma);
        j.process = replicatedInput(w, y, p1.j.process);
        RuleName r = jsys == SystemId::CLL   ? RuleName::CLL_BANG
                     : jsys == SystemId::ILL ? RuleName::ILL_BANG_R
                                             : RuleName::BANG_R;
        return {j, makeDerivation(r, j, {p1.d}, {A, w, y, {}})};
      }
      default: throw std::logic_error("provider type outside skeleton");
    }
  }

  // Γ; w:T ⊢ P :: · with T dual to a provider type (ULL only).
  Node srvLeft(const Name& w, const PropPtr& T, const TypingContext& gamma) {
    Judgment j = baseJudgment(gamma);
    j.left.insert(w, T);
    switch (T->kind) {
      case PropKind::Bottom:
        j.process = close(w);
        return {j, makeDerivation(RuleName::BOT_L, j, {}, {T, w, {}, {}})};
      case PropKind::Par: {
        Name y = fresh("y");
        Node p1 = srvLeft(y, T->left, gamma);
        Node p2 = srvLeft(w, T->right, gamma);
        j.process = restriction(y, nullptr,
                                output(w, y, parallel(p1.j.process, p2.j.process)));
        return {j, makeDerivation(RuleName::PAR_L, j, {p1.d, p2.d}, {T, w, y, {}})};
      }
      case PropKind::WhyNot: {
        Name y = fresh("y");
        Node p1 = srvLeft(y, T->left, gamma);
        j.process = replicatedInput(w, y, p1.j.process);
        return {j, makeDerivation(RuleName::QUEST_L, j, {p1.d}, {T, w, y, {}})};
      }
      default: throw std::logic_error("consumer type outside skeleton");
    }
  }

  // ---------------------------------------------- reduction-proof clients
  // Scope canonicalization keeps a replicated provider attached to its
  // restriction only while a sibling component still mentions the channel.
  // Every client of such a cut therefore carries one copy request sequenced
  // behind a wait on a pinned name; the pinned name stays free all the way
  // to the root judgment, so the copy can never fire and the mention never
  // disappears, no matter how the rest of the term reduces.

  // Provider types whose copy objects close by the unit/pair rules alone.
  PropPtr guardProp(int depth) {
    double wOne = std::max(weightOf(PropKind::One), 0.0);
    double wTen = depth > 1 ? std::max(weightOf(PropKind::Tensor), 0.0) : 0.0;
    if (wOne + wTen <= 0) return one();
    if (pickWeighted({wOne, wTen}) == 1)
      return tensor(guardProp(depth - 1), guardProp(depth - 1));
    return one();
  }

  // Consume s:T on the left above `base`; T comes from guardProp.
  Node consumeLeft(const Name& s, const PropPtr& T, Node base, RuleName oneL,
                   RuleName tensorL) {
    if (T->kind == PropKind::One) {
      Judgment j = base.j;
      j.left = base.j.left.with(s, one());
      j.process = wait(s, base.j.process);
      return {j, makeDerivation(oneL, j, {base.d}, {one(), s, {}, {}})};
    }
    Name y = fresh("y");
    Node inner = consumeLeft(
        y, T->left, consumeLeft(s, T->right, std::move(base), oneL, tensorL), oneL, tensorL);
    Judgment j = inner.j;
    j.left = inner.j.left.without(y).without(s).with(s, T);
    j.process = input(s, y, inner.j.process);
    return {j, makeDerivation(tensorL, j, {inner.d}, {T, s, y, {}})};
  }

  // Consume s:T on the right; T is the dual of a guardProp type.
  Node consumeRight(const Name& s, const PropPtr& T, Node base, RuleName botR,
                    RuleName parR) {
    if (T->kind == PropKind::Bottom) {
      Judgment j = base.j;
      j.right = base.j.right.with(s, bottom());
      j.process = wait(s, base.j.process);
      return {j, makeDerivation(botR, j, {base.d}, {bottom(), s, {}, {}})};
    }
    Name y = fresh("y");
    Node inner = consumeRight(
        y, T->left, consumeRight(s, T->right, std::move(base), botR, parR), botR, parR);
    Judgment j = inner.j;
    j.right = inner.j.right.without(y).without(s).with(s, T);
    j.process = input(s, y, inner.j.process);
    return {j, makeDerivation(parR, j, {inner.d}, {T, s, y, {}})};
  }

  Node guardLeftOne(Node base, RuleName oneL) {
    Name g = fresh("g");
    pinned.insert(g);
    Judgment j = base.j;
    j.left = base.j.left.with(g, one());
    j.process = wait(g, base.j.process);
    return {j, makeDerivation(oneL, j, {base.d}, {one(), g, {}, {}})};
  }

  Node guardRightBot(Node base, RuleName botR) {
    Name g = fresh("g");
    pinned.insert(g);
    Judgment j = base.j;
    j.right = base.j.right.with(g, bottom());
    j.process = wait(g, base.j.process);
    return {j, makeDerivation(botR, j, {base.d}, {bottom(), g, {}, {}})};
  }

  // ------------------------------------------------------------ ULL, full

  Node axiomULL(const TypingContext& gamma, const std::optional<Req>& req) {
    Judgment j = baseJudgment(gamma);
    if (req) {
      if (req->left) {
        if (req->type->kind == PropKind::Bottom && coin(0.3)) {
          j.left.insert(req->name, req->type);
          j.process = close(req->name);
          return {j, makeDerivation(RuleName::BOT_L, j, {}, {req->type, req->name, {}, {}})};
        }
        Name z = fresh("z");
        j.left.insert(req->name, req->type);
        j.right.insert(z, req->type);
        j.process = forwarder(req->name, z);
        return {j, makeDerivation(RuleName::IDR, j, {}, {req->type, req->name, z, {}})};
      }
      if (req->type->kind == PropKind::One && coin(0.3)) {
        j.right.insert(req->name, req->type);
        j.process = close(req->name);
        return {j, makeDerivation(RuleName::ONE_R, j, {}, {req->type, req->name, {}, {}})};
      }
      Name z = fresh("z");
      j.left.insert(z, req->type);
      j.right.insert(req->name, req->type);
      j.process = forwarder(z, req->name);
      return {j, makeDerivation(RuleName::IDR, j, {}, {req->type, z, req->name, {}})};
    }
    switch (pickWeighted({2.0, 1.5, 2.0, 0.8})) {
      case 0: {
        Name z = fresh("z");
        j.right.insert(z, one());
        j.process = close(z);
        return {j, makeDerivation(RuleName::ONE_R, j, {}, {one(), z, {}, {}})};
      }
      case 1: {
        Name z = fresh("z");
        j.left.insert(z, bottom());
        j.process = close(z);
        return {j, makeDerivation(RuleName::BOT_L, j, {}, {bottom(), z, {}, {}})};
      }
      case 2: {
        PropPtr T = prop(2);
        Name a = fresh("z"), b = fresh("z");
        j.left.insert(a, T);
        j.right.insert(b, T);
        j.process = forwarder(a, b);
        return {j, makeDerivation(RuleName::IDR, j, {}, {T, a, b, {}})};
      }
      default: {
        PropPtr T = prop(2);
        Name a = fresh("z"), b = fresh("z");
        j.left.insert(a, T);
        j.left.insert(b, dual(T));
        j.process = forwarder(a, b);
        return {j, makeDerivation(RuleName::IDL, j, {}, {T, a, b, {}})};
      }
    }
  }

  Node genULL(int depth, const TypingContext& gamma, const std::optional<Req>& req) {
    if (depth <= 1) return axiomULL(gamma, req);
    enum Op { AXIOM, ONEL, BOTR, TENL, PARR, LOLR, ONELX, BOTRX, CUTBANG_,
              CUTQUEST_, CUTR_, CUTL_, TENR, PARL_, LOLL, BANGR_, QUESTL_ };
    std::vector<Op> ops;
    std::vector<double> w;
    auto add = [&](Op o, double x) { ops.push_back(o); w.push_back(x); };
    add(AXIOM, 1.0);
    add(ONEL, 0.9);
    add(BOTR, 0.7);
    add(TENL, 1.1);
    add(PARR, 1.1);
    add(LOLR, 0.9);
    if (req && req->left && req->type->kind == PropKind::One) add(ONELX, 0.8);
    if (req && !req->left && req->type->kind == PropKind::Bottom) add(BOTRX, 0.8);
    add(CUTBANG_, 0.7);
    add(CUTQUEST_, 0.5);
    if (!req) {
      add(CUTR_, 1.6);
      add(CUTL_, 0.5);
      add(TENR, 1.4);
      add(PARL_, 0.9);
      add(LOLL, 0.9);
      add(BANGR_, 0.5);
      add(QUESTL_, 0.35);
    }
    switch (ops[pickWeighted(w)]) {
      case AXIOM: return axiomULL(gamma, req);
      case ONEL: {
        Node c = genULL(depth - 1, gamma, req);
        Name m = fresh("m");
        Judgment j = c.j;
        j.left = c.j.left.with(m, one());
        j.process = wait(m, c.j.process);
        return {j, makeDerivation(RuleName::ONE_L, j, {c.d}, {one(), m, {}, {}})};
      }
      case BOTR: {
        Node c = genULL(depth - 1, gamma, req);
        Name m = fresh("m");
        Judgment j = c.j;
        j.right = c.j.right.with(m, bottom());
        j.process = wait(m, c.j.process);
        return {j, makeDerivation(RuleName::BOT_R, j, {c.d}, {bottom(), m, {}, {}})};
      }
      case TENL: {
        Node c = genULL(depth - 1, gamma, req);
        auto el = eligible(c.j.left, protectedName(req, true));
        if (el.size() < 2) return c;
        auto [iy, is] = pickTwo(el);
        auto [y, A] = c.j.left.entries[iy];
        auto [s, B] = c.j.left.entries[is];
        Judgment j = c.j;
        j.left = c.j.left.without(y).without(s).with(s, tensor(A, B));
        j.process = input(s, y, c.j.process);
        return {j, makeDerivation(RuleName::TENSOR_L, j, {c.d}, {j.left.lookup(s), s, y, {}})};
      }
      case PARR: {
        Node c = genULL(depth - 1, gamma, req);
        auto el = eligible(c.j.right, protectedName(req, false));
        if (el.size() < 2) return c;
        auto [iy, ix] = pickTwo(el);
        auto [y, A] = c.j.right.entries[iy];
        auto [x, B] = c.j.right.entries[ix];
        Judgment j = c.j;
        j.right = c.j.right.without(y).without(x).with(x, par(A, B));
        j.process = input(x, y, c.j.process);
        return {j, makeDerivation(RuleName::PAR_R, j, {c.d}, {j.right.lookup(x), x, y, {}})};
      }
      case LOLR: {
        Node c = genULL(depth - 1, gamma, req);
        auto ell = eligible(c.j.left, protectedName(req, true));
        auto elr = eligible(c.j.right, protectedName(req, false));
        if (ell.empty() || elr.empty()) return c;
        auto [y, A] = c.j.left.entries[ell[pickIndex(ell.size())]];
        auto [x, B] = c.j.right.entries[elr[pickIndex(elr.size())]];
        Judgment j = c.j;
        j.left = c.j.left.without(y);
        j.right = c.j.right.without(x).with(x, lolli(A, B));
        j.process = input(x, y, c.j.process);
        return {j, makeDerivation(RuleName::LOLLI_R, j, {c.d}, {j.right.lookup(x), x, y, {}})};
      }
      case ONELX: {
        Node c = genULL(depth - 1, gamma, std::nullopt);
        Judgment j = c.j;
        j.left = c.j.left.with(req->name, one());
        j.process = wait(req->name, c.j.process);
        return {j, makeDerivation(RuleName::ONE_L, j, {c.d}, {one(), req->name, {}, {}})};
      }
      case BOTRX: {
        Node c = genULL(depth - 1, gamma, std::nullopt);
        Judgment j = c.j;
        j.right = c.j.right.with(req->name, bottom());
        j.process = wait(req->name, c.j.process);
        return {j, makeDerivation(RuleName::BOT_R, j, {c.d}, {bottom(), req->name, {}, {}})};
      }
      case CUTBANG_: {
        PropPtr A = guardProp(typeDepth(depth));
        Name x = fresh("u"), srv = fresh("w");
        Node server = srvRight(srv, A, gamma);
        Node k = genULL(std::max(depth - 2, 1), gamma.with(x, A), req);
        Name s = fresh("s");
        Node use = consumeLeft(s, A, std::move(k), RuleName::ONE_L, RuleName::TENSOR_L);
        Judgment cj = use.j;
        cj.left = use.j.left.without(s);
        cj.process = restriction(s, nullptr, output(x, s, use.j.process));
        Node client = guardLeftOne(
            {cj, makeDerivation(RuleName::COPYL, cj, {use.d}, {A, x, s, {}})},
            RuleName::ONE_L);
        Judgment j = baseJudgment(gamma);
        j.left = client.j.left;
        j.right = client.j.right;
        j.process = restriction(
            x, A, parallel(replicatedInput(x, srv, server.j.process), client.j.process));
        return {j, makeDerivation(RuleName::CUTBANG, j, {server.d, client.d}, {A, x, srv, x})};
      }
      case CUTQUEST_: {
        PropPtr theta = guardProp(typeDepth(depth));
        PropPtr T = dual(theta);
        Name x = fresh("u"), srv = fresh("w");
        Node server = srvLeft(srv, T, gamma);
        Node k = genULL(std::max(depth - 2, 1), gamma.with(x, theta), req);
        Name s = fresh("s");
        Node use = consumeRight(s, T, std::move(k), RuleName::BOT_R, RuleName::PAR_R);
        Judgment cj = use.j;
        cj.right = use.j.right.without(s);
        cj.process = restriction(s, nullptr, output(x, s, use.j.process));
        Node client = guardLeftOne(
            {cj, makeDerivation(RuleName::COPYR, cj, {use.d}, {theta, x, s, {}})},
            RuleName::ONE_L);
        Judgment j = baseJudgment(gamma);
        j.left = client.j.left;
        j.right = client.j.right;
        j.process = restriction(
            x, T, parallel(replicatedInput(x, srv, server.j.process), client.j.process));
        return {j, makeDerivation(RuleName::CUTQUEST, j, {server.d, client.d}, {T, x, srv, x})};
      }
      case CUTR_: {
        PropPtr A = prop(typeDepth(depth));
        Name x = fresh("x");
        Node p1 = genULL(depth - 1, gamma, Req{false, x, A});
        Node p2 = genULL(depth - 1, gamma, Req{true, x, A});
        Judgment j = baseJudgment(gamma);
        j.left = mergeCtx(p1.j.left, p2.j.left.without(x));
        j.right = mergeCtx(p1.j.right.without(x), p2.j.right);
        j.process = restriction(x, A, parallel(p1.j.process, p2.j.process));
        return {j, makeDerivation(RuleName::CUTR, j, {p1.d, p2.d}, {A, x, {}, {}})};
      }
      case CUTL_: {
        PropPtr A = prop(typeDepth(depth));
        Name x = fresh("x");
        // A root forwarder here would reduce by substituting a right-sided
        // name into the other premise's left-sided uses of x, and no axiom
        // re-types that; bury it behind a pinned wait instead.
        auto shield = [&](Node n) {
          if (n.j.process->kind == ProcKind::Forwarder)
            return guardLeftOne(std::move(n), RuleName::ONE_L);
          return n;
        };
        Node p1 = shield(genULL(depth - 1, gamma, Req{true, x, A}));
        Node p2 = shield(genULL(depth - 1, gamma, Req{true, x, dual(A)}));
        Judgment j = baseJudgment(gamma);
        j.left = mergeCtx(p1.j.left.without(x), p2.j.left.without(x));
        j.right = mergeCtx(p1.j.right, p2.j.right);
        j.process = restriction(x, A, parallel(p1.j.process, p2.j.process));
        return {j, makeDerivation(RuleName::CUTL, j, {p1.d, p2.d}, {A, x, {}, {}})};
      }
      case TENR: {
        PropPtr A = prop(typeDepth(depth)), B = prop(typeDepth(depth));
        Name y = fresh("y"), s = fresh("x");
        Node p1 = genULL(depth - 1, gamma, Req{false, y, A});
        Node p2 = genULL(depth - 1, gamma, Req{false, s, B});
        Judgment j = baseJudgment(gamma);
        j.left = mergeCtx(p1.j.left, p2.j.left);
        j.right = mergeCtx(p1.j.right.without(y), p2.j.right.without(s)).with(s, tensor(A, B));
        j.process = restriction(y, nullptr, output(s, y, parallel(p1.j.process, p2.j.process)));
        return {j, makeDerivation(RuleName::TENSOR_R, j, {p1.d, p2.d},
                                  {j.right.lookup(s), s, y, {}})};
      }
      case PARL_: {
        PropPtr A = prop(typeDepth(depth)), B = prop(typeDepth(depth));
        Name y = fresh("y"), s = fresh("x");
        Node p1 = genULL(depth - 1, gamma, Req{true, y, A});
        Node p2 = genULL(depth - 1, gamma, Req{true, s, B});
        Judgment j = baseJudgment(gamma);
        j.left = mergeCtx(p1.j.left.without(y), p2.j.left.without(s)).with(s, par(A, B));
        j.right = mergeCtx(p1.j.right, p2.j.right);
        j.process = restriction(y, nullptr, output(s, y, parallel(p1.j.process, p2.j.process)));
        return {j, makeDerivation(RuleName::PAR_L, j, {p1.d, p2.d},
                                  {j.left.lookup(s), s, y, {}})};
      }
      case LOLL: {
        PropPtr A = prop(typeDepth(depth)), B = prop(typeDepth(depth));
        Name y = fresh("y"), s = fresh("x");
        Node p1 = genULL(depth - 1, gamma, Req{false, y, A});
        Node p2 = genULL(depth - 1, gamma, Req{true, s, B});
        Judgment j = baseJudgment(gamma);
        j.left = mergeCtx(p1.j.left, p2.j.left.without(s)).with(s, lolli(A, B));
        j.right = mergeCtx(p1.j.right.without(y), p2.j.right);
        j.process = restriction(y, nullptr, output(s, y, parallel(p1.j.process, p2.j.process)));
        return {j, makeDerivation(RuleName::LOLLI_L, j, {p1.d, p2.d},
                                  {j.left.lookup(s), s, y, {}})};
      }
      case BANGR_: {
        PropPtr A = srvProp(typeDepth(depth));
        Name x = fresh("v"), y = fresh("y");
        Node body = srvRight(y, A, gamma);
        Judgment j = baseJudgment(gamma);
        j.right.insert(x, ofCourse(A));
        j.process = replicatedInput(x, y, body.j.process);
        return {j, makeDerivation(RuleName::BANG_R, j, {body.d}, {ofCourse(A), x, y, {}})};
      }
      case QUESTL_: {
        PropPtr X = dual(srvProp(typeDepth(depth)));
        Name x = fresh("v"), y = fresh("y");
        Node body = srvLeft(y, X, gamma);
        Judgment j = baseJudgment(gamma);
        j.left.insert(x, whyNot(X));
        j.process = replicatedInput(x, y, body.j.process);
        return {j, makeDerivation(RuleName::QUEST_L, j, {body.d}, {whyNot(X), x, y, {}})};
      }
    }
    return axiomULL(gamma, req);
  }

  // ----------------------------------------------- singleton-right systems
  // One shape serves ULL-starred and ILL; requirements are always left-side.

  Node axiomSingleton(const SingletonRules& R, const TypingContext& gamma,
                      const std::optional<Req>& req) {
    Judgment j = baseJudgment(gamma);
    if (req) {
      Name z = fresh("z");
      j.left.insert(req->name, req->type);
      j.right.insert(z, req->type);
      j.process = forwarder(req->name, z);
      return {j, makeDerivation(R.id, j, {}, {req->type, req->name, z, {}})};
    }
    if (coin(0.45)) {
      Name z = fresh("z");
      j.right.insert(z, one());
      j.process = close(z);
      return {j, makeDerivation(R.oneR, j, {}, {one(), z, {}, {}})};
    }
    PropPtr T = prop(2);
    Name a = fresh("z"), b = fresh("z");
    j.left.insert(a, T);
    j.right.insert(b, T);
    j.process = forwarder(a, b);
    return {j, makeDerivation(R.id, j, {}, {T, a, b, {}})};
  }

  Node genSingleton(const SingletonRules& R, int depth, const TypingContext& gamma,
                    const std::optional<Req>& req) {
    if (depth <= 1) return axiomSingleton(R, gamma, req);
    enum Op { AXIOM, ONEL, TENL, LOLR, ONELX, CUTREPL_, CUT_, TENR, LOLL, BANGR_ };
    std::vector<Op> ops;
    std::vector<double> w;
    auto add = [&](Op o, double x) { ops.push_back(o); w.push_back(x); };
    add(AXIOM, 1.0);
    add(ONEL, 0.9);
    add(TENL, 1.1);
    add(LOLR, 1.0);
    if (req && req->type->kind == PropKind::One) add(ONELX, 0.8);
    add(CUTREPL_, 0.7);
    if (!req) {
      add(CUT_, 1.6);
      add(TENR, 1.4);
      add(LOLL, 1.0);
      add(BANGR_, 0.5);
    }
    switch (ops[pickWeighted(w)]) {
      case AXIOM: return axiomSingleton(R, gamma, req);
      case ONEL: {
        Node c = genSingleton(R, depth - 1, gamma, req);
        Name m = fresh("m");
        Judgment j = c.j;
        j.left = c.j.left.with(m, one());
        j.process = wait(m, c.j.process);
        return {j, makeDerivation(R.oneL, j, {c.d}, {one(), m, {}, {}})};
      }
      case TENL: {
        Node c = genSingleton(R, depth - 1, gamma, req);
        auto el = eligible(c.j.left, protectedName(req, true));
        if (el.size() < 2) return c;
        auto [iy, is] = pickTwo(el);
        auto [y, A] = c.j.left.entries[iy];
        auto [s, B] = c.j.left.entries[is];
        Judgment j = c.j;
        j.left = c.j.left.without(y).without(s).with(s, tensor(A, B));
        j.process = input(s, y, c.j.process);
        return {j, makeDerivation(R.tensorL, j, {c.d}, {j.left.lookup(s), s, y, {}})};
      }
      case LOLR: {
        Node c = genSingleton(R, depth - 1, gamma, req);
        auto el = eligible(c.j.left, protectedName(req, true));
        if (el.empty()) return c;
        auto [y, A] = c.j.left.entries[el[pickIndex(el.size())]];
        const auto& [z, B] = c.j.right.entries[0];
        Judgment j = c.j;
        j.left = c.j.left.without(y);
        j.right = TypingContext{};
        j.right.insert(z, lolli(A, B));
        j.process = input(z, y, c.j.process);
        return {j, makeDerivation(R.lolliR, j, {c.d}, {j.right.lookup(z), z, y, {}})};
      }
      case ONELX: {
        Node c = genSingleton(R, depth - 1, gamma, std::nullopt);
        Judgment j = c.j;
        j.left = c.j.left.with(req->name, one());
        j.process = wait(req->name, c.j.process);
        return {j, makeDerivation(R.oneL, j, {c.d}, {one(), req->name, {}, {}})};
      }
      case CUTREPL_: {
        PropPtr A = guardProp(typeDepth(depth));
        Name x = fresh("u"), srv = fresh("w");
        Node server = srvRight(srv, A, gamma);
        Node k = genSingleton(R, std::max(depth - 2, 1), gamma.with(x, A), req);
        Name s = fresh("s");
        Node use = consumeLeft(s, A, std::move(k), R.oneL, R.tensorL);
        Judgment cj = use.j;
        cj.left = use.j.left.without(s);
        cj.process = restriction(s, nullptr, output(x, s, use.j.process));
        Node client = guardLeftOne(
            {cj, makeDerivation(R.copy, cj, {use.d}, {A, x, s, {}})}, R.oneL);
        Judgment j = baseJudgment(gamma);
        j.left = client.j.left;
        j.right = client.j.right;
        j.process = restriction(
            x, A, parallel(replicatedInput(x, srv, server.j.process), client.j.process));
        return {j, makeDerivation(R.cutRepl, j, {server.d, client.d}, {A, x, srv, x})};
      }
      case CUT_: {
        Node p1 = genSingleton(R, depth - 1, gamma, std::nullopt);
        const auto& [x, A] = p1.j.right.entries[0];
        Node p2 = genSingleton(R, depth - 1, gamma, Req{true, x, A});
        Judgment j = baseJudgment(gamma);
        j.left = mergeCtx(p1.j.left, p2.j.left.without(x));
        j.right = p2.j.right;
        j.process = restriction(x, A, parallel(p1.j.process, p2.j.process));
        return {j, makeDerivation(R.cut, j, {p1.d, p2.d}, {A, x, {}, {}})};
      }
      case TENR: {
        Node p1 = genSingleton(R, depth - 1, gamma, std::nullopt);
        Node p2 = genSingleton(R, depth - 1, gamma, std::nullopt);
        const auto& [y, A] = p1.j.right.entries[0];
        const auto& [s, B] = p2.j.right.entries[0];
        Judgment j = baseJudgment(gamma);
        j.left = mergeCtx(p1.j.left, p2.j.left);
        j.right.insert(s, tensor(A, B));
        j.process = restriction(y, nullptr, output(s, y, parallel(p1.j.process, p2.j.process)));
        return {j, makeDerivation(R.tensorR, j, {p1.d, p2.d}, {j.right.lookup(s), s, y, {}})};
      }
      case LOLL: {
        PropPtr B = prop(typeDepth(depth));
        Name s = fresh("s");
        Node p1 = genSingleton(R, depth - 1, gamma, std::nullopt);
        const auto& [x, A] = p1.j.right.entries[0];
        Node p2 = genSingleton(R, depth - 1, gamma, Req{true, s, B});
        Judgment j = baseJudgment(gamma);
        j.left = mergeCtx(p1.j.left, p2.j.left.without(s)).with(s, lolli(A, B));
        j.right = p2.j.right;
        j.process = restriction(x, nullptr, output(s, x, parallel(p1.j.process, p2.j.process)));
        return {j, makeDerivation(R.lolliL, j, {p1.d, p2.d}, {j.left.lookup(s), s, x, {}})};
      }
      case BANGR_: {
        PropPtr A = srvProp(typeDepth(depth));
        Name x = fresh("v"), y = fresh("y");
        Node body = srvRight(y, A, gamma);
        Judgment j = baseJudgment(gamma);
        j.right.insert(x, ofCourse(A));
        j.process = replicatedInput(x, y, body.j.process);
        return {j, makeDerivation(R.bangR, j, {body.d}, {ofCourse(A), x, y, {}})};
      }
    }
    return axiomSingleton(R, gamma, req);
  }

  // ------------------------------------------------------------ CLL

  Node axiomCLL(const TypingContext& gamma, const std::optional<Req>& req) {
    Judgment j = baseJudgment(gamma);
    if (req) {
      if (req->type->kind == PropKind::One && coin(0.3)) {
        j.right.insert(req->name, req->type);
        j.process = close(req->name);
        return {j, makeDerivation(RuleName::CLL_ONE, j, {}, {req->type, req->name, {}, {}})};
      }
      Name z = fresh("z");
      j.right.insert(req->name, req->type);
      j.right.insert(z, dual(req->type));
      j.process = forwarder(req->name, z);
      return {j, makeDerivation(RuleName::CLL_ID, j, {}, {req->type, req->name, z, {}})};
    }
    if (coin(0.45)) {
      Name z = fresh("z");
      j.right.insert(z, one());
      j.process = close(z);
      return {j, makeDerivation(RuleName::CLL_ONE, j, {}, {one(), z, {}, {}})};
    }
    PropPtr T = prop(2);
    Name a = fresh("z"), b = fresh("z");
    j.right.insert(a, T);
    j.right.insert(b, dual(T));
    j.process = forwarder(a, b);
    return {j, makeDerivation(RuleName::CLL_ID, j, {}, {T, a, b, {}})};
  }

  Node genCLL(int depth, const TypingContext& gamma, const std::optional<Req>& req) {
    if (depth <= 1) return axiomCLL(gamma, req);
    enum Op { AXIOM, BOT, PARW, BOTX, CUTREPL_, CUT_, TEN, BANG_ };
    std::vector<Op> ops;
    std::vector<double> w;
    auto add = [&](Op o, double x) { ops.push_back(o); w.push_back(x); };
    add(AXIOM, 1.0);
    add(BOT, 0.9);
    add(PARW, 1.1);
    if (req && req->type->kind == PropKind::Bottom) add(BOTX, 0.8);
    add(CUTREPL_, 0.7);
    if (!req) {
      add(CUT_, 1.6);
      add(TEN, 1.4);
      add(BANG_, 0.5);
    }
    switch (ops[pickWeighted(w)]) {
      case AXIOM: return axiomCLL(gamma, req);
      case BOT: {
        Node c = genCLL(depth - 1, gamma, req);
        Name m = fresh("m");
        Judgment j = c.j;
        j.right = c.j.right.with(m, bottom());
        j.process = wait(m, c.j.process);
        return {j, makeDerivation(RuleName::CLL_BOT, j, {c.d}, {bottom(), m, {}, {}})};
      }
      case PARW: {
        Node c = genCLL(depth - 1, gamma, req);
        auto el = eligible(c.j.right, req ? std::optional<Name>(req->name) : std::nullopt);
        if (el.size() < 2) return c;
        auto [iy, ix] = pickTwo(el);
        auto [y, A] = c.j.right.entries[iy];
        auto [x, B] = c.j.right.entries[ix];
        Judgment j = c.j;
        j.right = c.j.right.without(y).without(x).with(x, par(A, B));
        j.process = input(x, y, c.j.process);
        return {j, makeDerivation(RuleName::CLL_PAR, j, {c.d}, {j.right.lookup(x), x, y, {}})};
      }
      case BOTX: {
        Node c = genCLL(depth - 1, gamma, std::nullopt);
        Judgment j = c.j;
        j.right = c.j.right.with(req->name, bottom());
        j.process = wait(req->name, c.j.process);
        return {j, makeDerivation(RuleName::CLL_BOT, j, {c.d}, {bottom(), req->name, {}, {}})};
      }
      case CUTREPL_: {
        PropPtr T = guardProp(typeDepth(depth));
        Name x = fresh("u"), srv = fresh("w");
        Node server = srvRight(srv, T, gamma);
        Node k = genCLL(std::max(depth - 2, 1), gamma.with(x, dual(T)), req);
        Name s = fresh("s");
        Node use = consumeRight(s, dual(T), std::move(k), RuleName::CLL_BOT, RuleName::CLL_PAR);
        Judgment cj = use.j;
        cj.right = use.j.right.without(s);
        cj.process = restriction(s, nullptr, output(x, s, use.j.process));
        Node client = guardRightBot(
            {cj, makeDerivation(RuleName::CLL_COPY, cj, {use.d}, {dual(T), x, s, {}})},
            RuleName::CLL_BOT);
        Judgment j = baseJudgment(gamma);
        j.right = client.j.right;
        j.process = restriction(
            x, T, parallel(replicatedInput(x, srv, server.j.process), client.j.process));
        return {j, makeDerivation(RuleName::CLL_CUTREPL, j, {server.d, client.d}, {T, x, srv, x})};
      }
      case CUT_: {
        PropPtr A = prop(typeDepth(depth));
        Name x = fresh("x");
        Node p1 = genCLL(depth - 1, gamma, Req{false, x, A});
        Node p2 = genCLL(depth - 1, gamma, Req{false, x, dual(A)});
        Judgment j = baseJudgment(gamma);
        j.right = mergeCtx(p1.j.right.without(x), p2.j.right.without(x));
        j.process = restriction(x, A, parallel(p1.j.process, p2.j.process));
        return {j, makeDerivation(RuleName::CLL_CUT, j, {p1.d, p2.d}, {A, x, {}, {}})};
      }
      case TEN: {
        PropPtr A = prop(typeDepth(depth)), B = prop(typeDepth(depth));
        Name y = fresh("y"), s = fresh("x");
        Node p1 = genCLL(depth - 1, gamma, Req{false, y, A});
        Node p2 = genCLL(depth - 1, gamma, Req{false, s, B});
        Judgment j = baseJudgment(gamma);
        j.right = mergeCtx(p1.j.right.without(y), p2.j.right.without(s)).with(s, tensor(A, B));
        j.process = restriction(y, nullptr, output(s, y, parallel(p1.j.process, p2.j.process)));
        return {j, makeDerivation(RuleName::CLL_TENSOR, j, {p1.d, p2.d},
                                  {j.right.lookup(s), s, y, {}})};
      }
      case BANG_: {
        PropPtr A = srvProp(typeDepth(depth));
        Name x = fresh("v"), y = fresh("y");
        Node body = srvRight(y, A, gamma);
        Judgment j = baseJudgment(gamma);
        j.right.insert(x, ofCourse(A));
        j.process = replicatedInput(x, y, body.j.process);
        return {j, makeDerivation(RuleName::CLL_BANG, j, {body.d}, {ofCourse(A), x, y, {}})};
      }
    }
    return axiomCLL(gamma, req);
  }

  Node root() {
    int d = std::max(cfg.maxDepth, 1);
    TypingContext empty;
    switch (cfg.system) {
      case SystemId::CLL:
        jsys = SystemId::CLL;
        return genCLL(d, empty, std::nullopt);
      case SystemId::ILL:
        jsys = SystemId::ILL;
        return genSingleton(kIllRules, d, empty, std::nullopt);
      case SystemId::ULL:
      default:
        jsys = SystemId::ULL;
        if (cfg.starOnly) return genSingleton(kStarRules, d, empty, std::nullopt);
        return genULL(d, empty, std::nullopt);
    }
  }
};

}  // namespace

PropPtr generateProposition(const GenConfig& cfg, int depth) {
  Gen g(cfg);
  return g.prop(depth);
}

std::pair<Judgment, DerivPtr> generateWellTyped(const GenConfig& cfg) {
  Gen g(cfg);
  for (int attempt = 0; attempt < 32; ++attempt) {
    Node n = g.root();
    if (validateDerivation(*n.d).ok) return {n.j, n.d};
  }
  throw std::runtime_error("no valid derivation after 32 attempts for this configuration");
}

std::vector<std::pair<Judgment, DerivPtr>> generateCorpus(const GenConfig& cfg, int count) {
  std::vector<std::pair<Judgment, DerivPtr>> out;
  out.reserve(std::max(count, 0));
  for (int i = 0; i < count; ++i) {
    GenConfig c = cfg;
    c.seed = cfg.seed + std::uint64_t(i);
    out.push_back(generateWellTyped(c));
  }
  return out;
}

}  // namespace ullpi
