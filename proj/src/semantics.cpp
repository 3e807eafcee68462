#include "ullpi/semantics.hpp"

#include <random>
#include <set>
#include <stdexcept>

#include "ullpi/surface.hpp"

namespace ullpi {
namespace {

// Maximal-scope view of a canonical form: every restriction reachable through
// restriction and parallel nodes is lifted to one telescope (binders freshened
// against capture), leaving a flat multiset of prefix, forwarder, and
// replication components. Scope extrusion is structural congruence, so redex
// search on this view is search up to congruence.
struct Flat {
  std::vector<std::pair<Name, PropPtr>> binders;
  std::vector<ProcPtr> comps;
};

void flattenInto(const ProcPtr& p, std::set<Name>& used, Flat& out) {
  switch (p->kind) {
    case ProcKind::Inaction: return;
    case ProcKind::Restriction: {
      Name b = p->a;
      ProcPtr body = p->left;
      if (used.count(b)) {
        Name fresh = freshName(b, used);
        body = substitute(body, fresh, b);
        b = fresh;
      }
      used.insert(b);
      out.binders.emplace_back(b, p->annotation);
      flattenInto(body, used, out);
      return;
    }
    case ProcKind::Parallel:
      flattenInto(p->left, used, out);
      flattenInto(p->right, used, out);
      return;
    default: out.comps.push_back(p); return;
  }
}

Flat flatten(const ProcPtr& canonical) {
  Flat out;
  std::set<Name> used = freeNames(canonical);
  flattenInto(canonical, used, out);
  return out;
}

ProcPtr rebuild(const std::vector<std::pair<Name, PropPtr>>& binders,
                const std::vector<ProcPtr>& comps) {
  ProcPtr body;
  for (const ProcPtr& c : comps) body = body ? parallel(body, c) : c;
  if (!body) body = inaction();
  for (auto it = binders.rbegin(); it != binders.rend(); ++it)
    body = restriction(it->first, it->second, body);
  return body;
}

struct RedexCollector {
  const Flat& flat;
  std::vector<Redex> out;
  std::set<std::string> seen;  // canonical keys of reported reducts

  void emit(StepKind kind, const Name& subject, const std::vector<std::pair<Name, PropPtr>>& binders,
            const std::vector<ProcPtr>& comps) {
    ProcPtr result = canonicalForm(rebuild(binders, comps));
    if (!seen.insert(canonicalKey(result)).second) return;
    out.push_back({{kind, subject}, result});
  }

  // comps minus positions i and j, plus replacements
  std::vector<ProcPtr> residue(std::size_t i, std::size_t j, std::vector<ProcPtr> add,
                               bool keepJ = false) const {
    std::vector<ProcPtr> comps;
    for (std::size_t k = 0; k < flat.comps.size(); ++k)
      if (k != i && (k != j || keepJ)) comps.push_back(flat.comps[k]);
    for (ProcPtr& p : add) comps.push_back(std::move(p));
    return comps;
  }

  void tryPair(std::size_t i, std::size_t j) {
    const ProcPtr& a = flat.comps[i];
    const ProcPtr& b = flat.comps[j];
    if (a->kind == ProcKind::Output && a->a == b->a) {
      if (b->kind == ProcKind::Input)
        emit(StepKind::Communication, a->a, flat.binders,
             residue(i, j, {a->left, substitute(b->left, a->b, b->b)}));
      else if (b->kind == ProcKind::ReplicatedInput)
        emit(StepKind::ReplicatedCommunication, a->a, flat.binders,
             residue(i, j, {a->left, substitute(b->left, a->b, b->b)}, /*keepJ=*/true));
    }
    if (a->kind == ProcKind::Close && b->kind == ProcKind::Wait && a->a == b->a)
      emit(StepKind::CloseWait, a->a, flat.binders, residue(i, j, {b->left}));
  }

  void tryForwarder(std::size_t i, const Name& bound, const Name& other) {
    if (bound == other) return;
    bool isBound = false;
    for (const auto& [n, t] : flat.binders) isBound |= n == bound;
    if (!isBound || flat.comps.size() < 2) return;
    std::vector<std::pair<Name, PropPtr>> binders;
    for (const auto& e : flat.binders)
      if (e.first != bound) binders.push_back(e);
    std::vector<ProcPtr> comps;
    for (std::size_t k = 0; k < flat.comps.size(); ++k)
      if (k != i) comps.push_back(substitute(flat.comps[k], other, bound));
    emit(StepKind::ForwarderElim, bound, binders, comps);
  }

  void run() {
    for (std::size_t i = 0; i < flat.comps.size(); ++i)
      for (std::size_t j = 0; j < flat.comps.size(); ++j) {
        if (i == j) continue;
        tryPair(i, j);
      }
    for (std::size_t i = 0; i < flat.comps.size(); ++i) {
      if (flat.comps[i]->kind != ProcKind::Forwarder) continue;
      tryForwarder(i, flat.comps[i]->a, flat.comps[i]->b);
      tryForwarder(i, flat.comps[i]->b, flat.comps[i]->a);
    }
  }
};

bool liveComponent(const ProcPtr& p) {
  switch (p->kind) {
    case ProcKind::Output:
    case ProcKind::Input:
    case ProcKind::Close:
    case ProcKind::Wait: return true;
    case ProcKind::Restriction: return liveComponent(p->left);
    case ProcKind::Parallel: return liveComponent(p->left) || liveComponent(p->right);
    default: return false;
  }
}

}  // namespace

std::string stepKindLabel(StepKind k) {
  switch (k) {
    case StepKind::Communication: return "comm";
    case StepKind::ReplicatedCommunication: return "repl";
    case StepKind::CloseWait: return "close";
    case StepKind::ForwarderElim: return "fwd";
  }
  return "?";
}

std::vector<Redex> redexes(const ProcPtr& p) {
  Flat flat = flatten(canonicalForm(p));
  RedexCollector collector{flat, {}, {}};
  collector.run();
  return std::move(collector.out);
}

ProcPtr step(const ProcPtr& p, std::size_t index) {
  std::vector<Redex> rs = redexes(p);
  if (index >= rs.size())
    throw std::out_of_range("step index " + std::to_string(index) + " with " +
                            std::to_string(rs.size()) + " redexes");
  return rs[index].result;
}

ReductionTrace reduce(const ProcPtr& p, int fuel, std::uint64_t seed) {
  ReductionTrace trace;
  trace.root = p;
  std::mt19937_64 rng(seed);
  ProcPtr cur = p;
  for (int i = 0; i < fuel; ++i) {
    std::vector<Redex> rs = redexes(cur);
    if (rs.empty()) break;
    const Redex& chosen = rs[static_cast<std::size_t>(rng() % rs.size())];
    cur = chosen.result;
    trace.steps.emplace_back(chosen.label, cur);
  }
  return trace;
}

bool isLive(const ProcPtr& p) { return liveComponent(canonicalForm(p)); }

std::string renderTrace(const ReductionTrace& t) {
  std::string out;
  for (std::size_t i = 0; i < t.steps.size(); ++i) {
    const auto& [label, proc] = t.steps[i];
    out += std::to_string(i) + " " + stepKindLabel(label.kind) + " " + label.subject + " |- " +
           render(proc) + "\n";
  }
  return out;
}

}  // namespace ullpi
