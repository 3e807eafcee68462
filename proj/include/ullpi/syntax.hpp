#pragma once

#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace ullpi {

using Name = std::string;

// ---------------------------------------------------------------------------
// Propositions

enum class PropKind { One, Bottom, Tensor, Par, Lolli, OfCourse, WhyNot };

struct Proposition;
using PropPtr = std::shared_ptr<const Proposition>;

struct Proposition {
  PropKind kind;
  PropPtr left;   // binary connectives; body of !/? lives here
  PropPtr right;  // binary connectives only
};

PropPtr one();
PropPtr bottom();
PropPtr tensor(PropPtr a, PropPtr b);
PropPtr par(PropPtr a, PropPtr b);
PropPtr lolli(PropPtr a, PropPtr b);
PropPtr ofCourse(PropPtr a);
PropPtr whyNot(PropPtr a);

bool propEqual(const PropPtr& a, const PropPtr& b);
int propDepth(const PropPtr& a);

// A^⊥. Lolli dualizes as (A -o B)^⊥ = A ⊗ B^⊥, so dual is an involution
// only on Lolli-free propositions.
PropPtr dual(const PropPtr& a);

// Rewrites every A -o B to A^⊥ ℘ B, innermost-out. Output has no Lolli.
PropPtr expandLolli(const PropPtr& a);

bool lolliFree(const PropPtr& a);

// Propositions A with dual(A') = A for some A'; preimages of dual.
// Empty exactly when no rule instance can produce A by dualizing.
// Canonical candidate dual(A) comes first when it qualifies.
std::vector<PropPtr> dualPreimages(const PropPtr& a, std::size_t cap = 64);

enum class Fragment { FullULL, CLL, ILL };

bool inFragment(const PropPtr& a, Fragment f);

// ---------------------------------------------------------------------------
// Processes

enum class ProcKind {
  Inaction,
  Forwarder,        // [a<->b]
  Restriction,      // new a . body   (optional type annotation, metadata only)
  Parallel,
  Output,           // a<b>.cont
  Input,            // a(b).cont
  ReplicatedInput,  // *a(b).cont
  Close,            // a<>     (close carries no continuation)
  Wait              // a().cont
};

struct Process;
using ProcPtr = std::shared_ptr<const Process>;

struct Process {
  ProcKind kind;
  Name a;                // subject / first forwarder endpoint / bound name of Restriction
  Name b;                // object, input-bound name, second forwarder endpoint
  PropPtr annotation;    // Restriction only; ignored by all equalities
  ProcPtr left;          // Parallel left; continuation / Restriction body
  ProcPtr right;         // Parallel right
};

ProcPtr inaction();
ProcPtr forwarder(Name a, Name b);
ProcPtr restriction(Name bound, PropPtr annotation, ProcPtr body);
ProcPtr parallel(ProcPtr p, ProcPtr q);
ProcPtr output(Name subject, Name object, ProcPtr cont);
ProcPtr input(Name subject, Name bound, ProcPtr cont);
ProcPtr replicatedInput(Name subject, Name bound, ProcPtr cont);
ProcPtr close(Name subject);
ProcPtr wait(Name subject, ProcPtr cont);

// Exact structural equality, annotations included (round-trip oracle).
bool procEqual(const ProcPtr& p, const ProcPtr& q);

std::set<Name> freeNames(const ProcPtr& p);

// Least-numeric-suffix name on `stem` avoiding `avoid` (stem itself counts
// as taken only if present in avoid).
Name freshName(const Name& stem, const std::set<Name>& avoid);

// p{replacement/target}: free occurrences of target become replacement;
// binders that would capture replacement are renamed with freshName.
ProcPtr substitute(const ProcPtr& p, const Name& replacement, const Name& target);

// Consistent renaming of bound names; annotations ignored.
bool alphaEquivalent(const ProcPtr& p, const ProcPtr& q);

/// Representative of the structural-congruence class: drops units, flattens
// parallel compositions, narrows restriction scopes, orders forwarder
// endpoints and parallel components by an alpha-invariant key.
ProcPtr canonicalForm(const ProcPtr& p);

// Alpha-invariant fingerprint of canonicalForm(p); equal strings iff the
// canonical forms are alpha-equivalent.
std::string canonicalKey(const ProcPtr& p);

bool structurallyCongruent(const ProcPtr& p, const ProcPtr& q);

}  // namespace ullpi
