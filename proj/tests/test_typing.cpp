#include <string>
#include <vector>

#include "doctest.h"
#include "ullpi/surface.hpp"
#include "ullpi/syntax.hpp"
#include "ullpi/typing.hpp"

using namespace ullpi;

namespace {

Judgment J(const std::string& text) { return parseJudgment(text); }

DerivPtr mustCheck(const Judgment& j, const CheckOptions& opts = {}) {
  CheckResult r = j.system == SystemId::ULL   ? checkULL(j, opts)
                  : j.system == SystemId::CLL ? checkCLL(j, opts)
                                              : checkILL(j, opts);
  if (auto* f = std::get_if<TypingFailure>(&r)) {
    CAPTURE(render(j));
    CAPTURE(f->location);
    REQUIRE_MESSAGE(false, "expected success, got: " << failReasonLabel(f->reason));
  }
  return std::get<DerivPtr>(r);
}

TypingFailure mustFail(const Judgment& j, const CheckOptions& opts = {}) {
  CheckResult r = j.system == SystemId::ULL   ? checkULL(j, opts)
                  : j.system == SystemId::CLL ? checkCLL(j, opts)
                                              : checkILL(j, opts);
  if (std::holds_alternative<DerivPtr>(r)) {
    CAPTURE(render(j));
    REQUIRE_MESSAGE(false, "expected failure, got a derivation");
  }
  return std::get<TypingFailure>(r);
}

void collectRules(const DerivPtr& d, std::vector<RuleName>& out) {
  out.push_back(d->rule);
  for (const DerivPtr& p : d->premises) collectRules(p, out);
}

bool usesRule(const DerivPtr& d, RuleName r) {
  std::vector<RuleName> rs;
  collectRules(d, rs);
  return std::find(rs.begin(), rs.end(), r) != rs.end();
}

bool everyRightSingleton(const DerivPtr& d) {
  if (d->conclusion.right.size() != 1) return false;
  for (const DerivPtr& p : d->premises)
    if (!everyRightSingleton(p)) return false;
  return true;
}

bool allStarred(const DerivPtr& d) {
  if (!ruleStarred(d->rule)) return false;
  for (const DerivPtr& p : d->premises)
    if (!allStarred(p)) return false;
  return true;
}

void checkSound(const Judgment& j) {
  DerivPtr d = mustCheck(j);
  ValidationResult v = validateDerivation(*d);
  CAPTURE(v.message);
  CHECK(v.ok);
  CHECK(judgmentEqual(d->conclusion, j));
}

}  // namespace

TEST_CASE("unit axioms") {
  DerivPtr d = mustCheck(J("system ull\nright x : 1\nprocess x<>\n"));
  CHECK(d->rule == RuleName::ONE_R);
  CHECK(d->premises.empty());
  d = mustCheck(J("system ull\nleft x : bot\nprocess x<>\n"));
  CHECK(d->rule == RuleName::BOT_L);
  mustFail(J("system ull\nleft x : 1\nprocess x<>\n"));
  mustFail(J("system ull\nright x : bot\nprocess x<>\n"));
}

TEST_CASE("persistent context may be unused") {
  DerivPtr d = mustCheck(J("system ull\nbang u : 1 * bot\nright x : 1\nprocess x<>\n"));
  CHECK(d->rule == RuleName::ONE_R);
}

TEST_CASE("wait consumes a unit on the left or a bottom on the right") {
  DerivPtr d = mustCheck(J("system ull\nleft x : 1\nright y : 1\nprocess x().y<>\n"));
  CHECK(d->rule == RuleName::ONE_L);
  CHECK(d->premises[0]->rule == RuleName::ONE_R);
  d = mustCheck(J("system ull\nleft z : bot\nright x : bot\nprocess x().z<>\n"));
  CHECK(d->rule == RuleName::BOT_R);
  CHECK(d->premises[0]->rule == RuleName::BOT_L);
}

TEST_CASE("forwarder axioms accept both orientations") {
  DerivPtr d = mustCheck(J("system ull\nleft x : !1\nright y : !1\nprocess [x<->y]\n"));
  CHECK(d->rule == RuleName::IDR);
  d = mustCheck(J("system ull\nleft x : !1\nright y : !1\nprocess [y<->x]\n"));
  CHECK(d->rule == RuleName::IDR);
  d = mustCheck(J("system ull\nleft x : 1, y : bot\nprocess [x<->y]\n"));
  CHECK(d->rule == RuleName::IDL);
  d = mustCheck(J("system ull\nleft x : 1, y : bot\nprocess [y<->x]\n"));
  CHECK(d->rule == RuleName::IDL);
  mustFail(J("system ull\nleft x : 1, y : 1\nprocess [x<->y]\n"));
  mustFail(J("system ull\nleft x : 1\nright y : bot\nprocess [x<->y]\n"));
}

TEST_CASE("cut requires and uses the restriction annotation") {
  Judgment j = J("system ull\nright y : 1\nprocess new x : 1 . (x<> | x().y<>)\n");
  DerivPtr d = mustCheck(j);
  CHECK(d->rule == RuleName::CUTR);
  CHECK(d->premises[0]->rule == RuleName::ONE_R);
  CHECK(d->premises[1]->rule == RuleName::ONE_L);
  CHECK(d->premises[1]->premises[0]->rule == RuleName::ONE_R);
  CHECK(propEqual(d->inst.cutType, one()));

  TypingFailure f = mustFail(J("system ull\nright y : 1\nprocess new x . (x<> | x().y<>)\n"));
  CHECK(f.reason == FailReason::MissingAnnotation);
}

TEST_CASE("cut annotation may name either endpoint's type") {
  // The annotated type belongs to the first premise; its dual is tried too,
  // so the swapped reading checks as well.
  checkSound(J("system ull\nright y : 1\nprocess new x : bot . (x<> | x().y<>)\n"));
  checkSound(J("system ull\nright y : 1\nprocess new x : 1 . (x().y<> | x<>)\n"));
}

TEST_CASE("cut between two left-context users") {
  // Both components consume their ends on the left; the search may settle on
  // either cut reading, and the result must validate either way.
  Judgment j = J("system ull\nleft a : bot, b : 1\nprocess new x : 1 . (x().a<> | [x<->b])\n");
  DerivPtr d = mustCheck(j);
  CHECK((d->rule == RuleName::CUTR || d->rule == RuleName::CUTL));
  checkSound(j);
}

TEST_CASE("tensor right splits the contexts under a bound output") {
  Judgment j = J("system ull\nright x : 1 * 1\nprocess new y . x<y>.(y<> | x<>)\n");
  DerivPtr d = mustCheck(j);
  CHECK(d->rule == RuleName::TENSOR_R);
  checkSound(j);
  checkSound(J("system ull\nleft k : 1\nright x : 1 * 1\nprocess new y . x<y>.(y<> | k().x<>)\n"));
  // component order swapped
  checkSound(J("system ull\nright x : 1 * 1\nprocess new y . x<y>.(x<> | y<>)\n"));
}

TEST_CASE("par right keeps both components on one side") {
  Judgment j = J("system ull\nright x : bot par 1\nprocess x(y).y().x<>\n");
  DerivPtr d = mustCheck(j);
  CHECK(d->rule == RuleName::PAR_R);
  CHECK(d->premises[0]->rule == RuleName::BOT_R);
  checkSound(j);
}

TEST_CASE("par left sends like a tensor would") {
  Judgment j = J("system ull\nleft x : bot par 1\nright z : 1\n"
                 "process new y . x<y>.(y<> | x().z<>)\n");
  DerivPtr d = mustCheck(j);
  CHECK(d->rule == RuleName::PAR_L);
  checkSound(j);
}

TEST_CASE("lolli right receives, lolli left sends") {
  Judgment j = J("system ull\nright x : 1 -o 1\nprocess x(y).y().x<>\n");
  DerivPtr d = mustCheck(j);
  CHECK(d->rule == RuleName::LOLLI_R);
  CHECK(d->premises[0]->rule == RuleName::ONE_L);
  checkSound(j);

  j = J("system ull\nleft x : 1 -o 1\nright z : 1\n"
        "process new y . x<y>.(y<> | x().z<>)\n");
  d = mustCheck(j);
  CHECK(d->rule == RuleName::LOLLI_L);
  checkSound(j);
}

TEST_CASE("replicated input serves on the right, consumes a question on the left") {
  Judgment j = J("system ull\nright x : !1\nprocess *x(y).y<>\n");
  DerivPtr d = mustCheck(j);
  CHECK(d->rule == RuleName::BANG_R);
  checkSound(j);

  j = J("system ull\nleft x : ?bot\nprocess *x(y).y<>\n");
  d = mustCheck(j);
  CHECK(d->rule == RuleName::QUEST_L);
  CHECK(d->premises[0]->rule == RuleName::BOT_L);
  checkSound(j);

  mustFail(J("system ull\nright x : !1\nleft k : 1\nprocess *x(y).k().y<>\n"));
}

TEST_CASE("replicated cut provides a persistent server") {
  Judgment j = J("system ull\nright z : 1\n"
                 "process new u : 1 . (*u(y).y<> | new x . u<x>.x().z<>)\n");
  DerivPtr d = mustCheck(j);
  CHECK(d->rule == RuleName::CUTBANG);
  CHECK(usesRule(d, RuleName::COPYR));
  checkSound(j);
  // component order swapped
  checkSound(J("system ull\nright z : 1\n"
               "process new u : 1 . (new x . u<x>.x().z<> | *u(y).y<>)\n"));
}

TEST_CASE("copy instantiates a persistent name") {
  // u : bot supplies a bot end, so the fresh copy closes at its dual.
  Judgment j = J("system ull\nbang u : bot\nprocess new x . u<x>.x<>\n");
  DerivPtr d = mustCheck(j);
  CHECK(d->rule == RuleName::COPYR);
  CHECK(d->premises[0]->rule == RuleName::ONE_R);
  checkSound(j);

  // A forwarder joint forces the copy to the left: the link wants equal
  // propositions across the turnstile, which x : bot on the right cannot give.
  j = J("system ull\nbang u : 1\nright b : 1\nprocess new x . u<x>.[x<->b]\n");
  d = mustCheck(j);
  CHECK(d->rule == RuleName::COPYL);
  CHECK(d->premises[0]->rule == RuleName::IDR);
  checkSound(j);
}

TEST_CASE("exponential moves unlock left bangs and right questions") {
  // !1 on the left becomes a persistent assumption before use.
  Judgment j = J("system ull\nleft x : !1\nright z : 1\nprocess new w . x<w>.w().z<>\n");
  DerivPtr d = mustCheck(j);
  CHECK(d->rule == RuleName::BANG_L);
  checkSound(j);

  // ?bot on the right moves with its dual preimage into the persistent slot.
  j = J("system ull\nright x : ?bot, z : 1\nprocess new w . x<w>.w().z<>\n");
  d = mustCheck(j);
  CHECK(d->rule == RuleName::QUEST_R);
  checkSound(j);
}

TEST_CASE("service on a par of exponentials") {
  Judgment j = J("system ull\nright x : !bot par ?1\n"
                 "process x(y).*y(z).new w . x<w>.[w<->z]\n");
  DerivPtr d = mustCheck(j);
  CHECK(d->rule == RuleName::PAR_R);
  CHECK(usesRule(d, RuleName::QUEST_R));
  CHECK(usesRule(d, RuleName::BANG_R));
  CHECK(usesRule(d, RuleName::COPYL));
  CHECK(usesRule(d, RuleName::IDR));
  checkSound(j);
}

TEST_CASE("classical one-sided checking") {
  checkSound(J("system cll\nright x : 1, y : bot\nprocess [x<->y]\n"));
  checkSound(J("system cll\nright x : 1\nprocess x<>\n"));
  checkSound(J("system cll\nright x : bot, y : 1\nprocess x().y<>\n"));
  checkSound(J("system cll\nright x : bot par 1\nprocess x(y).y().x<>\n"));
  checkSound(J("system cll\nright x : 1 * 1\nprocess new y . x<y>.(y<> | x<>)\n"));
  checkSound(J("system cll\nright x : !1\nprocess *x(y).y<>\n"));
  checkSound(J("system cll\nright y : 1\nprocess new x : 1 . (x<> | x().y<>)\n"));
  checkSound(J("system cll\nright z : 1\n"
               "process new u : 1 . (*u(y).y<> | new x . u<x>.x().z<>)\n"));
  // the copied channel keeps the persistent type itself, no dual involved
  checkSound(J("system cll\nbang u : bot\nright z : 1\nprocess new x . u<x>.x().z<>\n"));
  checkSound(J("system cll\nbang u : 1\nprocess new x . u<x>.x<>\n"));
  // ?A on the right moves into the persistent context, keeping its type.
  checkSound(J("system cll\nright x : ?bot, z : 1\nprocess new w . x<w>.w().z<>\n"));
}

TEST_CASE("classical service on a par of exponentials") {
  Judgment j = J("system cll\nright x : !bot par ?1\n"
                 "process x(y).*y(z).new w . x<w>.[w<->z]\n");
  DerivPtr d = mustCheck(j);
  CHECK(d->rule == RuleName::CLL_PAR);
  CHECK(usesRule(d, RuleName::CLL_QUEST));
  CHECK(usesRule(d, RuleName::CLL_BANG));
  CHECK(usesRule(d, RuleName::CLL_COPY));
  CHECK(usesRule(d, RuleName::CLL_ID));
  checkSound(j);
}

TEST_CASE("classical fragment excludes lolli") {
  TypingFailure f = mustFail(J("system cll\nright x : 1 -o 1\nprocess x(y).y().x<>\n"));
  CHECK(f.reason == FailReason::FragmentViolation);
  // a lolli tucked inside a cut annotation is also rejected
  f = mustFail(J("system cll\nright z : 1\n"
                 "process new x : 1 -o 1 . (x(y).y().x<> | new y . x<y>.(y<> | x().z<>))\n"));
  CHECK(f.reason == FailReason::FragmentViolation);
}

TEST_CASE("intuitionistic checking") {
  DerivPtr d = mustCheck(J("system ill\nleft x : !1\nright y : !1\nprocess [x<->y]\n"));
  CHECK(d->rule == RuleName::ILL_ID);
  checkSound(J("system ill\nright x : 1\nprocess x<>\n"));
  Judgment j = J("system ill\nleft x : 1\nright z : 1\nprocess x().z<>\n");
  d = mustCheck(j);
  CHECK(d->rule == RuleName::ILL_ONE_L);
  CHECK(d->premises[0]->rule == RuleName::ILL_ONE_R);
  checkSound(j);
  j = J("system ill\nright x : 1 -o 1\nprocess x(y).y().x<>\n");
  d = mustCheck(j);
  CHECK(d->rule == RuleName::ILL_LOLLI_R);
  checkSound(j);
  j = J("system ill\nleft x : 1 * 1\nright z : 1\nprocess x(y).y().x().z<>\n");
  d = mustCheck(j);
  CHECK(d->rule == RuleName::ILL_TENSOR_L);
  checkSound(j);
  j = J("system ill\nright x : 1 * 1\nprocess new y . x<y>.(y<> | x<>)\n");
  d = mustCheck(j);
  CHECK(d->rule == RuleName::ILL_TENSOR_R);
  checkSound(j);
  j = J("system ill\nleft x : 1 -o 1\nright z : 1\n"
        "process new y . x<y>.(y<> | x().z<>)\n");
  d = mustCheck(j);
  CHECK(d->rule == RuleName::ILL_LOLLI_L);
  checkSound(j);
  j = J("system ill\nright x : !1\nprocess *x(y).y<>\n");
  d = mustCheck(j);
  CHECK(d->rule == RuleName::ILL_BANG_R);
  checkSound(j);
  j = J("system ill\nleft x : !1\nright z : 1\nprocess new w . x<w>.w().z<>\n");
  d = mustCheck(j);
  CHECK(d->rule == RuleName::ILL_BANG_L);
  checkSound(j);
  checkSound(J("system ill\nright z : 1\nprocess new x : 1 . (x<> | x().z<>)\n"));
  checkSound(J("system ill\nright z : 1\n"
               "process new u : 1 . (*u(y).y<> | new x . u<x>.x().z<>)\n"));
  checkSound(J("system ill\nbang u : 1\nright z : 1\nprocess new x . u<x>.x().z<>\n"));
}

TEST_CASE("intuitionistic fragment and shape restrictions") {
  TypingFailure f = mustFail(J("system ill\nright x : bot par 1\nprocess x(y).y().x<>\n"));
  CHECK(f.reason == FailReason::FragmentViolation);
  f = mustFail(J("system ill\nright x : ?1\nprocess *x(y).y<>\n"));
  CHECK(f.reason == FailReason::FragmentViolation);
  // a service can only sit on the single right channel
  mustFail(J("system ill\nleft x : !1\nright z : 1\nprocess *x(y).y().z<>\n"));
}

TEST_CASE("intuitionistic systems reject the par-of-exponentials service") {
  ProcPtr p = parseProcess("x(y).*y(z).new w . x<w>.[w<->z]");
  for (const char* hint : {"1", "1 -o 1", "(1 -o 1) -o 1", "1 * 1", "!1", "1 -o (1 -o 1)",
                           "!(1 -o 1)", "(1 * 1) -o 1", "1 * (1 -o 1)"}) {
    Judgment j;
    j.system = SystemId::ILL;
    j.right.insert("x", parseProposition(hint));
    j.process = p;
    CAPTURE(hint);
    CHECK(std::holds_alternative<TypingFailure>(checkILL(j)));
  }
}

TEST_CASE("search budget limits the attempt count") {
  Judgment j = J("system ull\nright y : 1\nprocess new x : 1 . (x<> | x().y<>)\n");
  CheckOptions small;
  small.budget = 2;
  TypingFailure f = mustFail(j, small);
  CHECK(f.reason == FailReason::SearchBudgetExhausted);
  CHECK(f.budgetUsed >= 2);
}

TEST_CASE("failures report the deepest location and attempted rules") {
  TypingFailure f = mustFail(J("system ull\nright y : 1\nprocess new x . (x<> | x().y<>)\n"));
  CHECK(f.reason == FailReason::MissingAnnotation);
  CHECK(!f.location.empty());
  CHECK(std::find(f.attempted.begin(), f.attempted.end(), RuleName::CUTR) != f.attempted.end());

  // inner failure: the forwarder endpoint types disagree
  f = mustFail(J("system ull\nleft x : 1\nright y : bot\nprocess [x<->y]\n"));
  CHECK(f.reason == FailReason::ContextMismatch);
  CHECK(f.location == "[x<->y]");
}

TEST_CASE("free names must be covered and linear names must occur") {
  // y:1 unused by the process
  mustFail(J("system ull\nright x : 1, y : 1\nprocess x<>\n"));
  // z free but absent from every context
  Judgment j;
  j.system = SystemId::ULL;
  j.right.insert("x", one());
  j.process = parseProcess("x().z<>");
  CHECK(std::holds_alternative<TypingFailure>(checkULL(j)));
}

TEST_CASE("system mismatch is rejected up front") {
  Judgment j = J("system cll\nright x : 1\nprocess x<>\n");
  CHECK(std::holds_alternative<TypingFailure>(checkULL(j)));
  CHECK(std::holds_alternative<DerivPtr>(checkCLL(j)));
}

TEST_CASE("star-only search stays in the star fragment") {
  Judgment j = J("system ull\nright y : 1\nprocess new x : 1 . (x<> | x().y<>)\n");
  DerivPtr d = std::get<DerivPtr>(checkULLStarOnly(j));
  CHECK(allStarred(d));
  CHECK(everyRightSingleton(d));
  // the bottom axioms live outside the star fragment
  CHECK(std::holds_alternative<TypingFailure>(
      checkULLStarOnly(J("system ull\nleft x : bot\nprocess x<>\n"))));
  CHECK(std::holds_alternative<DerivPtr>(
      checkULL(J("system ull\nleft x : bot\nprocess x<>\n"))));
}

TEST_CASE("derivations with singleton right contexts throughout use starred rules") {
  for (const char* text : {
           "system ull\nright x : 1\nprocess x<>\n",
           "system ull\nleft x : 1\nright z : 1\nprocess x().z<>\n",
           "system ull\nright x : 1 -o 1\nprocess x(y).y().x<>\n",
           "system ull\nleft x : 1 * 1\nright z : 1\nprocess x(y).y().x().z<>\n",
           "system ull\nright x : !1\nprocess *x(y).y<>\n",
           "system ull\nleft x : !1\nright z : 1\nprocess new w . x<w>.w().z<>\n",
           "system ull\nright z : 1\nprocess new x : 1 . (x<> | x().z<>)\n",
       }) {
    DerivPtr d = mustCheck(J(text));
    CAPTURE(text);
    if (everyRightSingleton(d)) CHECK(allStarred(d));
  }
}

TEST_CASE("removing any linear assignment breaks the check") {
  for (const char* text : {
           "system ull\nleft x : 1\nright z : 1\nprocess x().z<>\n",
           "system ull\nleft x : 1 -o 1\nright z : 1\n"
           "process new y . x<y>.(y<> | x().z<>)\n",
           "system ull\nleft a : bot, b : 1\nprocess new x : 1 . (x().a<> | [x<->b])\n",
       }) {
    Judgment j = J(text);
    mustCheck(j);
    for (const auto& [n, t] : j.left.entries) {
      Judgment weak = j;
      weak.left = j.left.without(n);
      CAPTURE(text);
      CAPTURE(n);
      CHECK(std::holds_alternative<TypingFailure>(checkULL(weak)));
    }
    for (const auto& [n, t] : j.right.entries) {
      Judgment weak = j;
      weak.right = j.right.without(n);
      CHECK(std::holds_alternative<TypingFailure>(checkULL(weak)));
    }
  }
}

TEST_CASE("validator accepts checker output across systems") {
  for (const char* text : {
           "system ull\nright x : bot par (1 * 1)\n"
           "process x(y).new w . x<w>.(w<> | y().x<>)\n",
           "system ull\nleft x : ?(1 * bot)\nprocess *x(y).y(z).z().y<>\n",
           "system cll\nright x : (1 * 1) par bot\n"
           "process x(y).new w . y<w>.(w<> | x().y<>)\n",
           "system ill\nleft x : !(1 -o 1)\nright z : 1\n"
           "process new w . x<w>.new v . w<v>.(v<> | w().z<>)\n",
       }) {
    CAPTURE(text);
    checkSound(J(text));
  }
}

TEST_CASE("validator rejects corrupted derivations") {
  Judgment j = J("system ull\nright y : 1\nprocess new x : 1 . (x<> | x().y<>)\n");
  DerivPtr d = mustCheck(j);
  REQUIRE(validateDerivation(*d).ok);

  SUBCASE("conclusion type changed") {
    Derivation bad = *d;
    bad.conclusion.right = TypingContext{};
    bad.conclusion.right.insert("y", bottom());
    CHECK(!validateDerivation(bad).ok);
  }
  SUBCASE("rule renamed") {
    Derivation bad = *d;
    bad.rule = RuleName::CUTL;
    CHECK(!validateDerivation(bad).ok);
  }
  SUBCASE("premise dropped") {
    Derivation bad = *d;
    bad.premises.pop_back();
    CHECK(!validateDerivation(bad).ok);
  }
  SUBCASE("premises disagree on the cut proposition") {
    Derivation bad = *d;
    Derivation p2 = *bad.premises[1];
    TypingContext alt;
    for (const auto& [n, t] : p2.conclusion.left.entries)
      alt.insert(n, t->kind == PropKind::One ? bottom() : t);
    p2.conclusion.left = alt;
    bad.premises[1] = std::make_shared<const Derivation>(p2);
    CHECK(!validateDerivation(bad).ok);
  }
  SUBCASE("process replaced") {
    Derivation bad = *d;
    bad.conclusion.process = parseProcess("new x : 1 . (x<> | x().y<>) | 0");
    CHECK(!validateDerivation(bad).ok);
  }
}

TEST_CASE("validator checks the moved-type arithmetic of exponential moves") {
  Judgment j = J("system ull\nleft x : !1\nright z : 1\nprocess new w . x<w>.w().z<>\n");
  DerivPtr d = mustCheck(j);
  REQUIRE(d->rule == RuleName::BANG_L);
  REQUIRE(validateDerivation(*d).ok);
  Derivation bad = *d;
  bad.conclusion.left = TypingContext{};
  bad.conclusion.left.insert("x", ofCourse(bottom()));
  CHECK(!validateDerivation(bad).ok);
}

TEST_CASE("duplicate names across contexts are rejected") {
  Judgment j;
  j.system = SystemId::ULL;
  j.left.insert("x", one());
  j.right.insert("x", one());
  j.process = parseProcess("[x<->x]");
  TypingFailure f = mustFail(j);
  CHECK(f.reason == FailReason::ContextMismatch);
}

namespace {

Judgment ullJudgment(TypingContext g, TypingContext l, const std::string& proc, TypingContext r) {
  Judgment j;
  j.system = SystemId::ULL;
  j.unrestricted = std::move(g);
  j.left = std::move(l);
  j.process = parseProcess(proc);
  j.right = std::move(r);
  return j;
}

TypingContext ctx(std::initializer_list<std::pair<Name, PropPtr>> entries) {
  TypingContext out;
  for (const auto& [n, t] : entries) out.insert(n, t);
  return out;
}

}  // namespace

TEST_CASE("validator accepts a hand-built both-left cut") {
  // prem1: x:1, a:bot |- x().a<>   prem2: b:1, x:bot |- [x<->b]
  DerivPtr ax1 = makeDerivation(RuleName::BOT_L,
                                ullJudgment({}, ctx({{"a", bottom()}}), "a<>", {}), {});
  DerivPtr oneL = makeDerivation(
      RuleName::ONE_L, ullJudgment({}, ctx({{"a", bottom()}, {"x", one()}}), "x().a<>", {}),
      {ax1});
  DerivPtr idl = makeDerivation(
      RuleName::IDL, ullJudgment({}, ctx({{"b", one()}, {"x", bottom()}}), "[x<->b]", {}), {});
  DerivPtr cut = makeDerivation(
      RuleName::CUTL,
      ullJudgment({}, ctx({{"a", bottom()}, {"b", one()}}), "new x . (x().a<> | [x<->b])", {}),
      {oneL, idl});
  ValidationResult v = validateDerivation(*cut);
  CAPTURE(v.message);
  CHECK(v.ok);

  Derivation bad = *cut;
  bad.conclusion.process = parseProcess("new x . (x().a<> | [a<->b])");
  CHECK(!validateDerivation(bad).ok);
}

TEST_CASE("validator accepts a hand-built question cut") {
  // Server body consumed on the left at bot, client holds u : 1 persistently.
  DerivPtr server = makeDerivation(RuleName::BOT_L,
                                   ullJudgment({}, ctx({{"y", bottom()}}), "y<>", {}), {});
  TypingContext g = ctx({{"u", one()}});
  DerivPtr closeZ =
      makeDerivation(RuleName::ONE_R, ullJudgment(g, {}, "z<>", ctx({{"z", one()}})), {});
  DerivPtr botR = makeDerivation(
      RuleName::BOT_R,
      ullJudgment(g, {}, "x().z<>", ctx({{"z", one()}, {"x", bottom()}})), {closeZ});
  DerivPtr copy = makeDerivation(
      RuleName::COPYR, ullJudgment(g, {}, "new x . u<x>.x().z<>", ctx({{"z", one()}})), {botR});
  DerivPtr cut = makeDerivation(
      RuleName::CUTQUEST,
      ullJudgment({}, {}, "new u . (*u(y).y<> | new x . u<x>.x().z<>)", ctx({{"z", one()}})),
      {server, copy});
  ValidationResult v = validateDerivation(*cut);
  CAPTURE(v.message);
  CHECK(v.ok);

  // the same shape with a non-dual persistent type must be rejected
  Derivation bad = *cut;
  Derivation cl = *copy;
  cl.conclusion.unrestricted = ctx({{"u", bottom()}});
  bad.premises[1] = std::make_shared<const Derivation>(cl);
  CHECK(!validateDerivation(bad).ok);
}
