#include <random>

#include "doctest.h"
#include "ullpi/surface.hpp"

using namespace ullpi;

namespace {

PropPtr randomProp(std::mt19937_64& rng, int depth) {
  std::uniform_int_distribution<int> pick(0, depth <= 0 ? 1 : 6);
  switch (pick(rng)) {
    case 0: return one();
    case 1: return bottom();
    case 2: return tensor(randomProp(rng, depth - 1), randomProp(rng, depth - 1));
    case 3: return par(randomProp(rng, depth - 1), randomProp(rng, depth - 1));
    case 4: return lolli(randomProp(rng, depth - 1), randomProp(rng, depth - 1));
    case 5: return ofCourse(randomProp(rng, depth - 1));
    default: return whyNot(randomProp(rng, depth - 1));
  }
}

const char* kNames[] = {"x", "y", "z", "u", "w", "a", "b", "srv", "k1", "longer_name"};

Name randomName(std::mt19937_64& rng) {
  return kNames[std::uniform_int_distribution<std::size_t>(0, std::size(kNames) - 1)(rng)];
}

ProcPtr randomProc(std::mt19937_64& rng, int depth) {
  std::uniform_int_distribution<int> pick(0, depth <= 0 ? 2 : 8);
  switch (pick(rng)) {
    case 0: return inaction();
    case 1: return close(randomName(rng));
    case 2: return forwarder(randomName(rng), randomName(rng));
    case 3: {
      PropPtr ann = std::uniform_int_distribution<int>(0, 1)(rng) ? randomProp(rng, 2) : nullptr;
      return restriction(randomName(rng), ann, randomProc(rng, depth - 1));
    }
    case 4: return parallel(randomProc(rng, depth - 1), randomProc(rng, depth - 1));
    case 5: return output(randomName(rng), randomName(rng), randomProc(rng, depth - 1));
    case 6: return input(randomName(rng), randomName(rng), randomProc(rng, depth - 1));
    case 7: return replicatedInput(randomName(rng), randomName(rng), randomProc(rng, depth - 1));
    default: return wait(randomName(rng), randomProc(rng, depth - 1));
  }
}

TypingContext randomContext(std::mt19937_64& rng, std::set<Name>& used, int maxSize) {
  TypingContext ctx;
  int n = std::uniform_int_distribution<int>(0, maxSize)(rng);
  for (int i = 0; i < n; ++i) {
    Name candidate = randomName(rng);
    if (!used.insert(candidate).second) continue;
    ctx.insert(candidate, randomProp(rng, 3));
  }
  return ctx;
}

Judgment randomJudgment(std::mt19937_64& rng) {
  Judgment j;
  std::set<Name> used;
  switch (std::uniform_int_distribution<int>(0, 2)(rng)) {
    case 0:
      j.system = SystemId::ULL;
      j.unrestricted = randomContext(rng, used, 2);
      j.left = randomContext(rng, used, 2);
      j.right = randomContext(rng, used, 2);
      break;
    case 1:
      j.system = SystemId::CLL;
      j.unrestricted = randomContext(rng, used, 2);
      j.right = randomContext(rng, used, 3);
      break;
    default: {
      j.system = SystemId::ILL;
      j.unrestricted = randomContext(rng, used, 2);
      j.left = randomContext(rng, used, 2);
      while (j.right.empty()) {
        Name candidate = randomName(rng);
        if (used.insert(candidate).second) j.right.insert(candidate, randomProp(rng, 3));
      }
      break;
    }
  }
  j.process = randomProc(rng, 3);
  return j;
}

}  // namespace

TEST_CASE("proposition parsing fixes the connective precedences") {
  CHECK(propEqual(parseProposition("1 * bot"), tensor(one(), bottom())));
  CHECK(propEqual(parseProposition("!1 par ?bot"), par(ofCourse(one()), whyNot(bottom()))));
  CHECK(propEqual(parseProposition("1 -o bot -o 1"), lolli(one(), lolli(bottom(), one()))));
  CHECK(propEqual(parseProposition("1 * bot par 1"), par(tensor(one(), bottom()), one())));
  CHECK(propEqual(parseProposition("1 par bot * 1"), par(one(), tensor(bottom(), one()))));
  CHECK(propEqual(parseProposition("1 * bot * 1"), tensor(tensor(one(), bottom()), one())));
  CHECK(propEqual(parseProposition("1 par bot -o 1"), lolli(par(one(), bottom()), one())));
  CHECK(propEqual(parseProposition("(1 -o bot) -o 1"), lolli(lolli(one(), bottom()), one())));
  CHECK(propEqual(parseProposition("!(1 * bot)"), ofCourse(tensor(one(), bottom()))));
  CHECK(propEqual(parseProposition("!?1"), ofCourse(whyNot(one()))));
  CHECK(propEqual(parseProposition("!1 * bot"), tensor(ofCourse(one()), bottom())));
}

TEST_CASE("proposition rendering uses minimal parentheses") {
  CHECK(render(tensor(one(), bottom())) == "1 * bot");
  CHECK(render(par(ofCourse(one()), whyNot(bottom()))) == "!1 par ?bot");
  CHECK(render(lolli(one(), lolli(bottom(), one()))) == "1 -o bot -o 1");
  CHECK(render(lolli(lolli(one(), bottom()), one())) == "(1 -o bot) -o 1");
  CHECK(render(tensor(par(one(), bottom()), one())) == "(1 par bot) * 1");
  CHECK(render(par(tensor(one(), bottom()), one())) == "1 * bot par 1");
  CHECK(render(tensor(one(), tensor(bottom(), one()))) == "1 * (bot * 1)");
  CHECK(render(ofCourse(tensor(one(), bottom()))) == "!(1 * bot)");
}

TEST_CASE("process parsing covers every constructor") {
  CHECK(procEqual(parseProcess("0"), inaction()));
  CHECK(procEqual(parseProcess("x<>"), close("x")));
  CHECK(procEqual(parseProcess("[x<->y]"), forwarder("x", "y")));
  CHECK(procEqual(parseProcess("x<y>.0"), output("x", "y", inaction())));
  CHECK(procEqual(parseProcess("x(y).0"), input("x", "y", inaction())));
  CHECK(procEqual(parseProcess("x().y<>"), wait("x", close("y"))));
  CHECK(procEqual(parseProcess("x(y).*y(z).z<>"),
                  input("x", "y", replicatedInput("y", "z", close("z")))));
  CHECK(procEqual(parseProcess("new x . (x<> | x().y<>)"),
                  restriction("x", nullptr, parallel(close("x"), wait("x", close("y"))))));
  CHECK(procEqual(parseProcess("new x : 1 . x<>"), restriction("x", one(), close("x"))));
}

TEST_CASE("prefixes bind tighter than parallel; restriction body stops at '|'") {
  ProcPtr p = parseProcess("new x . x<> | y<>");
  REQUIRE(p->kind == ProcKind::Parallel);
  CHECK(p->left->kind == ProcKind::Restriction);
  CHECK(p->right->kind == ProcKind::Close);

  ProcPtr q = parseProcess("x(y).y<> | z<>");
  REQUIRE(q->kind == ProcKind::Parallel);
  CHECK(q->left->kind == ProcKind::Input);

  ProcPtr r = parseProcess("a<> | b<> | c<>");
  REQUIRE(r->kind == ProcKind::Parallel);
  CHECK(r->left->kind == ProcKind::Parallel);
}

TEST_CASE("unicode connectives are accepted on input") {
  CHECK(propEqual(parseProposition("1 \xE2\x8A\x97 \xE2\x8A\xA5"), tensor(one(), bottom())));
  CHECK(propEqual(parseProposition("1 \xE2\x84\x98 1"), par(one(), one())));
  CHECK(propEqual(parseProposition("1 \xE2\x85\x8B 1"), par(one(), one())));
  CHECK(propEqual(parseProposition("1 \xE2\x8A\xB8 1"), lolli(one(), one())));
  CHECK(procEqual(parseProcess("\xCE\xBD x . x\xE2\x9F\xA8\xE2\x9F\xA9"),
                  restriction("x", nullptr, close("x"))));
  CHECK(procEqual(parseProcess("[x \xE2\x86\x94 y]"), forwarder("x", "y")));
}

TEST_CASE("parse errors carry positions and reject reserved names") {
  CHECK_THROWS_AS(parseProposition(""), ParseError);
  CHECK_THROWS_AS(parseProposition("1 * * 1"), ParseError);
  CHECK_THROWS_AS(parseProposition("1 * bot)"), ParseError);
  CHECK_THROWS_AS(parseProcess("new . x<>"), ParseError);
  CHECK_THROWS_AS(parseProcess("x<y>"), ParseError);
  CHECK_THROWS_AS(parseProcess("par<>"), ParseError);
  CHECK_THROWS_AS(parseProcess("new process . 0"), ParseError);
  CHECK_THROWS_AS(parseProposition("2"), ParseError);
  CHECK_THROWS_AS(parseProposition("1 -x 1"), ParseError);

  try {
    parseProposition("1 *\n* 1");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.span.line == 2);
    CHECK(e.span.column == 1);
    CHECK(e.span.begin == 4);
  }
  try {
    parseProcess("x(y).y(");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.span.line == 1);
    CHECK(e.span.column == 8);
  }
}

TEST_CASE("judgment files parse with defaults and comments") {
  Judgment j = parseJudgment(
      "# toy judgment\n"
      "system ull\n"
      "bang u : !1\n"
      "left x : 1, y : bot\n"
      "right z : 1 * bot\n"
      "process x().z<y>.0\n");
  CHECK(j.system == SystemId::ULL);
  CHECK(j.unrestricted.size() == 1);
  CHECK(propEqual(j.unrestricted.lookup("u"), ofCourse(one())));
  CHECK(j.left.size() == 2);
  CHECK(propEqual(j.right.lookup("z"), tensor(one(), bottom())));
  CHECK(procEqual(j.process, wait("x", output("z", "y", inaction()))));

  Judgment minimal = parseJudgment("system cll\nprocess 0\n");
  CHECK(minimal.system == SystemId::CLL);
  CHECK(minimal.unrestricted.empty());
  CHECK(minimal.left.empty());
  CHECK(minimal.right.empty());
}

TEST_CASE("judgment files reject shape violations") {
  CHECK_THROWS_WITH_AS(parseJudgment("system ull\nprocess x<>\nprocess x<>\n"),
                       doctest::Contains("duplicate process line"), ParseError);
  CHECK_THROWS_WITH_AS(parseJudgment("process 0\n"), doctest::Contains("missing system"),
                       ParseError);
  CHECK_THROWS_WITH_AS(parseJudgment("system ull\n"), doctest::Contains("missing process"),
                       ParseError);
  CHECK_THROWS_WITH_AS(parseJudgment("system ull\nleft x : 1, x : bot\nprocess x<>\n"),
                       doctest::Contains("duplicate name 'x'"), ParseError);
  CHECK_THROWS_WITH_AS(parseJudgment("system ull\nleft x : 1\nright x : bot\nprocess x<>\n"),
                       doctest::Contains("duplicate name 'x' across contexts"), ParseError);
  CHECK_THROWS_WITH_AS(parseJudgment("system ill\nprocess 0\n"),
                       doctest::Contains("exactly one right entry"), ParseError);
  CHECK_THROWS_WITH_AS(parseJudgment("system ill\nright x : 1, y : 1\nprocess x<>\n"),
                       doctest::Contains("exactly one right entry"), ParseError);
  CHECK_THROWS_WITH_AS(parseJudgment("system cll\nleft x : 1\nright y : 1\nprocess x().y<>\n"),
                       doctest::Contains("no left context"), ParseError);
  CHECK_THROWS_AS(parseJudgment("system xll\nprocess 0\n"), ParseError);
  CHECK_THROWS_AS(parseJudgment("left x : 1\nsystem ull\nprocess x().0 extra\n"), ParseError);
}

TEST_CASE("proposition round-trip: parse after render is the identity") {
  std::mt19937_64 rng(2026);
  for (int i = 0; i < 2000; ++i) {
    PropPtr a = randomProp(rng, 6);
    CHECK(propEqual(parseProposition(render(a)), a));
  }
}

TEST_CASE("process round-trip: parse after render is the identity") {
  std::mt19937_64 rng(2027);
  for (int i = 0; i < 2000; ++i) {
    ProcPtr p = randomProc(rng, 5);
    ProcPtr back = parseProcess(render(p));
    CHECK(procEqual(back, p));
  }
}

TEST_CASE("judgment round-trip: parse after render is the identity") {
  std::mt19937_64 rng(2028);
  for (int i = 0; i < 2000; ++i) {
    Judgment j = randomJudgment(rng);
    Judgment back = parseJudgment(renderJudgmentFile(j));
    CHECK(judgmentEqual(back, j));
  }
}

TEST_CASE("derivation rendering shows one labeled judgment per node") {
  Judgment axiom;
  axiom.system = SystemId::ULL;
  axiom.right.insert("x", one());
  axiom.process = close("x");
  DerivPtr leaf = makeDerivation(RuleName::ONE_R, axiom, {});

  Judgment waitConcl;
  waitConcl.system = SystemId::ULL;
  waitConcl.left.insert("y", one());
  waitConcl.right.insert("x", one());
  waitConcl.process = wait("y", close("x"));
  DerivPtr root = makeDerivation(RuleName::ONE_L, waitConcl, {leaf});

  std::string text = render(*root);
  CHECK(text.find("1R*") != std::string::npos);
  CHECK(text.find("1L*") != std::string::npos);
  CHECK(text.find("|- x<> :: x : 1") != std::string::npos);
  CHECK(text.find("\n  1R*") != std::string::npos);
  CHECK(text.find("y : 1 |- y().x<> :: x : 1") != std::string::npos);
}

TEST_CASE("context helpers behave as ordered maps") {
  TypingContext ctx;
  CHECK(ctx.insert("x", one()));
  CHECK(ctx.insert("y", bottom()));
  CHECK_FALSE(ctx.insert("x", bottom()));
  CHECK(ctx.has("y"));
  CHECK(propEqual(ctx.lookup("x"), one()));
  CHECK(ctx.lookup("z") == nullptr);
  CHECK(ctx.without("x").size() == 1);
  CHECK(ctx.size() == 2);

  TypingContext reordered;
  reordered.insert("y", bottom());
  reordered.insert("x", one());
  CHECK(contextEqual(ctx, reordered));
  CHECK_FALSE(contextEqual(ctx, ctx.without("x")));

  CHECK(render(TypingContext{}) == ".");
  CHECK(render(ctx) == "x : 1, y : bot");
}

TEST_CASE("linear context splitting follows free names") {
  TypingContext delta;
  delta.insert("a", one());
  delta.insert("b", bottom());
  ProcPtr p = close("a");
  ProcPtr q = wait("b", inaction());
  auto split = splitLinearContext(delta, p, q, {});
  REQUIRE(split.has_value());
  CHECK(split->first.has("a"));
  CHECK(split->second.has("b"));

  CHECK_FALSE(splitLinearContext(delta, close("a"), close("a"), {}).has_value());
  CHECK_FALSE(splitLinearContext(delta, close("a"), close("c"), {}).has_value());
  auto excluded = splitLinearContext(delta, close("a"), close("b"), {"a"});
  REQUIRE(excluded.has_value());
  CHECK(excluded->first.empty());
  CHECK(excluded->second.has("b"));
  CHECK(splitLinearContext(delta, close("b"), close("a"), {}).has_value());
}
