// End-to-end runs of the command-line binary. Location of the binary and the
// demo files comes in through compile definitions.
#include <cstdio>
#include <string>
#include <sys/wait.h>

#include "doctest.h"

namespace {

struct CmdResult {
  int code = -1;
  std::string out;
};

CmdResult run(const std::string& args) {
  std::string cmd = std::string(ULLPI_BIN) + " " + args + " 2>&1";
  FILE* p = popen(cmd.c_str(), "r");
  REQUIRE(p != nullptr);
  std::string out;
  char buf[4096];
  std::size_t n;
  while ((n = fread(buf, 1, sizeof buf, p)) > 0) out.append(buf, n);
  int st = pclose(p);
  CmdResult r;
  r.code = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
  r.out = out;
  return r;
}

std::string demo(const char* name) { return std::string(ULLPI_DEMOS) + "/" + name; }

bool has(const std::string& hay, const std::string& needle) {
  return hay.find(needle) != std::string::npos;
}

}  // namespace

TEST_CASE("check accepts the axiom demo") {
  CmdResult r = run("check " + demo("ok-axiom.ull"));
  CHECK(r.code == 0);
  CHECK(has(r.out, "accepted"));
}

TEST_CASE("check --validate re-verifies the derivation") {
  CmdResult r = run("check --validate " + demo("cut.ull"));
  CHECK(r.code == 0);
  CHECK(has(r.out, "accepted"));
  CHECK(has(r.out, "validated"));
}

TEST_CASE("check machine format prints only the derivation") {
  CmdResult r = run("check --format machine " + demo("ok-axiom.ull"));
  CHECK(r.code == 0);
  CHECK(!has(r.out, "accepted"));
  CHECK(!r.out.empty());
}

TEST_CASE("check rejects the non-local process under the input-output discipline") {
  CmdResult r = run("check " + demo("locality.ill"));
  CHECK(r.code == 1);
  CHECK(has(r.out, "rejected"));
  CHECK(has(r.out, "reason:"));
}

TEST_CASE("check accepts the non-local process in both classical systems") {
  CHECK(run("check " + demo("locality.cll")).code == 0);
  CHECK(run("check " + demo("locality.ull")).code == 0);
}

TEST_CASE("check on a missing file is a usage error") {
  CmdResult r = run("check " + demo("nosuchfile.ull"));
  CHECK(r.code == 2);
}

TEST_CASE("check on a malformed file is a usage error") {
  CmdResult r = run("check " + demo("demo.proc"));
  CHECK(r.code == 2);
}

TEST_CASE("classify reports the four memberships of the non-local process") {
  std::string args = "classify " + demo("locality.proc") + " --hint-ull " + demo("locality.ull") +
                     " --hint-cll " + demo("locality.cll") + " --hint-ill " + demo("locality.ill");
  CmdResult r = run(args);
  CHECK(r.code == 0);
  CHECK(has(r.out, "U:yes C:yes J:no U*:no"));
}

TEST_CASE("classify without hints needs a closed process") {
  CmdResult r = run("classify " + demo("locality.proc"));
  CHECK(r.code == 2);
}

TEST_CASE("reduce runs the two-step demo deterministically") {
  std::string args = "reduce --fuel 10 --seed 7 " + demo("demo.proc");
  CmdResult a = run(args);
  CmdResult b = run(args);
  CHECK(a.code == 0);
  CHECK(a.out == b.out);
  CHECK(has(a.out, "steps: 2"));
  CHECK(has(a.out, "z<>"));
}

TEST_CASE("reduce accepts a judgment file and machine format drops the frame") {
  CmdResult r = run("reduce --format machine " + demo("cut.ull"));
  CHECK(r.code == 0);
  CHECK(!has(r.out, "initial:"));
  CHECK(!has(r.out, "steps:"));
}

TEST_CASE("translate lifts the checked demo into the sibling system") {
  CmdResult toUll = run("translate --to ull " + demo("locality.cll"));
  CHECK(toUll.code == 0);
  CHECK(has(toUll.out, "translated:"));
  CmdResult toCll = run("translate --to cll " + demo("cut.ull"));
  CHECK(toCll.code == 0);
  CHECK(has(toCll.out, "translated:"));
}

TEST_CASE("translate rejects a source already in the target system") {
  CmdResult r = run("translate --to cll " + demo("locality.cll"));
  CHECK(r.code == 2);
}

TEST_CASE("fuzz passes its suites and is deterministic") {
  std::string args = "fuzz --system ull --count 20 --seed 3 --suite subject-reduction "
                     "--suite round-trip";
  CmdResult a = run(args);
  CmdResult b = run(args);
  CHECK(a.code == 0);
  CHECK(a.out == b.out);
  CHECK(has(a.out, "status: pass"));
  CHECK(has(a.out, "subject-reduction: 20 pass"));
  CHECK(has(a.out, "round-trip: 20 pass"));
}

TEST_CASE("fuzz progress suite reports open entries honestly") {
  CmdResult r = run("fuzz --system cll --count 15 --seed 1 --suite progress");
  CHECK(r.code == 0);
  CHECK(has(r.out, "status: pass"));
  CHECK(has(r.out, "open entries skipped"));
}

TEST_CASE("fuzz star fragment stays inside the restricted search") {
  CmdResult r = run("fuzz --system ull --count 10 --seed 5 --suite star-fragment");
  CHECK(r.code == 0);
  CHECK(has(r.out, "star-fragment: 10 pass"));
}

TEST_CASE("fuzz star fragment outside ull is a usage error") {
  CHECK(run("fuzz --system ill --count 5 --suite star-fragment").code == 2);
}

TEST_CASE("fuzz checks ill and cll corpora too") {
  CmdResult ill = run("fuzz --system ill --count 15 --seed 2");
  CHECK(ill.code == 0);
  CHECK(has(ill.out, "generated: 15 pass"));
  CmdResult cll = run("fuzz --system cll --count 15 --seed 2 --suite round-trip");
  CHECK(cll.code == 0);
  CHECK(has(cll.out, "status: pass"));
}

TEST_CASE("locality counts violations in processes and judgment files") {
  CmdResult proc = run("locality " + demo("locality.proc"));
  CHECK(proc.code == 0);
  CHECK(has(proc.out, "violations: 1"));
  CHECK(has(proc.out, "name: y"));
  CmdResult clean = run("locality " + demo("ok-axiom.ull"));
  CHECK(clean.code == 0);
  CHECK(has(clean.out, "violations: 0"));
}

TEST_CASE("expand-id prints the expansion and its checking derivation") {
  CmdResult r = run("expand-id \"1 * bot\"");
  CHECK(r.code == 0);
  CHECK(has(r.out, "judgment:"));
  CHECK(has(r.out, "process:"));
  CmdResult full = run("expand-id --full \"1 -o bot\"");
  CHECK(full.code == 0);
}

TEST_CASE("expand-id machine format prints the bare process") {
  CmdResult r = run("expand-id --format machine 1");
  CHECK(r.code == 0);
  CHECK(!has(r.out, "judgment:"));
}

TEST_CASE("bad invocations exit with the usage code") {
  CHECK(run("").code == 2);
  CHECK(run("check").code == 2);
  CHECK(run("frobnicate x").code == 2);
  CHECK(run("fuzz --system nosuchsystem").code == 2);
  CHECK(run("check --format yaml " + demo("ok-axiom.ull")).code == 2);
}

TEST_CASE("help is available at exit zero") {
  CmdResult r = run("--help");
  CHECK(r.code == 0);
  CHECK(has(r.out, "check"));
  CHECK(has(r.out, "fuzz"));
}
