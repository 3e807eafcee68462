// Batch front end: one subcommand per library capability.
// Exit codes: 0 success, 1 check-or-property failure, 2 usage or parse error.
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "CLI11.hpp"
#include "ullpi/generator.hpp"
#include "ullpi/metatheory.hpp"
#include "ullpi/semantics.hpp"
#include "ullpi/surface.hpp"
#include "ullpi/syntax.hpp"
#include "ullpi/typing.hpp"

using namespace ullpi;

namespace {

std::optional<std::string> readFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return std::nullopt;
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int usageError(const std::string& msg) {
  std::cerr << "error: " << msg << "\n";
  return 2;
}

CheckResult checkFor(const Judgment& j, const CheckOptions& opts = {}) {
  switch (j.system) {
    case SystemId::CLL: return checkCLL(j, opts);
    case SystemId::ILL: return checkILL(j, opts);
    default: return checkULL(j, opts);
  }
}

void printFailure(const TypingFailure& f, bool machine) {
  if (!machine) std::cout << "rejected\n";
  std::cout << "reason: " << failReasonLabel(f.reason) << "\n";
  std::cout << "location: " << f.location << "\n";
  if (!machine && !f.attempted.empty()) {
    std::cout << "attempted:";
    for (RuleName r : f.attempted) std::cout << ' ' << ruleLabel(r);
    std::cout << "\n";
  }
}

std::optional<SystemId> systemOf(const std::string& s) {
  if (s == "ull") return SystemId::ULL;
  if (s == "cll") return SystemId::CLL;
  if (s == "ill") return SystemId::ILL;
  return std::nullopt;
}

// Judgment files start with a `system` line (comments aside); anything else
// is a bare process.
bool looksLikeJudgment(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    std::size_t i = line.find_first_not_of(" \t\r");
    if (i == std::string::npos || line[i] == '#') continue;
    return line.compare(i, 7, "system ") == 0 || line.compare(i, 6, "system") == 0;
  }
  return false;
}

int runCheck(const std::string& path, bool validate, bool machine) {
  auto text = readFile(path);
  if (!text) return usageError("cannot read file: " + path);
  Judgment j = parseJudgment(*text);
  CheckResult r = checkFor(j);
  if (auto* f = std::get_if<TypingFailure>(&r)) {
    printFailure(*f, machine);
    return 1;
  }
  const DerivPtr& d = std::get<DerivPtr>(r);
  if (validate) {
    ValidationResult v = validateDerivation(*d);
    if (!v.ok) {
      std::cout << "validation failed: " << v.message << "\n";
      return 1;
    }
  }
  if (!machine) {
    std::cout << "accepted\n";
    if (validate) std::cout << "validated\n";
  }
  std::cout << render(*d);
  return 0;
}

int runClassify(const std::string& path, const std::string& hintUll, const std::string& hintCll,
                const std::string& hintIll) {
  auto text = readFile(path);
  if (!text) return usageError("cannot read file: " + path);
  ProcPtr p = parseProcess(*text);
  ClassifyHints hints;
  struct Slot {
    const std::string& file;
    SystemId sys;
    std::optional<Judgment>& dst;
    const char* flag;
  } slots[] = {{hintUll, SystemId::ULL, hints.ull, "--hint-ull"},
               {hintCll, SystemId::CLL, hints.cll, "--hint-cll"},
               {hintIll, SystemId::ILL, hints.ill, "--hint-ill"}};
  for (auto& s : slots) {
    if (s.file.empty()) continue;
    auto ht = readFile(s.file);
    if (!ht) return usageError("cannot read file: " + s.file);
    Judgment hj = parseJudgment(*ht);
    if (hj.system != s.sys)
      return usageError(std::string(s.flag) + " expects a judgment in its own system");
    s.dst = hj;
  }
  auto res = classify(p, hints);
  if (auto* err = std::get_if<std::string>(&res)) return usageError(*err);
  const auto& rep = std::get<ClassificationReport>(res);
  auto yn = [](bool b) { return b ? "yes" : "no"; };
  std::cout << "U:" << yn(rep.inU) << " C:" << yn(rep.inC) << " J:" << yn(rep.inJ)
            << " U*:" << yn(rep.inUStar) << "\n";
  return 0;
}

int runReduce(const std::string& path, int fuel, std::uint64_t seed, bool machine) {
  auto text = readFile(path);
  if (!text) return usageError("cannot read file: " + path);
  ProcPtr p = looksLikeJudgment(*text) ? parseJudgment(*text).process : parseProcess(*text);
  ReductionTrace t = reduce(p, fuel, seed);
  if (!machine) std::cout << "initial: " << render(t.root) << "\n";
  std::cout << renderTrace(t);
  if (!machine) std::cout << "steps: " << t.steps.size() << "\n";
  return 0;
}

int runTranslate(const std::string& path, const std::string& to, bool machine) {
  auto text = readFile(path);
  if (!text) return usageError("cannot read file: " + path);
  Judgment j = parseJudgment(*text);
  SystemId target;
  if (auto s = systemOf(to); s && *s != SystemId::ILL)
    target = *s;
  else
    return usageError("--to accepts ull or cll");
  SystemId wanted = target == SystemId::ULL ? SystemId::CLL : SystemId::ULL;
  if (j.system != wanted)
    return usageError(std::string("translation to ") + to + " starts from a " +
                      (wanted == SystemId::CLL ? "cll" : "ull") + " judgment");
  CheckResult r = checkFor(j);
  if (auto* f = std::get_if<TypingFailure>(&r)) {
    printFailure(*f, machine);
    return 1;
  }
  const DerivPtr& d = std::get<DerivPtr>(r);
  auto res = target == SystemId::ULL ? cllToUll(d) : ullToCll(d);
  if (auto* err = std::get_if<std::string>(&res)) {
    std::cout << "translation failed: " << *err << "\n";
    return 1;
  }
  const DerivPtr& out = std::get<DerivPtr>(res);
  ValidationResult v = validateDerivation(*out);
  if (!v.ok) {
    std::cout << "translated derivation failed validation: " << v.message << "\n";
    return 1;
  }
  if (!machine) std::cout << "translated: " << render(out->conclusion) << "\n";
  std::cout << render(*out);
  return 0;
}

int runLocality(const std::string& path) {
  auto text = readFile(path);
  if (!text) return usageError("cannot read file: " + path);
  ProcPtr p = looksLikeJudgment(*text) ? parseJudgment(*text).process : parseProcess(*text);
  LocalityReport rep = localityViolations(p);
  std::cout << "violations: " << rep.violations.size() << "\n";
  for (const auto& v : rep.violations) {
    std::cout << "name: " << v.receivedName << "\n";
    std::cout << "binding: " << v.bindingInput << "\n";
    std::cout << "use: " << v.replicatedUse << "\n";
  }
  return 0;
}

int runExpandId(const std::string& propText, bool full, bool machine) {
  PropPtr a = parseProposition(propText);
  auto res = identityExpansion(a, "x", "y", full);
  if (auto* err = std::get_if<std::string>(&res)) {
    std::cout << "expansion failed: " << *err << "\n";
    return 1;
  }
  const ProcPtr& e = std::get<ProcPtr>(res);
  if (machine) {
    std::cout << render(e) << "\n";
    return 0;
  }
  Judgment j;
  j.system = SystemId::ULL;
  j.left.insert("x", a);
  j.right.insert("y", a);
  j.process = e;
  std::cout << "judgment: " << render(j) << "\n";
  std::cout << "process: " << render(e) << "\n";
  CheckResult r = checkULL(j);
  if (auto* f = std::get_if<TypingFailure>(&r)) {
    printFailure(*f, false);
    return 1;
  }
  std::cout << render(*std::get<DerivPtr>(r));
  return 0;
}

struct SuiteTally {
  int pass = 0, fail = 0;
  long detail = 0;  // suite-specific volume (reducts, vacuous entries, ...)
  std::string firstFailure;
};

int runFuzz(const std::string& sysStr, int count, std::uint64_t seed, int fuel,
            const std::vector<std::string>& suites) {
  auto sys = systemOf(sysStr);
  if (!sys) return usageError("--system accepts ull, cll, or ill");
  bool star = false;
  for (const auto& s : suites) star = star || s == "star-fragment";
  if (star && *sys != SystemId::ULL)
    return usageError("--suite star-fragment applies to --system ull");
  if (count < 1) return usageError("--count must be positive");

  GenConfig cfg;
  cfg.system = *sys;
  cfg.starOnly = star;

  std::cout << "system: " << sysStr << "\n";
  std::cout << "count: " << count << "\n";
  std::cout << "seed: " << seed << "\n";

  auto has = [&](const char* s) {
    for (const auto& x : suites)
      if (x == s) return true;
    return false;
  };

  SuiteTally core, sr, prog, rt, sf;
  for (int i = 0; i < count; ++i) {
    GenConfig c = cfg;
    c.seed = seed + std::uint64_t(i);
    Judgment j;
    DerivPtr d;
    try {
      auto gd = generateWellTyped(c);
      j = gd.first;
      d = gd.second;
    } catch (const std::exception& ex) {
      core.fail++;
      if (core.firstFailure.empty())
        core.firstFailure = "entry " + std::to_string(i) + ": generation failed: " + ex.what();
      continue;
    }
    bool ok = validateDerivation(*d).ok && std::holds_alternative<DerivPtr>(checkFor(j));
    if (!ok) {
      core.fail++;
      if (core.firstFailure.empty())
        core.firstFailure =
            "entry " + std::to_string(i) + " failed validate/re-check:\n" + renderJudgmentFile(j);
      continue;
    }
    core.pass++;

    if (has("subject-reduction")) {
      SubjectReductionReport r = subjectReductionCheck(j, fuel, seed + std::uint64_t(i));
      if (r.pass) {
        sr.pass++;
        sr.detail += r.reductsChecked;
      } else {
        sr.fail++;
        if (sr.firstFailure.empty()) {
          sr.firstFailure = "entry " + std::to_string(i) + ":\n" + renderJudgmentFile(j);
          if (!r.failures.empty()) sr.firstFailure += "\n" + r.failures.front();
          if (!r.error.empty()) sr.firstFailure += "\n" + r.error;
        }
      }
    }
    if (has("progress")) {
      if (j.unrestricted.empty() && j.left.empty() && j.right.empty()) {
        ProgressReport r = progressCheck(j);
        if (r.pass)
          prog.pass++;
        else {
          prog.fail++;
          if (prog.firstFailure.empty())
            prog.firstFailure = "entry " + std::to_string(i) + ": " + r.error;
        }
      } else {
        prog.detail++;  // open judgment: the theorem's hypothesis is unmet
      }
    }
    if (has("round-trip")) {
      bool good = true;
      try {
        Judgment jj = parseJudgment(renderJudgmentFile(j));
        good = judgmentEqual(j, jj) && procEqual(j.process, parseProcess(render(j.process)));
        for (const auto& [n, t] : j.right.entries)
          good = good && propEqual(t, parseProposition(render(t)));
        for (const auto& [n, t] : j.left.entries)
          good = good && propEqual(t, parseProposition(render(t)));
      } catch (const std::exception&) {
        good = false;
      }
      if (good)
        rt.pass++;
      else {
        rt.fail++;
        if (rt.firstFailure.empty())
          rt.firstFailure = "entry " + std::to_string(i) + ":\n" + renderJudgmentFile(j);
      }
    }
    if (star) {
      bool good = usesOnlyStarRules(d) && rDegree(d) == 1 &&
                  std::holds_alternative<DerivPtr>(checkULLStarOnly(j));
      if (good)
        sf.pass++;
      else {
        sf.fail++;
        if (sf.firstFailure.empty())
          sf.firstFailure = "entry " + std::to_string(i) + ":\n" + renderJudgmentFile(j);
      }
    }
  }

  bool failed = core.fail > 0;
  std::cout << "generated: " << core.pass << " pass, " << core.fail << " fail\n";
  if (has("subject-reduction")) {
    std::cout << "subject-reduction: " << sr.pass << " pass, " << sr.fail << " fail, "
              << sr.detail << " reducts checked\n";
    failed = failed || sr.fail > 0;
  }
  if (has("progress")) {
    std::cout << "progress: " << prog.pass << " pass, " << prog.fail << " fail, " << prog.detail
              << " open entries skipped (closed typed judgments are not derivable)\n";
    failed = failed || prog.fail > 0;
  }
  if (has("round-trip")) {
    std::cout << "round-trip: " << rt.pass << " pass, " << rt.fail << " fail\n";
    failed = failed || rt.fail > 0;
  }
  if (star) {
    std::cout << "star-fragment: " << sf.pass << " pass, " << sf.fail << " fail\n";
    failed = failed || sf.fail > 0;
  }
  for (const auto* t : {&core, &sr, &prog, &rt, &sf}) {
    if (!t->firstFailure.empty()) {
      std::cout << "counterexample " << t->firstFailure << "\n";
      break;
    }
  }
  std::cout << "status: " << (failed ? "fail" : "pass") << "\n";
  return failed ? 1 : 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"session-typed pi-calculus workbench"};
  app.require_subcommand(1);

  std::string file, format = "text", to, sysStr = "ull", propText;
  std::string hintUll, hintCll, hintIll;
  bool validate = false, full = false;
  int fuel = 10, count = 100;
  std::uint64_t seed = 0;
  std::vector<std::string> suites;

  auto addFormat = [&](CLI::App* c) {
    c->add_option("--format", format, "text or machine")
        ->check(CLI::IsMember({"text", "machine"}));
  };

  CLI::App* cmdCheck = app.add_subcommand("check", "type-check a judgment file");
  cmdCheck->add_option("file", file, "judgment file")->required();
  cmdCheck->add_flag("--validate", validate, "re-verify the returned derivation");
  addFormat(cmdCheck);

  CLI::App* cmdClassify =
      app.add_subcommand("classify", "which systems type a process (U, C, J, U*)");
  cmdClassify->add_option("file", file, "process file")->required();
  cmdClassify->add_option("--hint-ull", hintUll, "ull judgment file for the open process");
  cmdClassify->add_option("--hint-cll", hintCll, "cll judgment file for the open process");
  cmdClassify->add_option("--hint-ill", hintIll, "ill judgment file for the open process");
  addFormat(cmdClassify);

  CLI::App* cmdReduce = app.add_subcommand("reduce", "run a seeded reduction trace");
  cmdReduce->add_option("file", file, "process or judgment file")->required();
  cmdReduce->add_option("--fuel", fuel, "maximum steps");
  cmdReduce->add_option("--seed", seed, "random walk seed");
  addFormat(cmdReduce);

  CLI::App* cmdTranslate =
      app.add_subcommand("translate", "rebuild a checked derivation in the sibling system");
  cmdTranslate->add_option("file", file, "judgment file")->required();
  cmdTranslate->add_option("--to", to, "target system: ull or cll")->required();
  addFormat(cmdTranslate);

  CLI::App* cmdFuzz = app.add_subcommand("fuzz", "generate judgments and run property suites");
  cmdFuzz->add_option("--system", sysStr, "ull, cll, or ill")->required();
  cmdFuzz->add_option("--count", count, "number of generated entries");
  cmdFuzz->add_option("--seed", seed, "base seed; entry i uses seed+i");
  cmdFuzz->add_option("--fuel", fuel, "reduction fuel for subject-reduction");
  cmdFuzz
      ->add_option("--suite", suites,
                   "subject-reduction, progress, round-trip, star-fragment (repeatable)")
      ->check(CLI::IsMember({"subject-reduction", "progress", "round-trip", "star-fragment"}));
  addFormat(cmdFuzz);

  CLI::App* cmdLocality =
      app.add_subcommand("locality", "received names later used for replicated input");
  cmdLocality->add_option("file", file, "process or judgment file")->required();
  addFormat(cmdLocality);

  CLI::App* cmdExpand = app.add_subcommand("expand-id", "forwarder-free identity at a type");
  cmdExpand->add_option("prop", propText, "proposition text")->required();
  cmdExpand->add_flag("--full", full, "recurse to the units");
  addFormat(cmdExpand);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  bool machine = format == "machine";
  try {
    if (app.got_subcommand(cmdCheck)) return runCheck(file, validate, machine);
    if (app.got_subcommand(cmdClassify)) return runClassify(file, hintUll, hintCll, hintIll);
    if (app.got_subcommand(cmdReduce)) return runReduce(file, fuel, seed, machine);
    if (app.got_subcommand(cmdTranslate)) return runTranslate(file, to, machine);
    if (app.got_subcommand(cmdFuzz)) return runFuzz(sysStr, count, seed, fuel, suites);
    if (app.got_subcommand(cmdLocality)) return runLocality(file);
    if (app.got_subcommand(cmdExpand)) return runExpandId(propText, full, machine);
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << " (line " << e.span.line << ", column "
              << e.span.column << ")\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
