#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cstdint>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "ullpi/generator.hpp"
#include "ullpi/metatheory.hpp"
#include "ullpi/semantics.hpp"
#include "ullpi/surface.hpp"
#include "ullpi/syntax.hpp"
#include "ullpi/typing.hpp"

namespace py = pybind11;

namespace {

using namespace ullpi;

SystemId systemFrom(const std::string& s) {
  if (s == "ull") return SystemId::ULL;
  if (s == "cll") return SystemId::CLL;
  if (s == "ill") return SystemId::ILL;
  throw py::value_error("unknown system: " + s + " (expected ull, cll, or ill)");
}

CheckResult checkFor(const Judgment& j, const CheckOptions& opts = {}) {
  switch (j.system) {
    case SystemId::CLL: return checkCLL(j, opts);
    case SystemId::ILL: return checkILL(j, opts);
    default: return checkULL(j, opts);
  }
}

// Judgment files start with a `system` line; anything else is a bare process.
bool looksLikeJudgment(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    std::size_t i = line.find_first_not_of(" \t\r");
    if (i == std::string::npos || line[i] == '#') continue;
    return line.compare(i, 6, "system") == 0;
  }
  return false;
}

py::dict checkDict(const Judgment& j) {
  py::dict out;
  CheckResult r = checkFor(j);
  if (auto* d = std::get_if<DerivPtr>(&r)) {
    out["accepted"] = true;
    out["judgment"] = render(j);
    out["derivation"] = render(**d);
  } else {
    const auto& f = std::get<TypingFailure>(r);
    out["accepted"] = false;
    out["judgment"] = render(j);
    out["reason"] = failReasonLabel(f.reason);
    out["location"] = f.location;
    std::vector<std::string> tried;
    tried.reserve(f.attempted.size());
    for (RuleName rn : f.attempted) tried.push_back(ruleLabel(rn));
    out["attempted"] = tried;
  }
  return out;
}

py::dict translateText(const std::string& text, const std::string& to) {
  Judgment j = parseJudgment(text);
  DerivPtr translated;
  if (to == "ull") {
    if (j.system != SystemId::CLL)
      throw py::value_error("translate to ull needs a cll source judgment");
    CheckResult r = checkCLL(j);
    auto* d = std::get_if<DerivPtr>(&r);
    if (!d) throw py::value_error("source judgment does not check");
    auto v = cllToUll(*d);
    if (auto* err = std::get_if<std::string>(&v)) throw py::value_error(*err);
    translated = std::get<DerivPtr>(v);
  } else if (to == "cll") {
    if (j.system != SystemId::ULL)
      throw py::value_error("translate to cll needs an ull source judgment");
    CheckResult r = checkULL(j);
    auto* d = std::get_if<DerivPtr>(&r);
    if (!d) throw py::value_error("source judgment does not check");
    auto v = ullToCll(*d);
    if (auto* err = std::get_if<std::string>(&v)) throw py::value_error(*err);
    translated = std::get<DerivPtr>(v);
  } else {
    throw py::value_error("translate target must be ull or cll");
  }
  ValidationResult vr = validateDerivation(*translated);
  py::dict out;
  out["judgment"] = render(translated->conclusion);
  out["file"] = renderJudgmentFile(translated->conclusion);
  out["derivation"] = render(*translated);
  out["validated"] = vr.ok;
  return out;
}

}  // namespace

PYBIND11_MODULE(_ullpi, m) {
  m.doc() = "session-typed pi-calculus workbench: checkers, reduction, "
            "translations, and corpus generation over surface-syntax strings";

  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const ParseError& e) {
      std::ostringstream os;
      os << e.what() << " (line " << e.span.line << ", column " << e.span.column << ")";
      PyErr_SetString(PyExc_ValueError, os.str().c_str());
    }
  });

  m.def(
      "check",
      [](const std::string& text) { return checkDict(parseJudgment(text)); },
      py::arg("judgment"),
      "Type-check a judgment (file or one-line form); the system line picks "
      "the checker. Returns accepted/derivation or reason/location/attempted.");

  m.def(
      "check_star",
      [](const std::string& text) {
        Judgment j = parseJudgment(text);
        if (j.system != SystemId::ULL)
          throw py::value_error("star fragment is defined on ull judgments");
        py::dict out;
        CheckResult r = checkULLStarOnly(j);
        if (auto* d = std::get_if<DerivPtr>(&r)) {
          out["accepted"] = true;
          out["derivation"] = render(**d);
          out["r_degree"] = rDegree(*d);
        } else {
          out["accepted"] = false;
          out["reason"] = failReasonLabel(std::get<TypingFailure>(r).reason);
        }
        return out;
      },
      py::arg("judgment"),
      "Check an ull judgment using starred rules only.");

  m.def(
      "classify",
      [](const std::string& process, const std::string& hintUll,
         const std::string& hintCll, const std::string& hintIll) {
        ProcPtr p = parseProcess(process);
        ClassifyHints hints;
        if (!hintUll.empty()) hints.ull = parseJudgment(hintUll);
        if (!hintCll.empty()) hints.cll = parseJudgment(hintCll);
        if (!hintIll.empty()) hints.ill = parseJudgment(hintIll);
        auto v = classify(p, hints);
        if (auto* err = std::get_if<std::string>(&v)) throw py::value_error(*err);
        const auto& rep = std::get<ClassificationReport>(v);
        py::dict out;
        out["u"] = rep.inU;
        out["c"] = rep.inC;
        out["j"] = rep.inJ;
        out["u_star"] = rep.inUStar;
        return out;
      },
      py::arg("process"), py::arg("hint_ull") = "", py::arg("hint_cll") = "",
      py::arg("hint_ill") = "",
      "Membership of a process in the three typed classes plus the starred "
      "fragment; open processes need one hint judgment per system.");

  m.def(
      "reduce",
      [](const std::string& text, int fuel, std::uint64_t seed) {
        ProcPtr p = looksLikeJudgment(text) ? parseJudgment(text).process
                                            : parseProcess(text);
        return renderTrace(reduce(p, fuel, seed));
      },
      py::arg("text"), py::arg("fuel") = 32, py::arg("seed") = 0,
      "Seeded reduction trace of a process (or of a judgment's process).");

  m.def(
      "canonical",
      [](const std::string& process) { return render(canonicalForm(parseProcess(process))); },
      py::arg("process"),
      "Canonical form: parallel flattened, inert restrictions dropped, scopes "
      "narrowed, binders renamed apart.");

  m.def(
      "dual",
      [](const std::string& prop) { return render(dual(parseProposition(prop))); },
      py::arg("proposition"), "Dual proposition.");

  m.def("translate", &translateText, py::arg("judgment"), py::arg("to"),
        "Translate a checked judgment between cll and ull; returns the "
        "translated judgment, its file form, and the derivation.");

  m.def(
      "expand_identity",
      [](const std::string& prop, bool full) {
        auto v = identityExpansion(parseProposition(prop), "x", "y", full);
        if (auto* err = std::get_if<std::string>(&v)) throw py::value_error(*err);
        return render(std::get<ProcPtr>(v));
      },
      py::arg("proposition"), py::arg("full") = false,
      "Forwarder-free expansion of [x<->y] at the given type, one level or "
      "down to the units.");

  m.def(
      "locality",
      [](const std::string& text) {
        ProcPtr p = looksLikeJudgment(text) ? parseJudgment(text).process
                                            : parseProcess(text);
        py::list out;
        for (const auto& v : localityViolations(p).violations) {
          py::dict d;
          d["name"] = v.receivedName;
          d["binding"] = v.bindingInput;
          d["use"] = v.replicatedUse;
          out.append(d);
        }
        return out;
      },
      py::arg("text"),
      "Received names later used as replicated-input subjects.");

  m.def(
      "generate",
      [](const std::string& system, int count, std::uint64_t seed, int maxDepth,
         bool starOnly) {
        GenConfig cfg;
        cfg.system = systemFrom(system);
        cfg.seed = seed;
        cfg.maxDepth = maxDepth;
        cfg.starOnly = starOnly;
        if (starOnly && cfg.system != SystemId::ULL)
          throw py::value_error("star_only generation is defined for ull");
        std::vector<std::string> out;
        for (auto& [j, d] : generateCorpus(cfg, count)) out.push_back(renderJudgmentFile(j));
        return out;
      },
      py::arg("system") = "ull", py::arg("count") = 1, py::arg("seed") = 0,
      py::arg("max_depth") = 4, py::arg("star_only") = false,
      "Deterministic corpus of well-typed judgment files; entry i uses seed+i.");

  m.def(
      "subject_reduction",
      [](const std::string& text, int fuel, std::uint64_t seed) {
        SubjectReductionReport rep = subjectReductionCheck(parseJudgment(text), fuel, seed);
        py::dict out;
        out["pass"] = rep.pass;
        out["reducts_checked"] = rep.reductsChecked;
        out["failures"] = rep.failures;
        out["error"] = rep.error;
        return out;
      },
      py::arg("judgment"), py::arg("fuel") = 16, py::arg("seed") = 0,
      "Re-check the judgment's contexts against every one-step reduct and one "
      "seeded trace.");

  m.def(
      "progress",
      [](const std::string& text) {
        ProgressReport rep = progressCheck(parseJudgment(text));
        py::dict out;
        out["pass"] = rep.pass;
        out["live"] = rep.live;
        out["redex_count"] = rep.redexCount;
        out["error"] = rep.error;
        return out;
      },
      py::arg("judgment"),
      "Liveness implies a redex, for accepted judgments with empty contexts.");
}
