#pragma once

#include <stdexcept>
#include <string>

#include "ullpi/syntax.hpp"
#include "ullpi/typing.hpp"

namespace ullpi {

// Byte offsets into the parsed text, plus 1-based line/column of the start.
struct SourceSpan {
  std::size_t begin = 0;
  std::size_t end = 0;
  int line = 1;
  int column = 1;
};

struct ParseError : std::runtime_error {
  SourceSpan span;
  ParseError(const std::string& message, SourceSpan s)
      : std::runtime_error(message), span(s) {}
};

// Grammar, loosest to tightest: A -o B (right-assoc), A par B, A * B (both
// left-assoc), !A / ?A, atoms 1 and bot, parentheses. Unicode connectives are
// accepted on input only.
PropPtr parseProposition(const std::string& text);

// Grammar: P | Q loosest; prefixes x<y>.P, x(y).P, *x(y).P, x().P and
// new x [: A] . P bind tighter; atoms 0, x<>, [x<->y]; parentheses.
ProcPtr parseProcess(const std::string& text);

// Line format: `system <ull|cll|ill>`, `bang n : A, ...`, `left ...`,
// `right ...`, `process P`. Missing context lines mean empty contexts; `#`
// starts a comment. Duplicate names, ILL judgments without exactly one right
// entry, and CLL judgments with a nonempty left are rejected here.
Judgment parseJudgment(const std::string& text);

std::string render(const PropPtr& a);
std::string render(const ProcPtr& p);
std::string render(const TypingContext& ctx);  // `.` when empty
std::string render(const Judgment& j);         // single line: Γ ; Δ |- P :: Λ
std::string renderJudgmentFile(const Judgment& j);
std::string render(const Derivation& d);  // indented tree, one node per line

}  // namespace ullpi
