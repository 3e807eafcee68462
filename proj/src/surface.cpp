#include "ullpi/surface.hpp"

#include <cassert>
#include <map>
#include <set>
#include <sstream>

namespace ullpi {
namespace {

enum class Tok {
  One, Bot, Bang, Quest, Star, ParKw, Lolli, LParen, RParen, Zero,
  LBracket, RBracket, Fwd, New, Dot, Colon, Pipe, LAngle, RAngle, Comma,
  Ident, KwSystem, KwBang, KwLeft, KwRight, KwProcess, End
};

struct Token {
  Tok kind;
  std::string text;
  SourceSpan span;
};

const std::map<std::string, Tok, std::less<>> kReserved = {
    {"new", Tok::New},         {"par", Tok::ParKw},   {"bot", Tok::Bot},
    {"system", Tok::KwSystem}, {"bang", Tok::KwBang}, {"left", Tok::KwLeft},
    {"right", Tok::KwRight},   {"process", Tok::KwProcess}};

// Input-only aliases for the ASCII connectives.
const std::vector<std::pair<std::string, Tok>> kUnicode = {
    {"\xE2\x8A\x97", Tok::Star},    {"\xE2\x84\x98", Tok::ParKw},
    {"\xE2\x85\x8B", Tok::ParKw},   {"\xE2\x8A\xB8", Tok::Lolli},
    {"\xE2\x8A\xA5", Tok::Bot},     {"\xCE\xBD", Tok::New},
    {"\xE2\x86\x94", Tok::Fwd},     {"\xE2\x9F\xA8", Tok::LAngle},
    {"\xE2\x9F\xA9", Tok::RAngle}};

bool identStart(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool identCont(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

std::vector<Token> lex(const std::string& s, std::size_t baseOffset, int baseLine, int baseCol) {
  std::vector<Token> out;
  std::size_t i = 0;
  int line = baseLine, col = baseCol;
  auto spanFrom = [&](std::size_t start, int ln, int cl) {
    return SourceSpan{baseOffset + start, baseOffset + i, ln, cl};
  };
  auto push = [&](Tok k, std::size_t start, int ln, int cl) {
    out.push_back({k, s.substr(start, i - start), spanFrom(start, ln, cl)});
  };
  auto fail = [&](const std::string& msg, std::size_t start, int ln, int cl) {
    throw ParseError(msg, spanFrom(start, ln, cl));
  };
  while (i < s.size()) {
    char c = s[i];
    if (c == '\n') {
      ++i;
      ++line;
      col = 1;
      continue;
    }
    if (c == ' ' || c == '\t' || c == '\r') {
      ++i;
      ++col;
      continue;
    }
    if (c == '#') {
      while (i < s.size() && s[i] != '\n') ++i;
      continue;
    }
    std::size_t start = i;
    int ln = line, cl = col;
    if (identStart(c)) {
      while (i < s.size() && identCont(s[i])) ++i;
      col += static_cast<int>(i - start);
      std::string word = s.substr(start, i - start);
      auto it = kReserved.find(word);
      push(it == kReserved.end() ? Tok::Ident : it->second, start, ln, cl);
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
      col += static_cast<int>(i - start);
      std::string num = s.substr(start, i - start);
      if (num == "0")
        push(Tok::Zero, start, ln, cl);
      else if (num == "1")
        push(Tok::One, start, ln, cl);
      else
        fail("unexpected number '" + num + "'", start, ln, cl);
      continue;
    }
    auto single = [&](Tok k) {
      ++i;
      ++col;
      push(k, start, ln, cl);
    };
    switch (c) {
      case '!': single(Tok::Bang); continue;
      case '?': single(Tok::Quest); continue;
      case '*': single(Tok::Star); continue;
      case '(': single(Tok::LParen); continue;
      case ')': single(Tok::RParen); continue;
      case '[': single(Tok::LBracket); continue;
      case ']': single(Tok::RBracket); continue;
      case '.': single(Tok::Dot); continue;
      case ':': single(Tok::Colon); continue;
      case '|': single(Tok::Pipe); continue;
      case ',': single(Tok::Comma); continue;
      case '>': single(Tok::RAngle); continue;
      case '<':
        if (s.compare(i, 3, "<->") == 0) {
          i += 3;
          col += 3;
          push(Tok::Fwd, start, ln, cl);
        } else {
          single(Tok::LAngle);
        }
        continue;
      case '-':
        if (i + 1 < s.size() && s[i + 1] == 'o') {
          i += 2;
          col += 2;
          push(Tok::Lolli, start, ln, cl);
        } else {
          fail("stray '-' (expected '-o')", start, ln, cl);
        }
        continue;
      default: break;
    }
    bool matched = false;
    for (const auto& [bytes, kind] : kUnicode) {
      if (s.compare(i, bytes.size(), bytes) == 0) {
        i += bytes.size();
        ++col;
        push(kind, start, ln, cl);
        matched = true;
        break;
      }
    }
    if (matched) continue;
    fail("unexpected character", start, ln, cl);
  }
  out.push_back({Tok::End, "", SourceSpan{baseOffset + i, baseOffset + i, line, col}});
  return out;
}

struct Parser {
  std::vector<Token> toks;
  std::size_t pos = 0;

  const Token& peek(std::size_t k = 0) const {
    std::size_t j = pos + k;
    return j < toks.size() ? toks[j] : toks.back();
  }
  const Token& get() {
    const Token& t = toks[pos];
    if (t.kind != Tok::End) ++pos;
    return t;
  }
  [[noreturn]] void fail(const std::string& msg) const {
    const Token& t = peek();
    std::string found = t.kind == Tok::End ? "end of input" : "'" + t.text + "'";
    throw ParseError(msg + ", found " + found, t.span);
  }
  const Token& expect(Tok k, const std::string& what) {
    if (peek().kind != k) fail("expected " + what);
    return get();
  }
  Name name() {
    if (peek().kind != Tok::Ident) {
      if (kReserved.count(peek().text)) fail("reserved word cannot be used as a name");
      fail("expected a name");
    }
    return get().text;
  }

  PropPtr prop() {  // -o, right-assoc, loosest
    PropPtr left = propPar();
    if (peek().kind == Tok::Lolli) {
      get();
      return lolli(left, prop());
    }
    return left;
  }
  PropPtr propPar() {
    PropPtr acc = propTensor();
    while (peek().kind == Tok::ParKw) {
      get();
      acc = par(acc, propTensor());
    }
    return acc;
  }
  PropPtr propTensor() {
    PropPtr acc = propUnary();
    while (peek().kind == Tok::Star) {
      get();
      acc = tensor(acc, propUnary());
    }
    return acc;
  }
  PropPtr propUnary() {
    if (peek().kind == Tok::Bang) {
      get();
      return ofCourse(propUnary());
    }
    if (peek().kind == Tok::Quest) {
      get();
      return whyNot(propUnary());
    }
    return propAtom();
  }
  PropPtr propAtom() {
    switch (peek().kind) {
      case Tok::One: get(); return one();
      case Tok::Bot: get(); return bottom();
      case Tok::LParen: {
        get();
        PropPtr a = prop();
        expect(Tok::RParen, "')'");
        return a;
      }
      default: fail("expected a proposition");
    }
  }

  ProcPtr proc() {  // '|' loosest, left-assoc
    ProcPtr acc = procTerm();
    while (peek().kind == Tok::Pipe) {
      get();
      acc = parallel(acc, procTerm());
    }
    return acc;
  }
  ProcPtr procTerm() {
    switch (peek().kind) {
      case Tok::Zero: get(); return inaction();
      case Tok::LParen: {
        get();
        ProcPtr p = proc();
        expect(Tok::RParen, "')'");
        return p;
      }
      case Tok::LBracket: {
        get();
        Name a = name();
        expect(Tok::Fwd, "'<->'");
        Name b = name();
        expect(Tok::RBracket, "']'");
        return forwarder(a, b);
      }
      case Tok::New: {
        get();
        Name x = name();
        PropPtr ann;
        if (peek().kind == Tok::Colon) {
          get();
          ann = prop();
        }
        expect(Tok::Dot, "'.'");
        return restriction(x, ann, procTerm());
      }
      case Tok::Star: {
        get();
        Name x = name();
        expect(Tok::LParen, "'('");
        Name y = name();
        expect(Tok::RParen, "')'");
        expect(Tok::Dot, "'.'");
        return replicatedInput(x, y, procTerm());
      }
      case Tok::Ident: {
        Name x = name();
        if (peek().kind == Tok::LAngle) {
          get();
          if (peek().kind == Tok::RAngle) {
            get();
            return close(x);
          }
          Name y = name();
          expect(Tok::RAngle, "'>'");
          expect(Tok::Dot, "'.'");
          return output(x, y, procTerm());
        }
        if (peek().kind == Tok::LParen) {
          get();
          if (peek().kind == Tok::RParen) {
            get();
            expect(Tok::Dot, "'.'");
            return wait(x, procTerm());
          }
          Name y = name();
          expect(Tok::RParen, "')'");
          expect(Tok::Dot, "'.'");
          return input(x, y, procTerm());
        }
        fail("expected '<' or '(' after channel name");
      }
      default: fail("expected a process");
    }
  }

  // `name : prop, ...` until end of tokens
  void contextEntries(TypingContext& ctx, const std::string& which) {
    for (;;) {
      const Token& nameTok = peek();
      Name n = name();
      expect(Tok::Colon, "':'");
      PropPtr t = prop();
      if (!ctx.insert(n, t))
        throw ParseError("duplicate name '" + n + "' in " + which + " context", nameTok.span);
      if (peek().kind != Tok::Comma) break;
      get();
    }
  }
};

int precOf(PropKind k) {
  switch (k) {
    case PropKind::Lolli: return 0;
    case PropKind::Par: return 1;
    case PropKind::Tensor: return 2;
    case PropKind::OfCourse:
    case PropKind::WhyNot: return 3;
    default: return 4;
  }
}

void renderProp(const PropPtr& a, int minPrec, std::string& out) {
  int p = precOf(a->kind);
  if (p < minPrec) {
    out += '(';
    renderProp(a, 0, out);
    out += ')';
    return;
  }
  switch (a->kind) {
    case PropKind::One: out += '1'; break;
    case PropKind::Bottom: out += "bot"; break;
    case PropKind::Tensor:
      renderProp(a->left, 2, out);
      out += " * ";
      renderProp(a->right, 3, out);
      break;
    case PropKind::Par:
      renderProp(a->left, 1, out);
      out += " par ";
      renderProp(a->right, 2, out);
      break;
    case PropKind::Lolli:
      renderProp(a->left, 1, out);
      out += " -o ";
      renderProp(a->right, 0, out);
      break;
    case PropKind::OfCourse:
      out += '!';
      renderProp(a->left, 3, out);
      break;
    case PropKind::WhyNot:
      out += '?';
      renderProp(a->left, 3, out);
      break;
  }
}

// atTermLevel: parenthesize a Parallel (prefix continuations, restriction
// bodies, and right branches of '|').
void renderProc(const ProcPtr& p, bool atTermLevel, std::string& out) {
  assert(p);
  if (p->kind == ProcKind::Parallel && atTermLevel) {
    out += '(';
    renderProc(p, false, out);
    out += ')';
    return;
  }
  switch (p->kind) {
    case ProcKind::Inaction: out += '0'; break;
    case ProcKind::Forwarder:
      out += '[' + p->a + "<->" + p->b + ']';
      break;
    case ProcKind::Restriction:
      out += "new " + p->a;
      if (p->annotation) {
        out += " : ";
        renderProp(p->annotation, 0, out);
      }
      out += " . ";
      renderProc(p->left, true, out);
      break;
    case ProcKind::Parallel:
      renderProc(p->left, false, out);
      out += " | ";
      renderProc(p->right, true, out);
      break;
    case ProcKind::Output:
      out += p->a + '<' + p->b + ">.";
      renderProc(p->left, true, out);
      break;
    case ProcKind::Input:
      out += p->a + '(' + p->b + ").";
      renderProc(p->left, true, out);
      break;
    case ProcKind::ReplicatedInput:
      out += '*' + p->a + '(' + p->b + ").";
      renderProc(p->left, true, out);
      break;
    case ProcKind::Close: out += p->a + "<>"; break;
    case ProcKind::Wait:
      out += p->a + "().";
      renderProc(p->left, true, out);
      break;
  }
}

std::string systemName(SystemId s) {
  switch (s) {
    case SystemId::ULL: return "ull";
    case SystemId::CLL: return "cll";
    case SystemId::ILL: return "ill";
  }
  return "?";
}

void renderEntries(const TypingContext& ctx, std::string& out) {
  bool first = true;
  for (const auto& [n, t] : ctx.entries) {
    if (!first) out += ", ";
    first = false;
    out += n + " : ";
    renderProp(t, 0, out);
  }
}

void renderDeriv(const Derivation& d, int depth, std::string& out) {
  out.append(static_cast<std::size_t>(depth) * 2, ' ');
  out += ruleLabel(d.rule);
  out += ' ';
  out += render(d.conclusion);
  out += '\n';
  for (const auto& prem : d.premises) renderDeriv(*prem, depth + 1, out);
}

}  // namespace

PropPtr parseProposition(const std::string& text) {
  Parser p{lex(text, 0, 1, 1)};
  PropPtr a = p.prop();
  if (p.peek().kind != Tok::End) p.fail("unexpected trailing input");
  return a;
}

ProcPtr parseProcess(const std::string& text) {
  Parser p{lex(text, 0, 1, 1)};
  ProcPtr q = p.proc();
  if (p.peek().kind != Tok::End) p.fail("unexpected trailing input");
  return q;
}

Judgment parseJudgment(const std::string& text) {
  Judgment j;
  std::set<std::string> seenLines;
  std::size_t lineStart = 0;
  int lineNo = 1;
  while (lineStart <= text.size()) {
    std::size_t nl = text.find('\n', lineStart);
    std::size_t lineEnd = nl == std::string::npos ? text.size() : nl;
    std::string lineText = text.substr(lineStart, lineEnd - lineStart);
    Parser p{lex(lineText, lineStart, lineNo, 1)};
    if (p.peek().kind != Tok::End) {
      const Token& head = p.get();
      std::string keyword = head.text;
      if (head.kind != Tok::KwSystem && head.kind != Tok::KwBang && head.kind != Tok::KwLeft &&
          head.kind != Tok::KwRight && head.kind != Tok::KwProcess)
        throw ParseError("expected a line starting with system, bang, left, right, or process",
                         head.span);
      if (!seenLines.insert(keyword).second)
        throw ParseError("duplicate " + keyword + " line", head.span);
      switch (head.kind) {
        case Tok::KwSystem: {
          const Token& nameTok = p.peek();
          std::string s = nameTok.kind == Tok::Ident ? nameTok.text : "";
          if (s == "ull")
            j.system = SystemId::ULL;
          else if (s == "cll")
            j.system = SystemId::CLL;
          else if (s == "ill")
            j.system = SystemId::ILL;
          else
            throw ParseError("expected ull, cll, or ill", nameTok.span);
          p.get();
          break;
        }
        case Tok::KwBang: p.contextEntries(j.unrestricted, "bang"); break;
        case Tok::KwLeft: p.contextEntries(j.left, "left"); break;
        case Tok::KwRight: p.contextEntries(j.right, "right"); break;
        case Tok::KwProcess: j.process = p.proc(); break;
        default: break;
      }
      if (p.peek().kind != Tok::End) p.fail("unexpected trailing input");
    }
    if (nl == std::string::npos) break;
    lineStart = nl + 1;
    ++lineNo;
  }
  SourceSpan whole{0, text.size(), 1, 1};
  if (!seenLines.count("system")) throw ParseError("missing system line", whole);
  if (!seenLines.count("process")) throw ParseError("missing process line", whole);
  std::string shapeErr = judgmentShapeError(j);
  if (!shapeErr.empty()) throw ParseError(shapeErr, whole);
  return j;
}

std::string render(const PropPtr& a) {
  std::string out;
  renderProp(a, 0, out);
  return out;
}

std::string render(const ProcPtr& p) {
  std::string out;
  renderProc(p, false, out);
  return out;
}

std::string render(const TypingContext& ctx) {
  if (ctx.empty()) return ".";
  std::string out;
  renderEntries(ctx, out);
  return out;
}

std::string render(const Judgment& j) {
  return systemName(j.system) + ": " + render(j.unrestricted) + " ; " + render(j.left) + " |- " +
         render(j.process) + " :: " + render(j.right);
}

std::string renderJudgmentFile(const Judgment& j) {
  std::string out = "system " + systemName(j.system) + "\n";
  auto ctxLine = [&](const char* key, const TypingContext& ctx) {
    if (ctx.empty()) return;
    out += key;
    out += ' ';
    renderEntries(ctx, out);
    out += '\n';
  };
  ctxLine("bang", j.unrestricted);
  ctxLine("left", j.left);
  ctxLine("right", j.right);
  out += "process " + render(j.process) + "\n";
  return out;
}

std::string render(const Derivation& d) {
  std::string out;
  renderDeriv(d, 0, out);
  return out;
}

}  // namespace ullpi
