// Copyright 2026 The CER Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//

#include "cer/ceql.h"

#include <algorithm>
#include <cassert>
#include <cctype>
#include <charconv>
#include <cstdlib>
#include <functional>

#include "cer/errors.h"

namespace cer {

// ---------------------------------------------------------------------------
// CelFormula

struct CelFormula::Node {
  Kind kind = Kind::kEventType;
  std::string name;
  Predicate pred;
  std::set<std::string> vars;
  std::vector<CelFormula> children;
};

CelFormula CelFormula::EventType(std::string type) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::kEventType;
  n->name = std::move(type);
  return CelFormula(std::move(n));
}

CelFormula CelFormula::As(CelFormula child, std::string var) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::kAs;
  n->name = std::move(var);
  n->children.push_back(std::move(child));
  return CelFormula(std::move(n));
}

CelFormula CelFormula::Filter(CelFormula child, std::string var, Predicate p) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::kFilter;
  n->name = std::move(var);
  n->pred = std::move(p);
  n->children.push_back(std::move(child));
  return CelFormula(std::move(n));
}

CelFormula CelFormula::Or(CelFormula lhs, CelFormula rhs) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::kOr;
  n->children = {std::move(lhs), std::move(rhs)};
  return CelFormula(std::move(n));
}

CelFormula CelFormula::Seq(CelFormula lhs, CelFormula rhs) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::kSeq;
  n->children = {std::move(lhs), std::move(rhs)};
  return CelFormula(std::move(n));
}

CelFormula CelFormula::Plus(CelFormula child) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::kPlus;
  n->children.push_back(std::move(child));
  return CelFormula(std::move(n));
}

CelFormula CelFormula::Proj(std::set<std::string> vars, CelFormula child) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::kProj;
  n->vars = std::move(vars);
  n->children.push_back(std::move(child));
  return CelFormula(std::move(n));
}

CelFormula::Kind CelFormula::kind() const { return node_->kind; }
const std::string& CelFormula::name() const { return node_->name; }
const Predicate& CelFormula::predicate() const { return node_->pred; }
const std::set<std::string>& CelFormula::proj_vars() const {
  return node_->vars;
}
const CelFormula& CelFormula::child(std::size_t i) const {
  return node_->children.at(i);
}
std::size_t CelFormula::num_children() const { return node_->children.size(); }

std::size_t CelFormula::Size() const {
  std::size_t n = 1;
  for (const auto& c : node_->children) n += c.Size();
  return n;
}

std::size_t CelFormula::Depth() const {
  std::size_t d = 0;
  for (const auto& c : node_->children) d = std::max(d, c.Depth());
  return d + 1;
}

std::set<std::string> CelFormula::Variables() const {
  std::set<std::string> out;
  std::function<void(const CelFormula&)> walk = [&](const CelFormula& f) {
    if (f.kind() == Kind::kEventType || f.kind() == Kind::kAs) {
      out.insert(f.name());
    }
    for (std::size_t i = 0; i < f.num_children(); ++i) walk(f.child(i));
  };
  walk(*this);
  return out;
}

std::set<std::string> CelFormula::EventTypes() const {
  std::set<std::string> out;
  std::function<void(const CelFormula&)> walk = [&](const CelFormula& f) {
    if (f.kind() == Kind::kEventType) out.insert(f.name());
    for (std::size_t i = 0; i < f.num_children(); ++i) walk(f.child(i));
  };
  walk(*this);
  return out;
}

bool operator==(const CelFormula& a, const CelFormula& b) {
  if (a.node_ == b.node_) return true;
  if (a.kind() != b.kind() || a.name() != b.name() ||
      a.num_children() != b.num_children()) {
    return false;
  }
  if (a.kind() == CelFormula::Kind::kFilter && !(a.predicate() == b.predicate()))
    return false;
  if (a.kind() == CelFormula::Kind::kProj && a.proj_vars() != b.proj_vars())
    return false;
  for (std::size_t i = 0; i < a.num_children(); ++i) {
    if (!(a.child(i) == b.child(i))) return false;
  }
  return true;
}

namespace {

// Binding strength used by the printer; higher binds tighter.
int Level(const CelFormula& f) {
  switch (f.kind()) {
    case CelFormula::Kind::kFilter: return 0;
    case CelFormula::Kind::kOr: return 1;
    case CelFormula::Kind::kSeq: return 2;
    case CelFormula::Kind::kAs: return 3;
    case CelFormula::Kind::kPlus: return 4;
    case CelFormula::Kind::kEventType:
    case CelFormula::Kind::kProj: return 5;
  }
  return 5;
}

std::string Print(const CelFormula& f, int min_level) {
  std::string s;
  switch (f.kind()) {
    case CelFormula::Kind::kEventType: s = f.name(); break;
    case CelFormula::Kind::kPlus: s = Print(f.child(), 4) + "+"; break;
    case CelFormula::Kind::kAs: s = Print(f.child(), 3) + " as " + f.name(); break;
    case CelFormula::Kind::kSeq:
      s = Print(f.child(0), 2) + " ; " + Print(f.child(1), 3);
      break;
    case CelFormula::Kind::kOr:
      s = Print(f.child(0), 1) + " OR " + Print(f.child(1), 2);
      break;
    case CelFormula::Kind::kFilter:
      s = Print(f.child(), 0) + " FILTER " + f.name() + "[" +
          f.predicate().ToString() + "]";
      break;
    case CelFormula::Kind::kProj: {
      s = "PROJ{";
      bool first = true;
      for (const auto& v : f.proj_vars()) {
        if (!first) s += ",";
        first = false;
        s += v;
      }
      s += "}(" + Print(f.child(), 0) + ")";
      break;
    }
  }
  return Level(f) < min_level ? "(" + s + ")" : s;
}

}  // namespace

std::string CelFormula::ToString() const { return Print(*this, 0); }

std::string_view StrategyName(Strategy s) {
  switch (s) {
    case Strategy::kDefault: return "";
    case Strategy::kMax: return "MAX";
    case Strategy::kLast: return "LAST";
    case Strategy::kNext: return "NEXT";
    case Strategy::kAny: return "ANY";
  }
  return "";
}

// ---------------------------------------------------------------------------
// Lexer

namespace {

enum class Tok {
  kIdent, kInt, kDouble, kString, kLParen, kRParen, kLBracket, kRBracket,
  kComma, kSemi, kPlus, kStar, kMinus, kOp, kColon, kEnd
};

struct Token {
  Tok kind;
  std::string text;  // identifier text, unescaped string, or operator
  int line;
  int col;
};

std::string Upper(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return out;
}

std::vector<Token> Lex(std::string_view src) {
  std::vector<Token> out;
  int line = 1, col = 1;
  std::size_t i = 0;
  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n; ++k, ++i) {
      if (src[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
  };
  while (i < src.size()) {
    char c = src[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance(1);
      continue;
    }
    if (c == '-' && i + 1 < src.size() && src[i + 1] == '-') {
      while (i < src.size() && src[i] != '\n') advance(1);
      continue;
    }
    int tl = line, tc = col;
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t j = i;
      while (j < src.size() &&
             (std::isalnum(static_cast<unsigned char>(src[j])) || src[j] == '_'))
        ++j;
      out.push_back({Tok::kIdent, std::string(src.substr(i, j - i)), tl, tc});
      advance(j - i);
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) ||
        (c == '.' && i + 1 < src.size() &&
         std::isdigit(static_cast<unsigned char>(src[i + 1])))) {
      std::size_t j = i;
      bool is_double = false;
      while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) ++j;
      if (j < src.size() && src[j] == '.') {
        is_double = true;
        ++j;
        while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) ++j;
      }
      if (j < src.size() && (src[j] == 'e' || src[j] == 'E')) {
        std::size_t k = j + 1;
        if (k < src.size() && (src[k] == '+' || src[k] == '-')) ++k;
        if (k < src.size() && std::isdigit(static_cast<unsigned char>(src[k]))) {
          is_double = true;
          j = k;
          while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) ++j;
        }
      }
      out.push_back({is_double ? Tok::kDouble : Tok::kInt,
                     std::string(src.substr(i, j - i)), tl, tc});
      advance(j - i);
      continue;
    }
    if (c == '"' || c == '\'') {
      std::string s;
      std::size_t j = i + 1;
      bool closed = false;
      while (j < src.size()) {
        if (src[j] == '\\' && j + 1 < src.size()) {
          s += src[j + 1];
          j += 2;
          continue;
        }
        if (src[j] == c) {
          closed = true;
          break;
        }
        s += src[j++];
      }
      if (!closed) throw SyntaxError("unterminated string literal", tl, tc);
      out.push_back({Tok::kString, s, tl, tc});
      advance(j + 1 - i);
      continue;
    }
    auto two = src.substr(i, 2);
    if (two == "!=" || two == "<>" || two == "<=" || two == ">=" || two == "==") {
      std::string op(two);
      if (op == "<>") op = "!=";
      if (op == "==") op = "=";
      out.push_back({Tok::kOp, op, tl, tc});
      advance(2);
      continue;
    }
    Tok k;
    switch (c) {
      case '(': k = Tok::kLParen; break;
      case ')': k = Tok::kRParen; break;
      case '[': k = Tok::kLBracket; break;
      case ']': k = Tok::kRBracket; break;
      case ',': k = Tok::kComma; break;
      case ';': k = Tok::kSemi; break;
      case '+': k = Tok::kPlus; break;
      case '*': k = Tok::kStar; break;
      case '-': k = Tok::kMinus; break;
      case ':': k = Tok::kColon; break;
      case '=': case '<': case '>': k = Tok::kOp; break;
      default:
        throw SyntaxError(std::string("unexpected character '") + c + "'", tl, tc);
    }
    out.push_back({k, std::string(1, c), tl, tc});
    advance(1);
  }
  out.push_back({Tok::kEnd, "", line, col});
  return out;
}

const std::set<std::string>& Keywords() {
  static const std::set<std::string> kw = {
      "SELECT", "FROM", "WHERE", "FILTER", "PARTITION", "BY", "WITHIN",
      "CONSUME", "AS", "OR", "AND", "NOT"};
  return kw;
}

// FILTER clause before desugaring.
struct FilterExpr {
  enum class Kind { kAtom, kAnd, kOr } kind = Kind::kAtom;
  std::string var;
  Predicate pred;
  std::vector<FilterExpr> children;
};

class Parser {
 public:
  explicit Parser(std::string_view text) : toks_(Lex(text)) {}

  QueryAst Query();
  CelFormula CelOnly() {
    CelFormula f = CelTop();
    ExpectEnd();
    return f;
  }

 private:
  const Token& Peek(std::size_t ahead = 0) const {
    return toks_[std::min(pos_ + ahead, toks_.size() - 1)];
  }
  const Token& Next() { return toks_[std::min(pos_++, toks_.size() - 1)]; }
  bool IsKeyword(const Token& t, std::string_view kw) const {
    return t.kind == Tok::kIdent && Upper(t.text) == kw;
  }
  bool AcceptKeyword(std::string_view kw) {
    if (IsKeyword(Peek(), kw)) {
      ++pos_;
      return true;
    }
    return false;
  }
  [[noreturn]] void Fail(const std::string& msg, const Token& t) const {
    std::string where = t.kind == Tok::kEnd ? "end of input" : "'" + t.text + "'";
    throw SyntaxError(msg + " near " + where, t.line, t.col);
  }
  void ExpectKeyword(std::string_view kw) {
    if (!AcceptKeyword(kw)) Fail("expected " + std::string(kw), Peek());
  }
  const Token& Expect(Tok k, const char* what) {
    if (Peek().kind != k) Fail(std::string("expected ") + what, Peek());
    return Next();
  }
  std::string Identifier(const char* what) {
    const Token& t = Peek();
    if (t.kind != Tok::kIdent || Keywords().count(Upper(t.text))) {
      Fail(std::string("expected ") + what, t);
    }
    return Next().text;
  }
  void ExpectEnd() {
    if (Peek().kind != Tok::kEnd) Fail("unexpected trailing input", Peek());
  }

  CelFormula CelTop();
  CelFormula CelOr();
  CelFormula CelSeq();
  CelFormula CelAs();
  CelFormula CelPlus();
  CelFormula CelAtom();

  FilterExpr FilterOr();
  FilterExpr FilterAnd();
  FilterExpr FilterAtom();

  Predicate PredOr();
  Predicate PredAnd();
  Predicate PredNot();
  Predicate PredCmp();
  Value Literal();

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
};

CelFormula ApplyFilter(const CelFormula& f, const FilterExpr& e);

// A chain of conjuncts filters one after another. Adjacent conjuncts on the
// same variable collapse into one Filter with a conjoined predicate, which is
// equivalent because a set satisfies P and P' iff it satisfies P AND P'.
CelFormula ApplyConjunction(const CelFormula& f,
                            const std::vector<FilterExpr>& conjuncts) {
  CelFormula cur = f;
  const FilterExpr* prev_atom = nullptr;
  for (const auto& c : conjuncts) {
    if (c.kind == FilterExpr::Kind::kAtom && prev_atom != nullptr &&
        prev_atom->var == c.var) {
      cur = CelFormula::Filter(cur.child(), c.var,
                               Predicate::And(cur.predicate(), c.pred));
    } else {
      cur = ApplyFilter(cur, c);
    }
    prev_atom = c.kind == FilterExpr::Kind::kAtom ? &c : nullptr;
  }
  return cur;
}

CelFormula ApplyFilter(const CelFormula& f, const FilterExpr& e) {
  switch (e.kind) {
    case FilterExpr::Kind::kAtom:
      return CelFormula::Filter(f, e.var, e.pred);
    case FilterExpr::Kind::kAnd:
      return ApplyConjunction(f, e.children);
    case FilterExpr::Kind::kOr: {
      CelFormula out = ApplyFilter(f, e.children[0]);
      for (std::size_t i = 1; i < e.children.size(); ++i) {
        out = CelFormula::Or(out, ApplyFilter(f, e.children[i]));
      }
      return out;
    }
  }
  return f;
}

CelFormula Parser::CelTop() {
  CelFormula f = CelOr();
  while (AcceptKeyword("FILTER")) f = ApplyFilter(f, FilterOr());
  return f;
}

CelFormula Parser::CelOr() {
  CelFormula f = CelSeq();
  while (AcceptKeyword("OR")) f = CelFormula::Or(f, CelSeq());
  return f;
}

CelFormula Parser::CelSeq() {
  CelFormula f = CelAs();
  while (Peek().kind == Tok::kSemi) {
    Next();
    f = CelFormula::Seq(f, CelAs());
  }
  return f;
}

CelFormula Parser::CelAs() {
  CelFormula f = CelPlus();
  while (AcceptKeyword("AS")) f = CelFormula::As(f, Identifier("variable name"));
  return f;
}

CelFormula Parser::CelPlus() {
  CelFormula f = CelAtom();
  while (Peek().kind == Tok::kPlus) {
    Next();
    f = CelFormula::Plus(f);
  }
  return f;
}

CelFormula Parser::CelAtom() {
  if (Peek().kind == Tok::kLParen) {
    Next();
    CelFormula f = CelTop();
    Expect(Tok::kRParen, "')'");
    return f;
  }
  return CelFormula::EventType(Identifier("event type or '('"));
}

FilterExpr Parser::FilterOr() {
  FilterExpr first = FilterAnd();
  if (!IsKeyword(Peek(), "OR")) return first;
  FilterExpr e;
  e.kind = FilterExpr::Kind::kOr;
  e.children.push_back(std::move(first));
  while (AcceptKeyword("OR")) e.children.push_back(FilterAnd());
  return e;
}

FilterExpr Parser::FilterAnd() {
  FilterExpr first = FilterAtom();
  if (!IsKeyword(Peek(), "AND")) return first;
  FilterExpr e;
  e.kind = FilterExpr::Kind::kAnd;
  e.children.push_back(std::move(first));
  while (AcceptKeyword("AND")) e.children.push_back(FilterAtom());
  return e;
}

FilterExpr Parser::FilterAtom() {
  if (Peek().kind == Tok::kLParen) {
    Next();
    FilterExpr e = FilterOr();
    Expect(Tok::kRParen, "')'");
    return e;
  }
  FilterExpr e;
  e.var = Identifier("filter variable");
  Expect(Tok::kLBracket, "'['");
  e.pred = PredOr();
  Expect(Tok::kRBracket, "']'");
  return e;
}

Predicate Parser::PredOr() {
  std::vector<Predicate> ps{PredAnd()};
  while (AcceptKeyword("OR")) ps.push_back(PredAnd());
  return ps.size() == 1 ? ps[0] : Predicate::Or(std::move(ps));
}

Predicate Parser::PredAnd() {
  std::vector<Predicate> ps{PredNot()};
  while (AcceptKeyword("AND")) ps.push_back(PredNot());
  return ps.size() == 1 ? ps[0] : Predicate::And(std::move(ps));
}

Predicate Parser::PredNot() {
  if (AcceptKeyword("NOT")) return Predicate::Not(PredNot());
  if (Peek().kind == Tok::kLParen) {
    Next();
    Predicate p = PredOr();
    Expect(Tok::kRParen, "')'");
    return p;
  }
  if (IsKeyword(Peek(), "TRUE") && Peek(1).kind != Tok::kOp) {
    Next();
    return Predicate::True();
  }
  return PredCmp();
}

CmpOp ToOp(const std::string& s) {
  if (s == "=") return CmpOp::kEq;
  if (s == "!=") return CmpOp::kNe;
  if (s == "<") return CmpOp::kLt;
  if (s == "<=") return CmpOp::kLe;
  if (s == ">") return CmpOp::kGt;
  return CmpOp::kGe;
}

CmpOp Flip(CmpOp op) {
  switch (op) {
    case CmpOp::kLt: return CmpOp::kGt;
    case CmpOp::kLe: return CmpOp::kGe;
    case CmpOp::kGt: return CmpOp::kLt;
    case CmpOp::kGe: return CmpOp::kLe;
    default: return op;
  }
}

Predicate Parser::PredCmp() {
  std::string attr;
  CmpOp op;
  Value constant;
  const Token& start = Peek();
  bool attr_first = start.kind == Tok::kIdent &&
                    Upper(start.text) != "TRUE" && Upper(start.text) != "FALSE";
  if (attr_first) {
    attr = Next().text;
    op = ToOp(Expect(Tok::kOp, "comparison operator").text);
    constant = Literal();
  } else {
    constant = Literal();
    op = Flip(ToOp(Expect(Tok::kOp, "comparison operator").text));
    attr = Identifier("attribute name");
  }
  if (attr == "type") {
    if (constant.kind() != ValueKind::kString ||
        (op != CmpOp::kEq && op != CmpOp::kNe)) {
      throw SyntaxError("type test must be `type = \"Name\"` or `type != \"Name\"`",
                        start.line, start.col);
    }
    Predicate p = Predicate::TypeIs(constant.as_string());
    return op == CmpOp::kEq ? p : Predicate::Not(p);
  }
  return Predicate::Cmp(attr, op, constant);
}

Value Parser::Literal() {
  bool neg = false;
  if (Peek().kind == Tok::kMinus) {
    Next();
    neg = true;
  }
  const Token& t = Peek();
  switch (t.kind) {
    case Tok::kInt: {
      Next();
      int64_t v = 0;
      auto [p, ec] = std::from_chars(t.text.data(), t.text.data() + t.text.size(), v);
      if (ec != std::errc() || p != t.text.data() + t.text.size()) {
        throw SyntaxError("integer literal out of range", t.line, t.col);
      }
      return Value(neg ? -v : v);
    }
    case Tok::kDouble: {
      Next();
      double v = std::strtod(t.text.c_str(), nullptr);
      return Value(neg ? -v : v);
    }
    case Tok::kString:
      if (neg) Fail("'-' before string literal", t);
      Next();
      return Value(t.text);
    case Tok::kIdent:
      if (!neg && Upper(t.text) == "TRUE") {
        Next();
        return Value(true);
      }
      if (!neg && Upper(t.text) == "FALSE") {
        Next();
        return Value(false);
      }
      [[fallthrough]];
    default:
      Fail("expected literal", t);
  }
}

int ClauseRank(const std::string& kw) {
  if (kw == "PARTITION") return 1;
  if (kw == "WITHIN") return 2;
  if (kw == "CONSUME") return 3;
  return 0;
}

std::optional<TimeUnit> UnitFromWord(const std::string& w) {
  std::string u = Upper(w);
  if (u == "EVENT" || u == "EVENTS") return TimeUnit::kEvents;
  if (u == "SECOND" || u == "SECONDS" || u == "SEC" || u == "SECS" || u == "S")
    return TimeUnit::kSeconds;
  if (u == "MINUTE" || u == "MINUTES" || u == "MIN" || u == "MINS")
    return TimeUnit::kMinutes;
  if (u == "HOUR" || u == "HOURS" || u == "H") return TimeUnit::kHours;
  return std::nullopt;
}

QueryAst Parser::Query() {
  QueryAst q;
  ExpectKeyword("SELECT");
  const Token& s = Peek();
  if (s.kind == Tok::kIdent && Peek(1).kind != Tok::kComma &&
      !IsKeyword(Peek(1), "FROM")) {
    std::string u = Upper(s.text);
    if (u == "MAX") q.strategy = Strategy::kMax;
    if (u == "LAST") q.strategy = Strategy::kLast;
    if (u == "NEXT") q.strategy = Strategy::kNext;
    if (u == "ANY") q.strategy = Strategy::kAny;
    if (q.strategy != Strategy::kDefault) Next();
  }
  if (Peek().kind == Tok::kStar) {
    Next();
    q.select_all = true;
  } else {
    q.select_all = false;
    q.select.push_back(Identifier("variable or '*'"));
    while (Peek().kind == Tok::kComma) {
      Next();
      q.select.push_back(Identifier("variable"));
    }
  }
  ExpectKeyword("FROM");
  q.from.push_back(Identifier("stream name"));
  while (Peek().kind == Tok::kComma) {
    Next();
    q.from.push_back(Identifier("stream name"));
  }
  ExpectKeyword("WHERE");
  q.where = CelTop();

  int last_rank = 0;
  std::set<std::string> seen;
  while (Peek().kind != Tok::kEnd) {
    const Token& t = Peek();
    std::string kw = t.kind == Tok::kIdent ? Upper(t.text) : "";
    if (kw == "SELECT" || kw == "FROM" || kw == "WHERE") {
      throw ValidationError("duplicate " + kw + " clause at " +
                            std::to_string(t.line) + ":" + std::to_string(t.col));
    }
    int rank = ClauseRank(kw);
    if (rank == 0) Fail("unexpected token", t);
    if (seen.count(kw)) {
      throw ValidationError("duplicate " + kw + " clause at " +
                            std::to_string(t.line) + ":" + std::to_string(t.col));
    }
    if (rank < last_rank) Fail(kw + " clause out of order", t);
    seen.insert(kw);
    last_rank = rank;
    Next();
    if (kw == "PARTITION") {
      ExpectKeyword("BY");
      do {
        if (Peek().kind == Tok::kLBracket) {
          Next();
          q.partition_by.push_back(Identifier("attribute name"));
          Expect(Tok::kRBracket, "']'");
        } else {
          q.partition_by.push_back(Identifier("attribute name"));
        }
      } while (Peek().kind == Tok::kComma && (Next(), true));
    } else if (kw == "WITHIN") {
      const Token& n = Expect(Tok::kInt, "integer window size");
      WithinClause w;
      auto [p, ec] = std::from_chars(n.text.data(), n.text.data() + n.text.size(),
                                     w.magnitude);
      if (ec != std::errc()) throw SyntaxError("window size out of range", n.line, n.col);
      if (Peek().kind == Tok::kLBracket) {
        Next();
        w.unit = TimeUnit::kAttribute;
        w.attribute = Identifier("time attribute");
        Expect(Tok::kRBracket, "']'");
      } else if (Peek().kind == Tok::kIdent && UnitFromWord(Peek().text)) {
        w.unit = *UnitFromWord(Next().text);
      }
      q.within = w;
    } else {
      ExpectKeyword("BY");
      if (AcceptKeyword("NONE")) {
        q.consume = ConsumePolicy::kNone;
      } else if (AcceptKeyword("ANY")) {
        q.consume = ConsumePolicy::kAny;
      } else {
        Fail("expected NONE or ANY", Peek());
      }
    }
  }
  return q;
}

// Types each variable can be bound to.
void BindTypes(const CelFormula& f,
               std::map<std::string, std::set<std::string>>& out) {
  if (f.kind() == CelFormula::Kind::kEventType) {
    out[f.name()].insert(f.name());
    return;
  }
  if (f.kind() == CelFormula::Kind::kAs) {
    auto types = f.child().EventTypes();
    out[f.name()].insert(types.begin(), types.end());
  }
  for (std::size_t i = 0; i < f.num_children(); ++i) BindTypes(f.child(i), out);
}

bool KindsCompatible(ValueKind declared, CmpOp op, const Value& lit) {
  bool num_decl = declared == ValueKind::kInt || declared == ValueKind::kDouble;
  if (num_decl) return lit.is_numeric();
  if (declared != lit.kind()) return false;
  return op == CmpOp::kEq || op == CmpOp::kNe;
}

void CheckPredicate(const Predicate& p, const std::string& var,
                    const std::set<std::string>& types, const Schema& schema) {
  switch (p.kind()) {
    case Predicate::Kind::kTrue: return;
    case Predicate::Kind::kType:
      if (!schema.HasType(p.name())) {
        throw ValidationError("unknown event type " + p.name() + " in filter on " + var);
      }
      return;
    case Predicate::Kind::kCompare: {
      bool found = false;
      for (const auto& t : types) {
        auto k = schema.AttrKind(t, p.name());
        if (!k) continue;
        found = true;
        if (!KindsCompatible(*k, p.op(), p.constant())) {
          throw ValidationError(
              "filter " + var + "[" + p.ToString() + "]: attribute " + p.name() +
              " of " + t + " is " + std::string(ValueKindName(*k)));
        }
      }
      if (!found) {
        throw ValidationError("attribute " + p.name() + " is not declared for " +
                              var);
      }
      return;
    }
    default:
      for (const auto& c : p.operands()) CheckPredicate(c, var, types, schema);
  }
}

void CheckFilters(const CelFormula& f, const std::set<std::string>& vars,
                  const std::map<std::string, std::set<std::string>>& binds,
                  const Schema* schema) {
  if (f.kind() == CelFormula::Kind::kFilter) {
    if (!vars.count(f.name())) {
      throw ValidationError("unknown variable " + f.name() + " in FILTER");
    }
    if (schema != nullptr) {
      CheckPredicate(f.predicate(), f.name(), binds.at(f.name()), *schema);
    }
  }
  for (std::size_t i = 0; i < f.num_children(); ++i) {
    CheckFilters(f.child(i), vars, binds, schema);
  }
}

void Validate(const QueryAst& q, const Schema* schema) {
  if (schema != nullptr && schema->empty()) schema = nullptr;
  auto vars = q.where.Variables();
  for (const auto& v : q.select) {
    if (!vars.count(v)) throw ValidationError("unknown variable " + v + " in SELECT");
  }
  std::map<std::string, std::set<std::string>> binds;
  BindTypes(q.where, binds);
  CheckFilters(q.where, vars, binds, schema);
  if (schema == nullptr) return;
  for (const auto& t : q.where.EventTypes()) {
    if (!schema->HasType(t)) throw ValidationError("unknown event type " + t);
  }
  auto declared_anywhere = [&](const std::string& attr) -> std::optional<ValueKind> {
    for (const auto& [t, attrs] : schema->types()) {
      if (auto k = schema->AttrKind(t, attr)) return k;
    }
    return std::nullopt;
  };
  for (const auto& a : q.partition_by) {
    if (!declared_anywhere(a)) {
      throw ValidationError("PARTITION BY attribute " + a + " is not declared");
    }
  }
  if (q.within && q.within->unit == TimeUnit::kAttribute) {
    auto k = declared_anywhere(q.within->attribute);
    if (!k) {
      throw ValidationError("time attribute " + q.within->attribute +
                            " is not declared");
    }
    if (*k != ValueKind::kInt) {
      throw ValidationError("time attribute " + q.within->attribute +
                            " must be int");
    }
  }
}

}  // namespace

QueryAst ParseQuery(std::string_view text, const Schema* schema) {
  Parser p(text);
  QueryAst q = p.Query();
  Validate(q, schema);
  return q;
}

CelFormula ParseCel(std::string_view text) {
  Parser p(text);
  return p.CelOnly();
}

CelFormula Desugar(const QueryAst& q) {
  std::set<std::string> vars;
  if (q.select_all) {
    vars = q.where.Variables();
  } else {
    vars.insert(q.select.begin(), q.select.end());
  }
  return CelFormula::Proj(std::move(vars), q.where);
}

std::string ToString(const QueryAst& q) {
  std::string s = "SELECT ";
  if (q.strategy != Strategy::kDefault) {
    s += std::string(StrategyName(q.strategy)) + " ";
  }
  if (q.select_all) {
    s += "*";
  } else {
    for (std::size_t i = 0; i < q.select.size(); ++i) {
      s += (i ? ", " : "") + q.select[i];
    }
  }
  s += " FROM ";
  for (std::size_t i = 0; i < q.from.size(); ++i) s += (i ? ", " : "") + q.from[i];
  s += " WHERE " + q.where.ToString();
  if (!q.partition_by.empty()) {
    s += " PARTITION BY ";
    for (std::size_t i = 0; i < q.partition_by.size(); ++i) {
      s += (i ? ", [" : "[") + q.partition_by[i] + "]";
    }
  }
  if (q.within) {
    s += " WITHIN " + std::to_string(q.within->magnitude);
    switch (q.within->unit) {
      case TimeUnit::kEvents: s += " events"; break;
      case TimeUnit::kSeconds: s += " seconds"; break;
      case TimeUnit::kMinutes: s += " minutes"; break;
      case TimeUnit::kHours: s += " hours"; break;
      case TimeUnit::kAttribute: s += " [" + q.within->attribute + "]"; break;
    }
  }
  if (q.consume) {
    s += q.consume == ConsumePolicy::kAny ? " CONSUME BY ANY" : " CONSUME BY NONE";
  }
  return s;
}

// ---------------------------------------------------------------------------
// Schema

void Schema::Declare(std::string type, Attributes attrs) {
  types_[std::move(type)] = std::move(attrs);
}

bool Schema::HasType(const std::string& type) const {
  return types_.count(type) > 0;
}

const Schema::Attributes* Schema::Find(const std::string& type) const {
  auto it = types_.find(type);
  return it == types_.end() ? nullptr : &it->second;
}

std::optional<ValueKind> Schema::AttrKind(const std::string& type,
                                          const std::string& attr) const {
  const Attributes* a = Find(type);
  if (a == nullptr) return std::nullopt;
  for (const auto& [name, kind] : *a) {
    if (name == attr) return kind;
  }
  return std::nullopt;
}

Schema Schema::Parse(std::string_view text) {
  Schema schema;
  auto toks = Lex(text);
  std::size_t i = 0;
  auto fail = [&](const std::string& msg) -> void {
    const Token& t = toks[i];
    throw SyntaxError("schema: " + msg, t.line, t.col);
  };
  auto expect = [&](Tok k, const char* what) -> const Token& {
    if (toks[i].kind != k) fail(std::string("expected ") + what);
    return toks[i++];
  };
  while (toks[i].kind != Tok::kEnd) {
    if (toks[i].kind != Tok::kIdent || Upper(toks[i].text) != "DECLARE") {
      fail("expected DECLARE");
    }
    ++i;
    if (toks[i].kind != Tok::kIdent || Upper(toks[i].text) != "EVENT") {
      fail("expected EVENT");
    }
    ++i;
    std::string type = expect(Tok::kIdent, "event type name").text;
    if (schema.HasType(type)) fail("event type " + type + " declared twice");
    expect(Tok::kLParen, "'('");
    Attributes attrs;
    if (toks[i].kind != Tok::kRParen) {
      while (true) {
        std::string name = expect(Tok::kIdent, "attribute name").text;
        if (name == "type" || name == "time") {
          fail("attribute name " + name + " is reserved");
        }
        expect(Tok::kColon, "':'");
        std::string k = Upper(expect(Tok::kIdent, "attribute type").text);
        ValueKind kind;
        if (k == "INT") {
          kind = ValueKind::kInt;
        } else if (k == "DOUBLE") {
          kind = ValueKind::kDouble;
        } else if (k == "STRING") {
          kind = ValueKind::kString;
        } else if (k == "BOOL") {
          kind = ValueKind::kBool;
        } else {
          --i;
          fail("attribute type must be int, double, string or bool");
        }
        for (const auto& a : attrs) {
          if (a.first == name) fail("attribute " + name + " declared twice");
        }
        attrs.emplace_back(name, kind);
        if (toks[i].kind == Tok::kComma) {
          ++i;
          continue;
        }
        break;
      }
    }
    expect(Tok::kRParen, "')'");
    if (toks[i].kind == Tok::kSemi) ++i;
    schema.Declare(type, std::move(attrs));
  }
  return schema;
}

}  // namespace cer
