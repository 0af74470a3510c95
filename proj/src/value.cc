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

#include "cer/value.h"

#include <charconv>
#include <cmath>
#include <cstring>
#include <functional>

namespace cer {
namespace {

std::string FormatDouble(double d) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), d);
  std::string s(buf, res.ptr);
  if (s.find_first_of(".eEn") == std::string::npos) s += ".0";
  return s;
}

// Three-way comparison of an integer against a finite or infinite double,
// without rounding the integer.
int CompareIntDouble(int64_t a, double b) {
  constexpr double kTwo63 = 9223372036854775808.0;
  if (b >= kTwo63) return -1;
  if (b < -kTwo63) return 1;
  double fl = std::floor(b);
  auto fi = static_cast<int64_t>(fl);
  if (a < fi) return -1;
  if (a > fi) return 1;
  return b > fl ? -1 : 0;
}

Outcome FromOrder(int c, CmpOp op) {
  bool r = false;
  switch (op) {
    case CmpOp::kEq: r = c == 0; break;
    case CmpOp::kNe: r = c != 0; break;
    case CmpOp::kLt: r = c < 0; break;
    case CmpOp::kLe: r = c <= 0; break;
    case CmpOp::kGt: r = c > 0; break;
    case CmpOp::kGe: r = c >= 0; break;
  }
  return r ? Outcome::kTrue : Outcome::kFalse;
}

}  // namespace

std::string Value::ToLiteral() const {
  switch (kind()) {
    case ValueKind::kNull: return "null";
    case ValueKind::kInt: return std::to_string(as_int());
    case ValueKind::kDouble: return FormatDouble(as_double());
    case ValueKind::kBool: return as_bool() ? "true" : "false";
    case ValueKind::kString: {
      std::string out = "\"";
      for (char c : as_string()) {
        if (c == '"' || c == '\\') out += '\\';
        out += c;
      }
      return out + "\"";
    }
  }
  return "";
}

std::string Value::Encode() const {
  std::string out(1, static_cast<char>('0' + v_.index()));
  switch (kind()) {
    case ValueKind::kNull: break;
    case ValueKind::kInt: out += std::to_string(as_int()); break;
    case ValueKind::kDouble: {
      double d = as_double();
      char raw[sizeof d];
      std::memcpy(raw, &d, sizeof d);
      out.append(raw, sizeof d);
      break;
    }
    case ValueKind::kString: out += as_string(); break;
    case ValueKind::kBool: out += as_bool() ? '1' : '0'; break;
  }
  return out;
}

std::size_t Value::Hash() const { return std::hash<std::string>()(Encode()); }

std::string_view ValueKindName(ValueKind k) {
  switch (k) {
    case ValueKind::kNull: return "null";
    case ValueKind::kInt: return "int";
    case ValueKind::kDouble: return "double";
    case ValueKind::kString: return "string";
    case ValueKind::kBool: return "bool";
  }
  return "?";
}

std::string_view CmpOpSymbol(CmpOp op) {
  switch (op) {
    case CmpOp::kEq: return "=";
    case CmpOp::kNe: return "!=";
    case CmpOp::kLt: return "<";
    case CmpOp::kLe: return "<=";
    case CmpOp::kGt: return ">";
    case CmpOp::kGe: return ">=";
  }
  return "?";
}

Outcome Compare(const Value& lhs, CmpOp op, const Value& rhs) {
  if (lhs.is_null() || rhs.is_null()) return Outcome::kNull;
  ValueKind a = lhs.kind();
  ValueKind b = rhs.kind();
  if (lhs.is_numeric() && rhs.is_numeric()) {
    if (a == ValueKind::kInt && b == ValueKind::kInt) {
      int64_t x = lhs.as_int(), y = rhs.as_int();
      return FromOrder(x < y ? -1 : (x > y ? 1 : 0), op);
    }
    if (a == ValueKind::kDouble && b == ValueKind::kDouble) {
      double x = lhs.as_double(), y = rhs.as_double();
      if (std::isnan(x) || std::isnan(y)) {
        return op == CmpOp::kNe ? Outcome::kTrue : Outcome::kFalse;
      }
      return FromOrder(x < y ? -1 : (x > y ? 1 : 0), op);
    }
    if (a == ValueKind::kInt) {
      if (std::isnan(rhs.as_double())) {
        return op == CmpOp::kNe ? Outcome::kTrue : Outcome::kFalse;
      }
      return FromOrder(CompareIntDouble(lhs.as_int(), rhs.as_double()), op);
    }
    if (std::isnan(lhs.as_double())) {
      return op == CmpOp::kNe ? Outcome::kTrue : Outcome::kFalse;
    }
    return FromOrder(-CompareIntDouble(rhs.as_int(), lhs.as_double()), op);
  }
  if (a != b) return Outcome::kTypeMismatch;
  if (op != CmpOp::kEq && op != CmpOp::kNe) return Outcome::kTypeMismatch;
  bool eq = lhs == rhs;
  return (op == CmpOp::kEq) == eq ? Outcome::kTrue : Outcome::kFalse;
}

}  // namespace cer
