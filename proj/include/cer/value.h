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

#ifndef CER_VALUE_H_
#define CER_VALUE_H_

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <variant>

namespace cer {

enum class ValueKind { kNull, kInt, kDouble, kString, kBool };

// Attribute value. Null doubles as "attribute missing".
class Value {
 public:
  Value() = default;
  Value(std::nullptr_t) {}
  Value(int v) : v_(static_cast<int64_t>(v)) {}
  Value(int64_t v) : v_(v) {}
  Value(double v) : v_(v) {}
  Value(std::string v) : v_(std::move(v)) {}
  Value(const char* v) : v_(std::string(v)) {}
  Value(bool v) : v_(v) {}

  ValueKind kind() const { return static_cast<ValueKind>(v_.index()); }
  bool is_null() const { return kind() == ValueKind::kNull; }
  bool is_numeric() const {
    return kind() == ValueKind::kInt || kind() == ValueKind::kDouble;
  }

  int64_t as_int() const { return std::get<int64_t>(v_); }
  double as_double() const { return std::get<double>(v_); }
  const std::string& as_string() const { return std::get<std::string>(v_); }
  bool as_bool() const { return std::get<bool>(v_); }

  // Structural identity: same variant and same payload. Null is identical to
  // null here; this is for containers and AST equality, not for predicates.
  friend bool operator==(const Value& a, const Value& b) { return a.v_ == b.v_; }
  friend bool operator<(const Value& a, const Value& b) { return a.v_ < b.v_; }

  // Literal form accepted by the query parser ("abc" is quoted).
  std::string ToLiteral() const;
  // Canonical byte encoding; distinct values get distinct encodings.
  std::string Encode() const;
  std::size_t Hash() const;

 private:
  std::variant<std::monostate, int64_t, double, std::string, bool> v_;
};

std::string_view ValueKindName(ValueKind k);

enum class CmpOp { kEq, kNe, kLt, kLe, kGt, kGe };

std::string_view CmpOpSymbol(CmpOp op);

// Result of applying a comparison. Only kTrue satisfies a predicate; the
// other non-true outcomes are kept apart for diagnostics.
enum class Outcome { kTrue, kFalse, kNull, kTypeMismatch };

// Compares lhs op rhs. int and double compare exactly after promotion;
// strings and bools support only = and !=; any null operand yields kNull.
Outcome Compare(const Value& lhs, CmpOp op, const Value& rhs);

}  // namespace cer

#endif  // CER_VALUE_H_
