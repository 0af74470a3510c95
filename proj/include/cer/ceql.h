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

#ifndef CER_CEQL_H_
#define CER_CEQL_H_

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "cer/predicate.h"
#include "cer/value.h"

namespace cer {

// Event declarations from a schema sidecar file:
//   DECLARE EVENT SELL(name:string, price:double)
class Schema {
 public:
  using Attributes = std::vector<std::pair<std::string, ValueKind>>;

  static Schema Parse(std::string_view text);

  void Declare(std::string type, Attributes attrs);
  bool HasType(const std::string& type) const;
  // Null when the type is not declared.
  const Attributes* Find(const std::string& type) const;
  // Declared kind of attr on type, or nullopt.
  std::optional<ValueKind> AttrKind(const std::string& type,
                                    const std::string& attr) const;
  const std::map<std::string, Attributes>& types() const { return types_; }
  bool empty() const { return types_.empty(); }

 private:
  std::map<std::string, Attributes> types_;
};

// Immutable CEL formula tree.
class CelFormula {
 public:
  enum class Kind { kEventType, kAs, kFilter, kOr, kSeq, kPlus, kProj };

  static CelFormula EventType(std::string type);
  static CelFormula As(CelFormula child, std::string var);
  static CelFormula Filter(CelFormula child, std::string var, Predicate p);
  static CelFormula Or(CelFormula lhs, CelFormula rhs);
  static CelFormula Seq(CelFormula lhs, CelFormula rhs);
  static CelFormula Plus(CelFormula child);
  static CelFormula Proj(std::set<std::string> vars, CelFormula child);

  Kind kind() const;
  // kEventType: type name. kAs, kFilter: variable.
  const std::string& name() const;
  const Predicate& predicate() const;
  const std::set<std::string>& proj_vars() const;
  const CelFormula& child(std::size_t i = 0) const;
  std::size_t num_children() const;

  // Number of tree nodes.
  std::size_t Size() const;
  std::size_t Depth() const;
  // Event-type names and AS-bound variables occurring in the tree.
  std::set<std::string> Variables() const;
  std::set<std::string> EventTypes() const;

  // CEQL surface syntax. Proj has no surface form and prints as
  // PROJ{a,b}(...), which the parser rejects.
  std::string ToString() const;

  friend bool operator==(const CelFormula& a, const CelFormula& b);

 private:
  struct Node;
  explicit CelFormula(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;
};

enum class Strategy { kDefault, kMax, kLast, kNext, kAny };
enum class TimeUnit { kEvents, kSeconds, kMinutes, kHours, kAttribute };
enum class ConsumePolicy { kNone, kAny };

std::string_view StrategyName(Strategy s);

struct WithinClause {
  int64_t magnitude = 0;
  TimeUnit unit = TimeUnit::kEvents;
  std::string attribute;  // set when unit == kAttribute

  friend bool operator==(const WithinClause&, const WithinClause&) = default;
};

struct QueryAst {
  Strategy strategy = Strategy::kDefault;
  bool select_all = true;
  std::vector<std::string> select;
  std::vector<std::string> from;
  CelFormula where = CelFormula::EventType("_");
  std::vector<std::string> partition_by;
  std::optional<WithinClause> within;
  std::optional<ConsumePolicy> consume;

  friend bool operator==(const QueryAst&, const QueryAst&) = default;
};

// Parses and validates a query. When schema is non-null and non-empty,
// event types, filter attributes and literal kinds are checked against it.
QueryAst ParseQuery(std::string_view text, const Schema* schema = nullptr);

// Parses a bare CEL formula (the WHERE clause body).
CelFormula ParseCel(std::string_view text);

// Wraps the WHERE formula in a projection onto the selected variables.
CelFormula Desugar(const QueryAst& q);

std::string ToString(const QueryAst& q);

}  // namespace cer

#endif  // CER_CEQL_H_
