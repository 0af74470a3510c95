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

#ifndef CER_PREDICATE_H_
#define CER_PREDICATE_H_

#include <memory>
#include <string>
#include <vector>

#include "cer/event.h"
#include "cer/value.h"

namespace cer {

// Immutable boolean expression over a single tuple. Cheap to copy.
class Predicate {
 public:
  enum class Kind { kTrue, kType, kCompare, kAnd, kOr, kNot };

  // TRUE.
  Predicate();

  static Predicate True() { return Predicate(); }
  // Event-type test, `type = name`.
  static Predicate TypeIs(std::string name);
  static Predicate Cmp(std::string attr, CmpOp op, Value constant);
  // And/Or flatten nested operands of the same kind and drop TRUE from
  // conjunctions. And of nothing is TRUE.
  static Predicate And(std::vector<Predicate> operands);
  static Predicate And(Predicate a, Predicate b);
  static Predicate Or(std::vector<Predicate> operands);
  static Predicate Not(Predicate p);

  Kind kind() const;
  bool is_true() const { return kind() == Kind::kTrue; }
  // Type test or comparison.
  bool is_atom() const;

  // kType: type name. kCompare: attribute name.
  const std::string& name() const;
  CmpOp op() const;
  const Value& constant() const;
  const std::vector<Predicate>& operands() const;

  // Total: missing attributes and mismatched kinds are not satisfied.
  bool Eval(const DataTuple& t) const;
  // Like Eval but reports why an atom failed. Composite nodes report kTrue
  // or kFalse.
  Outcome Evaluate(const DataTuple& t) const;

  // Query-syntax rendering, e.g. `name = "MSFT" AND price > 100`.
  std::string ToString() const;
  // Canonical structural key; equal keys iff structurally equal.
  const std::string& Key() const;

  friend bool operator==(const Predicate& a, const Predicate& b) {
    return a.Key() == b.Key();
  }

 private:
  struct Node;
  explicit Predicate(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;
};

}  // namespace cer

#endif  // CER_PREDICATE_H_
