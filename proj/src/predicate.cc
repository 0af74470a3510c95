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

#include "cer/predicate.h"

#include <cassert>

namespace cer {

struct Predicate::Node {
  Kind kind = Kind::kTrue;
  std::string name;
  CmpOp op = CmpOp::kEq;
  Value constant;
  std::vector<Predicate> operands;
  std::string key;
};

namespace {

std::string LengthPrefixed(const std::string& s) {
  return std::to_string(s.size()) + ":" + s;
}

}  // namespace

Predicate::Predicate() {
  static const auto kTrueNode = [] {
    auto n = std::make_shared<Node>();
    n->key = "T";
    return std::shared_ptr<const Node>(n);
  }();
  node_ = kTrueNode;
}

Predicate Predicate::TypeIs(std::string name) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::kType;
  n->name = std::move(name);
  n->key = "Y" + LengthPrefixed(n->name);
  return Predicate(std::move(n));
}

Predicate Predicate::Cmp(std::string attr, CmpOp op, Value constant) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::kCompare;
  n->name = std::move(attr);
  n->op = op;
  n->constant = std::move(constant);
  n->key = "C" + LengthPrefixed(n->name) +
           std::to_string(static_cast<int>(op)) +
           LengthPrefixed(n->constant.Encode());
  return Predicate(std::move(n));
}

Predicate Predicate::And(std::vector<Predicate> operands) {
  std::vector<Predicate> flat;
  for (auto& p : operands) {
    if (p.is_true()) continue;
    if (p.kind() == Kind::kAnd) {
      for (const auto& q : p.operands()) flat.push_back(q);
    } else {
      flat.push_back(std::move(p));
    }
  }
  if (flat.empty()) return True();
  if (flat.size() == 1) return flat[0];
  auto n = std::make_shared<Node>();
  n->kind = Kind::kAnd;
  n->key = "A(";
  for (const auto& p : flat) n->key += LengthPrefixed(p.Key());
  n->key += ")";
  n->operands = std::move(flat);
  return Predicate(std::move(n));
}

Predicate Predicate::And(Predicate a, Predicate b) {
  return And(std::vector<Predicate>{std::move(a), std::move(b)});
}

Predicate Predicate::Or(std::vector<Predicate> operands) {
  std::vector<Predicate> flat;
  for (auto& p : operands) {
    if (p.kind() == Kind::kOr) {
      for (const auto& q : p.operands()) flat.push_back(q);
    } else {
      flat.push_back(std::move(p));
    }
  }
  assert(!flat.empty());
  if (flat.size() == 1) return flat[0];
  auto n = std::make_shared<Node>();
  n->kind = Kind::kOr;
  n->key = "O(";
  for (const auto& p : flat) n->key += LengthPrefixed(p.Key());
  n->key += ")";
  n->operands = std::move(flat);
  return Predicate(std::move(n));
}

Predicate Predicate::Not(Predicate p) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::kNot;
  n->key = "N(" + LengthPrefixed(p.Key()) + ")";
  n->operands.push_back(std::move(p));
  return Predicate(std::move(n));
}

Predicate::Kind Predicate::kind() const { return node_->kind; }

bool Predicate::is_atom() const {
  return kind() == Kind::kType || kind() == Kind::kCompare;
}

const std::string& Predicate::name() const { return node_->name; }
CmpOp Predicate::op() const { return node_->op; }
const Value& Predicate::constant() const { return node_->constant; }
const std::vector<Predicate>& Predicate::operands() const {
  return node_->operands;
}
const std::string& Predicate::Key() const { return node_->key; }

bool Predicate::Eval(const DataTuple& t) const {
  switch (kind()) {
    case Kind::kTrue: return true;
    case Kind::kType: return t.type == node_->name;
    case Kind::kCompare:
      return Compare(t.Get(node_->name), node_->op, node_->constant) ==
             Outcome::kTrue;
    case Kind::kAnd:
      for (const auto& p : node_->operands) {
        if (!p.Eval(t)) return false;
      }
      return true;
    case Kind::kOr:
      for (const auto& p : node_->operands) {
        if (p.Eval(t)) return true;
      }
      return false;
    case Kind::kNot: return !node_->operands[0].Eval(t);
  }
  return false;
}

Outcome Predicate::Evaluate(const DataTuple& t) const {
  if (kind() == Kind::kCompare) {
    return Compare(t.Get(node_->name), node_->op, node_->constant);
  }
  return Eval(t) ? Outcome::kTrue : Outcome::kFalse;
}

std::string Predicate::ToString() const {
  switch (kind()) {
    case Kind::kTrue: return "TRUE";
    case Kind::kType: return "type = " + Value(node_->name).ToLiteral();
    case Kind::kCompare:
      return node_->name + " " + std::string(CmpOpSymbol(node_->op)) + " " +
             node_->constant.ToLiteral();
    case Kind::kAnd:
    case Kind::kOr: {
      const char* sep = kind() == Kind::kAnd ? " AND " : " OR ";
      std::string out;
      for (std::size_t i = 0; i < node_->operands.size(); ++i) {
        const Predicate& p = node_->operands[i];
        if (i) out += sep;
        bool wrap = p.kind() == Kind::kAnd || p.kind() == Kind::kOr;
        out += wrap ? "(" + p.ToString() + ")" : p.ToString();
      }
      return out;
    }
    case Kind::kNot: {
      const Predicate& p = node_->operands[0];
      return p.is_atom() || p.is_true() ? "NOT " + p.ToString()
                                        : "NOT (" + p.ToString() + ")";
    }
  }
  return "";
}

}  // namespace cer
