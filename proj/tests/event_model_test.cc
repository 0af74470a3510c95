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

#include <gtest/gtest.h>

#include <cmath>
#include <limits>

#include "cer/event.h"
#include "cer/predicate.h"
#include "cer/value.h"

namespace cer {
namespace {

TEST(ValueTest, KindsAndAccessors) {
  EXPECT_TRUE(Value().is_null());
  EXPECT_EQ(Value(3).kind(), ValueKind::kInt);
  EXPECT_EQ(Value(2.5).kind(), ValueKind::kDouble);
  EXPECT_EQ(Value("x").kind(), ValueKind::kString);
  EXPECT_EQ(Value(true).kind(), ValueKind::kBool);
  EXPECT_EQ(Value(int64_t{7}).as_int(), 7);
}

TEST(ValueTest, NumericComparisonIsExactAcrossKinds) {
  EXPECT_EQ(Compare(Value(101), CmpOp::kGt, Value(100)), Outcome::kTrue);
  EXPECT_EQ(Compare(Value(100), CmpOp::kGt, Value(100)), Outcome::kFalse);
  EXPECT_EQ(Compare(Value(100), CmpOp::kEq, Value(100.0)), Outcome::kTrue);
  EXPECT_EQ(Compare(Value(100), CmpOp::kLt, Value(100.5)), Outcome::kTrue);
  // 2^53 + 1 is not representable as a double; promotion must not round.
  int64_t big = (int64_t{1} << 53) + 1;
  EXPECT_EQ(Compare(Value(big), CmpOp::kGt, Value(std::ldexp(1.0, 53))),
            Outcome::kTrue);
  EXPECT_EQ(Compare(Value(big), CmpOp::kEq, Value(std::ldexp(1.0, 53))),
            Outcome::kFalse);
  double nan = std::numeric_limits<double>::quiet_NaN();
  EXPECT_EQ(Compare(Value(1), CmpOp::kEq, Value(nan)), Outcome::kFalse);
  EXPECT_EQ(Compare(Value(1), CmpOp::kNe, Value(nan)), Outcome::kTrue);
}

TEST(ValueTest, MismatchedKindsAreTypeErrors) {
  EXPECT_EQ(Compare(Value("1"), CmpOp::kEq, Value(1)), Outcome::kTypeMismatch);
  EXPECT_EQ(Compare(Value(true), CmpOp::kEq, Value(1)), Outcome::kTypeMismatch);
  EXPECT_EQ(Compare(Value("a"), CmpOp::kLt, Value("b")), Outcome::kTypeMismatch);
  EXPECT_EQ(Compare(Value(true), CmpOp::kGe, Value(false)), Outcome::kTypeMismatch);
  EXPECT_EQ(Compare(Value("a"), CmpOp::kNe, Value("b")), Outcome::kTrue);
}

TEST(ValueTest, NullEqualsNothing) {
  EXPECT_EQ(Compare(Value(), CmpOp::kEq, Value()), Outcome::kNull);
  EXPECT_EQ(Compare(Value(), CmpOp::kNe, Value()), Outcome::kNull);
  EXPECT_EQ(Compare(Value(), CmpOp::kEq, Value(1)), Outcome::kNull);
}

TEST(ValueTest, EncodingSeparatesKinds) {
  EXPECT_NE(Value(1).Encode(), Value(1.0).Encode());
  EXPECT_NE(Value("1").Encode(), Value(1).Encode());
  EXPECT_NE(Value("ab").Encode() + Value("c").Encode(),
            Value("a").Encode() + Value("bc").Encode());
  EXPECT_EQ(Value("x").Encode(), Value(std::string("x")).Encode());
}

TEST(ValueTest, Literals) {
  EXPECT_EQ(Value(3).ToLiteral(), "3");
  EXPECT_EQ(Value(2.0).ToLiteral(), "2.0");
  EXPECT_EQ(Value("a\"b").ToLiteral(), "\"a\\\"b\"");
  EXPECT_EQ(Value(false).ToLiteral(), "false");
}

TEST(DataTupleTest, AttributesAndPositions) {
  DataTuple t("SELL", {{"price", 101}, {"name", "MSFT"}});
  EXPECT_EQ(t.Get("name"), Value("MSFT"));
  EXPECT_TRUE(t.Get("volume").is_null());
  t.SetAttr("price", Value(5));
  EXPECT_EQ(t.Get("price"), Value(5));
  Stream s(3, t);
  s[2].time = 99;
  AssignPositions(s);
  EXPECT_EQ(s[2].position, 2);
  EXPECT_EQ(s[2].time, 2);
  s[2].time = 99;
  AssignPositions(s, true);
  EXPECT_EQ(s[2].time, 99);
}

TEST(NormalizeTest, SingleVariable) {
  Valuation v{0, 0, {{"SELL", {0}}}};
  EXPECT_EQ(NormalizeValuation(v), (ComplexEvent{0, 0, {0}}));
}

TEST(NormalizeTest, UnionOfVariables) {
  Valuation v{0, 4, {{"msft", {0}}, {"intel", {2}}, {"amzn", {4}}}};
  EXPECT_EQ(NormalizeValuation(v), (ComplexEvent{0, 4, {0, 2, 4}}));
  EXPECT_EQ(NormalizeValuation(v).ToString(), "([0,4],{0,2,4})");
}

TEST(NormalizeTest, EmptyVariables) {
  Valuation v{3, 7, {}};
  EXPECT_EQ(NormalizeValuation(v), (ComplexEvent{3, 7, {}}));
}

TEST(PredicateTest, ConjunctionOnStockTuple) {
  DataTuple t("SELL", {{"name", "MSFT"}, {"price", 101}});
  Predicate p = Predicate::And(Predicate::Cmp("name", CmpOp::kEq, Value("MSFT")),
                               Predicate::Cmp("price", CmpOp::kGt, Value(100)));
  EXPECT_TRUE(p.Eval(t));
  EXPECT_EQ(p.ToString(), "name = \"MSFT\" AND price > 100");
}

TEST(PredicateTest, MissingAttributeIsNotSatisfied) {
  DataTuple t("SELL", {{"name", "MSFT"}});
  Predicate p = Predicate::Cmp("price", CmpOp::kGt, Value(100));
  EXPECT_FALSE(p.Eval(t));
  EXPECT_EQ(p.Evaluate(t), Outcome::kNull);
}

TEST(PredicateTest, TypeTest) {
  DataTuple t("SELL", {});
  EXPECT_FALSE(Predicate::TypeIs("BUY").Eval(t));
  EXPECT_TRUE(Predicate::TypeIs("SELL").Eval(t));
}

TEST(PredicateTest, MismatchIsDistinctFromFalse) {
  DataTuple t("SELL", {{"price", "high"}});
  Predicate p = Predicate::Cmp("price", CmpOp::kGt, Value(100));
  EXPECT_FALSE(p.Eval(t));
  EXPECT_EQ(p.Evaluate(t), Outcome::kTypeMismatch);
}

TEST(PredicateTest, NegationIsTwoValued) {
  DataTuple t("SELL", {});
  Predicate p = Predicate::Not(Predicate::Cmp("price", CmpOp::kGt, Value(100)));
  EXPECT_TRUE(p.Eval(t));
}

TEST(PredicateTest, FlatteningAndKeys) {
  Predicate a = Predicate::Cmp("v", CmpOp::kEq, Value(1));
  Predicate b = Predicate::Cmp("v", CmpOp::kEq, Value(2));
  Predicate c = Predicate::Cmp("v", CmpOp::kEq, Value(3));
  EXPECT_EQ(Predicate::And(Predicate::And(a, b), c), Predicate::And({a, b, c}));
  EXPECT_EQ(Predicate::And(Predicate::True(), a), a);
  EXPECT_TRUE(Predicate::And(std::vector<Predicate>{}).is_true());
  EXPECT_FALSE(Predicate::Cmp("v", CmpOp::kEq, Value(1)) ==
               Predicate::Cmp("v", CmpOp::kEq, Value(1.0)));
}

}  // namespace
}  // namespace cer
