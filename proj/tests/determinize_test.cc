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

#include <memory>
#include <set>
#include <utility>

#include "cer/ceql.h"
#include "cer/errors.h"
#include "cer/determinize.h"
#include "cer/oracle.h"
#include "test_util.h"

namespace cer {
namespace {

std::shared_ptr<const CompiledAutomaton> Q1Automaton() {
  return std::make_shared<const CompiledAutomaton>(
      Compile(Desugar(ParseQuery(testing::kQ1))));
}

// Evaluates each atom on its own, without the bit-vector routine.
std::string AtomBits(const DataTuple& t, const std::vector<Predicate>& atoms) {
  std::string s;
  for (const auto& p : atoms) s += p.Eval(t) ? '1' : '0';
  return s;
}

// Complex events of every run of the determinized machine, from every start.
ComplexEventSet DetRuns(Determinizer& d, const Stream& s) {
  const auto& atoms = d.automaton().atoms();
  ComplexEventSet out;
  for (std::size_t i = 0; i < s.size(); ++i) {
    std::set<std::pair<int, std::vector<int64_t>>> frontier = {{d.Initial(), {}}};
    for (std::size_t j = i; j < s.size() && !frontier.empty(); ++j) {
      BitVector v = EvalBitVector(s[j], atoms);
      std::set<std::pair<int, std::vector<int64_t>>> next;
      for (const auto& [q, marks] : frontier) {
        Determinizer::Successors succ = d.Step(q, v);
        if (succ.marking != Determinizer::kNone) {
          auto m = marks;
          m.push_back(s[j].position);
          next.emplace(succ.marking, std::move(m));
        }
        if (succ.unmarking != Determinizer::kNone) next.emplace(succ.unmarking, marks);
      }
      for (const auto& [q, marks] : next) {
        if (d.IsFinal(q)) out.insert(ComplexEvent{s[i].position, s[j].position, marks});
      }
      frontier = std::move(next);
    }
  }
  return out;
}

TEST(DeterminizeTest, BitVectorsMatchPerAtomEvaluation) {
  auto a = Q1Automaton();
  Stream s = testing::StockStream();
  EXPECT_EQ(EvalBitVector(s[0], a->atoms()).ToString(), "111001");
  // price < 2000 holds for 80, so the last bit is set.
  EXPECT_EQ(EvalBitVector(s[3], a->atoms()).ToString(), "000101");
  for (const auto& t : s) {
    EXPECT_EQ(EvalBitVector(t, a->atoms()).ToString(), AtomBits(t, a->atoms()));
  }
  EXPECT_EQ(EvalBitVector(s[0], {}).size(), 0u);
}

TEST(DeterminizeTest, BitVectorSpansWords) {
  BitVector v(130);
  v.Set(0, true);
  v.Set(64, true);
  v.Set(129, true);
  EXPECT_TRUE(v.Get(0) && v.Get(64) && v.Get(129));
  EXPECT_FALSE(v.Get(1) || v.Get(63) || v.Get(128));
  v.Set(64, false);
  EXPECT_FALSE(v.Get(64));
  EXPECT_EQ(v.words().size(), 3u);
}

TEST(DeterminizeTest, DeltaFollowsStockAutomaton) {
  auto a = Q1Automaton();
  Determinizer d(a);
  Stream s = testing::StockStream();
  int q1 = d.Initial();
  EXPECT_EQ(d.state(q1).states, std::vector<int>{a->cea().initial});
  EXPECT_EQ(d.Initial(), q1);

  BitVector sell_msft = EvalBitVector(s[0], a->atoms());
  auto q2 = d.Delta(q1, sell_msft, Mark::kMark);
  ASSERT_TRUE(q2);
  EXPECT_EQ(d.state(*q2).states.size(), 1u);
  EXPECT_FALSE(d.Delta(q1, sell_msft, Mark::kUnmark));

  BitVector buy_intl = EvalBitVector(s[3], a->atoms());
  EXPECT_EQ(d.Delta(*q2, buy_intl, Mark::kUnmark), q2);
  EXPECT_FALSE(d.Delta(*q2, buy_intl, Mark::kMark));
  EXPECT_FALSE(d.Delta(q1, buy_intl, Mark::kMark));
  EXPECT_FALSE(d.IsFinal(q1));
  EXPECT_FALSE(d.IsFinal(*q2));
}

TEST(DeterminizeTest, CacheIsCoherent) {
  testing::RandomCorpus gen(7);
  for (int i = 0; i < 100; ++i) {
    auto a = std::make_shared<const CompiledAutomaton>(Compile(gen.Formula(4)));
    Determinizer d(a);
    Stream s = gen.RandomStream(12);
    std::vector<std::pair<int, BitVector>> seen;
    std::set<int> frontier = {d.Initial()};
    for (const auto& t : s) {
      BitVector v = EvalBitVector(t, a->atoms());
      std::set<int> next;
      for (int q : frontier) {
        auto succ = d.Step(q, v);
        seen.emplace_back(q, v);
        if (succ.marking != Determinizer::kNone) next.insert(succ.marking);
        if (succ.unmarking != Determinizer::kNone) next.insert(succ.unmarking);
      }
      next.insert(d.Initial());
      frontier = std::move(next);
    }
    std::vector<Determinizer::Successors> cached;
    for (const auto& [q, v] : seen) cached.push_back(d.Step(q, v));
    d.ClearCache();
    EXPECT_EQ(d.cache_size(), 0u);
    for (std::size_t k = 0; k < seen.size(); ++k) {
      EXPECT_EQ(d.Step(seen[k].first, seen[k].second), cached[k]);
      EXPECT_EQ(d.Compute(seen[k].first, seen[k].second), cached[k]);
    }
  }
}

TEST(DeterminizeTest, CacheCountsHitsAndEvicts) {
  auto a = Q1Automaton();
  Stream s = testing::StockStream();
  Determinizer d(a, 2);
  int q = d.Initial();
  BitVector v0 = EvalBitVector(s[0], a->atoms());
  BitVector v2 = EvalBitVector(s[2], a->atoms());
  BitVector v3 = EvalBitVector(s[3], a->atoms());
  d.Step(q, v0);
  d.Step(q, v0);
  EXPECT_EQ(d.stats().cache_misses, 1u);
  EXPECT_EQ(d.stats().cache_hits, 1u);
  d.Step(q, v2);
  d.Step(q, v3);
  EXPECT_EQ(d.cache_size(), 2u);
  EXPECT_EQ(d.stats().evictions, 1u);
  // v0 was least recently used, so it was evicted.
  d.Step(q, v0);
  EXPECT_EQ(d.stats().cache_misses, 4u);
}

TEST(DeterminizeTest, DeterminizedRunsMatchSourceRuns) {
  testing::RandomCorpus gen(8);
  for (int i = 0; i < 300; ++i) {
    Cea cea = Compile(gen.Formula(4));
    Determinizer d(std::make_shared<const CompiledAutomaton>(cea));
    Stream s = gen.RandomStream(gen.Uniform(0, 12));
    try {
      ComplexEventSet expected = BruteRuns(cea, s);
      EXPECT_EQ(DetRuns(d, s), expected) << ToDebugString(cea);
    } catch (const GuardError&) {
    }
  }
}

}  // namespace
}  // namespace cer
