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

#ifndef CER_TESTS_TEST_UTIL_H_
#define CER_TESTS_TEST_UTIL_H_

#include <array>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "cer/cea.h"
#include "cer/ceql.h"
#include "cer/determinize.h"
#include "cer/engine.h"
#include "cer/event.h"
#include "cer/oracle.h"

namespace cer::testing {

// Stock query over the seven-event example stream below. The middle name is
// INTL to match the stream.
inline constexpr const char* kQ1 =
    "SELECT * FROM Stock\n"
    "WHERE SELL as msft; SELL as intel; SELL as amzn\n"
    "FILTER msft[name=\"MSFT\"] AND msft[price > 100]\n"
    "   AND intel[name=\"INTL\"]\n"
    "   AND amzn[name=\"AMZN\"] AND amzn[price < 2000]";

inline Stream StockStream() {
  Stream s = {
      DataTuple("SELL", {{"name", "MSFT"}, {"price", 101}}),
      DataTuple("SELL", {{"name", "MSFT"}, {"price", 102}}),
      DataTuple("SELL", {{"name", "INTL"}, {"price", 80}}),
      DataTuple("BUY", {{"name", "INTL"}, {"price", 80}}),
      DataTuple("SELL", {{"name", "AMZN"}, {"price", 1900}}),
      DataTuple("SELL", {{"name", "INTL"}, {"price", 81}}),
      DataTuple("SELL", {{"name", "AMZN"}, {"price", 1920}}),
  };
  AssignPositions(s);
  return s;
}

inline ComplexEvent CE(int64_t i, int64_t j, std::vector<int64_t> d) {
  return ComplexEvent{i, j, std::move(d)};
}

// Everything an engine run produced, with duplicates counted.
struct EngineRun {
  Emissions emissions;
  std::size_t emitted = 0;
  std::size_t duplicates = 0;
  EngineStats stats;
  std::size_t audit_violations = 0;
  std::size_t tecs_audit = 0;
};

inline EngineRun RunEngine(std::shared_ptr<const CompiledAutomaton> a, const Stream& s,
                           EngineConfig config) {
  EngineRun r;
  Engine e(std::move(a), config, [&](int64_t j, const ComplexEvent& ce) {
    ++r.emitted;
    if (!r.emissions[j].insert(ce).second) ++r.duplicates;
  });
  for (const auto& t : s) e.ProcessEvent(t);
  r.stats = e.stats();
  r.audit_violations = e.AuditViolations();
  r.tecs_audit = e.tecs().AuditAll();
  return r;
}

inline EngineRun RunEngine(const Cea& cea, const Stream& s, EngineConfig config) {
  return RunEngine(std::make_shared<const CompiledAutomaton>(cea), s, config);
}

// Random instances over types A..D, variables x, y, z and one int attribute
// v in [0, 3] that is missing on some events.
class RandomCorpus {
 public:
  static constexpr std::array<const char*, 4> kTypes = {"A", "B", "C", "D"};
  static constexpr std::array<const char*, 3> kVars = {"x", "y", "z"};

  explicit RandomCorpus(uint64_t seed, int num_types = 4)
      : rng_(seed), num_types_(num_types) {}

  std::mt19937_64& rng() { return rng_; }

  int Uniform(int lo, int hi) {
    return std::uniform_int_distribution<int>(lo, hi)(rng_);
  }
  bool Coin(double p = 0.5) { return std::bernoulli_distribution(p)(rng_); }

  std::string Type() { return kTypes[Uniform(0, num_types_ - 1)]; }

  Predicate Atom() {
    if (Coin(0.2)) return Predicate::TypeIs(Type());
    static constexpr std::array<CmpOp, 6> kOps = {CmpOp::kEq, CmpOp::kNe, CmpOp::kLt,
                                                  CmpOp::kLe, CmpOp::kGt, CmpOp::kGe};
    return Predicate::Cmp("v", kOps[Uniform(0, 5)], Value(Uniform(0, 3)));
  }

  Predicate Pred(int depth = 2) {
    if (depth <= 0 || Coin(0.5)) return Atom();
    switch (Uniform(0, 2)) {
      case 0: return Predicate::And(Pred(depth - 1), Pred(depth - 1));
      case 1: return Predicate::Or({Pred(depth - 1), Pred(depth - 1)});
      default: return Predicate::Not(Pred(depth - 1));
    }
  }

  // Formula of depth <= max_depth. Constructors are drawn uniformly while
  // depth remains, so all seven occur across a corpus.
  CelFormula Formula(int max_depth) {
    if (max_depth <= 1) return CelFormula::EventType(Type());
    int k = Uniform(0, 6);
    switch (k) {
      case 0:
        return CelFormula::EventType(Type());
      case 1:
        return CelFormula::As(Formula(max_depth - 1), kVars[Uniform(0, 2)]);
      case 2: {
        CelFormula c = Formula(max_depth - 1);
        std::set<std::string> vars = c.Variables();
        std::vector<std::string> v(vars.begin(), vars.end());
        std::string x = v[Uniform(0, static_cast<int>(v.size()) - 1)];
        return CelFormula::Filter(c, x, Pred());
      }
      case 3:
        return CelFormula::Or(Formula(max_depth - 1), Formula(max_depth - 1));
      case 4:
        return CelFormula::Seq(Formula(max_depth - 1), Formula(max_depth - 1));
      case 5:
        return CelFormula::Plus(Formula(max_depth - 1));
      default: {
        CelFormula c = Formula(max_depth - 1);
        std::set<std::string> keep;
        for (const auto& x : c.Variables()) {
          if (Coin()) keep.insert(x);
        }
        return CelFormula::Proj(keep, c);
      }
    }
  }

  // Dense positions; times advance by 0..max_step.
  Stream RandomStream(int length, int max_step = 2) {
    Stream s;
    int64_t time = 0;
    for (int i = 0; i < length; ++i) {
      DataTuple t;
      t.type = Type();
      if (!Coin(0.15)) t.SetAttr("v", Value(Uniform(0, 3)));
      t.position = i;
      time += Uniform(0, max_step);
      t.time = time;
      s.push_back(std::move(t));
    }
    return s;
  }

  std::optional<int64_t> Window(int max) {
    if (Coin(0.2)) return std::nullopt;
    return Uniform(0, max);
  }

 private:
  std::mt19937_64 rng_;
  int num_types_;
};

// Constructor kinds occurring in f.
inline void CollectKinds(const CelFormula& f, std::set<CelFormula::Kind>* kinds) {
  kinds->insert(f.kind());
  for (std::size_t i = 0; i < f.num_children(); ++i) CollectKinds(f.child(i), kinds);
}

}  // namespace cer::testing

#endif  // CER_TESTS_TEST_UTIL_H_
