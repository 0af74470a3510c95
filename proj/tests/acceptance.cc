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

// Acceptance suite. Prints one PASS/FAIL line per criterion and exits
// non-zero if any criterion fails.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <map>
#include <memory>
#include <set>
#include <string>
#include <vector>

#include "cer/cea.h"
#include "cer/ceql.h"
#include "cer/engine.h"
#include "cer/errors.h"
#include "cer/generator.h"
#include "cer/oracle.h"
#include "cer/partition.h"
#include "cer/query.h"
#include "test_util.h"

namespace cer {
namespace {

using Clock = std::chrono::steady_clock;
using testing::CE;

// Pinned thresholds.
constexpr double kExampleSeconds = 1.0;
constexpr int kOraclePairs = 1000;
constexpr int kOracleMaxDepth = 4;
constexpr int kOracleMaxStream = 30;
constexpr int kOracleCelMaxStream = 15;
constexpr int kOracleMaxWindow = 12;
constexpr double kOracleSeconds = 300.0;
constexpr std::size_t kAuditEvents = 100'000;
constexpr std::size_t kBenchEvents = 1'000'000;
constexpr int64_t kWindowT = 500;
constexpr double kWindowRatio = 1.5;
constexpr double kSoftThroughput = 1e5;
constexpr double kLengthRatio = 8.0;
constexpr int kRepetitions = 3;
constexpr double kMemoryGrowth = 2.0;
constexpr int kKeyedStreams = 200;

struct Outcome {
  bool pass = false;
  std::string detail;
};

double Seconds(Clock::time_point since) {
  return std::chrono::duration<double>(Clock::now() - since).count();
}

std::string Fmt(const char* f, double a, double b = 0, double c = 0, double d = 0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c, d);
  return buf;
}

// Counters shared by the randomized criteria.
struct CorpusTotals {
  std::size_t audited_events = 0;
  std::size_t audit_violations = 0;
  std::size_t delay_emissions = 0;
  std::size_t delay_violations = 0;
};

void Tally(CorpusTotals& t, const testing::EngineRun& run) {
  t.audited_events += run.stats.events;
  t.audit_violations += run.audit_violations + run.tecs_audit;
  t.delay_emissions += run.stats.delay.emissions;
  t.delay_violations += run.stats.delay.violations;
}

// The stock automaton written out by hand.
Cea HandBuiltStockCea() {
  auto eq = [](const char* a, Value v) { return Predicate::Cmp(a, CmpOp::kEq, v); };
  Predicate sell = Predicate::TypeIs("SELL");
  Cea a;
  int q0 = a.AddState(false), q1 = a.AddState(false), q2 = a.AddState(false),
      q3 = a.AddState(true);
  a.initial = q0;
  a.AddTransition(q0, Predicate::And(Predicate::And(sell, eq("name", "MSFT")),
                                     Predicate::Cmp("price", CmpOp::kGt, 100)),
                  Mark::kMark, q1);
  a.AddTransition(q1, Predicate::True(), Mark::kUnmark, q1);
  a.AddTransition(q1, Predicate::And(sell, eq("name", "INTL")), Mark::kMark, q2);
  a.AddTransition(q2, Predicate::True(), Mark::kUnmark, q2);
  a.AddTransition(q2, Predicate::And(Predicate::And(sell, eq("name", "AMZN")),
                                     Predicate::Cmp("price", CmpOp::kLt, 2000)),
                  Mark::kMark, q3);
  return a;
}

Outcome WorkedExample() {
  auto start = Clock::now();
  Cea cea = Compile(Desugar(ParseQuery(testing::kQ1)));
  EngineConfig c;
  c.window = 6;
  c.limit = 0;
  c.audit = true;
  auto run = testing::RunEngine(cea, testing::StockStream(), c);
  Emissions expected = {
      {4, {CE(0, 4, {0, 2, 4}), CE(1, 4, {1, 2, 4})}},
      {6, {CE(0, 6, {0, 2, 6}), CE(0, 6, {0, 5, 6}), CE(1, 6, {1, 2, 6}), CE(1, 6, {1, 5, 6})}}};
  bool emissions_ok = run.emissions == expected && run.duplicates == 0;

  // Equivalence with the hand-built automaton on random stock streams.
  Cea hand = HandBuiltStockCea();
  bool shape_ok = cea.num_states == hand.num_states &&
                  cea.transitions.size() == hand.transitions.size();
  GeneratorConfig g;
  g.types = {"SELL", "BUY"};
  g.symbols = {"MSFT", "INTL", "AMZN"};
  g.events = 14;
  for (uint64_t seed = 1; seed <= 50 && shape_ok; ++seed) {
    g.seed = seed;
    Stream s = Generate(g);
    shape_ok = BruteRuns(cea, s) == BruteRuns(hand, s);
  }
  double secs = Seconds(start);
  return {emissions_ok && shape_ok && secs < kExampleSeconds,
          Fmt("worked example: %.0f complex events at j=4, %.0f at j=6, %.3f s",
              run.emissions[4].size(), run.emissions[6].size(), secs) +
              (emissions_ok ? "" : " [emission mismatch]") +
              (shape_ok ? ", automaton equals the hand-built one" : " [automaton mismatch]")};
}

Outcome OracleEquivalence(CorpusTotals& totals) {
  auto start = Clock::now();
  testing::RandomCorpus gen(20261019);
  std::set<CelFormula::Kind> kinds;
  int done = 0, skipped = 0, cel_checked = 0, failures = 0;
  std::size_t complex_events = 0;
  std::string first_failure;
  while (done < kOraclePairs) {
    CelFormula f = gen.Formula(kOracleMaxDepth);
    Cea cea = Compile(f);
    Stream s = gen.RandomStream(gen.Uniform(0, kOracleMaxStream));
    EngineConfig c;
    c.window = gen.Window(kOracleMaxWindow);
    c.limit = 0;
    c.audit = true;
    c.prune_period = static_cast<std::size_t>(gen.Uniform(1, 8));
    try {
      ComplexEventSet runs = BruteRuns(cea, s, c.window);
      Emissions expected = GroupByEnd(WithinFilter(runs, c.window, s));
      bool ok = true;
      if (s.size() <= kOracleCelMaxStream) {
        ++cel_checked;
        ok = WithinFilter(Normalize(EvalCel(f, s, c.window)), c.window, s) ==
             WithinFilter(runs, c.window, s);
      }
      auto run = testing::RunEngine(cea, s, c);
      Tally(totals, run);
      ok = ok && run.duplicates == 0 && Diff(run.emissions, expected).empty();
      if (!ok && failures++ == 0) first_failure = f.ToString();
      testing::CollectKinds(f, &kinds);
      for (const auto& [j, cs] : expected) complex_events += cs.size();
      ++done;
    } catch (const GuardError&) {
      ++skipped;
    }
  }
  double secs = Seconds(start);
  bool pass = failures == 0 && kinds.size() == 7 && secs < kOracleSeconds;
  std::string d = Fmt("oracle equivalence: %.0f pairs (%.0f also against CEL semantics), ",
                      done, cel_checked) +
                  Fmt("%.0f complex events, %.0f/7 constructors, %.0f mismatches, ",
                      complex_events, kinds.size(), failures) +
                  Fmt("%.0f skipped by guards, %.1f s", skipped, secs);
  if (!first_failure.empty()) d += " first: " + first_failure;
  return {pass, d};
}

Outcome StructuralAudit(CorpusTotals& totals) {
  auto start = Clock::now();
  testing::RandomCorpus gen(77);
  while (totals.audited_events < kAuditEvents) {
    Cea cea = Compile(gen.Formula(kOracleMaxDepth));
    Stream s = gen.RandomStream(gen.Uniform(200, 2000));
    EngineConfig c;
    c.window = gen.Uniform(0, 20);
    c.limit = 1000;
    c.audit = true;
    c.prune_period = static_cast<std::size_t>(gen.Uniform(1, 50));
    Tally(totals, testing::RunEngine(cea, s, c));
  }
  return {totals.audit_violations == 0,
          Fmt("structural audit: %.0f events audited, %.0f violations, %.1f s",
              totals.audited_events, totals.audit_violations, Seconds(start))};
}

// Events per second of one engine over s, generation excluded.
struct Timing {
  double throughput = 0;
  std::size_t outputs = 0;
};

Timing TimeQuery(const std::string& text, const Stream& s) {
  PreparedQuery q = Prepare(text);
  Engine e(q.automaton, MakeEngineConfig(q));
  auto start = Clock::now();
  std::size_t outputs = 0;
  for (const auto& t : s) outputs += e.ProcessEvent(t);
  return {static_cast<double>(s.size()) / Seconds(start), outputs};
}

// Best of kRepetitions interleaved runs per query.
std::vector<Timing> Bench(const std::vector<std::string>& queries, const Stream& s) {
  std::vector<Timing> best(queries.size());
  for (int r = 0; r < kRepetitions; ++r) {
    for (std::size_t i = 0; i < queries.size(); ++i) {
      Timing t = TimeQuery(queries[i], s);
      best[i].outputs += t.outputs;
      best[i].throughput = std::max(best[i].throughput, t.throughput);
    }
  }
  return best;
}

Stream BenchStream(const GeneratorConfig& g) {
  Stream s = Generate(g);
  // Stock time is the window unit of every benchmark query.
  for (auto& t : s) t.time = t.Get("stock_time").as_int();
  return s;
}

Outcome WindowIndependence(const GeneratorConfig& g, const Stream& s) {
  auto t = Bench({SequenceQuery(g, 3, true, kWindowT, "[stock_time]"),
                  SequenceQuery(g, 3, true, 4 * kWindowT, "[stock_time]")},
                 s);
  double ratio = std::max(t[0].throughput, t[1].throughput) /
                 std::min(t[0].throughput, t[1].throughput);
  bool pass = ratio <= kWindowRatio && t[0].outputs == 0 && t[1].outputs == 0;
  return {pass, Fmt("window independence: %.0f e/s at T=%.0f, %.0f e/s at 4T, ratio %.2f",
                    t[0].throughput, kWindowT, t[1].throughput, ratio) +
                    Fmt(" (limit %.1f); soft target %.0f e/s ", kWindowRatio, kSoftThroughput) +
                    (std::min(t[0].throughput, t[1].throughput) >= kSoftThroughput ? "met"
                                                                                   : "missed")};
}

Outcome QueryLength(const GeneratorConfig& g, const Stream& s) {
  std::vector<std::string> queries;
  for (int n : {3, 6, 9, 12}) queries.push_back(SequenceQuery(g, n, true, kWindowT, "[stock_time]"));
  auto t = Bench(queries, s);
  bool outputs = std::all_of(t.begin(), t.end(), [](const Timing& x) { return x.outputs == 0; });
  bool pass = outputs && t[3].throughput >= t[0].throughput / kLengthRatio;
  return {pass, Fmt("query length: %.0f / %.0f / %.0f / %.0f e/s", t[0].throughput,
                    t[1].throughput, t[2].throughput, t[3].throughput) +
                    Fmt(" for n = 3/6/9/12, n=12 at %.2f of n=3 (floor %.3f)",
                        t[3].throughput / t[0].throughput, 1.0 / kLengthRatio)};
}

Outcome DelayProbe(const CorpusTotals& totals) {
  return {totals.delay_violations == 0 && totals.delay_emissions > 0,
          Fmt("enumeration delay: %.0f emissions probed, %.0f over the bound",
              totals.delay_emissions, totals.delay_violations)};
}

Outcome MemoryStability(const GeneratorConfig& g, const Stream& s) {
  PreparedQuery q = Prepare(SequenceQuery(g, 3, true, kWindowT, "[stock_time]"));
  Engine e(q.automaton, MakeEngineConfig(q));
  const std::size_t mark = s.size() / 10;
  std::size_t peak_at_mark = 0, peak_after = 0, running = 0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    e.ProcessEvent(s[i]);
    running = std::max(running, e.tecs().live_nodes());
    if (i + 1 == mark) peak_at_mark = running;
    if (i + 1 > mark) peak_after = std::max(peak_after, e.tecs().live_nodes());
  }
  bool pass = peak_at_mark > 0 &&
              static_cast<double>(peak_after) <= kMemoryGrowth * static_cast<double>(peak_at_mark);
  return {pass, Fmt("memory: peak %.0f live nodes by 10%%, %.0f afterwards (limit %.1fx), "
                    "%.0f outputs",
                    peak_at_mark, peak_after, kMemoryGrowth, e.stats().outputs)};
}

Outcome PartitionSoundness() {
  testing::RandomCorpus gen(8080);
  int failures = 0;
  std::size_t keys = 0, complex_events = 0;
  for (int i = 0; i < kKeyedStreams; ++i) {
    auto automaton = std::make_shared<const CompiledAutomaton>(Compile(gen.Formula(3)));
    Stream s = gen.RandomStream(gen.Uniform(0, 60));
    int num_keys = gen.Uniform(1, 5);
    for (auto& t : s) {
      if (!gen.Coin(0.05)) t.SetAttr("k", Value(gen.Uniform(0, num_keys - 1)));
    }
    EngineConfig c;
    c.window = gen.Window(12);
    c.limit = 0;
    c.prune_period = 4;
    Emissions got;
    Partitioner p(automaton, {"k"}, PartitionerConfig{c},
                  [&](int64_t j, const ComplexEvent& ce) { got[j].insert(ce); });
    for (const auto& t : s) p.Dispatch(t);
    std::map<std::string, Stream> by_key;
    for (const auto& t : s) {
      if (auto k = Route(t, {"k"})) by_key[k->encoded].push_back(t);
    }
    Emissions expected;
    for (const auto& [k, sub] : by_key) {
      auto run = testing::RunEngine(automaton, sub, c);
      for (const auto& [j, cs] : run.emissions) expected[j].insert(cs.begin(), cs.end());
    }
    keys += by_key.size();
    for (const auto& [j, cs] : expected) complex_events += cs.size();
    if (!Diff(got, expected).empty()) ++failures;
  }
  return {failures == 0, Fmt("partition soundness: %.0f keyed streams, %.0f keys, "
                             "%.0f complex events, %.0f mismatches",
                             kKeyedStreams, keys, complex_events, failures)};
}

int Main() {
  int failed = 0;
  auto report = [&](int n, const Outcome& o) {
    std::printf("[%s] criterion %d: %s\n", o.pass ? "PASS" : "FAIL", n, o.detail.c_str());
    std::fflush(stdout);
    failed += !o.pass;
  };
  CorpusTotals totals;
  report(1, WorkedExample());
  report(2, OracleEquivalence(totals));
  report(3, StructuralAudit(totals));

  GeneratorConfig g;
  g.seed = 1;
  g.events = kBenchEvents;
  Stream s = BenchStream(g);
  report(4, WindowIndependence(g, s));
  report(5, QueryLength(g, s));
  report(6, DelayProbe(totals));
  report(7, MemoryStability(g, s));
  report(8, PartitionSoundness());
  std::printf("%d of 8 criteria passed\n", 8 - failed);
  return failed == 0 ? 0 : 1;
}

}  // namespace
}  // namespace cer

int main() { return cer::Main(); }
