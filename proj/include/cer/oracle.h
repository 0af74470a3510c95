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

#ifndef CER_ORACLE_H_
#define CER_ORACLE_H_

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>

#include "cer/cea.h"
#include "cer/ceql.h"
#include "cer/event.h"
#include "cer/query.h"

namespace cer {

// Brute-force reference evaluators for small inputs. They work from the
// definitions directly and share no code with the engine beyond predicate
// evaluation.

// Complex events keyed by end position.
using Emissions = std::map<int64_t, ComplexEventSet>;

inline constexpr std::size_t kMaxCelStream = 20;
inline constexpr std::size_t kMaxRunStream = 30;

// Valuation semantics of f over s. Positions in the result are the tuples'
// position fields. Valuations whose time span exceeds max_span are dropped
// as soon as they appear; no operator narrows a span, so this only saves
// work. Throws GuardError if s is longer than kMaxCelStream or more than
// budget valuations are built.
std::set<Valuation> EvalCel(const CelFormula& f, const Stream& s,
                            std::optional<int64_t> max_span = std::nullopt,
                            std::size_t budget = 2'000'000);

ComplexEventSet Normalize(const std::set<Valuation>& vs);

// Complex events of all accepting runs of a over s, by exhaustive expansion
// from every start. Same span pruning and guards as EvalCel, with
// kMaxRunStream as the length limit.
ComplexEventSet BruteRuns(const Cea& a, const Stream& s,
                          std::optional<int64_t> max_span = std::nullopt,
                          std::size_t budget = 20'000'000);

// Keeps events with time(end) - time(start) <= window; times are looked up
// by position in s. No window keeps everything.
ComplexEventSet WithinFilter(const ComplexEventSet& cs,
                             std::optional<int64_t> window, const Stream& s);

Emissions GroupByEnd(const ComplexEventSet& cs);

// Expected output of a prepared query over s (times already assigned):
// partitioning, runs, window and consumption policy.
Emissions QueryOracle(const PreparedQuery& q, const Stream& s);

struct OracleDiff {
  Emissions only_engine;
  Emissions only_oracle;

  bool empty() const { return only_engine.empty() && only_oracle.empty(); }
  std::string ToString() const;
};

OracleDiff Diff(const Emissions& engine, const Emissions& oracle);

}  // namespace cer

#endif  // CER_ORACLE_H_
