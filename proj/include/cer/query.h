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

#ifndef CER_QUERY_H_
#define CER_QUERY_H_

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cer/ceql.h"
#include "cer/determinize.h"
#include "cer/engine.h"
#include "cer/event.h"

namespace cer {

// Where an event's time comes from.
enum class TimeMode {
  kPosition,    // time = position
  kTimeColumn,  // the input's time column, else position
  kAttribute,   // an int attribute named by WITHIN
};

// A parsed, validated and compiled query, ready to drive engines.
struct PreparedQuery {
  QueryAst ast;
  CelFormula formula = CelFormula::EventType("_");  // desugared WHERE
  std::shared_ptr<const CompiledAutomaton> automaton;
  std::optional<int64_t> window;  // in time units of time_mode
  TimeMode time_mode = TimeMode::kPosition;
  std::string time_attribute;
  std::vector<std::string> partition_by;
  ConsumePolicy consume = ConsumePolicy::kNone;
};

// Throws UnsupportedFeature for selection strategies other than the default.
PreparedQuery Prepare(const QueryAst& ast);
PreparedQuery Prepare(std::string_view text, const Schema* schema = nullptr);

// Engine settings implied by the query; limit, prune period and the rest keep
// their defaults.
EngineConfig MakeEngineConfig(const PreparedQuery& q);

// Time of t under q's time mode. has_time_column says whether t.time was
// read from the input. Throws StreamError when the time attribute is not an
// int.
int64_t TimeOf(const DataTuple& t, const PreparedQuery& q, bool has_time_column);

// Applies TimeOf to every tuple and checks that times do not decrease.
void AssignTimes(Stream& s, const PreparedQuery& q, bool has_time_column);

}  // namespace cer

#endif  // CER_QUERY_H_
