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

#include "cer/query.h"

#include "cer/cea.h"
#include "cer/errors.h"

namespace cer {

PreparedQuery Prepare(const QueryAst& ast) {
  if (ast.strategy != Strategy::kDefault) {
    throw UnsupportedFeature("selection strategy " +
                             std::string(StrategyName(ast.strategy)) +
                             " is not supported");
  }
  PreparedQuery q;
  q.ast = ast;
  q.formula = Desugar(ast);
  q.automaton = std::make_shared<const CompiledAutomaton>(Compile(q.formula));
  q.partition_by = ast.partition_by;
  q.consume = ast.consume.value_or(ConsumePolicy::kNone);
  if (ast.within) {
    const WithinClause& w = *ast.within;
    switch (w.unit) {
      case TimeUnit::kEvents:
        q.window = w.magnitude;
        q.time_mode = TimeMode::kPosition;
        break;
      case TimeUnit::kSeconds:
        q.window = w.magnitude;
        q.time_mode = TimeMode::kTimeColumn;
        break;
      case TimeUnit::kMinutes:
        q.window = w.magnitude * 60;
        q.time_mode = TimeMode::kTimeColumn;
        break;
      case TimeUnit::kHours:
        q.window = w.magnitude * 3600;
        q.time_mode = TimeMode::kTimeColumn;
        break;
      case TimeUnit::kAttribute:
        q.window = w.magnitude;
        q.time_mode = TimeMode::kAttribute;
        q.time_attribute = w.attribute;
        break;
    }
  }
  return q;
}

PreparedQuery Prepare(std::string_view text, const Schema* schema) {
  return Prepare(ParseQuery(text, schema));
}

EngineConfig MakeEngineConfig(const PreparedQuery& q) {
  EngineConfig c;
  c.window = q.window;
  c.consume = q.consume;
  return c;
}

int64_t TimeOf(const DataTuple& t, const PreparedQuery& q, bool has_time_column) {
  switch (q.time_mode) {
    case TimeMode::kPosition:
      return t.position;
    case TimeMode::kTimeColumn:
      return has_time_column ? t.time : t.position;
    case TimeMode::kAttribute: {
      const Value& v = t.Get(q.time_attribute);
      if (v.kind() != ValueKind::kInt) {
        throw StreamError("time attribute " + q.time_attribute +
                              " is missing or not an int",
                          static_cast<std::size_t>(t.position) + 1);
      }
      return v.as_int();
    }
  }
  return t.position;
}

void AssignTimes(Stream& s, const PreparedQuery& q, bool has_time_column) {
  for (std::size_t i = 0; i < s.size(); ++i) {
    s[i].time = TimeOf(s[i], q, has_time_column);
    if (i > 0 && s[i].time < s[i - 1].time) {
      throw StreamError("time decreases from " + std::to_string(s[i - 1].time) +
                            " to " + std::to_string(s[i].time),
                        i + 1);
    }
  }
}

}  // namespace cer
