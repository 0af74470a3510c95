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

#ifndef CER_EVENT_H_
#define CER_EVENT_H_

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "cer/value.h"

namespace cer {

// One stream event.
struct DataTuple {
  std::string type;
  // Kept sorted by name; see SetAttr.
  std::vector<std::pair<std::string, Value>> attrs;
  int64_t position = 0;
  int64_t time = 0;

  DataTuple() = default;
  DataTuple(std::string type_name,
            std::vector<std::pair<std::string, Value>> attributes,
            int64_t pos = 0, int64_t t = 0);

  // Null when absent.
  const Value& Get(std::string_view name) const;
  void SetAttr(std::string name, Value v);
};

using Stream = std::vector<DataTuple>;

// Gives a stream dense positions and, unless keep_times, time = position.
void AssignPositions(Stream& s, bool keep_times = false);

struct ComplexEvent {
  int64_t start = 0;
  int64_t end = 0;
  std::vector<int64_t> data;  // sorted, unique

  friend bool operator==(const ComplexEvent&, const ComplexEvent&) = default;
  friend auto operator<=>(const ComplexEvent&, const ComplexEvent&) = default;
  std::string ToString() const;
};

using ComplexEventSet = std::set<ComplexEvent>;

struct Valuation {
  int64_t start = 0;
  int64_t end = 0;
  // Variables with an empty set are omitted, so equal valuations compare
  // equal regardless of which empty variables were mentioned.
  std::map<std::string, std::set<int64_t>> vars;

  friend bool operator==(const Valuation&, const Valuation&) = default;
  friend auto operator<=>(const Valuation&, const Valuation&) = default;
  std::string ToString() const;
};

ComplexEvent NormalizeValuation(const Valuation& v);

}  // namespace cer

#endif  // CER_EVENT_H_
