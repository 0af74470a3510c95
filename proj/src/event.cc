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

#include "cer/event.h"

#include <algorithm>
#include <sstream>

namespace cer {
namespace {

const Value& NullValue() {
  static const Value kNull;
  return kNull;
}

}  // namespace

DataTuple::DataTuple(std::string type_name,
                     std::vector<std::pair<std::string, Value>> attributes,
                     int64_t pos, int64_t t)
    : type(std::move(type_name)), position(pos), time(t) {
  for (auto& [k, v] : attributes) SetAttr(std::move(k), std::move(v));
}

const Value& DataTuple::Get(std::string_view name) const {
  for (const auto& [k, v] : attrs) {
    if (k == name) return v;
  }
  return NullValue();
}

void DataTuple::SetAttr(std::string name, Value v) {
  auto it = std::lower_bound(
      attrs.begin(), attrs.end(), name,
      [](const auto& a, const std::string& n) { return a.first < n; });
  if (it != attrs.end() && it->first == name) {
    it->second = std::move(v);
  } else {
    attrs.emplace(it, std::move(name), std::move(v));
  }
}

void AssignPositions(Stream& s, bool keep_times) {
  for (std::size_t i = 0; i < s.size(); ++i) {
    s[i].position = static_cast<int64_t>(i);
    if (!keep_times) s[i].time = static_cast<int64_t>(i);
  }
}

std::string ComplexEvent::ToString() const {
  std::ostringstream os;
  os << "([" << start << "," << end << "],{";
  for (std::size_t i = 0; i < data.size(); ++i) {
    if (i) os << ",";
    os << data[i];
  }
  os << "})";
  return os.str();
}

std::string Valuation::ToString() const {
  std::ostringstream os;
  os << "([" << start << "," << end << "],{";
  bool first = true;
  for (const auto& [var, pos] : vars) {
    if (!first) os << ", ";
    first = false;
    os << var << "->{";
    bool f2 = true;
    for (int64_t p : pos) {
      if (!f2) os << ",";
      f2 = false;
      os << p;
    }
    os << "}";
  }
  os << "})";
  return os.str();
}

ComplexEvent NormalizeValuation(const Valuation& v) {
  ComplexEvent c;
  c.start = v.start;
  c.end = v.end;
  for (const auto& [var, pos] : v.vars) {
    c.data.insert(c.data.end(), pos.begin(), pos.end());
  }
  std::sort(c.data.begin(), c.data.end());
  c.data.erase(std::unique(c.data.begin(), c.data.end()), c.data.end());
  return c;
}

}  // namespace cer
