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

#include "cer/stream_io.h"

#include <algorithm>
#include <charconv>
#include <map>
#include <set>

#include <json.hpp>

#include "cer/errors.h"

namespace cer {
namespace {

using Json = nlohmann::ordered_json;

bool ParseInt(std::string_view s, int64_t* out) {
  if (s.empty()) return false;
  const char* b = s.data();
  if (*b == '+') ++b;
  auto [p, ec] = std::from_chars(b, s.data() + s.size(), *out);
  return ec == std::errc() && p == s.data() + s.size();
}

bool ParseDouble(std::string_view s, double* out) {
  if (s.empty()) return false;
  const char* b = s.data();
  if (*b == '+') ++b;
  auto [p, ec] = std::from_chars(b, s.data() + s.size(), *out);
  return ec == std::errc() && p == s.data() + s.size();
}

bool ParseBool(std::string_view s, bool* out) {
  if (s == "true" || s == "TRUE" || s == "True") {
    *out = true;
    return true;
  }
  if (s == "false" || s == "FALSE" || s == "False") {
    *out = false;
    return true;
  }
  return false;
}

Value ParseTyped(std::string_view cell, ValueKind kind, const std::string& column,
                 std::size_t row) {
  auto bad = [&]() -> Value {
    throw StreamError("column " + column + ": cannot read '" + std::string(cell) +
                          "' as " + std::string(ValueKindName(kind)),
                      row);
  };
  switch (kind) {
    case ValueKind::kInt: {
      int64_t v;
      return ParseInt(cell, &v) ? Value(v) : bad();
    }
    case ValueKind::kDouble: {
      double v;
      return ParseDouble(cell, &v) ? Value(v) : bad();
    }
    case ValueKind::kBool: {
      bool v;
      return ParseBool(cell, &v) ? Value(v) : bad();
    }
    case ValueKind::kString:
      return Value(std::string(cell));
    case ValueKind::kNull:
      break;
  }
  return Value();
}

}  // namespace

StreamFormat FormatForPath(std::string_view path) {
  auto ends = [&](std::string_view suf) {
    return path.size() >= suf.size() &&
           path.substr(path.size() - suf.size()) == suf;
  };
  return ends(".ndjson") || ends(".jsonl") ? StreamFormat::kNdjson
                                           : StreamFormat::kCsv;
}

Value InferValue(std::string_view cell) {
  if (cell.empty()) return Value();
  int64_t i;
  if (ParseInt(cell, &i)) return Value(i);
  double d;
  if (ParseDouble(cell, &d)) return Value(d);
  bool b;
  if (ParseBool(cell, &b)) return Value(b);
  return Value(std::string(cell));
}

// ---------------------------------------------------------------------------

CsvReader::CsvReader(std::istream& in, const Schema* schema)
    : in_(in), schema_(schema != nullptr && !schema->empty() ? schema : nullptr) {
  if (!ReadRecord(&header_)) throw StreamError("missing CSV header");
  row_ = 0;
  std::set<std::string> seen;
  for (std::size_t i = 0; i < header_.size(); ++i) {
    std::string& h = header_[i];
    h.erase(0, h.find_first_not_of(" \t"));
    h.erase(h.find_last_not_of(" \t") + 1);
    if (h.empty()) throw StreamError("empty column name in CSV header");
    if (!seen.insert(h).second) throw StreamError("duplicate column " + h);
    if (h == "type") type_col_ = static_cast<int>(i);
    if (h == "time") time_col_ = static_cast<int>(i);
  }
  if (type_col_ < 0) throw StreamError("CSV header has no type column");
}

bool CsvReader::ReadRecord(std::vector<std::string>* cells) {
  cells->clear();
  std::string line;
  // Skip blank lines between records.
  do {
    if (!std::getline(in_, line)) return false;
    if (!line.empty() && line.back() == '\r') line.pop_back();
  } while (line.empty());
  ++row_;
  std::string cell;
  bool quoted = false;
  std::size_t i = 0;
  while (true) {
    if (i == line.size()) {
      if (!quoted) break;
      // Quoted field spanning lines.
      std::string more;
      if (!std::getline(in_, more)) throw StreamError("unterminated quote", row_);
      if (!more.empty() && more.back() == '\r') more.pop_back();
      cell += '\n';
      line = std::move(more);
      i = 0;
      continue;
    }
    char c = line[i++];
    if (quoted) {
      if (c == '"') {
        if (i < line.size() && line[i] == '"') {
          cell += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        cell += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      cells->push_back(std::move(cell));
      cell.clear();
    } else {
      cell += c;
    }
  }
  cells->push_back(std::move(cell));
  return true;
}

bool CsvReader::Next(DataTuple* t) {
  std::vector<std::string> cells;
  if (!ReadRecord(&cells)) return false;
  if (cells.size() != header_.size()) {
    throw StreamError("expected " + std::to_string(header_.size()) +
                          " fields, found " + std::to_string(cells.size()),
                      row_);
  }
  *t = DataTuple();
  t->type = cells[type_col_];
  if (t->type.empty()) throw StreamError("empty event type", row_);
  if (schema_ != nullptr && !schema_->HasType(t->type)) {
    throw StreamError("undeclared event type " + t->type, row_);
  }
  t->position = position_++;
  t->time = t->position;
  if (time_col_ >= 0) {
    int64_t v;
    if (!ParseInt(cells[time_col_], &v)) {
      throw StreamError("time '" + cells[time_col_] + "' is not an integer", row_);
    }
    t->time = v;
  }
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (static_cast<int>(i) == type_col_ || static_cast<int>(i) == time_col_) continue;
    if (cells[i].empty()) continue;
    std::optional<ValueKind> kind;
    if (schema_ != nullptr) kind = schema_->AttrKind(t->type, header_[i]);
    t->SetAttr(header_[i], kind ? ParseTyped(cells[i], *kind, header_[i], row_)
                                : InferValue(cells[i]));
  }
  return true;
}

// ---------------------------------------------------------------------------

NdjsonReader::NdjsonReader(std::istream& in) : in_(in) {}

bool NdjsonReader::Next(DataTuple* t) {
  std::string line;
  do {
    if (!std::getline(in_, line)) return false;
    ++row_;
    line.erase(0, line.find_first_not_of(" \t\r"));
  } while (line.empty());
  Json j;
  try {
    j = Json::parse(line);
  } catch (const Json::parse_error& e) {
    throw StreamError(std::string("invalid JSON: ") + e.what(), row_);
  }
  if (!j.is_object()) throw StreamError("record is not a JSON object", row_);
  auto type = j.find("type");
  if (type == j.end() || !type->is_string()) {
    throw StreamError("record has no string type", row_);
  }
  *t = DataTuple();
  t->type = type->get<std::string>();
  t->position = position_++;
  t->time = t->position;
  bool has_time = j.contains("time");
  if (!has_time_) has_time_ = has_time;
  if (*has_time_ != has_time) {
    throw StreamError("time must be given on every record or on none", row_);
  }
  for (auto it = j.begin(); it != j.end(); ++it) {
    const std::string& k = it.key();
    const Json& v = it.value();
    if (k == "type") continue;
    if (k == "time") {
      if (!v.is_number_integer()) throw StreamError("time is not an integer", row_);
      t->time = v.get<int64_t>();
      continue;
    }
    if (v.is_null()) continue;
    if (v.is_boolean()) {
      t->SetAttr(k, Value(v.get<bool>()));
    } else if (v.is_number_integer()) {
      t->SetAttr(k, Value(v.get<int64_t>()));
    } else if (v.is_number()) {
      t->SetAttr(k, Value(v.get<double>()));
    } else if (v.is_string()) {
      t->SetAttr(k, Value(v.get<std::string>()));
    } else {
      throw StreamError("attribute " + k + " is not a scalar", row_);
    }
  }
  return true;
}

StreamData ReadStream(std::istream& in, StreamFormat format, const Schema* schema) {
  StreamData out;
  DataTuple t;
  if (format == StreamFormat::kCsv) {
    CsvReader r(in, schema);
    while (r.Next(&t)) out.tuples.push_back(std::move(t));
    out.has_time_column = r.has_time_column();
  } else {
    NdjsonReader r(in);
    while (r.Next(&t)) out.tuples.push_back(std::move(t));
    out.has_time_column = r.has_time_column();
  }
  return out;
}

void WriteCsv(std::ostream& out, const Stream& s, bool with_time) {
  std::set<std::string> names;
  for (const auto& t : s) {
    for (const auto& [k, v] : t.attrs) names.insert(k);
  }
  auto cell = [](const Value& v) -> std::string {
    switch (v.kind()) {
      case ValueKind::kNull: return "";
      case ValueKind::kString: {
        const std::string& x = v.as_string();
        if (x.find_first_of(",\"\n") == std::string::npos) return x;
        std::string q = "\"";
        for (char c : x) {
          if (c == '"') q += '"';
          q += c;
        }
        return q + "\"";
      }
      case ValueKind::kBool: return v.as_bool() ? "true" : "false";
      default: return v.ToLiteral();
    }
  };
  out << "type";
  if (with_time) out << ",time";
  for (const auto& n : names) out << "," << n;
  out << "\n";
  for (const auto& t : s) {
    out << t.type;
    if (with_time) out << "," << t.time;
    for (const auto& n : names) out << "," << cell(t.Get(n));
    out << "\n";
  }
}

// ---------------------------------------------------------------------------

void TupleBuffer::DropBefore(int64_t floor) {
  while (!tuples_.empty() && tuples_.front().time < floor) tuples_.pop_front();
}

const DataTuple* TupleBuffer::Find(int64_t position) const {
  if (tuples_.empty()) return nullptr;
  int64_t first = tuples_.front().position;
  if (position < first) return nullptr;
  auto idx = static_cast<std::size_t>(position - first);
  // Positions are dense in a single stream; partitioned echoes may not be.
  if (idx < tuples_.size() && tuples_[idx].position == position) return &tuples_[idx];
  auto it = std::lower_bound(
      tuples_.begin(), tuples_.end(), position,
      [](const DataTuple& t, int64_t p) { return t.position < p; });
  return it != tuples_.end() && it->position == position ? &*it : nullptr;
}

namespace {

Json ValueToJson(const Value& v) {
  switch (v.kind()) {
    case ValueKind::kNull: return nullptr;
    case ValueKind::kInt: return v.as_int();
    case ValueKind::kDouble: return v.as_double();
    case ValueKind::kString: return v.as_string();
    case ValueKind::kBool: return v.as_bool();
  }
  return nullptr;
}

Json TupleJson(const DataTuple& t) {
  Json j;
  j["type"] = t.type;
  for (const auto& [k, v] : t.attrs) j[k] = ValueToJson(v);
  j["position"] = t.position;
  j["time"] = t.time;
  return j;
}

}  // namespace

std::string TupleToJson(const DataTuple& t) { return TupleJson(t).dump(); }

std::string OutputRecord(const ComplexEvent& ce, const TupleBuffer* buffer) {
  Json j;
  j["end"] = ce.end;
  j["start"] = ce.start;
  j["positions"] = ce.data;
  if (buffer != nullptr) {
    Json events = Json::array();
    for (int64_t p : ce.data) {
      const DataTuple* t = buffer->Find(p);
      events.push_back(t != nullptr ? TupleJson(*t) : Json(nullptr));
    }
    j["events"] = std::move(events);
  }
  return j.dump();
}

}  // namespace cer
