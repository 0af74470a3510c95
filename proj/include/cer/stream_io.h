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

#ifndef CER_STREAM_IO_H_
#define CER_STREAM_IO_H_

#include <cstddef>
#include <cstdint>
#include <deque>
#include <istream>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "cer/ceql.h"
#include "cer/event.h"

namespace cer {

enum class StreamFormat { kCsv, kNdjson };

// .ndjson and .jsonl are NDJSON; anything else is CSV.
StreamFormat FormatForPath(std::string_view path);

// Reads tuples one at a time and gives them dense positions from 0. A time
// column, when present, fills DataTuple::time; otherwise time = position.
// Errors are StreamError carrying the 1-based data row.
class StreamReader {
 public:
  virtual ~StreamReader() = default;
  // False at end of input.
  virtual bool Next(DataTuple* t) = 0;
  virtual bool has_time_column() const = 0;
};

// CSV with a header row. The type column is required and time is optional;
// the other columns are attributes. With a non-empty schema, event types
// must be declared and declared attributes are parsed with their declared
// kind; otherwise cells are inferred as int, double, bool or string. Empty
// cells are missing attributes.
class CsvReader : public StreamReader {
 public:
  CsvReader(std::istream& in, const Schema* schema = nullptr);
  bool Next(DataTuple* t) override;
  bool has_time_column() const override { return time_col_ >= 0; }

 private:
  bool ReadRecord(std::vector<std::string>* cells);

  std::istream& in_;
  const Schema* schema_;
  std::vector<std::string> header_;
  int type_col_ = -1;
  int time_col_ = -1;
  std::size_t row_ = 0;
  int64_t position_ = 0;
};

// One JSON object per line with a string "type", an optional int "time",
// and scalar attributes. Either every record has "time" or none does.
class NdjsonReader : public StreamReader {
 public:
  explicit NdjsonReader(std::istream& in);
  bool Next(DataTuple* t) override;
  bool has_time_column() const override { return has_time_.value_or(false); }

 private:
  std::istream& in_;
  std::optional<bool> has_time_;
  std::size_t row_ = 0;
  int64_t position_ = 0;
};

struct StreamData {
  Stream tuples;
  bool has_time_column = false;
};

StreamData ReadStream(std::istream& in, StreamFormat format,
                      const Schema* schema = nullptr);

// Parses a CSV cell without a declared kind.
Value InferValue(std::string_view cell);

// Header type[,time],<attributes in name order>.
void WriteCsv(std::ostream& out, const Stream& s, bool with_time);

// Tuples by position for echoing in output records. Tuples older than the
// window floor can be dropped since no later output refers to them.
class TupleBuffer {
 public:
  void Push(const DataTuple& t) { tuples_.push_back(t); }
  // Drops tuples with time < floor.
  void DropBefore(int64_t floor);
  // Null if the position was dropped or never pushed.
  const DataTuple* Find(int64_t position) const;
  std::size_t size() const { return tuples_.size(); }

 private:
  std::deque<DataTuple> tuples_;
};

// {"end":j,"start":i,"positions":[...],"events":[...]} on one line. events
// echoes the tuples found in buffer; pass null to omit the field.
std::string OutputRecord(const ComplexEvent& ce, const TupleBuffer* buffer);

// A tuple as a JSON object: type, attributes in name order, position, time.
std::string TupleToJson(const DataTuple& t);

}  // namespace cer

#endif  // CER_STREAM_IO_H_
