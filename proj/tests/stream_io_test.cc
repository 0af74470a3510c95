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

#include <functional>
#include <sstream>
#include <string>

#include "cer/ceql.h"
#include "cer/errors.h"
#include "cer/stream_io.h"
#include "json.hpp"

namespace cer {
namespace {

StreamData Csv(const std::string& text, const Schema* schema = nullptr) {
  std::istringstream in(text);
  return ReadStream(in, StreamFormat::kCsv, schema);
}

StreamData Ndjson(const std::string& text) {
  std::istringstream in(text);
  return ReadStream(in, StreamFormat::kNdjson);
}

std::size_t ErrorRow(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const StreamError& e) {
    return e.row();
  }
  ADD_FAILURE() << "no StreamError";
  return 0;
}

TEST(StreamIoTest, FormatFromExtension) {
  EXPECT_EQ(FormatForPath("a.ndjson"), StreamFormat::kNdjson);
  EXPECT_EQ(FormatForPath("a.jsonl"), StreamFormat::kNdjson);
  EXPECT_EQ(FormatForPath("a.csv"), StreamFormat::kCsv);
  EXPECT_EQ(FormatForPath("a"), StreamFormat::kCsv);
}

TEST(StreamIoTest, CsvInfersCells) {
  StreamData d = Csv("type,name,price,ok,ratio\nSELL,MSFT,101,true,0.5\nBUY,,7,false,-2\n");
  ASSERT_EQ(d.tuples.size(), 2u);
  EXPECT_FALSE(d.has_time_column);
  const DataTuple& a = d.tuples[0];
  EXPECT_EQ(a.type, "SELL");
  EXPECT_EQ(a.Get("name"), Value("MSFT"));
  EXPECT_EQ(a.Get("price"), Value(101));
  EXPECT_EQ(a.Get("ok"), Value(true));
  EXPECT_EQ(a.Get("ratio"), Value(0.5));
  EXPECT_EQ(a.position, 0);
  EXPECT_EQ(a.time, 0);
  EXPECT_TRUE(d.tuples[1].Get("name").is_null());
  EXPECT_EQ(d.tuples[1].position, 1);
}

TEST(StreamIoTest, InferValue) {
  EXPECT_EQ(InferValue("42"), Value(42));
  EXPECT_EQ(InferValue("-3"), Value(-3));
  EXPECT_EQ(InferValue("1.25"), Value(1.25));
  EXPECT_EQ(InferValue("false"), Value(false));
  EXPECT_EQ(InferValue("12ab"), Value("12ab"));
}

TEST(StreamIoTest, CsvQuotedFields) {
  StreamData d = Csv("type,name\nSELL,\"a,b\"\nSELL,\"say \"\"hi\"\"\"\nSELL,\"two\nlines\"\n");
  ASSERT_EQ(d.tuples.size(), 3u);
  EXPECT_EQ(d.tuples[0].Get("name"), Value("a,b"));
  EXPECT_EQ(d.tuples[1].Get("name"), Value("say \"hi\""));
  EXPECT_EQ(d.tuples[2].Get("name"), Value("two\nlines"));
}

TEST(StreamIoTest, CsvTimeColumn) {
  StreamData d = Csv("type,time,v\nA,10,1\nA,12,2\n");
  EXPECT_TRUE(d.has_time_column);
  EXPECT_EQ(d.tuples[1].time, 12);
  EXPECT_TRUE(d.tuples[1].Get("time").is_null());
}

TEST(StreamIoTest, CsvErrorsCarryRows) {
  EXPECT_EQ(ErrorRow([] { Csv("type,v\nA,1\nA,1,2\n"); }), 2u);
  EXPECT_EQ(ErrorRow([] { Csv("type,v\nA,1\n,1\n"); }), 2u);
  EXPECT_EQ(ErrorRow([] { Csv("type,time\nA,1\nA,x\n"); }), 2u);
  EXPECT_EQ(ErrorRow([] { Csv("type,v\nA,\"open\n"); }), 1u);
  EXPECT_THROW(Csv("name,v\nA,1\n"), StreamError);
}

TEST(StreamIoTest, CsvWithSchema) {
  Schema s = Schema::Parse("DECLARE EVENT SELL(name:string, price:double)");
  StreamData d = Csv("type,name,price\nSELL,123,5\n", &s);
  EXPECT_EQ(d.tuples[0].Get("name"), Value("123"));
  EXPECT_EQ(d.tuples[0].Get("price"), Value(5.0));
  EXPECT_EQ(ErrorRow([&] { Csv("type,name,price\nSELL,a,1\nBUY,a,1\n", &s); }), 2u);
  EXPECT_EQ(ErrorRow([&] { Csv("type,name,price\nSELL,a,cheap\n", &s); }), 1u);
}

TEST(StreamIoTest, Ndjson) {
  StreamData d = Ndjson(
      "{\"type\":\"SELL\",\"name\":\"MSFT\",\"price\":101}\n"
      "\n"
      "{\"type\":\"BUY\",\"price\":2.5,\"ok\":true,\"gone\":null}\n");
  ASSERT_EQ(d.tuples.size(), 2u);
  EXPECT_FALSE(d.has_time_column);
  EXPECT_EQ(d.tuples[0].Get("price"), Value(101));
  EXPECT_EQ(d.tuples[1].Get("price"), Value(2.5));
  EXPECT_EQ(d.tuples[1].Get("ok"), Value(true));
  EXPECT_TRUE(d.tuples[1].Get("gone").is_null());
  EXPECT_EQ(d.tuples[1].position, 1);

  StreamData t = Ndjson("{\"type\":\"A\",\"time\":4}\n{\"type\":\"A\",\"time\":9}\n");
  EXPECT_TRUE(t.has_time_column);
  EXPECT_EQ(t.tuples[1].time, 9);
}

TEST(StreamIoTest, NdjsonErrors) {
  EXPECT_EQ(ErrorRow([] { Ndjson("{\"type\":\"A\"}\n{bad\n"); }), 2u);
  EXPECT_EQ(ErrorRow([] { Ndjson("{\"name\":\"A\"}\n"); }), 1u);
  EXPECT_EQ(ErrorRow([] { Ndjson("{\"type\":\"A\",\"time\":1}\n{\"type\":\"A\"}\n"); }), 2u);
  EXPECT_EQ(ErrorRow([] { Ndjson("{\"type\":\"A\",\"v\":[1]}\n"); }), 1u);
}

TEST(StreamIoTest, CsvRoundTrip) {
  StreamData d = Csv("type,time,name,price\nSELL,3,\"x,y\",1.5\nBUY,4,,2\n");
  std::ostringstream out;
  WriteCsv(out, d.tuples, true);
  StreamData e = Csv(out.str());
  ASSERT_EQ(e.tuples.size(), d.tuples.size());
  for (std::size_t i = 0; i < d.tuples.size(); ++i) {
    EXPECT_EQ(e.tuples[i].type, d.tuples[i].type);
    EXPECT_EQ(e.tuples[i].time, d.tuples[i].time);
    EXPECT_EQ(e.tuples[i].Get("name"), d.tuples[i].Get("name"));
    EXPECT_EQ(e.tuples[i].Get("price"), d.tuples[i].Get("price"));
  }
}

TEST(StreamIoTest, TupleBuffer) {
  TupleBuffer b;
  for (int i = 0; i < 5; ++i) {
    DataTuple t("A", {});
    t.position = i;
    t.time = 10 * i;
    b.Push(t);
  }
  ASSERT_NE(b.Find(3), nullptr);
  EXPECT_EQ(b.Find(3)->time, 30);
  b.DropBefore(25);
  EXPECT_EQ(b.size(), 2u);
  EXPECT_EQ(b.Find(2), nullptr);
  EXPECT_NE(b.Find(4), nullptr);
  EXPECT_EQ(b.Find(9), nullptr);
}

TEST(StreamIoTest, OutputRecord) {
  TupleBuffer b;
  DataTuple t("SELL", {{"name", "MSFT"}});
  t.position = 2;
  t.time = 2;
  b.Push(t);
  ComplexEvent ce{0, 2, {2}};
  auto j = nlohmann::json::parse(OutputRecord(ce, &b));
  EXPECT_EQ(j["end"], 2);
  EXPECT_EQ(j["start"], 0);
  EXPECT_EQ(j["positions"], nlohmann::json::array({2}));
  EXPECT_EQ(j["events"][0]["type"], "SELL");
  EXPECT_EQ(j["events"][0]["name"], "MSFT");
  auto k = nlohmann::json::parse(OutputRecord(ce, nullptr));
  EXPECT_FALSE(k.contains("events"));
  EXPECT_EQ(OutputRecord(ce, nullptr).find('\n'), std::string::npos);
}

}  // namespace
}  // namespace cer
