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

#include "cer/cli.h"

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <fstream>
#include <iterator>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "cer/errors.h"
#include "cer/generator.h"
#include "cer/oracle.h"
#include "cer/partition.h"
#include "cer/query.h"
#include "cer/stream_io.h"

namespace cer {
namespace {

using Json = nlohmann::ordered_json;
using Clock = std::chrono::steady_clock;

std::string ReadFile(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw Error("cannot open " + path);
  return std::string(std::istreambuf_iterator<char>(f), {});
}

bool LooksLikeQuery(const std::string& s) {
  std::size_t i = s.find_first_not_of(" \t\r\n");
  if (i == std::string::npos || s.size() - i < 6) return false;
  std::string head = s.substr(i, 6);
  for (char& c : head) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return head == "SELECT";
}

struct QueryOptions {
  std::string schema_path;
  std::string query;
  std::string stream_path = "-";
  std::optional<int64_t> within_override;
  std::size_t limit = 1000;
  std::string consume;
  std::size_t prune_period = 10000;
};

struct Loaded {
  Schema schema;
  PreparedQuery query;
  EngineConfig engine;
};

Loaded Load(const QueryOptions& o) {
  Loaded l;
  if (!o.schema_path.empty()) l.schema = Schema::Parse(ReadFile(o.schema_path));
  if (o.query.empty()) throw Error("--query is required");
  std::string text = LooksLikeQuery(o.query) ? o.query : ReadFile(o.query);
  l.query = Prepare(text, l.schema.empty() ? nullptr : &l.schema);
  if (o.within_override) {
    if (*o.within_override < 0) throw Error("--within-override must be >= 0");
    l.query.window = *o.within_override;
  }
  if (o.consume == "none") l.query.consume = ConsumePolicy::kNone;
  if (o.consume == "any") l.query.consume = ConsumePolicy::kAny;
  l.engine = MakeEngineConfig(l.query);
  l.engine.limit = o.limit;
  l.engine.prune_period = o.prune_period;
  return l;
}

void AddQueryOptions(CLI::App* cmd, QueryOptions& o) {
  cmd->add_option("--schema", o.schema_path, "Event declarations (DECLARE EVENT ...)");
  cmd->add_option("--query", o.query, "Query file, or query text starting with SELECT")
      ->required();
  cmd->add_option("--stream", o.stream_path, "CSV or NDJSON input; - for stdin");
  cmd->add_option("--within-override", o.within_override,
                  "Replace the query's window, in its time units");
  cmd->add_option("--limit", o.limit, "Complex events per trigger; 0 = unlimited");
  cmd->add_option("--consume", o.consume, "Override the consumption policy")
      ->check(CLI::IsMember({"none", "any"}));
  cmd->add_option("--prune-period", o.prune_period, "Events between prunes");
}

// Opens the stream option, falling back to in for "-".
struct Input {
  std::ifstream file;
  std::istream* stream = nullptr;
  StreamFormat format = StreamFormat::kCsv;
};

void OpenInput(const std::string& path, std::istream& in, Input* input) {
  if (path == "-") {
    input->stream = &in;
    // Sniff: NDJSON records start with '{'.
    int c;
    while ((c = in.peek()) != EOF && std::isspace(c)) in.get();
    input->format = c == '{' ? StreamFormat::kNdjson : StreamFormat::kCsv;
    return;
  }
  input->file.open(path, std::ios::binary);
  if (!input->file) throw Error("cannot open " + path);
  input->stream = &input->file;
  input->format = FormatForPath(path);
}

std::unique_ptr<StreamReader> MakeReader(Input& input, const Schema& schema) {
  if (input.format == StreamFormat::kNdjson) {
    return std::make_unique<NdjsonReader>(*input.stream);
  }
  return std::make_unique<CsvReader>(*input.stream, schema.empty() ? nullptr : &schema);
}

Json StatsJson(const Partitioner& p, const EngineStats& s) {
  Json j;
  j["events"] = s.events;
  j["outputs"] = s.outputs;
  j["engines"] = p.num_engines();
  j["engines_evicted"] = p.engines_evicted();
  j["unrouted"] = p.unrouted();
  j["live_nodes"] = p.live_nodes();
  j["det_states"] = p.det_states();
  j["prunes"] = s.prunes;
  j["max_active_states"] = s.max_active_states;
  j["max_list_length"] = s.max_list_length;
  return j;
}

// ---------------------------------------------------------------------------

struct RunOptions {
  QueryOptions q;
  std::string output = "-";
  bool stats = false;
  bool no_echo = false;
  std::size_t workers = 0;
  std::size_t eviction_period = 0;
};

int CmdRun(const RunOptions& o, std::istream& in, std::ostream& out, std::ostream& err) {
  Loaded l = Load(o.q);
  Input input;
  OpenInput(o.q.stream_path, in, &input);
  std::ofstream file;
  std::ostream* sink_out = &out;
  if (o.output != "-") {
    file.open(o.output, std::ios::binary);
    if (!file) throw Error("cannot open " + o.output);
    sink_out = &file;
  }
  auto reader = MakeReader(input, l.schema);
  PartitionerConfig pc{l.engine, o.eviction_period};
  TupleBuffer buffer;
  const TupleBuffer* echo = o.no_echo ? nullptr : &buffer;
  OutputSink sink = [&](int64_t, const ComplexEvent& ce) {
    *sink_out << OutputRecord(ce, echo) << "\n";
  };

  if (o.workers > 0) {
    // Workers read the buffer concurrently, so fill it before starting.
    DataTuple t;
    Stream all;
    while (reader->Next(&t)) all.push_back(std::move(t));
    AssignTimes(all, l.query, reader->has_time_column());
    for (const auto& x : all) buffer.Push(x);
    ParallelPartitioner pp(l.query.automaton, l.query.partition_by, pc, o.workers, sink);
    for (const auto& x : all) pp.Dispatch(x);
    pp.Finish();
    if (o.stats) {
      EngineStats s = pp.AggregateStats();
      Json j;
      j["events"] = s.events;
      j["outputs"] = s.outputs;
      j["workers"] = o.workers;
      err << j.dump() << "\n";
    }
    return kExitOk;
  }

  Partitioner p(l.query.automaton, l.query.partition_by, pc, sink);
  DataTuple t;
  while (reader->Next(&t)) {
    t.time = TimeOf(t, l.query, reader->has_time_column());
    if (echo != nullptr) {
      if (l.query.window) buffer.DropBefore(WindowFloor(t.time, l.query.window));
      buffer.Push(t);
    }
    try {
      p.Dispatch(t);
    } catch (const StreamError& e) {
      throw StreamError(e.what(), static_cast<std::size_t>(t.position) + 1);
    }
  }
  sink_out->flush();
  if (o.stats) err << StatsJson(p, p.AggregateStats()).dump() << "\n";
  return kExitOk;
}

// ---------------------------------------------------------------------------

struct CheckOptions {
  QueryOptions q;
  std::size_t max_len = kMaxRunStream;
  bool inject_fault = false;
};

int CmdCheck(const CheckOptions& o, std::istream& in, std::ostream& out) {
  Loaded l = Load(o.q);
  l.engine.limit = 0;
  l.engine.audit = true;
  Input input;
  OpenInput(o.q.stream_path, in, &input);
  auto reader = MakeReader(input, l.schema);
  Stream s;
  DataTuple t;
  while (reader->Next(&t)) {
    s.push_back(std::move(t));
    if (s.size() > std::min(o.max_len, kMaxRunStream)) {
      throw GuardError("stream longer than " +
                       std::to_string(std::min(o.max_len, kMaxRunStream)) +
                       " events; the oracle is exponential");
    }
  }
  AssignTimes(s, l.query, reader->has_time_column());

  Emissions engine;
  Partitioner p(l.query.automaton, l.query.partition_by, PartitionerConfig{l.engine, 0},
                [&](int64_t j, const ComplexEvent& ce) { engine[j].insert(ce); });
  for (const auto& x : s) p.Dispatch(x);
  if (o.inject_fault) {
    // Negative control: lose one emission, or invent one if there are none.
    if (!engine.empty()) {
      auto& last = engine.rbegin()->second;
      last.erase(std::prev(last.end()));
      if (last.empty()) engine.erase(std::prev(engine.end()));
    } else if (!s.empty()) {
      engine[s.back().position].insert(
          ComplexEvent{s.back().position, s.back().position, {s.back().position}});
    }
  }
  Emissions oracle = QueryOracle(l.query, s);
  OracleDiff d = Diff(engine, oracle);
  std::size_t n = 0;
  for (const auto& [j, cs] : oracle) n += cs.size();
  if (!d.empty()) {
    out << "mismatch\n" << d.ToString();
    return kExitMismatch;
  }
  if (p.AuditViolations() != 0) {
    out << "mismatch: " << p.AuditViolations() << " structural violations\n";
    return kExitMismatch;
  }
  out << "ok: " << n << " complex events over " << s.size() << " events\n";
  return kExitOk;
}

// ---------------------------------------------------------------------------

struct GenOptions {
  GeneratorConfig g;
  std::string output = "-";
  std::size_t query_length = 0;
  bool never_matching = false;
  int64_t window = 10;
  std::string window_unit = "[stock_time]";
  std::string query_output;
};

int CmdGen(const GenOptions& o, std::ostream& out) {
  if (o.g.types.empty()) throw Error("--types must not be empty");
  if (o.g.plant_rate < 0 || o.g.plant_rate > 1) throw Error("--plant-rate must be in [0, 1]");
  Stream s = Generate(o.g);
  if (o.output == "-") {
    WriteCsv(out, s, false);
  } else {
    std::ofstream f(o.output, std::ios::binary);
    if (!f) throw Error("cannot open " + o.output);
    WriteCsv(f, s, false);
  }
  if (o.query_length > 0) {
    std::string q = SequenceQuery(o.g, o.query_length, o.never_matching, o.window,
                                  o.window_unit) + "\n";
    if (o.query_output.empty()) {
      throw Error("--query-length needs --query-out");
    }
    std::ofstream f(o.query_output, std::ios::binary);
    if (!f) throw Error("cannot open " + o.query_output);
    f << q;
  }
  return kExitOk;
}

// ---------------------------------------------------------------------------

struct BenchOptions {
  QueryOptions q;
  double duration = 30.0;
  double stall_ms = 1000.0;
  std::size_t gen_events = 0;
  uint64_t seed = 1;
};

int CmdBench(const BenchOptions& o, std::istream& in, std::ostream& out) {
  Loaded l = Load(o.q);
  Stream s;
  bool has_time = false;
  if (o.gen_events > 0) {
    GeneratorConfig g;
    g.seed = o.seed;
    g.events = o.gen_events;
    s = Generate(g);
  } else {
    Input input;
    OpenInput(o.q.stream_path, in, &input);
    StreamData d = ReadStream(*input.stream, input.format,
                              l.schema.empty() ? nullptr : &l.schema);
    s = std::move(d.tuples);
    has_time = d.has_time_column;
  }
  AssignTimes(s, l.query, has_time);

  Partitioner p(l.query.automaton, l.query.partition_by, PartitionerConfig{l.engine, 0});
  std::size_t peak_live = 0;
  std::string status = "complete";
  const auto deadline = std::chrono::duration<double>(o.duration);
  const auto stall = std::chrono::duration<double, std::milli>(o.stall_ms);
  constexpr std::size_t kBatch = 256;
  const auto start = Clock::now();
  auto batch_start = start;
  std::size_t processed = 0;
  for (const auto& t : s) {
    p.Dispatch(t);
    ++processed;
    if (processed % kBatch == 0) {
      auto now = Clock::now();
      peak_live = std::max(peak_live, p.live_nodes());
      if (now - batch_start > stall) {
        status = "stalled";
        break;
      }
      batch_start = now;
      if (now - start >= deadline) {
        status = "duration";
        break;
      }
    }
  }
  const double elapsed = std::chrono::duration<double>(Clock::now() - start).count();
  peak_live = std::max(peak_live, p.live_nodes());
  EngineStats st = p.AggregateStats();
  std::size_t hits = 0, misses = 0;
  p.ForEachEngine([&](const PartitionKey&, const Engine& e) {
    hits += e.determinizer().stats().cache_hits;
    misses += e.determinizer().stats().cache_misses;
  });
  Json j;
  j["status"] = status;
  j["events"] = processed;
  j["elapsed_s"] = elapsed;
  j["throughput"] = elapsed > 0 ? static_cast<double>(processed) / elapsed : 0.0;
  j["outputs"] = st.outputs;
  j["peak_live_nodes"] = peak_live;
  j["det_states"] = p.det_states();
  j["cache_hit_rate"] =
      hits + misses > 0 ? static_cast<double>(hits) / static_cast<double>(hits + misses) : 0.0;
  j["window"] = l.query.window ? Json(*l.query.window) : Json(nullptr);
  out << j.dump(2) << "\n";
  return kExitOk;
}

}  // namespace

int RunCli(int argc, const char* const* argv, std::istream& in, std::ostream& out,
           std::ostream& err) {
  CLI::App app{"Complex event recognition over event streams"};
  app.require_subcommand(1);

  RunOptions run;
  auto* run_cmd = app.add_subcommand("run", "Evaluate a query over a stream");
  AddQueryOptions(run_cmd, run.q);
  run_cmd->add_option("--output", run.output, "Output file; - for stdout");
  run_cmd->add_flag("--stats", run.stats, "Print engine statistics to stderr");
  run_cmd->add_flag("--no-echo", run.no_echo, "Omit the events field");
  run_cmd->add_option("--workers", run.workers,
                      "Partition-parallel worker threads; 0 = sequential");
  run_cmd->add_option("--evict-period", run.eviction_period,
                      "Events between idle-partition sweeps; 0 = never");

  CheckOptions check;
  auto* check_cmd = app.add_subcommand("check", "Compare the engine with the oracle");
  AddQueryOptions(check_cmd, check.q);
  check_cmd->add_option("--max-len", check.max_len, "Longest stream accepted");
  check_cmd->add_flag("--inject-fault", check.inject_fault)->group("");

  GenOptions gen;
  std::string types, symbols;
  auto* gen_cmd = app.add_subcommand("gen", "Generate a synthetic stock stream");
  gen_cmd->add_option("--seed", gen.g.seed, "Random seed");
  gen_cmd->add_option("--events", gen.g.events, "Number of events");
  gen_cmd->add_option("--types", types, "Comma-separated event types");
  gen_cmd->add_option("--symbols", symbols, "Comma-separated name values");
  gen_cmd->add_option("--plant-rate", gen.g.plant_rate,
                      "Chance per position of planting a pattern occurrence");
  gen_cmd->add_option("--plant-length", gen.g.plant_length, "Planted pattern length");
  gen_cmd->add_option("--max-time-step", gen.g.max_time_step, "Largest stock_time step");
  gen_cmd->add_option("--output", gen.output, "Output CSV; - for stdout");
  gen_cmd->add_option("--query-length", gen.query_length,
                      "Also write a sequence query of this length");
  gen_cmd->add_flag("--never-matching", gen.never_matching,
                    "Append a step that never matches");
  gen_cmd->add_option("--window", gen.window, "Query window magnitude");
  gen_cmd->add_option("--window-unit", gen.window_unit, "Query window unit");
  gen_cmd->add_option("--query-out", gen.query_output, "Query output file");

  BenchOptions bench;
  auto* bench_cmd = app.add_subcommand("bench", "Measure throughput");
  AddQueryOptions(bench_cmd, bench.q);
  bench_cmd->add_option("--duration", bench.duration, "Seconds before the cutoff");
  bench_cmd->add_option("--stall-ms", bench.stall_ms,
                        "Abort when 256 events take longer than this");
  bench_cmd->add_option("--gen-events", bench.gen_events,
                        "Generate this many events instead of reading --stream");
  bench_cmd->add_option("--seed", bench.seed, "Generator seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitInput;
  }
  auto split = [](const std::string& s) {
    std::vector<std::string> v;
    std::stringstream ss(s);
    for (std::string x; std::getline(ss, x, ',');) {
      if (!x.empty()) v.push_back(x);
    }
    return v;
  };
  if (!types.empty()) gen.g.types = split(types);
  if (!symbols.empty()) gen.g.symbols = split(symbols);

  try {
    if (*run_cmd) return CmdRun(run, in, out, err);
    if (*check_cmd) return CmdCheck(check, in, out);
    if (*gen_cmd) return CmdGen(gen, out);
    if (*bench_cmd) return CmdBench(bench, in, out);
  } catch (const StreamError& e) {
    err << "stream error: " << e.what() << "\n";
    return kExitInput;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitInput;
  }
  return kExitInput;
}

}  // namespace cer
