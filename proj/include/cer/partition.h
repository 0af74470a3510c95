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

#ifndef CER_PARTITION_H_
#define CER_PARTITION_H_

#include <condition_variable>
#include <cstdint>
#include <deque>
#include <exception>
#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <unordered_map>
#include <vector>

#include "cer/determinize.h"
#include "cer/engine.h"
#include "cer/event.h"

namespace cer {

struct PartitionKey {
  std::vector<Value> values;
  std::string encoded;  // concatenated Value::Encode of values

  friend bool operator==(const PartitionKey& a, const PartitionKey& b) {
    return a.encoded == b.encoded;
  }
};

// Key of t over attrs, or nullopt when an attribute is null or missing. With
// no attributes every tuple gets the empty key.
std::optional<PartitionKey> Route(const DataTuple& t,
                                  const std::vector<std::string>& attrs);

struct PartitionerConfig {
  EngineConfig engine;
  // Events between sweeps that drop engines whose newest event is older
  // than the window; 0 disables. Needs engine.window.
  std::size_t eviction_period = 0;
};

// Runs one engine per partition key. Engines see tuples with their original
// positions and times.
class Partitioner {
 public:
  Partitioner(std::shared_ptr<const CompiledAutomaton> automaton,
              std::vector<std::string> attrs, PartitionerConfig config,
              OutputSink sink = nullptr);

  // Returns the number of complex events emitted. Throws StreamError if
  // t.time is older than the previous tuple's.
  std::size_t Dispatch(const DataTuple& t);

  std::size_t num_engines() const { return engines_.size(); }
  std::size_t engines_created() const { return created_; }
  std::size_t engines_evicted() const { return evicted_; }
  // Tuples that belonged to no partition.
  std::size_t unrouted() const { return unrouted_; }

  // Counters summed over all engines, including evicted ones; max_* fields
  // take the maximum.
  EngineStats AggregateStats() const;
  std::size_t live_nodes() const;
  std::size_t det_states() const;
  std::size_t AuditViolations() const;

  void ForEachEngine(
      const std::function<void(const PartitionKey&, const Engine&)>& fn) const;

 private:
  struct Slot {
    PartitionKey key;
    std::unique_ptr<Engine> engine;
  };

  void Evict(int64_t now);

  std::shared_ptr<const CompiledAutomaton> automaton_;
  std::vector<std::string> attrs_;
  PartitionerConfig config_;
  OutputSink sink_;
  std::unordered_map<std::string, Slot> engines_;
  std::optional<int64_t> last_time_;
  std::size_t since_sweep_ = 0;
  std::size_t created_ = 0;
  std::size_t evicted_ = 0;
  std::size_t unrouted_ = 0;
  EngineStats retired_;
  std::size_t retired_violations_ = 0;
};

// Adds b's counters into a as AggregateStats does.
void Accumulate(EngineStats& a, const EngineStats& b);

// Partition-parallel execution: keys are pinned to worker threads by hash and
// each worker owns a Partitioner. The sink is called under a lock, so calls
// never overlap, but their order across partitions is unspecified.
class ParallelPartitioner {
 public:
  ParallelPartitioner(std::shared_ptr<const CompiledAutomaton> automaton,
                      std::vector<std::string> attrs, PartitionerConfig config,
                      std::size_t workers, OutputSink sink = nullptr);
  ~ParallelPartitioner();
  ParallelPartitioner(const ParallelPartitioner&) = delete;
  ParallelPartitioner& operator=(const ParallelPartitioner&) = delete;

  // Hands t to its worker; blocks while that worker's queue is full.
  void Dispatch(const DataTuple& t);

  // Drains the queues and joins the workers. Rethrows the first worker
  // error. Returns the total number of complex events emitted.
  std::size_t Finish();

  EngineStats AggregateStats() const;

 private:
  struct Worker {
    std::unique_ptr<Partitioner> partitioner;
    std::deque<DataTuple> queue;
    bool closed = false;
    std::mutex mu;
    std::condition_variable cv;
    std::thread thread;
    std::exception_ptr error;
    std::size_t emitted = 0;
  };
  static constexpr std::size_t kQueueCapacity = 4096;

  void Run(Worker& w);

  std::vector<std::string> attrs_;
  std::vector<std::unique_ptr<Worker>> workers_;
  std::mutex sink_mu_;
  OutputSink sink_;
  std::optional<int64_t> last_time_;
  bool finished_ = false;
};

}  // namespace cer

#endif  // CER_PARTITION_H_
