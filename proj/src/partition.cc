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

#include "cer/partition.h"

#include <algorithm>
#include <functional>

#include "cer/errors.h"

namespace cer {

std::optional<PartitionKey> Route(const DataTuple& t,
                                  const std::vector<std::string>& attrs) {
  PartitionKey key;
  for (const auto& a : attrs) {
    const Value& v = t.Get(a);
    if (v.is_null()) return std::nullopt;
    key.encoded += v.Encode();
    key.values.push_back(v);
  }
  return key;
}

void Accumulate(EngineStats& a, const EngineStats& b) {
  a.events += b.events;
  a.outputs += b.outputs;
  a.prunes += b.prunes;
  a.max_active_states = std::max(a.max_active_states, b.max_active_states);
  a.max_list_length = std::max(a.max_list_length, b.max_list_length);
  a.max_allocations_per_event =
      std::max(a.max_allocations_per_event, b.max_allocations_per_event);
  a.list_order_violations += b.list_order_violations;
  a.list_length_violations += b.list_length_violations;
  a.ordkeys_violations += b.ordkeys_violations;
  a.delay.emissions += b.delay.emissions;
  a.delay.violations += b.delay.violations;
  a.delay.total_visited += b.delay.total_visited;
  a.delay.max_visited = std::max(a.delay.max_visited, b.delay.max_visited);
}

Partitioner::Partitioner(std::shared_ptr<const CompiledAutomaton> automaton,
                         std::vector<std::string> attrs, PartitionerConfig config,
                         OutputSink sink)
    : automaton_(std::move(automaton)),
      attrs_(std::move(attrs)),
      config_(config),
      sink_(std::move(sink)) {}

std::size_t Partitioner::Dispatch(const DataTuple& t) {
  if (last_time_ && t.time < *last_time_) {
    throw StreamError("event time " + std::to_string(t.time) +
                      " is older than the previous event's " +
                      std::to_string(*last_time_));
  }
  last_time_ = t.time;
  if (config_.eviction_period > 0 && config_.engine.window &&
      ++since_sweep_ >= config_.eviction_period) {
    Evict(t.time);
  }
  std::optional<PartitionKey> key = Route(t, attrs_);
  if (!key) {
    ++unrouted_;
    return 0;
  }
  auto it = engines_.find(key->encoded);
  if (it == engines_.end()) {
    std::string encoded = key->encoded;
    Slot slot{std::move(*key),
              std::make_unique<Engine>(automaton_, config_.engine, sink_)};
    it = engines_.emplace(std::move(encoded), std::move(slot)).first;
    ++created_;
  }
  return it->second.engine->ProcessEvent(t);
}

void Partitioner::Evict(int64_t now) {
  since_sweep_ = 0;
  const int64_t floor = WindowFloor(now, config_.engine.window);
  for (auto it = engines_.begin(); it != engines_.end();) {
    const Engine& e = *it->second.engine;
    if (e.last_time() && *e.last_time() < floor) {
      Accumulate(retired_, e.stats());
      retired_violations_ += e.AuditViolations();
      it = engines_.erase(it);
      ++evicted_;
    } else {
      ++it;
    }
  }
}

EngineStats Partitioner::AggregateStats() const {
  EngineStats s = retired_;
  for (const auto& [k, slot] : engines_) Accumulate(s, slot.engine->stats());
  return s;
}

std::size_t Partitioner::live_nodes() const {
  std::size_t n = 0;
  for (const auto& [k, slot] : engines_) n += slot.engine->tecs().live_nodes();
  return n;
}

std::size_t Partitioner::det_states() const {
  std::size_t n = 0;
  for (const auto& [k, slot] : engines_) n += slot.engine->determinizer().num_states();
  return n;
}

std::size_t Partitioner::AuditViolations() const {
  std::size_t n = retired_violations_;
  for (const auto& [k, slot] : engines_) n += slot.engine->AuditViolations();
  return n;
}

void Partitioner::ForEachEngine(
    const std::function<void(const PartitionKey&, const Engine&)>& fn) const {
  for (const auto& [k, slot] : engines_) fn(slot.key, *slot.engine);
}

ParallelPartitioner::ParallelPartitioner(
    std::shared_ptr<const CompiledAutomaton> automaton,
    std::vector<std::string> attrs, PartitionerConfig config,
    std::size_t workers, OutputSink sink)
    : attrs_(attrs), sink_(std::move(sink)) {
  workers = std::max<std::size_t>(workers, 1);
  OutputSink locked = [this](int64_t j, const ComplexEvent& ce) {
    if (!sink_) return;
    std::lock_guard<std::mutex> lock(sink_mu_);
    sink_(j, ce);
  };
  for (std::size_t i = 0; i < workers; ++i) {
    auto w = std::make_unique<Worker>();
    w->partitioner =
        std::make_unique<Partitioner>(automaton, attrs, config, locked);
    workers_.push_back(std::move(w));
  }
  for (auto& w : workers_) {
    Worker* p = w.get();
    p->thread = std::thread([this, p] { Run(*p); });
  }
}

ParallelPartitioner::~ParallelPartitioner() {
  if (!finished_) {
    try {
      Finish();
    } catch (...) {
    }
  }
}

void ParallelPartitioner::Dispatch(const DataTuple& t) {
  if (last_time_ && t.time < *last_time_) {
    throw StreamError("event time " + std::to_string(t.time) +
                      " is older than the previous event's " +
                      std::to_string(*last_time_));
  }
  last_time_ = t.time;
  std::optional<PartitionKey> key = Route(t, attrs_);
  if (!key) return;
  Worker& w = *workers_[std::hash<std::string>{}(key->encoded) % workers_.size()];
  std::unique_lock<std::mutex> lock(w.mu);
  w.cv.wait(lock, [&] { return w.queue.size() < kQueueCapacity || w.error; });
  if (w.error) return;
  w.queue.push_back(t);
  w.cv.notify_all();
}

void ParallelPartitioner::Run(Worker& w) {
  std::deque<DataTuple> batch;
  while (true) {
    {
      std::unique_lock<std::mutex> lock(w.mu);
      w.cv.wait(lock, [&] { return !w.queue.empty() || w.closed; });
      if (w.queue.empty()) return;
      batch.swap(w.queue);
      w.cv.notify_all();
    }
    try {
      for (const DataTuple& t : batch) w.emitted += w.partitioner->Dispatch(t);
    } catch (...) {
      std::lock_guard<std::mutex> lock(w.mu);
      w.error = std::current_exception();
      w.queue.clear();
      w.cv.notify_all();
      return;
    }
    batch.clear();
  }
}

std::size_t ParallelPartitioner::Finish() {
  finished_ = true;
  for (auto& w : workers_) {
    std::lock_guard<std::mutex> lock(w->mu);
    w->closed = true;
    w->cv.notify_all();
  }
  std::size_t emitted = 0;
  std::exception_ptr first;
  for (auto& w : workers_) {
    if (w->thread.joinable()) w->thread.join();
    if (w->error && !first) first = w->error;
    emitted += w->emitted;
  }
  if (first) std::rethrow_exception(first);
  return emitted;
}

EngineStats ParallelPartitioner::AggregateStats() const {
  EngineStats s;
  for (const auto& w : workers_) Accumulate(s, w->partitioner->AggregateStats());
  return s;
}

}  // namespace cer
