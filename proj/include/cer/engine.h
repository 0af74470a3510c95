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

#ifndef CER_ENGINE_H_
#define CER_ENGINE_H_

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <vector>

#include "cer/ceql.h"
#include "cer/determinize.h"
#include "cer/event.h"
#include "cer/tecs.h"

namespace cer {

struct EngineConfig {
  // Keep complex events with time(end) - time(start) <= window.
  std::optional<int64_t> window;
  ConsumePolicy consume = ConsumePolicy::kNone;
  // Emissions per trigger position; 0 = unlimited.
  std::size_t limit = 1000;
  // Events between prunes; 0 disables pruning. Needs a window.
  std::size_t prune_period = 10000;
  // Transition cache entries; 0 = unbounded.
  std::size_t cache_capacity = 0;
  // Check structural invariants after every event.
  bool audit = false;
};

// Receives (trigger position j, complex event).
using OutputSink = std::function<void(int64_t, const ComplexEvent&)>;

struct EngineStats {
  std::size_t events = 0;
  std::size_t outputs = 0;
  std::size_t prunes = 0;
  std::size_t max_active_states = 0;
  std::size_t max_list_length = 0;
  // Most tECS nodes allocated while processing a single event.
  std::size_t max_allocations_per_event = 0;
  // Audit mode only.
  std::size_t list_order_violations = 0;
  std::size_t list_length_violations = 0;
  std::size_t ordkeys_violations = 0;
  DelayProbe delay;
};

class Engine {
 public:
  Engine(std::shared_ptr<const CompiledAutomaton> automaton, EngineConfig config,
         OutputSink sink = nullptr);

  // Runs one event through the automaton and enumerates the complex events
  // ending at it. Returns the number delivered to the sink. Throws
  // StreamError if t.time is older than the previous event's.
  std::size_t ProcessEvent(const DataTuple& t);

  // Reclaims nodes and table entries that fall outside the window of now.
  void Prune(int64_t now);

  const EngineStats& stats() const { return stats_; }
  const Tecs& tecs() const { return tecs_; }
  const Determinizer& determinizer() const { return det_; }
  const EngineConfig& config() const { return config_; }
  std::optional<int64_t> last_time() const { return last_time_; }

  // Active-state table in insertion order.
  std::vector<std::pair<int, UnionList>> ActiveStates() const;

  // Sum of the structural violation counters of this engine and its tECS.
  std::size_t AuditViolations() const;

 private:
  struct Entry {
    int state = 0;
    UnionList list;
  };
  // Hash table from det-state id to union-list that remembers insertion
  // order. Entry storage is reused across events.
  struct Table {
    std::vector<Entry> entries;
    std::size_t size = 0;
    std::vector<int32_t> slot;

    Entry* Find(int q) {
      return static_cast<std::size_t>(q) < slot.size() && slot[q] >= 0
                 ? &entries[slot[q]]
                 : nullptr;
    }
    Entry& Add(int q);
    void Clear();
  };

  void ExecTrans(int p, const UnionList& ul, int64_t j, int64_t now);
  std::size_t Output(int64_t j, int64_t now);
  void Audit();

  std::shared_ptr<const CompiledAutomaton> automaton_;
  EngineConfig config_;
  OutputSink sink_;
  Determinizer det_;
  Tecs tecs_;
  Table cur_;
  Table next_;
  BitVector bv_;
  UnionList scratch_;
  int initial_;
  std::optional<int64_t> last_time_;
  std::size_t since_prune_ = 0;
  EngineStats stats_;
};

}  // namespace cer

#endif  // CER_ENGINE_H_
