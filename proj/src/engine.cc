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

#include "cer/engine.h"

#include <algorithm>
#include <utility>

#include "cer/errors.h"

namespace cer {

Engine::Entry& Engine::Table::Add(int q) {
  if (static_cast<std::size_t>(q) >= slot.size()) slot.resize(q + 1, -1);
  if (size == entries.size()) entries.emplace_back();
  Entry& e = entries[size];
  e.state = q;
  e.list.clear();
  slot[q] = static_cast<int32_t>(size++);
  return e;
}

void Engine::Table::Clear() {
  for (std::size_t i = 0; i < size; ++i) slot[entries[i].state] = -1;
  size = 0;
}

Engine::Engine(std::shared_ptr<const CompiledAutomaton> automaton,
               EngineConfig config, OutputSink sink)
    : automaton_(automaton),
      config_(config),
      sink_(std::move(sink)),
      det_(std::move(automaton), config.cache_capacity) {
  initial_ = det_.Initial();
  tecs_.set_audit(config_.audit);
}

std::size_t Engine::ProcessEvent(const DataTuple& t) {
  if (last_time_ && t.time < *last_time_) {
    throw StreamError("event time " + std::to_string(t.time) +
                      " is older than the previous event's " +
                      std::to_string(*last_time_));
  }
  last_time_ = t.time;
  const std::size_t alloc_before = tecs_.counters().allocations;
  const int64_t j = t.position;
  const int64_t now = t.time;
  EvalBitVector(t, automaton_->atoms(), &bv_);

  next_.Clear();
  Determinizer::Successors s0 = det_.Step(initial_, bv_);
  if (s0.marking != Determinizer::kNone || s0.unmarking != Determinizer::kNone) {
    scratch_.assign(1, tecs_.NewBottom(j, now));
    ExecTrans(initial_, scratch_, j, now);
  }
  for (std::size_t i = 0; i < cur_.size; ++i) {
    ExecTrans(cur_.entries[i].state, cur_.entries[i].list, j, now);
  }
  std::swap(cur_, next_);

  std::size_t emitted = Output(j, now);

  ++stats_.events;
  stats_.outputs += emitted;
  stats_.max_active_states = std::max(stats_.max_active_states, cur_.size);
  for (std::size_t i = 0; i < cur_.size; ++i) {
    stats_.max_list_length =
        std::max(stats_.max_list_length, cur_.entries[i].list.size());
  }
  stats_.max_allocations_per_event =
      std::max(stats_.max_allocations_per_event,
               tecs_.counters().allocations - alloc_before);

  if (config_.window && config_.prune_period > 0 &&
      ++since_prune_ >= config_.prune_period) {
    Prune(now);
  }
  if (config_.audit) Audit();
  return emitted;
}

void Engine::ExecTrans(int p, const UnionList& ul, int64_t j, int64_t now) {
  Determinizer::Successors succ = det_.Step(p, bv_);
  if (succ.marking == Determinizer::kNone && succ.unmarking == Determinizer::kNone) {
    return;
  }
  // merge(ul) is only needed by a marking step or by an insertion into an
  // existing entry.
  NodeRef n;
  auto merged = [&] {
    if (n.is_null()) n = tecs_.Merge(ul);
    return n;
  };
  if (succ.marking != Determinizer::kNone) {
    NodeRef o = tecs_.Extend(merged(), j, now);
    if (Entry* e = next_.Find(succ.marking)) {
      tecs_.UlInsert(e->list, o);
    } else {
      next_.Add(succ.marking).list.assign(1, o);
    }
  }
  if (succ.unmarking != Determinizer::kNone) {
    if (Entry* e = next_.Find(succ.unmarking)) {
      tecs_.UlInsert(e->list, merged());
    } else {
      next_.Add(succ.unmarking).list = ul;
    }
  }
}

std::size_t Engine::Output(int64_t j, int64_t now) {
  std::size_t emitted = 0;
  auto deliver = [&](const ComplexEvent& ce) {
    if (sink_) sink_(j, ce);
    return true;
  };
  for (std::size_t i = 0; i < cur_.size; ++i) {
    if (!det_.IsFinal(cur_.entries[i].state)) continue;
    std::size_t remaining = 0;
    if (config_.limit > 0) {
      if (emitted >= config_.limit) break;
      remaining = config_.limit - emitted;
    }
    NodeRef n = tecs_.Merge(cur_.entries[i].list);
    emitted += tecs_.Enumerate(n, j, now, config_.window, deliver, remaining,
                               &stats_.delay);
  }
  if (config_.consume == ConsumePolicy::kAny && emitted > 0) cur_.Clear();
  return emitted;
}

void Engine::Prune(int64_t now) {
  since_prune_ = 0;
  if (!config_.window) return;
  ++stats_.prunes;
  tecs_.Prune(now, *config_.window);
  // Entries older than the window can never complete inside it. Lists are
  // sorted by maxstart, so expired entries form a suffix.
  const int64_t floor = WindowFloor(now, config_.window);
  std::size_t w = 0;
  for (std::size_t r = 0; r < cur_.size; ++r) {
    Entry& e = cur_.entries[r];
    while (!e.list.empty() && tecs_.MaxStart(e.list.back()).time < floor) {
      e.list.pop_back();
    }
    if (e.list.empty()) {
      cur_.slot[e.state] = -1;
      continue;
    }
    if (w != r) std::swap(cur_.entries[w], cur_.entries[r]);
    cur_.slot[cur_.entries[w].state] = static_cast<int32_t>(w);
    ++w;
  }
  cur_.size = w;
}

void Engine::Audit() {
  const std::size_t bound = det_.num_states();
  Stamp prev_head{};
  for (std::size_t i = 0; i < cur_.size; ++i) {
    const UnionList& ul = cur_.entries[i].list;
    if (ul.empty() || tecs_.Kind(ul[0]) == NodeKind::kUnion ||
        !tecs_.Valid(ul[0])) {
      ++stats_.list_order_violations;
      continue;
    }
    Stamp head = tecs_.MaxStart(ul[0]);
    for (std::size_t k = 1; k < ul.size(); ++k) {
      Stamp s = tecs_.MaxStart(ul[k]);
      bool ok = tecs_.IsSafe(ul[k]) && s <= head &&
                (k == 1 || s < tecs_.MaxStart(ul[k - 1]));
      if (!ok) ++stats_.list_order_violations;
    }
    if (ul.size() > bound) ++stats_.list_length_violations;
    if (i > 0 && head > prev_head) ++stats_.ordkeys_violations;
    prev_head = head;
  }
}

std::size_t Engine::AuditViolations() const {
  const auto& c = tecs_.counters();
  return stats_.list_order_violations + stats_.list_length_violations +
         stats_.ordkeys_violations + c.time_order_violations + c.depth_violations;
}

std::vector<std::pair<int, UnionList>> Engine::ActiveStates() const {
  std::vector<std::pair<int, UnionList>> out;
  for (std::size_t i = 0; i < cur_.size; ++i) {
    out.emplace_back(cur_.entries[i].state, cur_.entries[i].list);
  }
  return out;
}

}  // namespace cer
