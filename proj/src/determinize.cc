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

#include "cer/determinize.h"

#include <algorithm>
#include <cassert>
#include <cstring>

namespace cer {

std::string BitVector::ToString() const {
  std::string s(size_, '0');
  for (std::size_t i = 0; i < size_; ++i) {
    if (Get(i)) s[i] = '1';
  }
  return s;
}

void EvalBitVector(const DataTuple& t, const std::vector<Predicate>& atoms,
                   BitVector* out) {
  if (out->size() != atoms.size()) out->Resize(atoms.size());
  for (std::size_t i = 0; i < atoms.size(); ++i) out->Set(i, atoms[i].Eval(t));
}

BitVector EvalBitVector(const DataTuple& t, const std::vector<Predicate>& atoms) {
  BitVector v(atoms.size());
  EvalBitVector(t, atoms, &v);
  return v;
}

// ---------------------------------------------------------------------------

CompiledAutomaton::CompiledAutomaton(Cea cea)
    : cea_(std::move(cea)), atoms_(CollectAtoms(cea_)) {
  std::unordered_map<std::string, int> atom_index;
  for (std::size_t i = 0; i < atoms_.size(); ++i) {
    atom_index[atoms_[i].Key()] = static_cast<int>(i);
  }
  outgoing_.resize(cea_.num_states);
  for (std::size_t i = 0; i < cea_.transitions.size(); ++i) {
    Program prog;
    prog.ops.emplace_back();  // root slot
    int root = Emit(cea_.transitions[i].pred, prog, atom_index);
    prog.ops[0] = prog.ops[root];
    programs_.push_back(std::move(prog));
    outgoing_[cea_.transitions[i].from].push_back(static_cast<int>(i));
  }
}

int CompiledAutomaton::Emit(
    const Predicate& p, Program& prog,
    const std::unordered_map<std::string, int>& atom_index) const {
  Op op{p.kind(), -1, 0, 0};
  if (p.is_atom()) op.atom = atom_index.at(p.Key());
  if (!p.operands().empty()) {
    std::vector<Op> kids;
    for (const auto& c : p.operands()) {
      kids.push_back(prog.ops[Emit(c, prog, atom_index)]);
    }
    op.first_child = static_cast<int>(prog.ops.size());
    op.num_children = static_cast<int>(kids.size());
    prog.ops.insert(prog.ops.end(), kids.begin(), kids.end());
  }
  prog.ops.push_back(op);
  return static_cast<int>(prog.ops.size()) - 1;
}

bool CompiledAutomaton::Eval(const Program& prog, int node,
                             const BitVector& v) const {
  const Op& op = prog.ops[node];
  switch (op.kind) {
    case Predicate::Kind::kTrue: return true;
    case Predicate::Kind::kType:
    case Predicate::Kind::kCompare: return v.Get(static_cast<std::size_t>(op.atom));
    case Predicate::Kind::kNot: return !Eval(prog, op.first_child, v);
    case Predicate::Kind::kAnd:
      for (int i = 0; i < op.num_children; ++i) {
        if (!Eval(prog, op.first_child + i, v)) return false;
      }
      return true;
    case Predicate::Kind::kOr:
      for (int i = 0; i < op.num_children; ++i) {
        if (Eval(prog, op.first_child + i, v)) return true;
      }
      return false;
  }
  return false;
}

bool CompiledAutomaton::Fires(int transition, const BitVector& v) const {
  return Eval(programs_[transition], 0, v);
}

// ---------------------------------------------------------------------------

Determinizer::Determinizer(std::shared_ptr<const CompiledAutomaton> automaton,
                           std::size_t cache_capacity)
    : automaton_(std::move(automaton)), capacity_(cache_capacity) {}

int Determinizer::Intern(std::vector<int> states) {
  std::string key(reinterpret_cast<const char*>(states.data()),
                  states.size() * sizeof(int));
  auto it = index_.find(key);
  if (it != index_.end()) return it->second;
  DetState d;
  d.id = static_cast<int>(states_.size());
  for (int q : states) d.is_final = d.is_final || automaton_->cea().IsFinal(q);
  d.states = std::move(states);
  states_.push_back(std::move(d));
  index_.emplace(std::move(key), states_.back().id);
  ++stats_.states;
  return states_.back().id;
}

int Determinizer::Initial() { return Intern({automaton_->cea().initial}); }

Determinizer::Successors Determinizer::Compute(int s, const BitVector& v) {
  const Cea& cea = automaton_->cea();
  std::vector<int> marked, unmarked;
  for (int p : states_[s].states) {
    for (int ti : automaton_->Outgoing(p)) {
      if (!automaton_->Fires(ti, v)) continue;
      const auto& t = cea.transitions[ti];
      (t.mark == Mark::kMark ? marked : unmarked).push_back(t.to);
    }
  }
  auto canon = [](std::vector<int>& xs) {
    std::sort(xs.begin(), xs.end());
    xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
  };
  Successors out;
  if (!marked.empty()) {
    canon(marked);
    out.marking = Intern(std::move(marked));
  }
  if (!unmarked.empty()) {
    canon(unmarked);
    out.unmarking = Intern(std::move(unmarked));
  }
  return out;
}

Determinizer::Successors Determinizer::Step(int s, const BitVector& v) {
  const auto& words = v.words();
  key_buf_.resize(sizeof(int) + words.size() * sizeof(uint64_t));
  std::memcpy(key_buf_.data(), &s, sizeof(int));
  if (!words.empty()) {
    std::memcpy(key_buf_.data() + sizeof(int), words.data(),
                words.size() * sizeof(uint64_t));
  }
  auto it = cache_.find(key_buf_);
  if (it != cache_.end()) {
    ++stats_.cache_hits;
    if (capacity_ > 0) lru_.splice(lru_.begin(), lru_, it->second.lru);
    return it->second.succ;
  }
  ++stats_.cache_misses;
  Successors succ = Compute(s, v);
  if (capacity_ > 0 && cache_.size() >= capacity_) {
    cache_.erase(lru_.back());
    lru_.pop_back();
    ++stats_.evictions;
  }
  Entry e{succ, {}};
  if (capacity_ > 0) {
    lru_.push_front(key_buf_);
    e.lru = lru_.begin();
  }
  cache_.emplace(key_buf_, e);
  return succ;
}

std::optional<int> Determinizer::Delta(int s, const BitVector& v, Mark action) {
  Successors succ = Step(s, v);
  int r = action == Mark::kMark ? succ.marking : succ.unmarking;
  if (r == kNone) return std::nullopt;
  return r;
}

void Determinizer::ClearCache() {
  cache_.clear();
  lru_.clear();
}

}  // namespace cer
