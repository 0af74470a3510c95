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

#ifndef CER_DETERMINIZE_H_
#define CER_DETERMINIZE_H_

#include <cstdint>
#include <list>
#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "cer/cea.h"
#include "cer/event.h"
#include "cer/predicate.h"

namespace cer {

class BitVector {
 public:
  explicit BitVector(std::size_t k = 0) { Resize(k); }

  std::size_t size() const { return size_; }
  bool Get(std::size_t i) const { return (words_[i >> 6] >> (i & 63)) & 1u; }
  void Set(std::size_t i, bool b) {
    uint64_t m = uint64_t{1} << (i & 63);
    if (b) {
      words_[i >> 6] |= m;
    } else {
      words_[i >> 6] &= ~m;
    }
  }
  void Resize(std::size_t k) {
    size_ = k;
    words_.assign((k + 63) / 64, 0);
  }
  const std::vector<uint64_t>& words() const { return words_; }
  // Bit 0 first, e.g. "111001".
  std::string ToString() const;

  friend bool operator==(const BitVector&, const BitVector&) = default;

 private:
  std::size_t size_ = 0;
  std::vector<uint64_t> words_;
};

// Evaluates every atom once against t.
void EvalBitVector(const DataTuple& t, const std::vector<Predicate>& atoms,
                   BitVector* out);
BitVector EvalBitVector(const DataTuple& t, const std::vector<Predicate>& atoms);

// A Cea with its atoms and transition predicates compiled into evaluators
// over atom indices. Immutable; shared by every engine running the query.
class CompiledAutomaton {
 public:
  explicit CompiledAutomaton(Cea cea);

  const Cea& cea() const { return cea_; }
  const std::vector<Predicate>& atoms() const { return atoms_; }
  // Transition indices leaving state q.
  const std::vector<int>& Outgoing(int q) const { return outgoing_[q]; }
  bool Fires(int transition, const BitVector& v) const;

 private:
  // Flattened expression tree; children of a node are contiguous.
  struct Op {
    Predicate::Kind kind;
    int atom;         // atoms only
    int first_child;  // and, or, not
    int num_children;
  };
  struct Program {
    std::vector<Op> ops;  // ops[0] is the root
  };
  int Emit(const Predicate& p, Program& prog,
           const std::unordered_map<std::string, int>& atom_index) const;
  bool Eval(const Program& prog, int node, const BitVector& v) const;

  Cea cea_;
  std::vector<Predicate> atoms_;
  std::vector<Program> programs_;
  std::vector<std::vector<int>> outgoing_;
};

// Subset of Cea states.
struct DetState {
  int id = 0;
  std::vector<int> states;  // sorted
  bool is_final = false;
};

// On-the-fly I/O-determinization with a transition cache keyed by
// (det-state id, bit-vector).
class Determinizer {
 public:
  static constexpr int kNone = -1;

  struct Successors {
    int marking = kNone;
    int unmarking = kNone;
    friend bool operator==(const Successors&, const Successors&) = default;
  };

  struct Stats {
    std::size_t states = 0;
    std::size_t cache_hits = 0;
    std::size_t cache_misses = 0;
    std::size_t evictions = 0;
  };

  // cache_capacity == 0 means unbounded; otherwise least recently used
  // entries are evicted.
  explicit Determinizer(std::shared_ptr<const CompiledAutomaton> automaton,
                        std::size_t cache_capacity = 0);

  const CompiledAutomaton& automaton() const { return *automaton_; }

  // Interned {q0}.
  int Initial();
  Successors Step(int s, const BitVector& v);
  std::optional<int> Delta(int s, const BitVector& v, Mark action);
  // Bypasses and does not touch the cache.
  Successors Compute(int s, const BitVector& v);

  const DetState& state(int id) const { return states_[id]; }
  bool IsFinal(int id) const { return states_[id].is_final; }
  std::size_t num_states() const { return states_.size(); }
  std::size_t cache_size() const { return cache_.size(); }
  const Stats& stats() const { return stats_; }
  void ClearCache();

 private:
  struct Entry {
    Successors succ;
    std::list<std::string>::iterator lru;
  };

  int Intern(std::vector<int> states);

  std::shared_ptr<const CompiledAutomaton> automaton_;
  std::size_t capacity_;
  std::vector<DetState> states_;
  std::unordered_map<std::string, int> index_;
  std::unordered_map<std::string, Entry> cache_;
  std::list<std::string> lru_;
  std::string key_buf_;
  Stats stats_;
};

}  // namespace cer

#endif  // CER_DETERMINIZE_H_
