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

#ifndef CER_CEA_H_
#define CER_CEA_H_

#include <set>
#include <string>
#include <vector>

#include "cer/ceql.h"
#include "cer/predicate.h"

namespace cer {

enum class Mark : unsigned char { kMark, kUnmark };

struct CeaTransition {
  int from = 0;
  Predicate pred;
  Mark mark = Mark::kMark;
  int to = 0;
};

// Complex event automaton. States are 0..num_states-1.
struct Cea {
  int num_states = 0;
  std::vector<CeaTransition> transitions;
  int initial = 0;
  std::vector<bool> final;  // indexed by state

  bool IsFinal(int q) const { return final[static_cast<std::size_t>(q)]; }
  int AddState(bool is_final = false);
  void AddTransition(int from, Predicate pred, Mark mark, int to);
  bool HasIncomingToInitial() const;
};

// Variable-labelled automaton used while compiling.
struct Vcea {
  struct Transition {
    int from = 0;
    Predicate pred;
    std::set<std::string> labels;
    int to = 0;
  };
  int num_states = 0;
  std::vector<Transition> transitions;
  std::set<int> initial;
  std::set<int> final;
};

// Inductive construction of the variable-labelled automaton.
Vcea CompileVcea(const CelFormula& f);

// Full pipeline: VCEA, fresh initial state, marks, pruning of unreachable and
// dead states, renumbering in breadth-first order from the initial state.
Cea Compile(const CelFormula& f);

// Returns an equivalent automaton whose initial state has no incoming
// transitions. Identity when that already holds.
Cea NormalizeInitial(const Cea& a);

// Drops states unreachable from the initial state or unable to reach a final
// state, keeping the initial state. Renumbers breadth-first.
Cea Prune(const Cea& a);

// Atomic predicates of all transitions, deduplicated, in first-occurrence
// order (transitions in order, operands left to right).
std::vector<Predicate> CollectAtoms(const Cea& a);

// One line per transition: `from -[pred | mark]-> to`, then the initial and
// final states.
std::string ToDebugString(const Cea& a);

}  // namespace cer

#endif  // CER_CEA_H_
