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

#include "cer/cea.h"

#include <algorithm>
#include <deque>
#include <functional>
#include <sstream>
#include <unordered_set>

namespace cer {

int Cea::AddState(bool is_final) {
  final.push_back(is_final);
  return num_states++;
}

void Cea::AddTransition(int from, Predicate pred, Mark mark, int to) {
  transitions.push_back({from, std::move(pred), mark, to});
}

bool Cea::HasIncomingToInitial() const {
  for (const auto& t : transitions) {
    if (t.to == initial) return true;
  }
  return false;
}

namespace {

// Appends src's states and transitions to dst, returning the state offset.
int Absorb(Vcea& dst, const Vcea& src) {
  int off = dst.num_states;
  dst.num_states += src.num_states;
  for (auto t : src.transitions) {
    t.from += off;
    t.to += off;
    dst.transitions.push_back(std::move(t));
  }
  return off;
}

std::set<int> Shift(const std::set<int>& s, int off) {
  std::set<int> out;
  for (int q : s) out.insert(q + off);
  return out;
}

}  // namespace

Vcea CompileVcea(const CelFormula& f) {
  using K = CelFormula::Kind;
  Vcea out;
  switch (f.kind()) {
    case K::kEventType: {
      out.num_states = 2;
      out.transitions.push_back({0, Predicate::TypeIs(f.name()), {f.name()}, 1});
      out.initial = {0};
      out.final = {1};
      return out;
    }
    case K::kAs: {
      out = CompileVcea(f.child());
      for (auto& t : out.transitions) {
        if (!t.labels.empty()) t.labels.insert(f.name());
      }
      return out;
    }
    case K::kFilter: {
      out = CompileVcea(f.child());
      for (auto& t : out.transitions) {
        if (t.labels.count(f.name())) t.pred = Predicate::And(t.pred, f.predicate());
      }
      return out;
    }
    case K::kOr: {
      Vcea a = CompileVcea(f.child(0));
      Vcea b = CompileVcea(f.child(1));
      Absorb(out, a);
      int off = Absorb(out, b);
      out.initial = a.initial;
      out.final = a.final;
      for (int q : Shift(b.initial, off)) out.initial.insert(q);
      for (int q : Shift(b.final, off)) out.final.insert(q);
      return out;
    }
    case K::kSeq: {
      Vcea a = CompileVcea(f.child(0));
      Vcea b = CompileVcea(f.child(1));
      Absorb(out, a);
      int off = Absorb(out, b);
      std::set<int> b_init = Shift(b.initial, off);
      for (int p : b_init) out.transitions.push_back({p, Predicate::True(), {}, p});
      for (const auto& t : a.transitions) {
        if (!a.final.count(t.to)) continue;
        for (int q : b_init) out.transitions.push_back({t.from, t.pred, t.labels, q});
      }
      out.initial = a.initial;
      out.final = Shift(b.final, off);
      return out;
    }
    case K::kPlus: {
      // One fresh state q sits between iterations. It waits on a TRUE loop,
      // so iterations need not be contiguous, and leaves through copies of
      // the initial transitions, including into q itself so that any number
      // of iterations is reachable.
      out = CompileVcea(f.child());
      int q = out.num_states++;
      std::vector<Vcea::Transition> extra;
      for (const auto& t : out.transitions) {
        bool from_init = out.initial.count(t.from) > 0;
        bool to_final = out.final.count(t.to) > 0;
        if (to_final) extra.push_back({t.from, t.pred, t.labels, q});
        if (from_init) extra.push_back({q, t.pred, t.labels, t.to});
        if (from_init && to_final) extra.push_back({q, t.pred, t.labels, q});
      }
      extra.push_back({q, Predicate::True(), {}, q});
      for (auto& t : extra) out.transitions.push_back(std::move(t));
      return out;
    }
    case K::kProj: {
      out = CompileVcea(f.child());
      for (auto& t : out.transitions) {
        std::set<std::string> kept;
        for (const auto& l : t.labels) {
          if (f.proj_vars().count(l)) kept.insert(l);
        }
        t.labels = std::move(kept);
      }
      return out;
    }
  }
  return out;
}

Cea Compile(const CelFormula& f) {
  Vcea v = CompileVcea(f);
  Cea a;
  for (int i = 0; i < v.num_states; ++i) a.AddState(v.final.count(i) > 0);
  int q0 = a.AddState(false);
  a.initial = q0;
  for (const auto& t : v.transitions) {
    Mark m = t.labels.empty() ? Mark::kUnmark : Mark::kMark;
    a.AddTransition(t.from, t.pred, m, t.to);
  }
  for (const auto& t : v.transitions) {
    if (!v.initial.count(t.from)) continue;
    Mark m = t.labels.empty() ? Mark::kUnmark : Mark::kMark;
    a.AddTransition(q0, t.pred, m, t.to);
  }
  return Prune(a);
}

Cea NormalizeInitial(const Cea& a) {
  if (!a.HasIncomingToInitial()) return a;
  Cea out = a;
  int copy = out.AddState(a.IsFinal(a.initial));
  for (const auto& t : a.transitions) {
    if (t.from == a.initial) out.AddTransition(copy, t.pred, t.mark, t.to);
  }
  for (auto& t : out.transitions) {
    if (t.to == a.initial) t.to = copy;
  }
  return out;
}

Cea Prune(const Cea& a) {
  std::vector<std::vector<int>> fwd(a.num_states), bwd(a.num_states);
  for (std::size_t i = 0; i < a.transitions.size(); ++i) {
    fwd[a.transitions[i].from].push_back(static_cast<int>(i));
    bwd[a.transitions[i].to].push_back(static_cast<int>(i));
  }
  std::vector<bool> reach(a.num_states, false), coreach(a.num_states, false);
  std::deque<int> work{a.initial};
  reach[a.initial] = true;
  while (!work.empty()) {
    int p = work.front();
    work.pop_front();
    for (int ti : fwd[p]) {
      int q = a.transitions[ti].to;
      if (!reach[q]) {
        reach[q] = true;
        work.push_back(q);
      }
    }
  }
  for (int q = 0; q < a.num_states; ++q) {
    if (a.IsFinal(q)) {
      coreach[q] = true;
      work.push_back(q);
    }
  }
  while (!work.empty()) {
    int q = work.front();
    work.pop_front();
    for (int ti : bwd[q]) {
      int p = a.transitions[ti].from;
      if (!coreach[p]) {
        coreach[p] = true;
        work.push_back(p);
      }
    }
  }
  auto keep = [&](int q) { return q == a.initial || (reach[q] && coreach[q]); };

  // Breadth-first renumbering over kept states.
  std::vector<int> id(a.num_states, -1);
  Cea out;
  id[a.initial] = out.AddState(a.IsFinal(a.initial));
  out.initial = id[a.initial];
  std::vector<int> order{a.initial};
  for (std::size_t k = 0; k < order.size(); ++k) {
    for (int ti : fwd[order[k]]) {
      int q = a.transitions[ti].to;
      if (!keep(q) || id[q] >= 0) continue;
      id[q] = out.AddState(a.IsFinal(q));
      order.push_back(q);
    }
  }
  std::unordered_set<std::string> seen;
  for (int p : order) {
    for (int ti : fwd[p]) {
      const auto& t = a.transitions[ti];
      if (id[t.to] < 0) continue;
      std::string key = std::to_string(id[p]) + "|" + t.pred.Key() + "|" +
                        (t.mark == Mark::kMark ? "m" : "u") + "|" +
                        std::to_string(id[t.to]);
      if (!seen.insert(key).second) continue;
      out.AddTransition(id[p], t.pred, t.mark, id[t.to]);
    }
  }
  return out;
}

std::vector<Predicate> CollectAtoms(const Cea& a) {
  std::vector<Predicate> atoms;
  std::unordered_set<std::string> seen;
  std::function<void(const Predicate&)> walk = [&](const Predicate& p) {
    if (p.is_atom()) {
      if (seen.insert(p.Key()).second) atoms.push_back(p);
      return;
    }
    for (const auto& c : p.operands()) walk(c);
  };
  for (const auto& t : a.transitions) walk(t.pred);
  return atoms;
}

std::string ToDebugString(const Cea& a) {
  std::ostringstream os;
  for (const auto& t : a.transitions) {
    os << t.from << " -[" << t.pred.ToString() << " | "
       << (t.mark == Mark::kMark ? "•" : "∘") << "]-> " << t.to << "\n";
  }
  os << "initial: " << a.initial << "\nfinal:";
  for (int q = 0; q < a.num_states; ++q) {
    if (a.IsFinal(q)) os << " " << q;
  }
  os << "\n";
  return os.str();
}

}  // namespace cer
