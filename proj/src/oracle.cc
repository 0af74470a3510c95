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

#include "cer/oracle.h"

#include <algorithm>
#include <sstream>
#include <vector>

#include "cer/errors.h"
#include "cer/partition.h"

namespace cer {
namespace {

// Valuations over stream indices; converted to positions at the end.
using ValSet = std::set<Valuation>;

class CelEvaluator {
 public:
  CelEvaluator(const Stream& s, std::optional<int64_t> max_span,
               std::size_t budget)
      : s_(s), max_span_(max_span), budget_(budget) {}

  ValSet Eval(const CelFormula& f) {
    switch (f.kind()) {
      case CelFormula::Kind::kEventType: {
        ValSet out;
        for (std::size_t i = 0; i < s_.size(); ++i) {
          if (s_[i].type != f.name()) continue;
          Valuation v;
          v.start = v.end = static_cast<int64_t>(i);
          v.vars[f.name()] = {static_cast<int64_t>(i)};
          Keep(out, std::move(v));
        }
        return out;
      }
      case CelFormula::Kind::kAs: {
        ValSet out;
        for (const Valuation& v : Eval(f.child())) {
          Valuation w = v;
          std::set<int64_t> all;
          for (const auto& [name, ps] : v.vars) all.insert(ps.begin(), ps.end());
          w.vars.erase(f.name());
          if (!all.empty()) w.vars[f.name()] = std::move(all);
          Keep(out, std::move(w));
        }
        return out;
      }
      case CelFormula::Kind::kFilter: {
        ValSet out;
        for (const Valuation& v : Eval(f.child())) {
          auto it = v.vars.find(f.name());
          bool ok = true;
          if (it != v.vars.end()) {
            for (int64_t i : it->second) {
              if (!f.predicate().Eval(s_[static_cast<std::size_t>(i)])) {
                ok = false;
                break;
              }
            }
          }
          if (ok) out.insert(v);
        }
        return out;
      }
      case CelFormula::Kind::kOr: {
        ValSet out = Eval(f.child(0));
        ValSet rhs = Eval(f.child(1));
        out.insert(rhs.begin(), rhs.end());
        return out;
      }
      case CelFormula::Kind::kSeq:
        return Join(Eval(f.child(0)), Eval(f.child(1)));
      case CelFormula::Kind::kPlus: {
        // Least fixpoint of R = base | base ; R, computed semi-naively.
        ValSet base = Eval(f.child());
        ValSet all = base;
        ValSet delta = base;
        while (!delta.empty()) {
          ValSet next;
          for (const Valuation& v : Join(base, delta)) {
            if (all.insert(v).second) next.insert(v);
          }
          delta = std::move(next);
        }
        return all;
      }
      case CelFormula::Kind::kProj: {
        ValSet out;
        for (const Valuation& v : Eval(f.child())) {
          Valuation w;
          w.start = v.start;
          w.end = v.end;
          for (const auto& [name, ps] : v.vars) {
            if (f.proj_vars().count(name)) w.vars[name] = ps;
          }
          Keep(out, std::move(w));
        }
        return out;
      }
    }
    return {};
  }

 private:
  ValSet Join(const ValSet& lhs, const ValSet& rhs) {
    ValSet out;
    for (const Valuation& a : lhs) {
      for (const Valuation& b : rhs) {
        if (a.end >= b.start) continue;
        Valuation v;
        v.start = a.start;
        v.end = b.end;
        v.vars = a.vars;
        for (const auto& [name, ps] : b.vars) v.vars[name].insert(ps.begin(), ps.end());
        Keep(out, std::move(v));
      }
    }
    return out;
  }

  void Keep(ValSet& out, Valuation v) {
    if (max_span_ && s_[static_cast<std::size_t>(v.end)].time -
                             s_[static_cast<std::size_t>(v.start)].time >
                         *max_span_) {
      return;
    }
    if (++built_ > budget_) throw GuardError("valuation budget exceeded");
    out.insert(std::move(v));
  }

  const Stream& s_;
  std::optional<int64_t> max_span_;
  std::size_t budget_;
  std::size_t built_ = 0;
};

}  // namespace

std::set<Valuation> EvalCel(const CelFormula& f, const Stream& s,
                            std::optional<int64_t> max_span, std::size_t budget) {
  if (s.size() > kMaxCelStream) {
    throw GuardError("stream of " + std::to_string(s.size()) +
                     " events exceeds the CEL oracle limit of " +
                     std::to_string(kMaxCelStream));
  }
  CelEvaluator ev(s, max_span, budget);
  std::set<Valuation> out;
  auto pos = [&](int64_t i) { return s[static_cast<std::size_t>(i)].position; };
  for (const Valuation& v : ev.Eval(f)) {
    Valuation w;
    w.start = pos(v.start);
    w.end = pos(v.end);
    for (const auto& [name, ps] : v.vars) {
      for (int64_t i : ps) w.vars[name].insert(pos(i));
    }
    out.insert(std::move(w));
  }
  return out;
}

ComplexEventSet Normalize(const std::set<Valuation>& vs) {
  ComplexEventSet out;
  for (const Valuation& v : vs) out.insert(NormalizeValuation(v));
  return out;
}

ComplexEventSet BruteRuns(const Cea& a, const Stream& s,
                          std::optional<int64_t> max_span, std::size_t budget) {
  if (s.size() > kMaxRunStream) {
    throw GuardError("stream of " + std::to_string(s.size()) +
                     " events exceeds the run oracle limit of " +
                     std::to_string(kMaxRunStream));
  }
  std::vector<std::vector<const CeaTransition*>> out_of(a.num_states);
  for (const auto& t : a.transitions) out_of[t.from].push_back(&t);

  ComplexEventSet result;
  std::size_t work = 0;
  // Frontier entries: (state, marked indices as a bitmask).
  std::set<std::pair<int, uint64_t>> frontier, next;
  for (std::size_t i = 0; i < s.size(); ++i) {
    frontier = {{a.initial, 0}};
    for (std::size_t k = i; k < s.size() && !frontier.empty(); ++k) {
      if (max_span && s[k].time - s[i].time > *max_span) break;
      next.clear();
      for (const auto& [q, marks] : frontier) {
        for (const CeaTransition* t : out_of[q]) {
          if (++work > budget) throw GuardError("run budget exceeded");
          if (!t->pred.Eval(s[k])) continue;
          uint64_t m = t->mark == Mark::kMark ? (marks | (uint64_t{1} << k)) : marks;
          next.emplace(t->to, m);
          if (a.IsFinal(t->to)) {
            ComplexEvent ce;
            ce.start = s[i].position;
            ce.end = s[k].position;
            for (std::size_t b = 0; b < s.size(); ++b) {
              if (m & (uint64_t{1} << b)) ce.data.push_back(s[b].position);
            }
            result.insert(std::move(ce));
          }
        }
      }
      frontier.swap(next);
    }
  }
  return result;
}

ComplexEventSet WithinFilter(const ComplexEventSet& cs,
                             std::optional<int64_t> window, const Stream& s) {
  if (!window) return cs;
  std::map<int64_t, int64_t> time_of;
  for (const auto& t : s) time_of[t.position] = t.time;
  ComplexEventSet out;
  for (const auto& c : cs) {
    if (time_of.at(c.end) - time_of.at(c.start) <= *window) out.insert(c);
  }
  return out;
}

Emissions GroupByEnd(const ComplexEventSet& cs) {
  Emissions out;
  for (const auto& c : cs) out[c.end].insert(c);
  return out;
}

Emissions QueryOracle(const PreparedQuery& q, const Stream& s) {
  std::map<std::string, Stream> parts;
  std::vector<std::string> order;
  for (const auto& t : s) {
    auto key = Route(t, q.partition_by);
    if (!key) continue;
    auto [it, fresh] = parts.try_emplace(key->encoded);
    if (fresh) order.push_back(key->encoded);
    it->second.push_back(t);
  }
  Emissions out;
  for (const auto& k : order) {
    const Stream& sub = parts[k];
    Emissions e = GroupByEnd(
        WithinFilter(BruteRuns(q.automaton->cea(), sub, q.window), q.window, sub));
    if (q.consume == ConsumePolicy::kAny) {
      // Each emission discards every run that started at or before it.
      std::optional<int64_t> reset;
      for (auto& [j, cs] : e) {
        ComplexEventSet kept;
        for (const auto& c : cs) {
          if (!reset || c.start > *reset) kept.insert(c);
        }
        cs = std::move(kept);
        if (!cs.empty()) reset = j;
      }
    }
    for (auto& [j, cs] : e) {
      if (!cs.empty()) out[j].insert(cs.begin(), cs.end());
    }
  }
  return out;
}

std::string OracleDiff::ToString() const {
  std::ostringstream os;
  for (const auto& [j, cs] : only_engine) {
    for (const auto& c : cs) os << "only in engine: j=" << j << " " << c.ToString() << "\n";
  }
  for (const auto& [j, cs] : only_oracle) {
    for (const auto& c : cs) os << "only in oracle: j=" << j << " " << c.ToString() << "\n";
  }
  return os.str();
}

OracleDiff Diff(const Emissions& engine, const Emissions& oracle) {
  OracleDiff d;
  auto side = [](const Emissions& a, const Emissions& b, Emissions& only) {
    for (const auto& [j, cs] : a) {
      auto it = b.find(j);
      for (const auto& c : cs) {
        if (it == b.end() || !it->second.count(c)) only[j].insert(c);
      }
    }
  };
  side(engine, oracle, d.only_engine);
  side(oracle, engine, d.only_oracle);
  return d;
}

}  // namespace cer
