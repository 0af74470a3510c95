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

#include "cer/tecs.h"

#include <algorithm>
#include <cassert>
#include <map>
#include <sstream>

namespace cer {
namespace {

constexpr uint64_t kDoomedSeq = std::numeric_limits<uint64_t>::max();

}  // namespace

NodeRef Tecs::Allocate(NodeKind kind) {
  uint32_t idx;
  if (!free_.empty()) {
    idx = free_.back();
    free_.pop_back();
  } else {
    idx = static_cast<uint32_t>(nodes_.size());
    nodes_.emplace_back();
    bucket_seq_.push_back(0);
  }
  Node& n = nodes_[idx];
  n.kind = kind;
  n.odepth = 0;
  n.a = NodeRef();
  n.b = NodeRef();
  n.bucket_next = NodeRef::kNullIndex;
  ++live_;
  ++counters_.allocations;
  counters_.peak_live = std::max(counters_.peak_live, live_);
  return NodeRef{idx, n.gen};
}

void Tecs::FileNode(uint32_t index, uint64_t seq) {
  bucket_seq_[index] = seq;
  if (seq == kDoomedSeq) {
    nodes_[index].bucket_next = doomed_;
    doomed_ = index;
    return;
  }
  Bucket& b = buckets_[seq - bucket_base_];
  nodes_[index].bucket_next = b.head;
  b.head = index;
}

void Tecs::Free(uint32_t index) {
  Node& n = nodes_[index];
  n.kind = NodeKind::kFree;
  ++n.gen;
  --live_;
  ++counters_.reclaimed;
  free_.push_back(index);
}

NodeRef Tecs::NewBottom(int64_t pos, int64_t time) {
  NodeRef r = Allocate(NodeKind::kBottom);
  Node& n = nodes_[r.index];
  n.pos = pos;
  n.time = time;
  n.max = Stamp{time, pos};
  if (buckets_.empty() || buckets_.back().pos != pos ||
      buckets_.back().time != time) {
    buckets_.push_back(Bucket{time, pos, NodeRef::kNullIndex});
  }
  FileNode(r.index, bucket_base_ + buckets_.size() - 1);
  return r;
}

NodeRef Tecs::Extend(NodeRef next, int64_t pos, int64_t time) {
  assert(Valid(next));
  NodeRef r = Allocate(NodeKind::kOutput);
  Node& n = nodes_[r.index];
  n.pos = pos;
  n.time = time;
  n.a = next;
  n.max = nodes_[next.index].max;
  FileNode(r.index, BucketOf(next));
  return r;
}

NodeRef Tecs::MakeUnion(NodeRef left, NodeRef right) {
  NodeRef r = Allocate(NodeKind::kUnion);
  Node& n = nodes_[r.index];
  n.a = left;
  n.b = right;
  if (Valid(left)) {
    n.max = nodes_[left.index].max;
    n.odepth = static_cast<uint8_t>(nodes_[left.index].odepth + 1);
    FileNode(r.index, BucketOf(left));
  } else {
    // Only reachable when both operands are already expired.
    n.max = kExpiredStamp;
    n.odepth = 1;
    FileNode(r.index, kDoomedSeq);
  }
  if (audit_) {
    ++counters_.audited_unions;
    if (MaxStart(right) > n.max) ++counters_.time_order_violations;
    if (n.odepth > 3) ++counters_.depth_violations;
  }
  return r;
}

bool Tecs::IsSafe(NodeRef n) const {
  if (!Valid(n)) return false;
  const Node& x = nodes_[n.index];
  if (x.kind != NodeKind::kUnion) return true;
  return x.odepth == 1 && ODepth(x.b) <= 2;
}

NodeRef Tecs::Union(NodeRef n1, NodeRef n2) {
  assert(IsSafe(n1) && IsSafe(n2));
  assert(MaxStart(n1) == MaxStart(n2));
  if (Kind(n1) != NodeKind::kUnion) return MakeUnion(n1, n2);
  if (Kind(n2) != NodeKind::kUnion) return MakeUnion(n2, n1);
  NodeRef l1 = Left(n1), r1 = Right(n1);
  NodeRef l2 = Left(n2), r2 = Right(n2);
  NodeRef u2 = MaxStart(r1) >= MaxStart(r2) ? MakeUnion(r1, r2) : MakeUnion(r2, r1);
  NodeRef u1 = MakeUnion(l2, u2);
  return MakeUnion(l1, u1);
}

UnionList Tecs::UlInit(NodeRef n) const {
  assert(Valid(n) && Kind(n) != NodeKind::kUnion);
  return UnionList{n};
}

void Tecs::UlInsert(UnionList& ul, NodeRef n) {
  assert(!ul.empty() && IsSafe(n));
  Stamp s = MaxStart(n);
  assert(s <= MaxStart(ul[0]));
  for (std::size_t i = 1; i < ul.size(); ++i) {
    if (MaxStart(ul[i]) == s) {
      ul[i] = Union(ul[i], n);
      return;
    }
  }
  if (s == MaxStart(ul[0])) {
    ul.insert(ul.begin() + 1, n);
    return;
  }
  std::size_t i = 1;
  while (i < ul.size() && MaxStart(ul[i]) > s) ++i;
  ul.insert(ul.begin() + static_cast<std::ptrdiff_t>(i), n);
}

NodeRef Tecs::Merge(const UnionList& ul) {
  assert(!ul.empty());
  std::size_t k = ul.size() - 1;
  if (k == 0) return ul[0];
  NodeRef u = MakeUnion(ul[k - 1], ul[k]);
  for (std::size_t i = k - 1; i-- > 0;) u = MakeUnion(ul[i], u);
  return u;
}

std::size_t Tecs::Enumerate(NodeRef n, int64_t j, int64_t now,
                            std::optional<int64_t> window,
                            const std::function<bool(const ComplexEvent&)>& sink,
                            std::size_t limit, DelayProbe* probe) {
  int64_t floor = WindowFloor(now, window);
  if (!Valid(n) || nodes_[n.index].max.time < floor) return 0;
  chain_.clear();
  stack_.clear();
  stack_.emplace_back(n, -1);
  std::size_t emitted = 0;
  std::size_t visited = 0;
  ComplexEvent ce;
  while (!stack_.empty()) {
    auto [m, chain] = stack_.back();
    stack_.pop_back();
    while (true) {
      ++visited;
      const Node& x = nodes_[m.index];
      if (x.kind == NodeKind::kBottom) {
        ce.start = x.pos;
        ce.end = j;
        ce.data.clear();
        for (int32_t c = chain; c >= 0; c = chain_[c].next) {
          ce.data.push_back(chain_[c].pos);
        }
        if (probe != nullptr) {
          ++probe->emissions;
          probe->total_visited += visited;
          probe->max_visited = std::max(probe->max_visited, visited);
          if (visited > 3 * (ce.data.size() + 2)) ++probe->violations;
        }
        visited = 0;
        ++emitted;
        if (!sink(ce)) return emitted;
        if (limit > 0 && emitted >= limit) return emitted;
        break;
      }
      if (x.kind == NodeKind::kOutput) {
        chain_.push_back(Link{x.pos, chain});
        chain = static_cast<int32_t>(chain_.size() - 1);
        m = x.a;
        continue;
      }
      if (Valid(x.b) && nodes_[x.b.index].max.time >= floor) {
        stack_.emplace_back(x.b, chain);
      }
      m = x.a;
    }
  }
  return emitted;
}

void Tecs::Prune(int64_t now, int64_t window) {
  int64_t floor = WindowFloor(now, window);
  while (!buckets_.empty() && buckets_.front().time < floor) {
    for (uint32_t i = buckets_.front().head; i != NodeRef::kNullIndex;) {
      uint32_t next = nodes_[i].bucket_next;
      Free(i);
      i = next;
    }
    buckets_.pop_front();
    ++bucket_base_;
  }
  for (uint32_t i = doomed_; i != NodeRef::kNullIndex;) {
    uint32_t next = nodes_[i].bucket_next;
    Free(i);
    i = next;
  }
  doomed_ = NodeRef::kNullIndex;
}

std::vector<std::pair<int64_t, std::vector<int64_t>>> Tecs::Contents(
    NodeRef n) const {
  std::vector<std::pair<int64_t, std::vector<int64_t>>> out;
  if (!Valid(n)) return out;
  const Node& x = nodes_[n.index];
  switch (x.kind) {
    case NodeKind::kBottom:
      out.push_back({x.pos, {}});
      break;
    case NodeKind::kOutput:
      out = Contents(x.a);
      for (auto& [start, data] : out) {
        data.insert(std::upper_bound(data.begin(), data.end(), x.pos), x.pos);
      }
      break;
    case NodeKind::kUnion: {
      out = Contents(x.a);
      auto right = Contents(x.b);
      out.insert(out.end(), right.begin(), right.end());
      break;
    }
    case NodeKind::kFree:
      break;
  }
  return out;
}

std::size_t Tecs::AuditAll() const {
  std::size_t bad = 0;
  for (uint32_t i = 0; i < nodes_.size(); ++i) {
    const Node& x = nodes_[i];
    if (x.kind != NodeKind::kUnion) continue;
    NodeRef left = x.a;
    if (!Valid(left)) {
      if (x.max != kExpiredStamp) ++bad;
      continue;
    }
    if (x.max != nodes_[left.index].max) ++bad;
    if (MaxStart(x.b) > x.max) ++bad;
    if (x.odepth != nodes_[left.index].odepth + 1 || x.odepth > 3) ++bad;
  }
  return bad;
}

std::string Tecs::Dump(const std::vector<NodeRef>& roots) const {
  std::map<uint32_t, int> ids;
  std::vector<NodeRef> order;
  std::function<void(NodeRef)> visit = [&](NodeRef n) {
    if (!Valid(n) || ids.count(n.index)) return;
    ids[n.index] = static_cast<int>(order.size());
    order.push_back(n);
    const Node& x = nodes_[n.index];
    if (x.kind == NodeKind::kOutput) visit(x.a);
    if (x.kind == NodeKind::kUnion) {
      visit(x.a);
      visit(x.b);
    }
  };
  for (NodeRef r : roots) visit(r);
  auto name = [&](NodeRef n) {
    return Valid(n) ? "#" + std::to_string(ids.at(n.index)) : std::string("expired");
  };
  std::ostringstream os;
  for (NodeRef n : order) {
    const Node& x = nodes_[n.index];
    os << name(n) << " ";
    switch (x.kind) {
      case NodeKind::kBottom: os << "bottom pos=" << x.pos; break;
      case NodeKind::kOutput: os << "output pos=" << x.pos << " next=" << name(x.a); break;
      case NodeKind::kUnion:
        os << "union left=" << name(x.a) << " right=" << name(x.b);
        break;
      case NodeKind::kFree: break;
    }
    os << " max=" << x.max.pos << "@" << x.max.time << "\n";
  }
  return os.str();
}

}  // namespace cer
