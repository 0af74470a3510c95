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

#ifndef CER_TECS_H_
#define CER_TECS_H_

#include <cstdint>
#include <deque>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cer/event.h"

namespace cer {

// Handle to a tECS node. A handle goes stale when its node is reclaimed; the
// generation check makes stale handles detectable instead of dangling.
struct NodeRef {
  static constexpr uint32_t kNullIndex = std::numeric_limits<uint32_t>::max();
  uint32_t index = kNullIndex;
  uint32_t gen = 0;

  bool is_null() const { return index == kNullIndex; }
  friend bool operator==(const NodeRef&, const NodeRef&) = default;
};

enum class NodeKind : uint8_t { kFree, kBottom, kOutput, kUnion };

// Maximum start of the open complex events below a node, ordered by time and
// then by position.
struct Stamp {
  int64_t time = 0;
  int64_t pos = 0;

  friend bool operator==(const Stamp&, const Stamp&) = default;
  friend auto operator<=>(const Stamp&, const Stamp&) = default;
};

// Reported for stale handles; older than every real start.
inline constexpr Stamp kExpiredStamp{std::numeric_limits<int64_t>::min(),
                                     std::numeric_limits<int64_t>::min()};

using UnionList = std::vector<NodeRef>;

// Enumeration instrumentation: nodes visited between consecutive emissions
// against the bound 3 * (|data| + 2).
struct DelayProbe {
  std::size_t emissions = 0;
  std::size_t violations = 0;
  std::size_t max_visited = 0;
  std::size_t total_visited = 0;
};

class Tecs {
 public:
  struct Counters {
    std::size_t allocations = 0;
    std::size_t reclaimed = 0;
    std::size_t peak_live = 0;
    // Structural checks on every new union node, when auditing.
    std::size_t audited_unions = 0;
    std::size_t time_order_violations = 0;
    std::size_t depth_violations = 0;
  };

  Tecs() = default;
  Tecs(const Tecs&) = delete;
  Tecs& operator=(const Tecs&) = delete;

  void set_audit(bool on) { audit_ = on; }

  NodeRef NewBottom(int64_t pos, int64_t time);
  NodeRef Extend(NodeRef n, int64_t pos, int64_t time);
  // Preconditions: both safe, equal maxstart, disjoint contents.
  NodeRef Union(NodeRef n1, NodeRef n2);

  UnionList UlInit(NodeRef n) const;
  // Precondition: n safe and MaxStart(n) <= MaxStart(ul[0]).
  void UlInsert(UnionList& ul, NodeRef n);
  NodeRef Merge(const UnionList& ul);

  bool Valid(NodeRef n) const {
    return !n.is_null() && n.index < nodes_.size() &&
           nodes_[n.index].gen == n.gen && nodes_[n.index].kind != NodeKind::kFree;
  }
  NodeKind Kind(NodeRef n) const { return Valid(n) ? nodes_[n.index].kind : NodeKind::kFree; }
  int64_t Pos(NodeRef n) const { return nodes_[n.index].pos; }
  int64_t Time(NodeRef n) const { return nodes_[n.index].time; }
  NodeRef Next(NodeRef n) const { return nodes_[n.index].a; }
  NodeRef Left(NodeRef n) const { return nodes_[n.index].a; }
  NodeRef Right(NodeRef n) const { return nodes_[n.index].b; }
  Stamp MaxStart(NodeRef n) const {
    return Valid(n) ? nodes_[n.index].max : kExpiredStamp;
  }
  int ODepth(NodeRef n) const { return Valid(n) ? nodes_[n.index].odepth : 0; }
  bool IsSafe(NodeRef n) const;

  // Emits ([i, j], D) for every (i, D) below n with now - time(i) <= window
  // (no window: everything). Stops after limit emissions when limit > 0.
  // The sink returns false to stop early. Returns the number emitted.
  std::size_t Enumerate(NodeRef n, int64_t j, int64_t now,
                        std::optional<int64_t> window,
                        const std::function<bool(const ComplexEvent&)>& sink,
                        std::size_t limit = 0, DelayProbe* probe = nullptr);

  // Reclaims every node whose maxstart time is older than now - window.
  // Such nodes can no longer reach any windowed output; references to them
  // from younger nodes (always right children) go stale. Positions given to
  // NewBottom must be non-decreasing for pruning to be complete.
  void Prune(int64_t now, int64_t window);

  std::size_t live_nodes() const { return live_; }
  std::size_t capacity() const { return nodes_.size(); }
  const Counters& counters() const { return counters_; }

  // Every (start, positions) pair below n, with repetitions, by exhaustive
  // DFS and ignoring windows. Positions ascending. For tests.
  std::vector<std::pair<int64_t, std::vector<int64_t>>> Contents(NodeRef n) const;

  // Checks time-ordering and 3-boundedness of every live node. Returns the
  // number of violations.
  std::size_t AuditAll() const;

  // Deterministic rendering of the sub-DAG reachable from roots.
  std::string Dump(const std::vector<NodeRef>& roots) const;

 private:
  struct Node {
    NodeKind kind = NodeKind::kFree;
    uint8_t odepth = 0;
    uint32_t gen = 0;
    int64_t pos = 0;
    int64_t time = 0;
    NodeRef a;  // next (output) or left (union)
    NodeRef b;  // right (union)
    Stamp max;
    uint32_t bucket_next = NodeRef::kNullIndex;
  };
  // Nodes grouped by the position of their maxstart, oldest first.
  struct Bucket {
    int64_t time = 0;
    int64_t pos = 0;
    uint32_t head = NodeRef::kNullIndex;
  };

  NodeRef Allocate(NodeKind kind);
  NodeRef MakeUnion(NodeRef left, NodeRef right);
  // Files a node under the bucket of its maxstart.
  void FileNode(uint32_t index, uint64_t bucket_seq);
  uint64_t BucketOf(NodeRef n) const { return bucket_seq_[n.index]; }
  void Free(uint32_t index);

  std::vector<Node> nodes_;
  std::vector<uint64_t> bucket_seq_;  // parallel to nodes_
  std::vector<uint32_t> free_;
  std::deque<Bucket> buckets_;
  uint64_t bucket_base_ = 0;  // sequence number of buckets_.front()
  uint32_t doomed_ = NodeRef::kNullIndex;  // nodes built over stale handles
  std::size_t live_ = 0;
  bool audit_ = false;
  Counters counters_;

  // Enumeration scratch: persistent position chains and the DFS stack.
  struct Link {
    int64_t pos;
    int32_t next;
  };
  std::vector<Link> chain_;
  std::vector<std::pair<NodeRef, int32_t>> stack_;
};

// Oldest start time a window still keeps, now - window, saturating. No window
// keeps everything.
inline int64_t WindowFloor(int64_t now, std::optional<int64_t> window) {
  if (!window) return std::numeric_limits<int64_t>::min();
  if (now < 0 && *window > now - std::numeric_limits<int64_t>::min()) {
    return std::numeric_limits<int64_t>::min();
  }
  return now - *window;
}

}  // namespace cer

#endif  // CER_TECS_H_
