#pragma once

// Replacement policies. Each policy owns the per-set metadata for one cache
// level; the level owns tags and valid/dirty bits and asks the policy where to
// place incoming lines.

#include <algorithm>
#include <cstdint>
#include <optional>
#include <span>
#include <variant>
#include <vector>

#include "rooftrace/cache/config.hpp"

namespace rooftrace::cache {

struct Line {
  std::uint64_t tag = 0;  // full line address
  bool valid = false;
  bool dirty = false;
  // The line was found in the last level at least once since it was brought
  // in from memory. Drives stream-one-way promotion in victim mode.
  bool llc_reused = false;
};

namespace detail {
inline std::optional<std::uint32_t> first_invalid(std::span<const Line> ways,
                                                  std::uint32_t from = 0) {
  for (std::uint32_t w = from; w < ways.size(); ++w)
    if (!ways[w].valid) return w;
  return std::nullopt;
}
}  // namespace detail

// Binary tree of direction bits over `leaves` ways, one tree per set. Works for
// any leaf count: a node covering [lo, hi) splits at lo + (hi - lo) / 2, and
// nodes are numbered in pre-order so the right child of node `n` whose left
// subtree has `l` leaves is `n + l`.
class PlruTree {
 public:
  PlruTree() = default;
  PlruTree(std::uint64_t sets, std::uint32_t leaves)
      : leaves_(leaves), nodes_(leaves > 0 ? leaves - 1 : 0), bits_(sets * nodes_, 0) {}

  std::uint32_t leaves() const { return leaves_; }

  // Leaf the bits point to (the approximate LRU leaf).
  std::uint32_t victim(std::uint64_t set) const {
    const std::uint8_t* b = bits_.data() + set * nodes_;
    std::uint32_t lo = 0, hi = leaves_, node = 0;
    while (hi - lo > 1) {
      const std::uint32_t mid = lo + (hi - lo) / 2;
      if (b[node] == 0) {
        hi = mid;
        node += 1;
      } else {
        node += mid - lo;
        lo = mid;
      }
    }
    return lo;
  }

  // Points every node on the path away from `leaf`.
  void touch(std::uint64_t set, std::uint32_t leaf) {
    std::uint8_t* b = bits_.data() + set * nodes_;
    std::uint32_t lo = 0, hi = leaves_, node = 0;
    while (hi - lo > 1) {
      const std::uint32_t mid = lo + (hi - lo) / 2;
      if (leaf < mid) {
        b[node] = 1;
        hi = mid;
        node += 1;
      } else {
        b[node] = 0;
        node += mid - lo;
        lo = mid;
      }
    }
  }

 private:
  std::uint32_t leaves_ = 0;
  std::uint32_t nodes_ = 0;
  std::vector<std::uint8_t> bits_;
};

class TrueLru {
 public:
  TrueLru(std::uint64_t sets, std::uint32_t ways) : ways_(ways), stamp_(sets * ways, 0) {}

  std::uint32_t victim(std::uint64_t set, std::span<const Line> ways, bool) const {
    if (auto w = detail::first_invalid(ways)) return *w;
    const std::uint64_t* s = stamp_.data() + set * ways_;
    std::uint32_t best = 0;
    for (std::uint32_t w = 1; w < ways_; ++w)
      if (s[w] < s[best]) best = w;
    return best;
  }
  void on_hit(std::uint64_t set, std::uint32_t way) { stamp_[set * ways_ + way] = ++clock_; }
  void on_fill(std::uint64_t set, std::uint32_t way) { on_hit(set, way); }
  void on_miss(std::uint64_t) {}
  std::optional<std::uint32_t> promotion_target(std::uint64_t, std::uint32_t,
                                                std::span<const Line>) const {
    return std::nullopt;
  }

 private:
  std::uint32_t ways_;
  std::uint64_t clock_ = 0;
  std::vector<std::uint64_t> stamp_;
};

class TreePlru {
 public:
  TreePlru(std::uint64_t sets, std::uint32_t ways) : tree_(sets, ways) {}

  std::uint32_t victim(std::uint64_t set, std::span<const Line> ways, bool) const {
    if (auto w = detail::first_invalid(ways)) return *w;
    return tree_.victim(set);
  }
  void on_hit(std::uint64_t set, std::uint32_t way) { tree_.touch(set, way); }
  void on_fill(std::uint64_t set, std::uint32_t way) { tree_.touch(set, way); }
  void on_miss(std::uint64_t) {}
  std::optional<std::uint32_t> promotion_target(std::uint64_t, std::uint32_t,
                                                std::span<const Line>) const {
    return std::nullopt;
  }

 private:
  PlruTree tree_;
};

// Streaming insertion: once a set has been filled, new lines only ever go to
// way 0, so the other ways keep their contents across a streaming sweep. A
// line that is reused while in way 0 is moved to one of the protected ways
// picked by tree-PLRU over ways 1..n-1. In victim mode the reused line leaves
// the cache on the hit and comes back from L2 with `llc_reused` set, which
// routes it to the protected ways the same way.
class StreamOneWay {
 public:
  static constexpr std::uint32_t kInsertWay = 0;

  StreamOneWay(std::uint64_t sets, std::uint32_t ways)
      : ways_(ways), protected_(sets, ways - 1), warm_(sets, 0) {}

  std::uint32_t victim(std::uint64_t set, std::span<const Line> ways, bool reused) {
    if (reused) return protected_victim(set, ways);
    if (!warm_[set]) {
      if (auto w = detail::first_invalid(ways)) return *w;
      warm_[set] = 1;
    }
    return kInsertWay;
  }
  void on_hit(std::uint64_t set, std::uint32_t way) {
    if (way != kInsertWay) protected_.touch(set, way - 1);
  }
  void on_fill(std::uint64_t set, std::uint32_t way) { on_hit(set, way); }
  void on_miss(std::uint64_t) {}

  // Where a line hit in the insertion way should move to (inclusive mode).
  std::optional<std::uint32_t> promotion_target(std::uint64_t set, std::uint32_t way,
                                                std::span<const Line> ways) const {
    if (way != kInsertWay) return std::nullopt;
    return protected_victim(set, ways);
  }

  bool warm(std::uint64_t set) const { return warm_[set] != 0; }

 private:
  std::uint32_t protected_victim(std::uint64_t set, std::span<const Line> ways) const {
    if (auto w = detail::first_invalid(ways, 1)) return *w;
    return 1 + protected_.victim(set);
  }

  std::uint32_t ways_;
  PlruTree protected_;
  std::vector<std::uint8_t> warm_;
};

// Set dueling between tree-PLRU and stream-one-way. Leader sets always run
// their own policy; misses in a PLRU leader increment the saturating selector,
// misses in a stream leader decrement it. Followers use stream-one-way while
// the selector is above its midpoint.
class AdaptiveDueling {
 public:
  enum class Role : std::uint8_t { Follower, PlruLeader, StreamLeader };

  AdaptiveDueling(std::uint64_t sets, std::uint32_t ways, DuelingParams params)
      : plru_(sets, ways),
        stream_(sets, ways),
        role_(sets, Role::Follower),
        max_((1u << params.selector_bits) - 1),
        mid_(1u << (params.selector_bits - 1)),
        selector_(mid_) {
    // Spread leaders evenly: each constituency of `stride` sets donates its
    // first set to PLRU and its second to stream-one-way.
    if (sets >= 2 && params.leader_sets > 0) {
      const std::uint64_t stride = std::max<std::uint64_t>(2, sets / params.leader_sets);
      for (std::uint64_t c = 0; c < params.leader_sets; ++c) {
        const std::uint64_t base = c * stride;
        if (base + 1 >= sets) break;
        role_[base] = Role::PlruLeader;
        role_[base + 1] = Role::StreamLeader;
      }
    }
  }

  std::uint32_t victim(std::uint64_t set, std::span<const Line> ways, bool reused) {
    if (uses_stream(set)) return stream_.victim(set, ways, reused);
    return plru_.victim(set, ways, reused);
  }
  void on_hit(std::uint64_t set, std::uint32_t way) {
    plru_.on_hit(set, way);
    stream_.on_hit(set, way);
  }
  void on_fill(std::uint64_t set, std::uint32_t way) {
    plru_.on_fill(set, way);
    stream_.on_fill(set, way);
  }
  void on_miss(std::uint64_t set) {
    switch (role_[set]) {
      case Role::PlruLeader:
        if (selector_ < max_) ++selector_;
        break;
      case Role::StreamLeader:
        if (selector_ > 0) --selector_;
        break;
      case Role::Follower:
        break;
    }
  }
  std::optional<std::uint32_t> promotion_target(std::uint64_t set, std::uint32_t way,
                                                std::span<const Line> ways) const {
    if (!uses_stream(set)) return std::nullopt;
    return stream_.promotion_target(set, way, ways);
  }

  bool uses_stream(std::uint64_t set) const {
    switch (role_[set]) {
      case Role::PlruLeader: return false;
      case Role::StreamLeader: return true;
      case Role::Follower: break;
    }
    return selector_ > mid_;
  }
  std::uint32_t selector() const { return selector_; }
  Role role(std::uint64_t set) const { return role_[set]; }

 private:
  TreePlru plru_;
  StreamOneWay stream_;
  std::vector<Role> role_;
  std::uint32_t max_;
  std::uint32_t mid_;
  std::uint32_t selector_;
};

using Policy = std::variant<TrueLru, TreePlru, StreamOneWay, AdaptiveDueling>;

inline Policy make_policy(const CacheConfig& c) {
  const auto sets = c.sets();
  switch (c.policy) {
    case PolicyKind::TrueLru: return TrueLru(sets, c.ways);
    case PolicyKind::TreePlru: return TreePlru(sets, c.ways);
    case PolicyKind::StreamOneWay: return StreamOneWay(sets, c.ways);
    case PolicyKind::AdaptiveDueling: return AdaptiveDueling(sets, c.ways, c.dueling);
  }
  return TrueLru(sets, c.ways);
}

}  // namespace rooftrace::cache
