#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "rooftrace/errors.hpp"

namespace rooftrace::cache {

enum class PolicyKind { TrueLru, TreePlru, StreamOneWay, AdaptiveDueling };

// `Inclusive` on an inner level means "contains every line of the levels
// closer to the core". Only the last level may be a victim cache.
enum class Inclusion { Inclusive, VictimNonInclusive };

inline std::string_view to_string(PolicyKind p) {
  switch (p) {
    case PolicyKind::TrueLru: return "true-lru";
    case PolicyKind::TreePlru: return "tree-plru";
    case PolicyKind::StreamOneWay: return "stream-one-way";
    case PolicyKind::AdaptiveDueling: return "adaptive-dueling";
  }
  return "?";
}

inline PolicyKind parse_policy(std::string_view s) {
  if (s == "true-lru" || s == "lru") return PolicyKind::TrueLru;
  if (s == "tree-plru" || s == "plru") return PolicyKind::TreePlru;
  if (s == "stream-one-way") return PolicyKind::StreamOneWay;
  if (s == "adaptive-dueling" || s == "adaptive") return PolicyKind::AdaptiveDueling;
  throw DomainError("unknown replacement policy '" + std::string(s) + "'");
}

inline std::string_view to_string(Inclusion i) {
  return i == Inclusion::Inclusive ? "inclusive" : "victim";
}

inline Inclusion parse_inclusion(std::string_view s) {
  if (s == "inclusive") return Inclusion::Inclusive;
  if (s == "victim" || s == "victim-noninclusive" || s == "victim_noninclusive")
    return Inclusion::VictimNonInclusive;
  throw DomainError("unknown inclusion mode '" + std::string(s) + "'");
}

// Set-dueling knobs for PolicyKind::AdaptiveDueling.
struct DuelingParams {
  std::uint32_t leader_sets = 32;  // per competing policy
  std::uint32_t selector_bits = 10;
};

struct CacheConfig {
  std::string name = "L?";
  std::uint64_t capacity = 0;  // bytes
  std::uint32_t ways = 0;
  std::uint32_t line_size = 64;
  Inclusion inclusion = Inclusion::Inclusive;
  PolicyKind policy = PolicyKind::TrueLru;
  bool allow_non_pow2_sets = false;
  DuelingParams dueling{};

  std::uint64_t sets() const {
    return capacity / (static_cast<std::uint64_t>(ways) * line_size);
  }

  std::uint64_t lines() const { return capacity / line_size; }

  void validate() const {
    if (ways == 0 || line_size == 0 || capacity == 0)
      throw DomainError(name + ": capacity, ways and line size must be positive");
    if ((line_size & (line_size - 1)) != 0)
      throw DomainError(name + ": line size must be a power of two");
    const std::uint64_t way_bytes = static_cast<std::uint64_t>(ways) * line_size;
    if (capacity % way_bytes != 0)
      throw DomainError(name + ": capacity " + std::to_string(capacity) +
                        " not divisible by ways x line size (" + std::to_string(way_bytes) +
                        ")");
    const auto s = sets();
    if (!allow_non_pow2_sets && (s & (s - 1)) != 0)
      throw DomainError(name + ": " + std::to_string(s) +
                        " sets is not a power of two (set allow_non_pow2_sets)");
    if (policy == PolicyKind::StreamOneWay || policy == PolicyKind::AdaptiveDueling) {
      if (ways < 2) throw DomainError(name + ": streaming insertion needs at least 2 ways");
    }
    if (policy == PolicyKind::AdaptiveDueling &&
        (dueling.selector_bits == 0 || dueling.selector_bits > 30))
      throw DomainError(name + ": selector_bits must be in [1, 30]");
  }
};

// Same ways and line size, set count multiplied by `factor` (at least one set).
// Used to shrink a real machine's caches to desk-scale problem sizes.
inline CacheConfig scaled(CacheConfig c, double factor) {
  if (!(factor > 0.0)) throw DomainError("cache scale factor must be positive");
  auto s = static_cast<std::uint64_t>(static_cast<double>(c.sets()) * factor);
  if (s == 0) s = 1;
  c.capacity = s * c.ways * c.line_size;
  c.allow_non_pow2_sets = true;
  return c;
}

inline std::vector<CacheConfig> scaled(std::vector<CacheConfig> cs, double factor) {
  for (auto& c : cs) c = scaled(c, factor);
  return cs;
}

namespace presets {

inline std::vector<CacheConfig> clx() {
  return {
      {"L1", 32 * 1024, 8, 64, Inclusion::Inclusive, PolicyKind::TrueLru},
      {"L2", 1024 * 1024, 16, 64, Inclusion::Inclusive, PolicyKind::TrueLru},
      // 20 slices of 1.375 MB folded into one 11-way cache (40960 sets).
      {"L3", 28835840, 11, 64, Inclusion::VictimNonInclusive, PolicyKind::AdaptiveDueling,
       true},
  };
}

inline std::vector<CacheConfig> bdw() {
  return {
      {"L1", 32 * 1024, 8, 64, Inclusion::Inclusive, PolicyKind::TrueLru},
      {"L2", 256 * 1024, 8, 64, Inclusion::Inclusive, PolicyKind::TrueLru},
      // 18 slices of 2.5 MB, 20 ways (36864 sets).
      {"L3", 47185920, 20, 64, Inclusion::Inclusive, PolicyKind::TreePlru, true},
  };
}

inline std::vector<CacheConfig> by_name(std::string_view name) {
  if (name == "clx") return clx();
  if (name == "bdw") return bdw();
  throw DomainError("unknown cache preset '" + std::string(name) + "' (expected bdw or clx)");
}

}  // namespace presets
}  // namespace rooftrace::cache
