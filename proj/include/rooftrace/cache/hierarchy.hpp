#pragma once

// Trace-driven multi-level cache hierarchy.
//
// Inner levels are inclusive of the levels closer to the core (L1 is a subset
// of L2). The last level is either inclusive of everything (filled on memory
// misses, evictions back-invalidate inner copies) or a non-inclusive victim
// cache (filled only by lines evicted from the level above it; a hit moves the
// line back up and invalidates it here). Write-back, write-allocate; non-
// temporal stores bypass all levels through a small write-combining buffer.

#include <algorithm>
#include <cstdint>
#include <deque>
#include <optional>
#include <span>
#include <string>
#include <unordered_set>
#include <utility>
#include <variant>
#include <vector>

#include "rooftrace/cache/config.hpp"
#include "rooftrace/cache/policy.hpp"
#include "rooftrace/errors.hpp"
#include "rooftrace/trace.hpp"

namespace rooftrace::cache {

struct LevelStats {
  std::string name;
  std::uint64_t hits = 0;
  std::uint64_t misses = 0;

  std::uint64_t references() const { return hits + misses; }
  double hit_rate() const {
    return references() == 0 ? 0.0 : static_cast<double>(hits) / references();
  }
};

class CacheLevel {
 public:
  explicit CacheLevel(const CacheConfig& cfg)
      : cfg_(cfg),
        sets_(cfg.sets()),
        ways_(cfg.ways),
        lines_(sets_ * ways_),
        policy_(make_policy(cfg)) {
    stats_.name = cfg.name;
  }

  const CacheConfig& config() const { return cfg_; }
  std::uint64_t sets() const { return sets_; }
  std::uint32_t ways() const { return ways_; }
  std::uint64_t set_of(std::uint64_t line) const { return line % sets_; }

  std::span<const Line> set_lines(std::uint64_t set) const {
    return {lines_.data() + set * ways_, ways_};
  }

  std::optional<std::uint32_t> find(std::uint64_t line) const {
    const auto s = set_lines(set_of(line));
    for (std::uint32_t w = 0; w < ways_; ++w)
      if (s[w].valid && s[w].tag == line) return w;
    return std::nullopt;
  }

  bool contains(std::uint64_t line) const { return find(line).has_value(); }

  Line& at(std::uint64_t set, std::uint32_t way) { return lines_[set * ways_ + way]; }
  const Line& at(std::uint64_t set, std::uint32_t way) const { return lines_[set * ways_ + way]; }

  void record_hit(std::uint64_t set, std::uint32_t way) {
    ++stats_.hits;
    std::visit([&](auto& p) { p.on_hit(set, way); }, policy_);
  }

  void record_miss(std::uint64_t line) {
    ++stats_.misses;
    std::visit([&](auto& p) { p.on_miss(set_of(line)); }, policy_);
  }

  // Places `line` and returns whatever occupied the chosen way.
  Line insert(std::uint64_t line, bool dirty, bool llc_reused) {
    const auto set = set_of(line);
    const auto way =
        std::visit([&](auto& p) { return p.victim(set, set_lines(set), llc_reused); }, policy_);
    Line old = at(set, way);
    at(set, way) = Line{line, true, dirty, llc_reused};
    std::visit([&](auto& p) { p.on_fill(set, way); }, policy_);
    return old;
  }

  std::optional<Line> remove(std::uint64_t line) {
    const auto way = find(line);
    if (!way) return std::nullopt;
    Line& l = at(set_of(line), *way);
    Line old = l;
    l = Line{};
    return old;
  }

  std::optional<std::uint32_t> promotion_target(std::uint64_t set, std::uint32_t way) const {
    return std::visit([&](const auto& p) { return p.promotion_target(set, way, set_lines(set)); },
                      policy_);
  }

  // Moves the line at (set, from) to (set, to); returns the displaced line.
  Line relocate(std::uint64_t set, std::uint32_t from, std::uint32_t to) {
    Line displaced = at(set, to);
    at(set, to) = at(set, from);
    at(set, from) = Line{};
    std::visit([&](auto& p) { p.on_fill(set, to); }, policy_);
    return displaced;
  }

  template <class F>
  void for_each_valid(F&& f) {
    for (auto& l : lines_)
      if (l.valid) f(l);
  }

  const LevelStats& stats() const { return stats_; }
  void reset_stats() { stats_.hits = stats_.misses = 0; }
  const Policy& policy() const { return policy_; }

 private:
  CacheConfig cfg_;
  std::uint64_t sets_;
  std::uint32_t ways_;
  std::vector<Line> lines_;
  Policy policy_;
  LevelStats stats_;
};

// Index of the level that served an access; kMemory when no level had it,
// kBypass for non-temporal stores.
struct AccessOutcome {
  static constexpr int kMemory = -1;
  static constexpr int kBypass = -2;
  int served_by = kMemory;
};

struct TrafficReport {
  std::vector<LevelStats> levels;
  std::uint64_t accesses = 0;
  std::uint64_t bytes_read_mem = 0;
  std::uint64_t bytes_written_mem = 0;
  std::uint64_t work_count = 0;

  std::uint64_t bytes_mem() const { return bytes_read_mem + bytes_written_mem; }
  double llc_hit_rate() const { return levels.empty() ? 0.0 : levels.back().hit_rate(); }
  // bytes per iteration / row / nonzero, depending on what work_count counts
  double bytes_per_work() const {
    return work_count == 0 ? 0.0 : static_cast<double>(bytes_mem()) / work_count;
  }
};

class CacheHierarchy {
 public:
  static constexpr std::size_t kWriteCombineBuffers = 10;

  explicit CacheHierarchy(const std::vector<CacheConfig>& configs) {
    if (configs.empty()) throw DomainError("a hierarchy needs at least one level");
    for (std::size_t i = 0; i < configs.size(); ++i) {
      const auto& c = configs[i];
      c.validate();
      if (c.line_size != configs.front().line_size)
        throw DomainError("all levels must share one line size");
      if (i > 0 && c.capacity <= configs[i - 1].capacity)
        throw DomainError(c.name + ": capacity must exceed that of " + configs[i - 1].name);
      if (c.inclusion == Inclusion::VictimNonInclusive) {
        if (i + 1 != configs.size())
          throw DomainError(c.name + ": only the last level can be a victim cache");
        if (configs.size() < 2) throw DomainError(c.name + ": a victim cache needs an inner level");
      }
    }
    line_size_ = configs.front().line_size;
    victim_llc_ = configs.back().inclusion == Inclusion::VictimNonInclusive;
    levels_.reserve(configs.size());
    for (const auto& c : configs) levels_.emplace_back(c);
  }

  std::size_t depth() const { return levels_.size(); }
  std::uint32_t line_size() const { return line_size_; }
  bool victim_llc() const { return victim_llc_; }
  const CacheLevel& level(std::size_t i) const { return levels_.at(i); }

  AccessOutcome access(std::uint64_t addr, AccessKind kind) {
    ++accesses_;
    const std::uint64_t line = addr / line_size_;
    if (kind == AccessKind::StoreNT) {
      store_nt(line);
      return {AccessOutcome::kBypass};
    }

    const int n = static_cast<int>(levels_.size());
    int hit = AccessOutcome::kMemory;
    std::uint32_t hit_way = 0;
    for (int i = 0; i < n; ++i) {
      if (auto w = levels_[i].find(line)) {
        hit = i;
        hit_way = *w;
        break;
      }
      levels_[i].record_miss(line);
    }

    const int llc = n - 1;
    if (hit == 0) {
      auto& l = levels_[0];
      const auto set = l.set_of(line);
      l.record_hit(set, hit_way);
      if (kind == AccessKind::Store) l.at(set, hit_way).dirty = true;
      return {0};
    }

    int fill_from = 0;  // levels [0, fill_from) receive the line
    bool carried_dirty = false;
    bool reused = false;
    if (hit == AccessOutcome::kMemory) {
      bytes_read_ += line_size_;
      if (victim_llc_) {
        fill_from = llc;
      } else {
        fill_level(llc, line, false, false);
        fill_from = llc;
      }
    } else if (hit == llc && victim_llc_) {
      auto& l = levels_[llc];
      const auto set = l.set_of(line);
      l.record_hit(set, hit_way);
      carried_dirty = l.at(set, hit_way).dirty;
      l.at(set, hit_way) = Line{};
      reused = true;
      fill_from = llc;
    } else {
      auto& l = levels_[hit];
      const auto set = l.set_of(line);
      l.record_hit(set, hit_way);
      if (hit == llc) {
        l.at(set, hit_way).llc_reused = true;
        if (auto to = l.promotion_target(set, hit_way)) promote(set, hit_way, *to);
      }
      fill_from = hit;
    }

    for (int j = fill_from - 1; j >= 0; --j) {
      const bool adjacent_to_victim = victim_llc_ && j == llc - 1;
      fill_level(j, line, adjacent_to_victim && carried_dirty, adjacent_to_victim && reused);
    }
    if (kind == AccessKind::Store) {
      auto& l = levels_[0];
      l.at(l.set_of(line), *l.find(line)).dirty = true;
    }
    return {hit};
  }

  void operator()(std::uint64_t addr, AccessKind kind) { access(addr, kind); }

  // Writes every dirty line back to memory exactly once and marks it clean.
  void flush() {
    std::unordered_set<std::uint64_t> dirty;
    for (auto& l : levels_)
      l.for_each_valid([&](Line& ln) {
        if (ln.dirty) {
          dirty.insert(ln.tag);
          ln.dirty = false;
        }
      });
    bytes_written_ += dirty.size() * line_size_;
    wc_.clear();
  }

  void reset_stats() {
    for (auto& l : levels_) l.reset_stats();
    accesses_ = bytes_read_ = bytes_written_ = 0;
  }

  TrafficReport report(std::uint64_t work_count = 0) const {
    TrafficReport r;
    for (const auto& l : levels_) r.levels.push_back(l.stats());
    r.accesses = accesses_;
    r.bytes_read_mem = bytes_read_;
    r.bytes_written_mem = bytes_written_;
    r.work_count = work_count;
    return r;
  }

  bool contains(std::size_t level, std::uint64_t addr) const {
    return levels_.at(level).contains(addr / line_size_);
  }

 private:
  void fill_level(int j, std::uint64_t line, bool dirty, bool reused) {
    Line ev = levels_[j].insert(line, dirty, reused);
    if (ev.valid) evict(j, ev);
  }

  // `ev` just left level j.
  void evict(int j, Line ev) {
    bool dirty = ev.dirty;
    for (int k = j - 1; k >= 0; --k)
      if (auto inner = levels_[k].remove(ev.tag)) dirty = dirty || inner->dirty;

    const int llc = static_cast<int>(levels_.size()) - 1;
    if (j == llc) {
      if (dirty) bytes_written_ += line_size_;
    } else if (victim_llc_ && j + 1 == llc) {
      Line out = levels_[llc].insert(ev.tag, dirty, ev.llc_reused);
      if (out.valid && out.dirty) bytes_written_ += line_size_;
    } else if (dirty) {
      auto& outer = levels_[j + 1];
      if (auto w = outer.find(ev.tag)) outer.at(outer.set_of(ev.tag), *w).dirty = true;
    }
  }

  void promote(std::uint64_t set, std::uint32_t from, std::uint32_t to) {
    auto& l = levels_.back();
    Line displaced = l.relocate(set, from, to);
    if (displaced.valid) evict(static_cast<int>(levels_.size()) - 1, displaced);
  }

  void store_nt(std::uint64_t line) {
    bool dirty = false;
    for (auto& l : levels_)
      if (auto old = l.remove(line)) dirty = dirty || old->dirty;
    if (dirty) bytes_written_ += line_size_;
    if (std::find(wc_.begin(), wc_.end(), line) != wc_.end()) return;
    bytes_written_ += line_size_;
    wc_.push_back(line);
    if (wc_.size() > kWriteCombineBuffers) wc_.pop_front();
  }

  std::vector<CacheLevel> levels_;
  std::uint32_t line_size_ = 64;
  bool victim_llc_ = false;
  std::uint64_t accesses_ = 0;
  std::uint64_t bytes_read_ = 0;
  std::uint64_t bytes_written_ = 0;
  std::deque<std::uint64_t> wc_;
};

inline CacheHierarchy build_hierarchy(const std::vector<CacheConfig>& configs) {
  return CacheHierarchy(configs);
}

// Runs a trace on `h` from its current state. With `flush` set, dirty lines
// still cached at the end are written back and counted.
inline TrafficReport run_trace(CacheHierarchy& h, const Trace& trace, std::uint64_t work_count,
                               bool flush = true) {
  if (trace.empty()) throw DomainError("trace is empty");
  h.reset_stats();
  for (const auto& r : trace.records) h.access(r.addr, r.kind);
  if (flush) h.flush();
  return h.report(work_count);
}

// Same for an in-process generator: `gen(sink)` calls `sink(addr, kind)`.
template <class Generator>
TrafficReport run_generator(CacheHierarchy& h, Generator&& gen, std::uint64_t work_count,
                            bool flush = true) {
  h.reset_stats();
  gen(h);
  if (flush) h.flush();
  return h.report(work_count);
}

struct HitRatePoint {
  double ratio = 0.0;          // data set size / last-level capacity
  double llc_hit_rate = 0.0;   // measured passes only
  std::uint64_t llc_references = 0;
};

// Load-only streaming over an array of ratio x (last-level capacity) bytes,
// repeated `passes` times on a cold hierarchy built from `configs`. The first
// pass warms the caches; the rest are measured.
inline std::vector<HitRatePoint> hit_rate_curve(const std::vector<CacheConfig>& configs,
                                                const std::vector<double>& ratios,
                                                std::uint32_t passes,
                                                std::uint32_t element_bytes = 8) {
  if (passes < 2) throw DomainError("hit_rate_curve needs at least 2 passes");
  if (configs.empty()) throw DomainError("empty hierarchy");
  if (element_bytes == 0) throw DomainError("element size must be positive");
  std::vector<HitRatePoint> out;
  const double llc_bytes = static_cast<double>(configs.back().capacity);
  for (double ratio : ratios) {
    if (!(ratio > 0.0)) throw DomainError("size ratios must be positive");
    CacheHierarchy h(configs);
    const std::uint64_t line = h.line_size();
    std::uint64_t bytes = static_cast<std::uint64_t>(ratio * llc_bytes);
    bytes = std::max<std::uint64_t>(line, bytes / line * line);
    auto pass = [&] {
      for (std::uint64_t a = 0; a < bytes; a += element_bytes) h.access(a, AccessKind::Load);
    };
    pass();
    h.reset_stats();
    for (std::uint32_t p = 1; p < passes; ++p) pass();
    const auto& llc = h.level(h.depth() - 1).stats();
    out.push_back({ratio, llc.hit_rate(), llc.references()});
  }
  return out;
}

}  // namespace rooftrace::cache
