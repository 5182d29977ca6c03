#pragma once

// Analytic performance model: unit conversions, peak performance, the
// code-balance catalog, Roofline predictions, the composite (time-weighted)
// HPCG model and parallel-efficiency analysis.
//
// Units: GB = 1e9 bytes, GHz = 1e9 cycles/s, GF/s = 1e9 flop/s.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "rooftrace/cache/config.hpp"
#include "rooftrace/errors.hpp"

namespace rooftrace {

namespace detail {
inline void require_positive(double v, const char* what) {
  if (!(v > 0.0) || !std::isfinite(v))
    throw DomainError(std::string(what) + " must be positive and finite");
}
}  // namespace detail

struct MachineModel {
  std::string name;
  std::uint32_t cores = 1;
  double freq_ghz = 1.0;
  double flops_per_cycle_per_core = 1.0;
  double bw_load_only = 1.0;        // b_s, GB/s
  double bw_stream_triad_nt = 0.0;  // GB/s, 0 = unknown
  double theoretical_mem_bw = 1.0;  // GB/s
  double l1_bytes_per_cycle = 1.0;
  std::vector<cache::CacheConfig> cache_levels;

  double l1_bandwidth() const { return l1_bytes_per_cycle * freq_ghz; }

  void validate() const {
    if (cores == 0) throw DomainError(name + ": cores must be positive");
    detail::require_positive(freq_ghz, "freq_ghz");
    detail::require_positive(flops_per_cycle_per_core, "flops_per_cycle_per_core");
    detail::require_positive(bw_load_only, "bw_load_only");
    detail::require_positive(theoretical_mem_bw, "theoretical_mem_bw");
    detail::require_positive(l1_bytes_per_cycle, "l1_bytes_per_cycle");
    if (bw_stream_triad_nt < 0.0) throw DomainError("bw_stream_triad_nt must be non-negative");
    if (bw_load_only > theoretical_mem_bw)
      throw DomainError(name + ": load-only bandwidth exceeds theoretical memory bandwidth");
    for (const auto& c : cache_levels) c.validate();
  }
};

inline double bandwidth_from_bytes_per_cycle(double bytes_per_cycle, double freq_ghz) {
  detail::require_positive(bytes_per_cycle, "bytes per cycle");
  detail::require_positive(freq_ghz, "frequency");
  return bytes_per_cycle * freq_ghz;
}

inline double peak_flops(std::uint32_t cores, double freq_ghz, double flops_per_cycle) {
  if (cores == 0) throw DomainError("core count must be positive");
  detail::require_positive(freq_ghz, "frequency");
  detail::require_positive(flops_per_cycle, "flops per cycle");
  return static_cast<double>(cores) * freq_ghz * flops_per_cycle;
}

inline double peak_flops(const MachineModel& m) {
  return peak_flops(m.cores, m.freq_ghz, m.flops_per_cycle_per_core);
}

// ---------------------------------------------------------------------------
// Code balance catalog

enum class KernelKind {
  DotHpcgAvg,   // the three HPCG dot products averaged, B/row
  Waxpby,       // B/row, destination aliases an input (no write-allocate)
  Spmv,         // B/row
  SymgsSweep,   // one Gauss-Seidel sweep, B/row
  MgFinest,     // pre-smooth + residual + post-smooth on the finest grid, B/row
  StreamTriad,  // B/iteration
  SpmpvPerNnz,  // B/nonzero
};

struct BalanceParams {
  double nnzr = 27.0;        // average nonzeros per row
  bool nt_stores = true;     // StreamTriad only
  int value_bytes = 8;
  int index_bytes = 4;
};

inline std::string_view to_string(KernelKind k) {
  switch (k) {
    case KernelKind::DotHpcgAvg: return "dot";
    case KernelKind::Waxpby: return "waxpby";
    case KernelKind::Spmv: return "spmv";
    case KernelKind::SymgsSweep: return "symgs-sweep";
    case KernelKind::MgFinest: return "mg";
    case KernelKind::StreamTriad: return "triad";
    case KernelKind::SpmpvPerNnz: return "spmpv";
  }
  return "?";
}

inline KernelKind parse_kernel_kind(std::string_view s) {
  if (s == "dot" || s == "ddot") return KernelKind::DotHpcgAvg;
  if (s == "waxpby") return KernelKind::Waxpby;
  if (s == "spmv") return KernelKind::Spmv;
  if (s == "symgs" || s == "symgs-sweep") return KernelKind::SymgsSweep;
  if (s == "mg") return KernelKind::MgFinest;
  if (s == "triad" || s == "stream-triad") return KernelKind::StreamTriad;
  if (s == "spmpv") return KernelKind::SpmpvPerNnz;
  throw DomainError("unknown kernel kind '" + std::string(s) + "'");
}

namespace detail {
// CRS traffic per row: (value + index) per nonzero, one row pointer, one
// x element, and the y element read (write-allocate) and written back.
inline double crs_row_balance(const BalanceParams& p) {
  if (!(p.nnzr >= 1.0)) throw DomainError("nnzr must be >= 1");
  if (p.value_bytes <= 0 || p.index_bytes <= 0) throw DomainError("element widths must be positive");
  const double per_nnz = p.value_bytes + p.index_bytes;
  const double per_row = p.index_bytes + p.value_bytes + 2.0 * p.value_bytes;
  return per_nnz * p.nnzr + per_row;
}
}  // namespace detail

inline double code_balance(KernelKind kind, const BalanceParams& p = {}) {
  const double v = p.value_bytes;
  switch (kind) {
    case KernelKind::DotHpcgAvg:
      // two dots stream two vectors, the norm streams one
      return (2.0 * (2.0 * v) + v) / 3.0;
    case KernelKind::Waxpby:
      return 3.0 * v;
    case KernelKind::Spmv:
    case KernelKind::SymgsSweep:
      return detail::crs_row_balance(p);
    case KernelKind::MgFinest:
      return 5.0 * detail::crs_row_balance(p);
    case KernelKind::StreamTriad:
      return p.nt_stores ? 3.0 * v : 4.0 * v;
    case KernelKind::SpmpvPerNnz:
      return detail::crs_row_balance(p) / p.nnzr;
  }
  throw DomainError("unknown kernel kind");
}

inline double min_spmv_traffic(double nnzr) {
  return code_balance(KernelKind::SpmpvPerNnz, BalanceParams{.nnzr = nnzr});
}

// ---------------------------------------------------------------------------
// Roofline

struct KernelModel {
  std::string name;
  double code_balance = 1.0;  // bytes per row (or iteration)
  double flops_per_row = 0.0;
  std::uint32_t calls = 1;

  void validate() const {
    if (!(code_balance > 0.0)) throw DomainError(name + ": code balance must be positive");
    if (flops_per_row < 0.0) throw DomainError(name + ": flops per row must be non-negative");
    if (calls < 1) throw DomainError(name + ": calls must be >= 1");
  }
};

struct RooflinePrediction {
  std::string kernel;
  double perf_gflops = 0.0;
  double time_per_row_ns = 0.0;  // one invocation
};

inline RooflinePrediction roofline_perf(const KernelModel& k, const MachineModel& m) {
  k.validate();
  detail::require_positive(m.bw_load_only, "bw_load_only");
  RooflinePrediction p;
  p.kernel = k.name;
  p.perf_gflops = k.flops_per_row * m.bw_load_only / k.code_balance;
  // bytes / (GB/s) = ns
  p.time_per_row_ns = k.code_balance / m.bw_load_only;
  return p;
}

struct KernelShare {
  std::string kernel;
  double time = 0.0;  // seconds, all calls
  double share = 0.0;
};

struct CompositePrediction {
  double total_time = 0.0;  // seconds
  double total_flops = 0.0;
  double perf_gflops = 0.0;
  std::vector<KernelShare> per_kernel;
  std::vector<RooflinePrediction> kernels;
};

// T = sum_x I_x * F_x * N_r / P_x. Kernels with F_x = 0 contribute their
// streaming time C_x * N_r / b_s directly.
inline CompositePrediction hpcg_composite(const std::vector<KernelModel>& kernels,
                                          const MachineModel& m, double n_rows) {
  if (kernels.empty()) throw DomainError("composite model needs at least one kernel");
  detail::require_positive(n_rows, "n_rows");
  CompositePrediction out;
  for (const auto& k : kernels) {
    auto pred = roofline_perf(k, m);
    const double work = k.calls * k.flops_per_row * n_rows;
    const double t = k.calls * n_rows * pred.time_per_row_ns * 1e-9;
    out.total_flops += work;
    out.total_time += t;
    out.per_kernel.push_back({k.name, t, 0.0});
    out.kernels.push_back(std::move(pred));
  }
  for (auto& s : out.per_kernel) s.share = s.time / out.total_time;
  out.perf_gflops = out.total_flops / out.total_time * 1e-9;
  return out;
}

// ---------------------------------------------------------------------------
// STREAM accounting

// Memory-interface bandwidth implied by a STREAM triad number that assumed
// 24 B/iteration.
inline double stream_corrected_bandwidth(double reported_gbs, bool nt_used) {
  detail::require_positive(reported_gbs, "reported bandwidth");
  if (nt_used) return reported_gbs;
  return reported_gbs * code_balance(KernelKind::StreamTriad, {.nt_stores = false}) /
         code_balance(KernelKind::StreamTriad, {.nt_stores = true});
}

// ---------------------------------------------------------------------------
// Parallel efficiency

struct ScalingPoint {
  std::uint32_t cores = 1;
  double value = 0.0;
};

struct ScalingSeries {
  std::vector<ScalingPoint> points;

  void validate() const {
    for (std::size_t i = 0; i < points.size(); ++i) {
      if (points[i].cores == 0) throw DomainError("core counts must be positive");
      if (points[i].value < 0.0) throw DomainError("scaling values must be non-negative");
      if (i > 0 && points[i].cores <= points[i - 1].cores)
        throw DomainError("core counts must be strictly increasing");
    }
  }
};

struct EfficiencyReport {
  double efficiency = 0.0;  // at the largest core count
  std::vector<std::pair<std::uint32_t, double>> per_point;
};

inline EfficiencyReport parallel_efficiency(const ScalingSeries& s) {
  s.validate();
  auto one = std::find_if(s.points.begin(), s.points.end(),
                          [](const ScalingPoint& p) { return p.cores == 1; });
  if (one == s.points.end()) throw DomainError("scaling series has no 1-core point");
  if (!(one->value > 0.0)) throw DomainError("1-core value must be positive");
  EfficiencyReport r;
  for (const auto& p : s.points)
    r.per_point.emplace_back(p.cores, p.value / (p.cores * one->value));
  r.efficiency = r.per_point.back().second;
  return r;
}

// ---------------------------------------------------------------------------
// CRS footprint: 8-byte values, 4-byte column indices and row pointers,
// 8-byte vector entries.
inline std::uint64_t crs_footprint(std::uint64_t n_rows, std::uint64_t n_nz,
                                   std::uint32_t n_vectors) {
  if (n_rows < 1 || n_nz < 1) throw DomainError("matrix dimensions must be >= 1");
  return 12 * n_nz + 4 * (n_rows + 1) + 8ull * n_vectors * n_rows;
}

// ---------------------------------------------------------------------------
// Presets

namespace presets {

inline MachineModel bdw() {
  MachineModel m;
  m.name = "bdw";
  m.cores = 18;
  m.freq_ghz = 2.3;
  m.flops_per_cycle_per_core = 16;  // 2 AVX2 FMA units
  m.bw_load_only = 68.0;
  m.theoretical_mem_bw = 76.8;
  m.l1_bytes_per_cycle = 64;  // 2 AVX loads
  m.cache_levels = cache::presets::bdw();
  return m;
}

inline MachineModel clx() {
  MachineModel m;
  m.name = "clx";
  m.cores = 20;
  m.freq_ghz = 2.09;  // sustained all-core AVX-512 clock
  m.flops_per_cycle_per_core = 32;
  m.bw_load_only = 115.0;
  m.theoretical_mem_bw = 140.8;
  m.l1_bytes_per_cycle = 128;  // 2 AVX-512 loads
  m.cache_levels = cache::presets::clx();
  return m;
}

inline MachineModel by_name(std::string_view name) {
  if (name == "bdw") return bdw();
  if (name == "clx") return clx();
  throw DomainError("unknown machine preset '" + std::string(name) + "' (expected bdw or clx)");
}

}  // namespace presets

// Code balance the published HPCG model table lists for the averaged DOT
// kernel. The exact average is 40/3; the table rounds it down and computes its
// DOT performance from the rounded value.
inline constexpr double kTabulatedDotBalance = 13.30;

enum class DotBalance { Tabulated, Exact };

// The four HPCG kernels with per-iteration call counts (3 DOT, 3 WAXPBY,
// 1 SpMV, 1 MG) on a stencil with `nnzr` nonzeros per row.
inline std::vector<KernelModel> hpcg_kernels(double nnzr = 27.0,
                                             DotBalance dot = DotBalance::Tabulated) {
  const BalanceParams p{.nnzr = nnzr};
  const double dot_c =
      dot == DotBalance::Tabulated ? kTabulatedDotBalance : code_balance(KernelKind::DotHpcgAvg);
  return {
      {"DDOT", dot_c, 2.0, 3},
      {"WAXPBY", code_balance(KernelKind::Waxpby), 2.0, 3},
      {"SpMV", code_balance(KernelKind::Spmv, p), 2.0 * nnzr, 1},
      {"MG", code_balance(KernelKind::MgFinest, p), 10.0 * nnzr, 1},
  };
}

}  // namespace rooftrace
