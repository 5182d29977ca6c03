#pragma once

// Compares simulated per-kernel memory traffic of the HPCG kernels with the
// Roofline code balances. Each kernel is simulated standalone on a cold
// hierarchy (dirty lines flushed at the end), so there is no reuse between
// kernels.

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "rooftrace/cache/hierarchy.hpp"
#include "rooftrace/hpcg/kernels.hpp"
#include "rooftrace/hpcg/problem.hpp"
#include "rooftrace/kernels/layout.hpp"
#include "rooftrace/kernels/spmv.hpp"
#include "rooftrace/machine_model.hpp"

namespace rooftrace::hpcg {

struct KernelTraffic {
  Kernel kernel;
  std::uint64_t bytes = 0;  // summed over the simulated invocations
  std::uint64_t rows = 0;   // rows processed, summed likewise

  double bytes_per_row() const { return rows == 0 ? 0.0 : static_cast<double>(bytes) / rows; }
};

// Desk-scale cache shrink factor: keeps the problem-to-cache ratio of a
// reference local problem of `reference_n`^3 rows.
inline double cache_scale_for(Index n, Index reference_n = 160) {
  const double f = static_cast<double>(n) / reference_n;
  return f * f * f;
}

inline std::vector<KernelTraffic> simulate_kernel_traffic(
    const SparseMatrixCRS& a, const std::vector<cache::CacheConfig>& caches) {
  const Index n = a.n_rows;
  kernels::AddressSpace space;
  const auto layout = kernels::CrsLayout::allocate(a, space);
  const std::uint64_t vx = space.allocate(8ull * n), vr = space.allocate(8ull * n),
                      vz = space.allocate(8ull * n), vp = space.allocate(8ull * n),
                      vap = space.allocate(8ull * n), vaxf = space.allocate(8ull * n);

  auto cold = [&](auto&& gen) {
    cache::CacheHierarchy h(caches);
    return cache::run_generator(h, gen, n).bytes_mem();
  };

  std::vector<KernelTraffic> out;
  {
    KernelTraffic t{Kernel::Dot};
    for (auto [u, v] : {std::pair{vr, vz}, std::pair{vp, vap}, std::pair{vr, vr}}) {
      t.bytes += cold([&](auto& s) { dot_trace(u, v, n, s); });
      t.rows += n;
    }
    out.push_back(t);
  }
  {
    KernelTraffic t{Kernel::Waxpby};
    struct W { std::uint64_t w, x, y; };
    for (W w : {W{vp, vp, vz}, W{vx, vx, vp}, W{vr, vr, vap}}) {
      t.bytes += cold([&](auto& s) { waxpby_trace(w.w, w.x, w.y, n, s); });
      t.rows += n;
    }
    out.push_back(t);
  }
  {
    KernelTraffic t{Kernel::Spmv};
    t.bytes = cold([&](auto& s) { kernels::spmv_trace(a, layout, vp, vap, s); });
    t.rows = n;
    out.push_back(t);
  }
  {
    KernelTraffic t{Kernel::Mg};
    t.bytes = cold([&](auto& s) {
      symgs_trace(a, layout, vr, vz, s);
      kernels::spmv_trace(a, layout, vz, vaxf, s);
      symgs_trace(a, layout, vr, vz, s);
    });
    t.rows = n;
    out.push_back(t);
  }
  return out;
}

struct ValidationRow {
  Kernel kernel;
  double predicted_balance = 0.0;
  double measured_balance = 0.0;
  double deviation_pct = 0.0;  // (measured - predicted) / predicted
  double model_flops_per_row = 0.0;
  double measured_flops_per_row = 0.0;
  double predicted_gflops = 0.0;
  double measured_gflops = 0.0;  // F_measured * b_s / C_measured
  std::uint32_t calls = 0;
  bool flagged = false;
};

struct ValidationReport {
  std::string machine;
  std::vector<ValidationRow> rows;
  double predicted_composite_gflops = 0.0;
  double measured_composite_gflops = 0.0;
  double threshold_pct = 10.0;

  bool any_flagged() const {
    for (const auto& r : rows)
      if (r.flagged) return true;
    return false;
  }
};

// `accounting` supplies measured flops per row (may be empty, in which case
// model flops are used); `traffic` supplies measured bytes per row.
inline ValidationReport validate_against_model(const KernelAccounting& accounting,
                                               const std::vector<KernelTraffic>& traffic,
                                               const MachineModel& machine,
                                               double threshold_pct = 10.0,
                                               double model_nnzr = 27.0) {
  const auto model = hpcg_kernels(model_nnzr, DotBalance::Exact);
  ValidationReport rep;
  rep.machine = machine.name;
  rep.threshold_pct = threshold_pct;
  double pred_flops = 0, pred_bytes = 0, meas_flops = 0, meas_bytes = 0;
  for (std::size_t i = 0; i < kAllKernels.size(); ++i) {
    const Kernel k = kAllKernels[i];
    const KernelModel& km = model[i];
    ValidationRow row;
    row.kernel = k;
    row.calls = km.calls;
    row.predicted_balance = km.code_balance;
    row.model_flops_per_row = km.flops_per_row;
    for (const auto& t : traffic)
      if (t.kernel == k) row.measured_balance = t.bytes_per_row();
    const auto& c = accounting[k];
    row.measured_flops_per_row = c.rows > 0 ? c.flops_per_row() : km.flops_per_row;
    row.deviation_pct = 100.0 * (row.measured_balance - row.predicted_balance) / row.predicted_balance;
    row.flagged = std::abs(row.deviation_pct) > threshold_pct;
    row.predicted_gflops = roofline_perf(km, machine).perf_gflops;
    if (row.measured_balance > 0)
      row.measured_gflops = row.measured_flops_per_row * machine.bw_load_only / row.measured_balance;
    pred_flops += km.calls * km.flops_per_row;
    pred_bytes += km.calls * km.code_balance;
    meas_flops += km.calls * row.measured_flops_per_row;
    meas_bytes += km.calls * row.measured_balance;
    rep.rows.push_back(row);
  }
  rep.predicted_composite_gflops = pred_flops * machine.bw_load_only / pred_bytes;
  if (meas_bytes > 0) rep.measured_composite_gflops = meas_flops * machine.bw_load_only / meas_bytes;
  return rep;
}

}  // namespace rooftrace::hpcg
