#pragma once

// CSV and JSON emitters. CSV column order is fixed; see README for schemas.

#include <cstdio>
#include <ostream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "rooftrace/cache/hierarchy.hpp"
#include "rooftrace/hpcg/cg.hpp"
#include "rooftrace/hpcg/validate.hpp"
#include "rooftrace/machine_model.hpp"

namespace rooftrace::report {

using nlohmann::json;

inline std::string fixed(double v, int digits = 2) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

// kernel,code_balance,perf_gflops,time_share
inline void predictions_csv(std::ostream& os, const std::vector<KernelModel>& kernels,
                            const CompositePrediction& c) {
  os << "kernel,code_balance,perf_gflops,time_share\n";
  for (std::size_t i = 0; i < kernels.size(); ++i)
    os << kernels[i].name << ',' << fixed(kernels[i].code_balance) << ','
       << fixed(c.kernels[i].perf_gflops) << ',' << fixed(c.per_kernel[i].share, 4) << '\n';
  if (kernels.size() > 1) os << "composite,," << fixed(c.perf_gflops) << ",1.0000\n";
}

inline json predictions_json(const MachineModel& m, const std::vector<KernelModel>& kernels,
                             const CompositePrediction& c) {
  json j;
  j["machine"] = m.name;
  j["bw_load_only"] = m.bw_load_only;
  j["kernels"] = json::array();
  for (std::size_t i = 0; i < kernels.size(); ++i)
    j["kernels"].push_back({{"kernel", kernels[i].name},
                            {"code_balance", kernels[i].code_balance},
                            {"flops_per_row", kernels[i].flops_per_row},
                            {"calls", kernels[i].calls},
                            {"perf_gflops", c.kernels[i].perf_gflops},
                            {"time_share", c.per_kernel[i].share}});
  j["composite_gflops"] = c.perf_gflops;
  return j;
}

inline json traffic_json(const cache::TrafficReport& r) {
  json j;
  j["accesses"] = r.accesses;
  j["bytes_read_mem"] = r.bytes_read_mem;
  j["bytes_written_mem"] = r.bytes_written_mem;
  j["work_count"] = r.work_count;
  j["bytes_per_work"] = r.bytes_per_work();
  j["llc_hit_rate"] = r.llc_hit_rate();
  j["levels"] = json::array();
  for (const auto& l : r.levels)
    j["levels"].push_back({{"name", l.name}, {"hits", l.hits}, {"misses", l.misses}});
  return j;
}

// level,hits,misses,hit_rate then a summary row per memory counter
inline void traffic_csv(std::ostream& os, const cache::TrafficReport& r) {
  os << "level,hits,misses,hit_rate\n";
  for (const auto& l : r.levels)
    os << l.name << ',' << l.hits << ',' << l.misses << ',' << fixed(l.hit_rate(), 6) << '\n';
  os << "# bytes_read_mem," << r.bytes_read_mem << "\n# bytes_written_mem," << r.bytes_written_mem
     << "\n# work_count," << r.work_count << "\n# bytes_per_work," << fixed(r.bytes_per_work(), 4)
     << '\n';
}

// ratio,llc_hit_rate
inline void hit_rate_csv(std::ostream& os, const std::vector<cache::HitRatePoint>& pts) {
  os << "ratio,llc_hit_rate\n";
  for (const auto& p : pts) os << fixed(p.ratio, 3) << ',' << fixed(p.llc_hit_rate, 6) << '\n';
}

inline json hit_rate_json(const std::vector<cache::HitRatePoint>& pts) {
  json j = json::array();
  for (const auto& p : pts)
    j.push_back({{"ratio", p.ratio}, {"llc_hit_rate", p.llc_hit_rate},
                 {"llc_references", p.llc_references}});
  return j;
}

// iteration,residual,relative_residual
inline void residuals_csv(std::ostream& os, const hpcg::CgResult& r) {
  os << "iteration,residual,relative_residual\n";
  char buf[96];
  for (std::size_t k = 0; k < r.residuals.size(); ++k) {
    std::snprintf(buf, sizeof buf, "%zu,%.17g,%.17g\n", k, r.residuals[k],
                  r.residuals.front() == 0 ? 0.0 : r.residuals[k] / r.residuals.front());
    os << buf;
  }
}

inline json accounting_json(const hpcg::KernelAccounting& a, int iterations) {
  json j = json::object();
  for (auto k : hpcg::kAllKernels) {
    const auto& c = a[k];
    j[std::string(hpcg::to_string(k))] = {
        {"calls", c.calls},
        {"calls_per_iteration", iterations > 0 ? static_cast<double>(c.calls) / iterations : 0.0},
        {"flops", c.flops},
        {"rows", c.rows},
        {"flops_per_row", c.flops_per_row()}};
  }
  j["coarse_flops"] = a.coarse_flops;
  j["setup_flops"] = a.setup_flops;
  return j;
}

// kernel,predicted_balance,measured_balance,deviation_pct,predicted_gflops,measured_gflops,flagged
inline void validation_csv(std::ostream& os, const hpcg::ValidationReport& v) {
  os << "kernel,predicted_balance,measured_balance,deviation_pct,predicted_gflops,"
        "measured_gflops,flagged\n";
  for (const auto& r : v.rows)
    os << hpcg::to_string(r.kernel) << ',' << fixed(r.predicted_balance) << ','
       << fixed(r.measured_balance) << ',' << fixed(r.deviation_pct) << ','
       << fixed(r.predicted_gflops) << ',' << fixed(r.measured_gflops) << ','
       << (r.flagged ? 1 : 0) << '\n';
  os << "composite,,,," << fixed(v.predicted_composite_gflops) << ','
     << fixed(v.measured_composite_gflops) << ",\n";
}

inline json validation_json(const hpcg::ValidationReport& v) {
  json j;
  j["machine"] = v.machine;
  j["threshold_pct"] = v.threshold_pct;
  j["kernels"] = json::array();
  for (const auto& r : v.rows)
    j["kernels"].push_back({{"kernel", hpcg::to_string(r.kernel)},
                            {"predicted_balance", r.predicted_balance},
                            {"measured_balance", r.measured_balance},
                            {"deviation_pct", r.deviation_pct},
                            {"model_flops_per_row", r.model_flops_per_row},
                            {"measured_flops_per_row", r.measured_flops_per_row},
                            {"predicted_gflops", r.predicted_gflops},
                            {"measured_gflops", r.measured_gflops},
                            {"flagged", r.flagged}});
  j["predicted_composite_gflops"] = v.predicted_composite_gflops;
  j["measured_composite_gflops"] = v.measured_composite_gflops;
  return j;
}

}  // namespace rooftrace::report
