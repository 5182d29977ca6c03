// Acceptance checks, one PASS/FAIL line per criterion.
//
//   acceptance            run all
//   acceptance <name>     run one (exit status reflects that one only)

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "rooftrace/cache/hierarchy.hpp"
#include "rooftrace/hpcg/cg.hpp"
#include "rooftrace/hpcg/validate.hpp"
#include "rooftrace/kernels/spmv.hpp"
#include "rooftrace/kernels/stream.hpp"
#include "rooftrace/machine_model.hpp"
#include "rooftrace/sparse/matrix_market.hpp"
#include "rooftrace/sparse/rcm.hpp"

namespace rt = rooftrace;
using namespace rooftrace::cache;

namespace {

struct Result {
  bool pass = true;
  std::ostringstream detail;
  std::vector<std::string> failures;

  void check(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      failures.push_back(what);
    }
  }
};

std::string f2(double v, int d = 2) {
  char b[64];
  std::snprintf(b, sizeof b, "%.*f", d, v);
  return b;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// 1
Result roofline_table() {
  Result r;
  const double balances[] = {13.30, 24.00, 352.00, 1760.00};
  const double bdw[] = {10.23, 5.67, 10.43, 10.43};
  const double clx[] = {17.29, 9.58, 17.64, 17.64};
  const auto ks = rt::hpcg_kernels();
  for (int i = 0; i < 4; ++i)
    r.check(std::abs(ks[i].code_balance - balances[i]) <= 0.01, ks[i].name + " balance");
  auto machine = [&](const char* name, const double* expect, double composite) {
    const auto m = rt::presets::by_name(name);
    const auto c = rt::hpcg_composite(ks, m, 1.0);
    r.detail << ' ' << name << " {";
    for (int i = 0; i < 4; ++i) {
      r.detail << (i ? " " : "") << f2(c.kernels[i].perf_gflops);
      r.check(std::abs(c.kernels[i].perf_gflops - expect[i]) <= 0.01, std::string(name) + " " + ks[i].name);
    }
    r.detail << "} composite " << f2(c.perf_gflops);
    r.check(std::abs(c.perf_gflops - composite) <= 0.01, std::string(name) + " composite");
  };
  r.detail << "C {13.30 24.00 352.00 1760.00} ->";
  for (const auto& k : ks) r.detail << ' ' << f2(k.code_balance);
  machine("bdw", bdw, 10.27);
  machine("clx", clx, 17.37);
  return r;
}

// 2
Result triad_traffic() {
  Result r;
  const auto t0 = std::chrono::steady_clock::now();
  const std::uint64_t n = 1'000'000;
  const auto caches = scaled(presets::clx(), 1.0 / 64);  // last level ~450 KB vs 24 MB of arrays
  std::uint64_t bytes[2];
  for (int nt = 0; nt < 2; ++nt) {
    rt::kernels::StreamSpec spec{rt::kernels::StreamKind::Triad, n, nt == 1};
    rt::kernels::AddressSpace space;
    const auto bases = rt::kernels::StreamBases::allocate(n, space);
    CacheHierarchy h(caches);
    bytes[nt] = run_generator(h, [&](auto& s) { rt::kernels::stream_trace(spec, bases, s); }, n).bytes_mem();
  }
  const double secs = seconds_since(t0);
  r.detail << "NT " << f2(double(bytes[1]) / n, 4) << " B/it, write-allocate " << f2(double(bytes[0]) / n, 4)
           << " B/it, ratio " << f2(double(bytes[0]) / bytes[1], 6) << ", corrected-bandwidth ratio "
           << f2(rt::stream_corrected_bandwidth(100.0, false) / 100.0, 6) << ", " << f2(secs) << " s";
  r.check(bytes[1] == 24 * n, "NT traffic != 24 B/it");
  r.check(bytes[0] == 32 * n, "write-allocate traffic != 32 B/it");
  r.check(3 * bytes[0] == 4 * bytes[1], "ratio != 4/3");
  r.check(rt::stream_corrected_bandwidth(24.0, false) == 32.0, "corrected bandwidth");
  r.check(secs < 10.0, "runtime >= 10 s");
  return r;
}

// 3
Result hit_rate_curve_check() {
  Result r;
  const auto t0 = std::chrono::steady_clock::now();
  const std::uint32_t ways = 11;
  auto hierarchy = [&](PolicyKind p) {
    std::vector<CacheConfig> cs{{"L1", 4096, 8}, {"L2", 16384, 8},
                                {"L3", 1536ull * ways * 64, ways, 64, Inclusion::VictimNonInclusive, p, true}};
    return cs;
  };
  const std::vector<double> ratios{1.5, 2, 4, 8, 10};
  const auto pts = hit_rate_curve(hierarchy(PolicyKind::StreamOneWay), ratios, 3);
  r.detail << "stream-one-way";
  for (const auto& p : pts) {
    const double closed = (double(ways - 1) / ways) / p.ratio;
    r.detail << ' ' << p.ratio << ':' << f2(100 * p.llc_hit_rate) << "% (" << f2(100 * closed) << "%)";
    r.check(std::abs(p.llc_hit_rate - closed) <= 0.02, "closed form at ratio " + f2(p.ratio, 1));
    if (p.ratio == 4) r.check(std::abs(p.llc_hit_rate - 0.20) <= 0.05, "ratio 4 outside 20% +- 5pp");
  }
  const auto plru = hit_rate_curve(hierarchy(PolicyKind::TreePlru), {2.0}, 3);
  r.detail << "; tree-plru 2:" << f2(100 * plru[0].llc_hit_rate) << '%';
  r.check(plru[0].llc_hit_rate < 0.01, "tree-plru at ratio 2 >= 1%");
  const double secs = seconds_since(t0);
  r.detail << ", " << f2(secs) << " s";
  r.check(secs < 60.0, "runtime >= 60 s");
  return r;
}

// 4
Result lru_oracle() {
  Result r;
  std::uint64_t mismatches = 0, total = 0;
  for (std::uint32_t ways : {4u, 8u, 11u, 16u})
    for (std::uint64_t sets : {16ull, 64ull}) {
      CacheHierarchy h({CacheConfig{"L1", sets * ways * 64, ways, 64, Inclusion::Inclusive, PolicyKind::TrueLru}});
      // per-set recency stacks, most recent first
      std::vector<std::vector<std::uint64_t>> stack(sets);
      std::mt19937_64 rng(ways * 1000 + sets);
      std::uniform_int_distribution<std::uint64_t> line(0, 3 * sets * ways);
      for (int i = 0; i < 100000; ++i) {
        const std::uint64_t l = line(rng);
        auto& s = stack[l % sets];
        auto it = std::find(s.begin(), s.end(), l);
        const bool oracle_hit = it != s.end();
        if (oracle_hit) s.erase(it);
        s.insert(s.begin(), l);
        if (s.size() > ways) s.pop_back();
        const bool sim_hit = h.access(l * 64 + 8 * (i % 8), rt::AccessKind::Load).served_by == 0;
        mismatches += oracle_hit != sim_hit;
        ++total;
      }
    }
  r.detail << total << " accesses over 8 geometries, " << mismatches << " mismatches";
  r.check(mismatches == 0, "simulator disagrees with stack oracle");
  return r;
}

// 5
Result spmv_bound() {
  Result r;
  const std::vector<CacheConfig> tiny{{"L1", 1024, 8},
                                      {"L2", 4096, 8},
                                      {"L3", 8192, 16, 64, Inclusion::Inclusive, PolicyKind::TrueLru}};
  auto traffic = [&](const rt::sparse::SparseMatrixCRS& m) {
    CacheHierarchy h(tiny);
    rt::kernels::AddressSpace space;
    const auto l = rt::kernels::SpmpvLayout::allocate(m, 4, space);
    return run_generator(h, [&](auto& s) { rt::kernels::spmpv_trace(m, 4, l, s); }, 4ull * m.n_nz())
        .bytes_per_work();
  };
  const std::string dir = ROOFTRACE_TEST_DATA;
  for (const char* f : {"identity4096", "laplace2d_30_shuffled", "banded3d_12_shuffled"}) {
    const auto m = rt::sparse::load_matrix_market(dir + "/" + f + ".mtx");
    for (bool rcm : {false, true}) {
      const auto a = rcm ? rt::sparse::rcm_permute(m).matrix : m;
      const double bound = rt::min_spmv_traffic(a.n_nzr());
      const double b = traffic(a);
      r.detail << f << (rcm ? "+rcm " : " ") << f2(b, 3) << '/' << f2(bound, 3) << "; ";
      r.check(b >= bound, std::string(f) + " below bound");
      if (rcm && std::string(f) == "banded3d_12_shuffled")
        r.check(b <= 1.3 * bound, "RCM banded fixture above 1.3x bound");
    }
  }
  const double peak = rt::peak_flops(20, 2.09, 32);
  r.detail << "DGEMM peak " << f2(peak, 6);
  r.check(peak == 1337.6, "peak_flops(20, 2.09, 32) != 1337.6");
  return r;
}

// 6, solver part
Result hpcg_solver() {
  Result r;
  const auto p32 = rt::hpcg::build_problem(32, 4);
  const auto res = rt::hpcg::cg_solve(p32);
  bool counts = res.call_log.size() == 25;
  for (const auto& it : res.call_log) {
    int c[4] = {};
    for (auto k : it) ++c[static_cast<int>(k)];
    counts = counts && c[0] == 3 && c[1] == 3 && c[2] == 1 && c[3] == 1;
  }
  const double drop = 1.0 / res.relative_residual();
  r.detail << "calls/iter 3/3/1/1 " << (counts ? "yes" : "no") << "; 32^3 residual drop " << drop;
  r.check(counts, "per-iteration call counts");
  r.check(drop >= 1e2, "residual drop < 1e2");

  const auto p64 = rt::hpcg::build_problem(64, 1);
  const auto caches = scaled(presets::clx(), rt::hpcg::cache_scale_for(64));
  const auto traffic = rt::hpcg::simulate_kernel_traffic(p64.matrix(), caches);
  const double mg = traffic[3].bytes_per_row();
  const double target = 5 * rt::code_balance(rt::KernelKind::Spmv);
  r.detail << "; 64^3 MG " << f2(mg) << " B/row vs " << f2(target) << " (" << f2(100 * (mg / target - 1)) << "%)";
  r.check(std::abs(mg / target - 1) <= 0.30, "MG bytes/row outside 30% of 5 C_SpMV");
  return r;
}

// 6, flop accounting part
Result flops_accounting() {
  Result r;
  const auto p = rt::hpcg::build_problem(64, 4);
  const auto res = rt::hpcg::cg_solve(p);
  const double expect[] = {2, 2, 54, 270};
  for (auto k : rt::hpcg::kAllKernels) {
    const double f = res.accounting[k].flops_per_row();
    const double e = expect[static_cast<int>(k)];
    r.detail << rt::hpcg::to_string(k) << ' ' << f2(f) << " (" << f2(100 * (f / e - 1)) << "%), ";
    r.check(std::abs(f / e - 1) <= 0.02, std::string(rt::hpcg::to_string(k)) + " F_x outside 2%");
  }
  r.detail << "avg nnz/row " << f2(p.matrix().n_nzr(), 3);
  return r;
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::pair<std::string, std::function<Result()>>> all{
      {"roofline_table", roofline_table}, {"triad_traffic", triad_traffic},
      {"hit_rate_curve", hit_rate_curve_check}, {"lru_oracle", lru_oracle},
      {"spmv_bound", spmv_bound}, {"hpcg_solver", hpcg_solver},
      {"flops_accounting", flops_accounting}};
  const std::string only = argc > 1 ? argv[1] : "";
  int failed = 0, ran = 0;
  for (const auto& [name, fn] : all) {
    if (!only.empty() && only != name) continue;
    ++ran;
    Result r;
    try {
      r = fn();
    } catch (const std::exception& e) {
      r.pass = false;
      r.detail << "exception: " << e.what();
    }
    std::string why;
    for (const auto& f : r.failures) why += (why.empty() ? " | failed: " : "; ") + f;
    std::printf("%s %s: %s%s\n", r.pass ? "PASS" : "FAIL", name.c_str(), r.detail.str().c_str(),
                why.c_str());
    std::fflush(stdout);
    failed += !r.pass;
  }
  if (ran == 0) {
    std::fprintf(stderr, "unknown criterion '%s'\n", only.c_str());
    return 2;
  }
  return failed ? 1 : 0;
}
