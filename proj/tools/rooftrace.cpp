// rooftrace: model predictions, cache simulation, SpMV traffic, HPCG mini
// solve and best-effort native timing.
//
// Exit codes: 0 ok, 1 usage / invalid parameters, 2 data error.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <numeric>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "rooftrace/cache/hierarchy.hpp"
#include "rooftrace/config.hpp"
#include "rooftrace/hpcg/cg.hpp"
#include "rooftrace/hpcg/validate.hpp"
#include "rooftrace/kernels/stream.hpp"
#include "rooftrace/machine_model.hpp"
#include "rooftrace/report.hpp"
#include "rooftrace/sparse/matrix_market.hpp"
#include "rooftrace/sparse/rcm.hpp"

namespace rt = rooftrace;
using nlohmann::json;

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Output sink: stdout or a file.
class Out {
 public:
  explicit Out(const std::string& path) {
    if (!path.empty() && path != "-") {
      file_ = std::make_unique<std::ofstream>(path);
      if (!*file_) throw rt::ParseError("cannot open output file '" + path + "'");
    }
  }
  std::ostream& os() { return file_ ? *file_ : std::cout; }

 private:
  std::unique_ptr<std::ofstream> file_;
};

void check_format(const std::string& f) {
  if (f != "csv" && f != "json") throw UsageError("--format must be csv or json");
}

// "0.5..12" (step 0.5), "1..8:1", or "1.5,2,4".
std::vector<double> parse_ratios(const std::string& s) {
  std::vector<double> out;
  auto num = [&](const std::string& t) {
    try {
      std::size_t pos = 0;
      double v = std::stod(t, &pos);
      if (pos != t.size()) throw std::invalid_argument(t);
      return v;
    } catch (const std::exception&) {
      throw UsageError("bad ratio '" + t + "'");
    }
  };
  if (auto dots = s.find(".."); dots != std::string::npos) {
    std::string hi = s.substr(dots + 2);
    double step = 0.5;
    if (auto colon = hi.find(':'); colon != std::string::npos) {
      step = num(hi.substr(colon + 1));
      hi = hi.substr(0, colon);
    }
    const double a = num(s.substr(0, dots)), b = num(hi);
    if (!(step > 0) || b < a) throw UsageError("bad ratio range '" + s + "'");
    for (int i = 0; a + i * step <= b + 1e-9; ++i) out.push_back(a + i * step);
  } else {
    std::stringstream ss(s);
    for (std::string t; std::getline(ss, t, ',');) out.push_back(num(t));
  }
  if (out.empty()) throw UsageError("no ratios given");
  return out;
}

// Streaming test bed: small L1/L2 in front of a last level of `llc_bytes`.
std::vector<rt::cache::CacheConfig> streaming_hierarchy(std::uint64_t llc_bytes,
                                                        std::uint32_t ways,
                                                        rt::cache::PolicyKind policy,
                                                        rt::cache::Inclusion inclusion) {
  using namespace rt::cache;
  CacheConfig l1{"L1", 4096, 8};
  CacheConfig l2{"L2", 16384, 8};
  const std::uint64_t sets = std::max<std::uint64_t>(1, llc_bytes / (64ull * ways));
  CacheConfig l3{"L3", sets * ways * 64, ways, 64, inclusion, policy, true};
  return {l1, l2, l3};
}

// ---------------------------------------------------------------------------

struct ModelArgs {
  std::string machine = "clx";
  std::string kernel;
  double nnzr = 27;
  bool no_nt = false;
  bool hpcg = false;
  bool golden = false;
  bool exact_dot = false;
  std::string config;
  std::string format = "csv";
  std::string output;
};

double kernel_flops(rt::KernelKind k, double nnzr) {
  switch (k) {
    case rt::KernelKind::DotHpcgAvg:
    case rt::KernelKind::Waxpby:
    case rt::KernelKind::StreamTriad:
    case rt::KernelKind::SpmpvPerNnz: return 2.0;
    case rt::KernelKind::Spmv: return 2.0 * nnzr;
    case rt::KernelKind::SymgsSweep: return 4.0 * nnzr;
    case rt::KernelKind::MgFinest: return 10.0 * nnzr;
  }
  return 0.0;
}

int cmd_model(const ModelArgs& a) {
  check_format(a.format);
  Out out(a.output);
  const auto dot = a.exact_dot ? rt::DotBalance::Exact : rt::DotBalance::Tabulated;

  if (a.golden) {
    json j = json::array();
    if (a.format == "csv") out.os() << "machine,kernel,code_balance,perf_gflops,time_share\n";
    for (const char* name : {"bdw", "clx"}) {
      const auto m = rt::presets::by_name(name);
      const auto ks = rt::hpcg_kernels(27, dot);
      const auto c = rt::hpcg_composite(ks, m, 1.0);
      if (a.format == "json") {
        j.push_back(rt::report::predictions_json(m, ks, c));
        continue;
      }
      for (std::size_t i = 0; i < ks.size(); ++i)
        out.os() << name << ',' << ks[i].name << ',' << rt::report::fixed(ks[i].code_balance) << ','
                 << rt::report::fixed(c.kernels[i].perf_gflops) << ','
                 << rt::report::fixed(c.per_kernel[i].share, 4) << '\n';
      out.os() << name << ",composite,," << rt::report::fixed(c.perf_gflops) << ",1.0000\n";
    }
    if (a.format == "json") out.os() << j.dump(2) << '\n';
    return 0;
  }

  rt::MachineModel m = rt::config::resolve_machine(a.machine);
  std::vector<rt::KernelModel> ks;
  if (!a.config.empty()) {
    auto cfg = rt::config::load_config(a.config);
    if (cfg.machine) m = *cfg.machine;
    ks = cfg.kernels;
  }
  if (a.hpcg) {
    ks = rt::hpcg_kernels(a.nnzr, dot);
  } else if (!a.kernel.empty()) {
    const auto kind = rt::parse_kernel_kind(a.kernel);
    rt::BalanceParams p{.nnzr = a.nnzr, .nt_stores = !a.no_nt};
    ks = {{std::string(rt::to_string(kind)), rt::code_balance(kind, p), kernel_flops(kind, a.nnzr), 1}};
  }
  if (ks.empty()) throw UsageError("model: give --kernel, --hpcg, --golden-table3 or a --config with kernels");
  const auto c = rt::hpcg_composite(ks, m, 1.0);
  if (a.format == "json")
    out.os() << rt::report::predictions_json(m, ks, c).dump(2) << '\n';
  else
    rt::report::predictions_csv(out.os(), ks, c);
  return 0;
}

// ---------------------------------------------------------------------------

struct SimulateArgs {
  std::string policy = "stream-one-way";
  std::string inclusion = "victim";
  std::string pattern = "load";
  std::string ratios;
  std::optional<double> ratio;
  std::string llc_size = "1M";
  std::uint32_t ways = 11;
  std::uint32_t passes = 3;
  std::string machine;
  double scale = 1.0;
  std::string trace;
  std::uint64_t elems = 0;
  bool nt = false;
  std::uint64_t seed = 1;
  std::string format = "csv";
  std::string output;
};

std::vector<rt::cache::CacheConfig> simulate_caches(const SimulateArgs& a, bool policy_given,
                                                    bool inclusion_given) {
  if (!a.machine.empty()) {
    auto cs = rt::config::resolve_machine(a.machine).cache_levels;
    if (cs.empty()) throw UsageError("machine '" + a.machine + "' has no cache levels");
    if (a.scale != 1.0) cs = rt::cache::scaled(cs, a.scale);
    if (policy_given) cs.back().policy = rt::cache::parse_policy(a.policy);
    if (inclusion_given) cs.back().inclusion = rt::cache::parse_inclusion(a.inclusion);
    return cs;
  }
  return streaming_hierarchy(rt::config::parse_size(a.llc_size), a.ways,
                             rt::cache::parse_policy(a.policy),
                             rt::cache::parse_inclusion(a.inclusion));
}

// Steady-state LLC hit rate of `pattern` over ratio x LLC capacity bytes of data.
rt::cache::HitRatePoint pattern_point(const std::vector<rt::cache::CacheConfig>& cs,
                                      const SimulateArgs& a, double ratio) {
  if (!(ratio > 0)) throw UsageError("size ratios must be positive");
  rt::cache::CacheHierarchy h(cs);
  const auto data_bytes = static_cast<std::uint64_t>(ratio * static_cast<double>(cs.back().capacity));
  std::function<void()> pass;
  rt::kernels::AddressSpace space;
  rt::kernels::StreamSpec spec;
  rt::kernels::StreamBases bases{};
  std::vector<std::uint64_t> order;
  if (a.pattern == "random") {
    std::mt19937_64 rng(a.seed);
    const std::uint64_t n = std::max<std::uint64_t>(1, data_bytes / 8);
    std::uniform_int_distribution<std::uint64_t> d(0, n - 1);
    order.resize(n);
    for (auto& o : order) o = 8 * d(rng);
    pass = [&] {
      for (auto o : order) h.access(o, rt::AccessKind::Load);
    };
  } else {
    spec.kind = rt::kernels::parse_stream_kind(a.pattern);
    spec.nt_stores = a.nt;
    const int arrays = rt::kernels::stream_arrays(spec.kind);
    spec.n_elems = std::max<std::uint64_t>(8, data_bytes / (8ull * arrays) / 8 * 8);
    bases = rt::kernels::StreamBases::allocate(spec.n_elems, space);
    pass = [&] { rt::kernels::stream_trace(spec, bases, h); };
  }
  pass();
  h.reset_stats();
  for (std::uint32_t p = 1; p < a.passes; ++p) pass();
  const auto& llc = h.level(h.depth() - 1).stats();
  return {ratio, llc.hit_rate(), llc.references()};
}

int cmd_simulate(SimulateArgs a, bool policy_given, bool inclusion_given) {
  check_format(a.format);
  if (a.passes < 2) throw UsageError("--passes must be >= 2");
  const auto cs = simulate_caches(a, policy_given, inclusion_given);
  Out out(a.output);

  if (!a.trace.empty() || a.elems > 0) {
    rt::Trace t;
    if (!a.trace.empty()) {
      t = rt::read_trace(a.trace);
    } else {
      rt::kernels::StreamSpec spec{rt::kernels::parse_stream_kind(a.pattern == "random" ? "load" : a.pattern),
                                   a.elems, a.nt};
      t = rt::kernels::gen_stream_trace(spec);
    }
    rt::cache::CacheHierarchy h(cs);
    const auto r = rt::cache::run_trace(h, t, t.work_count ? t.work_count : t.size());
    if (a.format == "json")
      out.os() << rt::report::traffic_json(r).dump(2) << '\n';
    else
      rt::report::traffic_csv(out.os(), r);
    return 0;
  }

  std::vector<double> ratios;
  if (a.ratio) ratios = {*a.ratio};
  else if (!a.ratios.empty()) ratios = parse_ratios(a.ratios);
  else ratios = parse_ratios("0.5..12");

  std::vector<rt::cache::HitRatePoint> pts;
  if (a.pattern == "load" || a.pattern == "load-only") {
    pts = rt::cache::hit_rate_curve(cs, ratios, a.passes);
  } else {
    for (double r : ratios) pts.push_back(pattern_point(cs, a, r));
  }
  if (a.format == "json")
    out.os() << rt::report::hit_rate_json(pts).dump(2) << '\n';
  else
    rt::report::hit_rate_csv(out.os(), pts);
  return 0;
}

// ---------------------------------------------------------------------------

struct SpmvArgs {
  std::string matrix;
  bool rcm = false;
  bool bound_only = false;
  std::optional<double> nnzr;
  int power = 4;
  std::string machine = "clx";
  double scale = 1.0;
  std::string format = "csv";
  std::string output;
};

int cmd_spmv_traffic(const SpmvArgs& a) {
  check_format(a.format);
  Out out(a.output);
  if (a.bound_only) {
    double nnzr = 0;
    if (a.nnzr) nnzr = *a.nnzr;
    else if (!a.matrix.empty()) nnzr = rt::sparse::load_matrix_market(a.matrix).n_nzr();
    else throw UsageError("--bound-only needs --nnzr or a matrix file");
    const double b = rt::min_spmv_traffic(nnzr);
    if (a.format == "json")
      out.os() << json{{"nnzr", nnzr}, {"bound_bytes_per_nnz", b}}.dump(2) << '\n';
    else
      out.os() << "nnzr,bound_bytes_per_nnz\n" << rt::report::fixed(nnzr, 3) << ','
               << rt::report::fixed(b, 3) << '\n';
    return 0;
  }
  if (a.matrix.empty()) throw UsageError("spmv-traffic needs a matrix file");
  if (a.power < 1) throw UsageError("--power must be >= 1");
  auto m = rt::sparse::load_matrix_market(a.matrix);
  if (!m.square()) throw rt::ParseError(a.matrix + ": SpMPV needs a square matrix");
  const auto bw_before = rt::sparse::bandwidth(m);
  if (a.rcm) m = rt::sparse::rcm_permute(m).matrix;

  auto cs = rt::config::resolve_machine(a.machine).cache_levels;
  if (a.scale != 1.0) cs = rt::cache::scaled(cs, a.scale);
  rt::cache::CacheHierarchy h(cs);
  rt::kernels::AddressSpace space;
  const auto layout = rt::kernels::SpmpvLayout::allocate(m, a.power, space);
  const std::uint64_t work = static_cast<std::uint64_t>(m.n_nz()) * a.power;
  const auto r = rt::cache::run_generator(
      h, [&](auto& s) { rt::kernels::spmpv_trace(m, a.power, layout, s); }, work);
  const double bound = rt::min_spmv_traffic(m.n_nzr());

  json j{{"matrix", a.matrix},
         {"rows", m.n_rows},
         {"nnz", m.n_nz()},
         {"nnzr", m.n_nzr()},
         {"bandwidth_before", bw_before},
         {"bandwidth", rt::sparse::bandwidth(m)},
         {"rcm", a.rcm},
         {"power", a.power},
         {"bytes_per_nnz", r.bytes_per_work()},
         {"bound_bytes_per_nnz", bound},
         {"ratio_to_bound", r.bytes_per_work() / bound}};
  if (a.format == "json") {
    j["traffic"] = rt::report::traffic_json(r);
    out.os() << j.dump(2) << '\n';
  } else {
    out.os() << "rows,nnz,nnzr,bandwidth,power,bytes_per_nnz,bound_bytes_per_nnz,ratio_to_bound\n"
             << m.n_rows << ',' << m.n_nz() << ',' << rt::report::fixed(m.n_nzr(), 3) << ','
             << rt::sparse::bandwidth(m) << ',' << a.power << ','
             << rt::report::fixed(r.bytes_per_work(), 3) << ',' << rt::report::fixed(bound, 3) << ','
             << rt::report::fixed(r.bytes_per_work() / bound, 4) << '\n';
  }
  return 0;
}

// ---------------------------------------------------------------------------

struct HpcgArgs {
  int size = 64;
  int iters = 25;
  int depth = 4;
  double tol = 0.0;
  bool validate = false;
  bool no_precondition = false;
  std::string machine = "clx";
  double threshold = 10.0;
  std::string format = "csv";
  std::string output;
};

int cmd_hpcg(const HpcgArgs& a) {
  check_format(a.format);
  if (a.size < 1) throw UsageError("--size must be >= 1");
  if (a.iters < 1) throw UsageError("--iters must be >= 1");
  const auto machine = rt::config::resolve_machine(a.machine);
  const auto problem = rt::hpcg::build_problem(a.size, a.depth);
  rt::hpcg::CgOptions opt;
  opt.max_iter = a.iters;
  opt.tol = a.tol;
  opt.precondition = !a.no_precondition;
  const auto res = rt::hpcg::cg_solve(problem, opt);

  std::optional<rt::hpcg::ValidationReport> v;
  if (a.validate) {
    const auto caches =
        rt::cache::scaled(machine.cache_levels, rt::hpcg::cache_scale_for(a.size));
    const auto traffic = rt::hpcg::simulate_kernel_traffic(problem.matrix(), caches);
    v = rt::hpcg::validate_against_model(res.accounting, traffic, machine, a.threshold);
  }

  Out out(a.output);
  if (a.format == "json") {
    json j;
    j["size"] = a.size;
    j["depth"] = a.depth;
    j["rows"] = problem.rows();
    j["iterations"] = res.iterations;
    j["residuals"] = res.residuals;
    j["relative_residual"] = res.relative_residual();
    j["accounting"] = rt::report::accounting_json(res.accounting, res.iterations);
    if (v) j["validation"] = rt::report::validation_json(*v);
    out.os() << j.dump(2) << '\n';
    return 0;
  }
  rt::report::residuals_csv(out.os(), res);
  out.os() << "\nkernel,calls,calls_per_iteration,flops_per_row\n";
  for (auto k : rt::hpcg::kAllKernels) {
    const auto& c = res.accounting[k];
    out.os() << rt::hpcg::to_string(k) << ',' << c.calls << ','
             << rt::report::fixed(res.iterations ? double(c.calls) / res.iterations : 0.0) << ','
             << rt::report::fixed(c.flops_per_row()) << '\n';
  }
  if (v) {
    out.os() << '\n';
    rt::report::validation_csv(out.os(), *v);
  }
  return 0;
}

// ---------------------------------------------------------------------------

struct TimeArgs {
  std::string kernel = "triad";
  std::uint64_t n = 1ull << 22;
  double min_time = 1.0;
  std::string format = "csv";
  std::string output;
};

int cmd_time(const TimeArgs& a) {
  check_format(a.format);
  if (a.n == 0) throw UsageError("--n must be positive");
  const auto kind = rt::kernels::parse_stream_kind(a.kernel);
  std::vector<double> va(a.n, 1.0), vb(a.n, 2.0), vc(a.n, 3.0);
  double sink = 0;
  auto run = [&] {
    switch (kind) {
      case rt::kernels::StreamKind::LoadOnly: sink += rt::kernels::stream_load(va); break;
      case rt::kernels::StreamKind::Copy: rt::kernels::stream_copy(va, vb); break;
      case rt::kernels::StreamKind::Update: rt::kernels::stream_update(va, 1.0000001); break;
      case rt::kernels::StreamKind::Triad: rt::kernels::stream_triad(va, vb, vc, 0.5); break;
    }
  };
  using clock = std::chrono::steady_clock;
  std::vector<double> secs;
  run();  // warm-up, not counted
  const auto start = clock::now();
  while (std::chrono::duration<double>(clock::now() - start).count() < a.min_time || secs.size() < 3) {
    const auto t0 = clock::now();
    run();
    secs.push_back(std::chrono::duration<double>(clock::now() - t0).count());
  }
  const double total = std::chrono::duration<double>(clock::now() - start).count();
  std::sort(secs.begin(), secs.end());
  const double median = secs[secs.size() / 2];
  const int arrays = rt::kernels::stream_arrays(kind);
  // Bytes per iteration: nominal (what the kernel names) and with write-allocate.
  const double nominal = 8.0 * arrays;
  const bool stores = kind == rt::kernels::StreamKind::Copy || kind == rt::kernels::StreamKind::Triad;
  const double with_wa = nominal + (stores ? 8.0 : 0.0);
  auto gbs = [&](double bytes, double s) { return bytes * static_cast<double>(a.n) / s * 1e-9; };

  Out out(a.output);
  json j{{"kernel", std::string(rt::kernels::to_string(kind))},
         {"n", a.n},
         {"repetitions", secs.size()},
         {"total_seconds", total},
         {"median_seconds", median},
         {"min_seconds", secs.front()},
         {"max_seconds", secs.back()},
         {"bytes_per_iter_nominal", nominal},
         {"bytes_per_iter_write_allocate", with_wa},
         {"gbs_nominal_median", gbs(nominal, median)},
         {"gbs_write_allocate_median", gbs(with_wa, median)},
         {"gbs_nominal_spread", gbs(nominal, secs.front()) - gbs(nominal, secs.back())},
         {"checksum", sink + va[a.n / 2]}};
  if (a.format == "json") {
    out.os() << j.dump(2) << '\n';
  } else {
    out.os() << "kernel,n,repetitions,median_s,min_s,max_s,gbs_nominal,gbs_write_allocate,"
                "gbs_nominal_min,gbs_nominal_max\n"
             << j["kernel"].get<std::string>() << ',' << a.n << ',' << secs.size() << ','
             << median << ',' << secs.front() << ',' << secs.back() << ','
             << rt::report::fixed(gbs(nominal, median)) << ','
             << rt::report::fixed(gbs(with_wa, median)) << ','
             << rt::report::fixed(gbs(nominal, secs.back())) << ','
             << rt::report::fixed(gbs(nominal, secs.front())) << '\n';
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Roofline model, cache simulator and HPCG mini-app"};
  app.require_subcommand(1);
  std::uint64_t seed = 1;
  app.add_option("--seed", seed, "Seed for randomized patterns");

  ModelArgs ma;
  auto* model = app.add_subcommand("model", "Roofline predictions");
  model->add_option("--machine", ma.machine, "bdw, clx, or a config file");
  model->add_option("--kernel", ma.kernel, "dot, waxpby, spmv, symgs, mg, triad, spmpv");
  model->add_option("--nnzr", ma.nnzr, "Nonzeros per row");
  model->add_flag("--no-nt", ma.no_nt, "Write-allocate stores (triad)");
  model->add_flag("--hpcg", ma.hpcg, "Composite HPCG prediction");
  model->add_flag("--golden-table3", ma.golden, "Predicted HPCG table for both presets");
  model->add_flag("--exact-dot", ma.exact_dot, "Use 40/3 B/row for DDOT instead of 13.30");
  model->add_option("--config", ma.config, "YAML with machine and/or kernels");
  model->add_option("--format", ma.format, "csv or json");
  model->add_option("-o,--output", ma.output, "Output file (default stdout)");

  SimulateArgs sa;
  auto* sim = app.add_subcommand("simulate", "Cache simulation experiments");
  auto* pol = sim->add_option("--policy", sa.policy, "true-lru, tree-plru, stream-one-way, adaptive-dueling");
  auto* inc = sim->add_option("--inclusion", sa.inclusion, "inclusive or victim (last level)");
  sim->add_option("--pattern", sa.pattern, "load, copy, update, triad, random");
  sim->add_option("--ratios", sa.ratios, "Size/capacity ratios: a..b[:step] or a,b,c");
  sim->add_option("--ratio", sa.ratio, "Single size/capacity ratio");
  sim->add_option("--llc-size", sa.llc_size, "Last-level capacity of the test bed (K/M suffix)");
  sim->add_option("--ways", sa.ways, "Last-level associativity of the test bed");
  sim->add_option("--passes", sa.passes, "Passes per ratio (first one warms)");
  sim->add_option("--machine", sa.machine, "Use a machine's cache levels instead of the test bed");
  sim->add_option("--scale", sa.scale, "Set-count scale factor for --machine caches");
  sim->add_option("--trace", sa.trace, "Binary trace file to run");
  sim->add_option("--elems", sa.elems, "Run one stream kernel of this many elements");
  sim->add_flag("--nt", sa.nt, "Non-temporal stores for copy/triad");
  sim->add_option("--format", sa.format, "csv or json");
  sim->add_option("-o,--output", sa.output, "Output file (default stdout)");

  SpmvArgs pa;
  auto* spmv = app.add_subcommand("spmv-traffic", "Simulated SpMPV traffic vs. the lower bound");
  spmv->add_option("matrix", pa.matrix, "MatrixMarket file");
  spmv->add_flag("--rcm", pa.rcm, "Apply reverse Cuthill-McKee first");
  spmv->add_flag("--bound-only", pa.bound_only, "Print 12 + 28/nnzr only");
  spmv->add_option("--nnzr", pa.nnzr, "Nonzeros per row for --bound-only");
  spmv->add_option("-p,--power", pa.power, "Number of chained SpMVs");
  spmv->add_option("--machine", pa.machine, "Cache levels from bdw, clx or a config file");
  spmv->add_option("--scale", pa.scale, "Set-count scale factor for the caches");
  spmv->add_option("--format", pa.format, "csv or json");
  spmv->add_option("-o,--output", pa.output, "Output file (default stdout)");

  HpcgArgs ha;
  auto* hp = app.add_subcommand("hpcg", "HPCG mini solve");
  hp->add_option("--size", ha.size, "Local grid edge (n^3 rows)");
  hp->add_option("--iters", ha.iters, "CG iterations");
  hp->add_option("--depth", ha.depth, "Number of MG grids");
  hp->add_option("--tol", ha.tol, "Relative residual tolerance (0: run all iterations)");
  hp->add_flag("--validate", ha.validate, "Compare simulated traffic with the model");
  hp->add_flag("--no-precondition", ha.no_precondition, "Plain CG");
  hp->add_option("--machine", ha.machine, "Machine for --validate");
  hp->add_option("--threshold", ha.threshold, "Deviation flag threshold in percent");
  hp->add_option("--format", ha.format, "csv or json");
  hp->add_option("-o,--output", ha.output, "Output file (default stdout)");

  TimeArgs ta;
  auto* tm = app.add_subcommand("time", "Best-effort native kernel timing");
  tm->add_option("--kernel", ta.kernel, "load, copy, update, triad");
  tm->add_option("--n", ta.n, "Elements per array");
  tm->add_option("--min-time", ta.min_time, "Minimum total run time in seconds");
  tm->add_option("--format", ta.format, "csv or json");
  tm->add_option("-o,--output", ta.output, "Output file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 1;
  }

  try {
    if (*model) return cmd_model(ma);
    if (*sim) {
      sa.seed = seed;
      return cmd_simulate(sa, pol->count() > 0, inc->count() > 0);
    }
    if (*spmv) return cmd_spmv_traffic(pa);
    if (*hp) return cmd_hpcg(ha);
    if (*tm) return cmd_time(ta);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const rt::DomainError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const rt::ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const rt::SolverBreakdown& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 1;
}
