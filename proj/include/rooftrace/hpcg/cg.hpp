#pragma once

// Multigrid-preconditioned conjugate gradient following the reference HPCG
// main loop: per iteration one MG application, three dot products, three
// WAXPBY updates and one SpMV.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

#include "rooftrace/errors.hpp"
#include "rooftrace/hpcg/kernels.hpp"
#include "rooftrace/hpcg/problem.hpp"
#include "rooftrace/kernels/spmv.hpp"

namespace rooftrace::hpcg {

class Solver {
 public:
  explicit Solver(const Problem& p) : p_(&p) {
    for (const auto& l : p.levels) {
      const auto n = static_cast<std::size_t>(l.matrix.n_rows);
      work_.push_back({std::vector<double>(n), std::vector<double>(n), std::vector<double>(n)});
    }
  }

  // z = M^-1 r with one V-cycle. Non-coarsest levels: pre-smooth, residual,
  // restrict, recurse, prolong, post-smooth. The coarsest level of a
  // multi-level hierarchy does a single symgs. A one-level hierarchy runs the
  // finest-grid pattern only: symgs, spmv, symgs.
  void mg(std::span<const double> r, std::span<double> z) { mg_level(0, r, z); }

  KernelAccounting& accounting() { return acc_; }
  const KernelAccounting& accounting() const { return acc_; }

 private:
  struct Work {
    std::vector<double> axf;  // A z on this level
    std::vector<double> rc;   // residual restricted from the next finer level
    std::vector<double> zc;
  };

  void count_level_flops(int level, std::uint64_t flops) {
    if (level == 0)
      acc_[Kernel::Mg].flops += flops;
    else
      acc_.coarse_flops += flops;
  }

  void mg_level(int level, std::span<const double> r, std::span<double> z) {
    const MgLevel& l = p_->levels[level];
    const auto& a = l.matrix;
    std::fill(z.begin(), z.end(), 0.0);
    const bool coarsest = level + 1 == p_->depth();
    if (coarsest && p_->depth() > 1) {
      symgs(a, r, z);
      count_level_flops(level, symgs_flops(a));
      return;
    }
    symgs(a, r, z);
    auto& w = work_[level];
    kernels::spmv(a, z, w.axf);
    count_level_flops(level, symgs_flops(a) + kernels::spmv_flops(a));
    if (!coarsest) {
      auto& next = work_[level + 1];
      const auto& c2f = l.coarse_to_fine;
      for (std::size_t i = 0; i < c2f.size(); ++i) next.rc[i] = r[c2f[i]] - w.axf[c2f[i]];
      mg_level(level + 1, next.rc, next.zc);
      for (std::size_t i = 0; i < c2f.size(); ++i) z[c2f[i]] += next.zc[i];
    }
    symgs(a, r, z);
    count_level_flops(level, symgs_flops(a));
  }

  const Problem* p_;
  std::vector<Work> work_;
  KernelAccounting acc_;
};

struct CgOptions {
  int max_iter = 25;
  double tol = 0.0;  // stop once |r| / |r0| <= tol
  bool precondition = true;
  bool log_calls = true;
};

struct CgResult {
  std::vector<double> x;
  std::vector<double> residuals;  // |r_k| for k = 0..iterations
  int iterations = 0;
  KernelAccounting accounting;
  std::vector<std::vector<Kernel>> call_log;  // kernel sequence per iteration

  double relative_residual() const {
    return residuals.empty() || residuals.front() == 0.0 ? 0.0
                                                         : residuals.back() / residuals.front();
  }
};

inline CgResult cg_solve(const Problem& p, std::span<const double> b, const CgOptions& opt = {}) {
  if (opt.max_iter < 1) throw DomainError("max_iter must be >= 1");
  const auto& a = p.matrix();
  const auto n = static_cast<std::size_t>(a.n_rows);
  if (b.size() != n) throw DomainError("right-hand side length mismatch");

  Solver solver(p);
  KernelAccounting& acc = solver.accounting();
  CgResult res;
  res.x.assign(n, 0.0);
  std::vector<double> r(n), z(n), pv(n), ap(n);
  std::vector<Kernel>* log = nullptr;

  auto note = [&](Kernel k, std::uint64_t flops) {
    auto& c = acc[k];
    ++c.calls;
    c.rows += n;
    if (k != Kernel::Mg) c.flops += flops;
    if (log) log->push_back(k);
  };

  // r = b - A x0, outside the iteration
  pv = res.x;
  kernels::spmv(a, pv, ap);
  waxpby(1.0, b, -1.0, ap, r);
  double normr = std::sqrt(dot(r, r));
  acc.setup_flops = kernels::spmv_flops(a) + 4ull * n;
  const double normr0 = normr;
  res.residuals.push_back(normr);

  double rtz = 0.0;
  for (int k = 1; k <= opt.max_iter; ++k) {
    if (normr0 == 0.0 || normr / normr0 <= opt.tol) break;
    if (opt.log_calls) log = &res.call_log.emplace_back();

    if (opt.precondition) {
      solver.mg(r, z);
      note(Kernel::Mg, 0);
    } else {
      z = r;
    }
    const double oldrtz = rtz;
    rtz = dot(r, z);
    note(Kernel::Dot, 2 * n);
    if (k == 1) {
      waxpby(1.0, z, 0.0, z, pv);
    } else {
      const double beta = rtz / oldrtz;
      waxpby(beta, pv, 1.0, z, pv);
    }
    note(Kernel::Waxpby, 2 * n);
    kernels::spmv(a, pv, ap);
    note(Kernel::Spmv, kernels::spmv_flops(a));
    const double pap = dot(pv, ap);
    note(Kernel::Dot, 2 * n);
    if (!(pap > 0.0))
      throw SolverBreakdown("CG breakdown: <p, Ap> = " + std::to_string(pap) +
                            " (matrix not positive definite)");
    const double alpha = rtz / pap;
    waxpby(1.0, res.x, alpha, pv, res.x);
    note(Kernel::Waxpby, 2 * n);
    waxpby(1.0, r, -alpha, ap, r);
    note(Kernel::Waxpby, 2 * n);
    normr = std::sqrt(dot(r, r));
    note(Kernel::Dot, 2 * n);
    res.residuals.push_back(normr);
    res.iterations = k;
  }
  res.accounting = acc;
  return res;
}

inline CgResult cg_solve(const Problem& p, const CgOptions& opt = {}) { return cg_solve(p, p.b, opt); }

}  // namespace rooftrace::hpcg
