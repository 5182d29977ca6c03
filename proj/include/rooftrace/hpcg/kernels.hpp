#pragma once

// HPCG building blocks with flop/row bookkeeping, plus their trace-mode
// counterparts for traffic simulation.

#include <array>
#include <cmath>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "rooftrace/errors.hpp"
#include "rooftrace/kernels/spmv.hpp"
#include "rooftrace/sparse/crs.hpp"
#include "rooftrace/trace.hpp"

namespace rooftrace::hpcg {

using sparse::Index;
using sparse::SparseMatrixCRS;

enum class Kernel : std::uint8_t { Dot, Waxpby, Spmv, Mg };
inline constexpr std::array<Kernel, 4> kAllKernels{Kernel::Dot, Kernel::Waxpby, Kernel::Spmv,
                                                   Kernel::Mg};

inline std::string_view to_string(Kernel k) {
  switch (k) {
    case Kernel::Dot: return "DDOT";
    case Kernel::Waxpby: return "WAXPBY";
    case Kernel::Spmv: return "SpMV";
    case Kernel::Mg: return "MG";
  }
  return "?";
}

struct KernelCounters {
  std::uint64_t calls = 0;
  std::uint64_t flops = 0;
  std::uint64_t rows = 0;  // rows processed, summed over calls

  double flops_per_row() const { return rows == 0 ? 0.0 : static_cast<double>(flops) / rows; }
};

// Per-kernel flops and rows on the finest grid. MG work on coarser grids is
// kept apart in `coarse_flops` so the finest-grid F_x stays comparable with
// the model.
struct KernelAccounting {
  std::array<KernelCounters, 4> per_kernel{};
  std::uint64_t coarse_flops = 0;
  std::uint64_t setup_flops = 0;  // initial residual outside the iteration

  KernelCounters& operator[](Kernel k) { return per_kernel[static_cast<int>(k)]; }
  const KernelCounters& operator[](Kernel k) const { return per_kernel[static_cast<int>(k)]; }

  std::uint64_t total_flops() const {
    std::uint64_t t = 0;
    for (const auto& c : per_kernel) t += c.flops;
    return t;
  }
};

// ---------------------------------------------------------------------------
// Execute mode

inline double dot(std::span<const double> u, std::span<const double> v) {
  if (u.size() != v.size()) throw DomainError("dot: length mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) s += u[i] * v[i];
  return s;
}

// w = alpha x + beta y; w may alias x or y.
inline void waxpby(double alpha, std::span<const double> x, double beta, std::span<const double> y,
                   std::span<double> w) {
  if (x.size() != y.size() || x.size() != w.size()) throw DomainError("waxpby: length mismatch");
  for (std::size_t i = 0; i < w.size(); ++i) w[i] = alpha * x[i] + beta * y[i];
}

inline std::vector<double> waxpby(double alpha, std::span<const double> x, double beta,
                                  std::span<const double> y) {
  std::vector<double> w(x.size());
  waxpby(alpha, x, beta, y, w);
  return w;
}

// Symmetric Gauss-Seidel: forward sweep over rows 0..n-1, then backward sweep
// n-1..0, updating x in place (reference HPCG semantics).
inline void symgs(const SparseMatrixCRS& a, std::span<const double> r, std::span<double> x) {
  if (!a.square()) throw DomainError("symgs needs a square matrix");
  const auto n = static_cast<std::size_t>(a.n_rows);
  if (r.size() != n || x.size() != n) throw DomainError("symgs: vector length mismatch");

  auto relax = [&](Index i) {
    double sum = r[i];
    double d = 0.0;
    for (Index k = a.row_ptr[i]; k < a.row_ptr[i + 1]; ++k) {
      const Index j = a.col_idx[k];
      if (j == i) d = a.values[k];
      sum -= a.values[k] * x[j];
    }
    if (d == 0.0) throw DomainError("symgs: zero diagonal in row " + std::to_string(i));
    sum += x[i] * d;
    x[i] = sum / d;
  };
  for (Index i = 0; i < a.n_rows; ++i) relax(i);
  for (Index i = a.n_rows - 1; i >= 0; --i) relax(i);
}

inline std::uint64_t symgs_flops(const SparseMatrixCRS& a) { return 4ull * a.n_nz(); }

// ---------------------------------------------------------------------------
// Trace mode. Vector arguments are base addresses of 8-byte arrays.

template <class Sink>
void dot_trace(std::uint64_t u, std::uint64_t v, Index n, Sink&& sink) {
  for (Index i = 0; i < n; ++i) {
    sink(u + 8ull * i, AccessKind::Load);
    if (v != u) sink(v + 8ull * i, AccessKind::Load);
  }
}

template <class Sink>
void waxpby_trace(std::uint64_t w, std::uint64_t x, std::uint64_t y, Index n, Sink&& sink) {
  for (Index i = 0; i < n; ++i) {
    sink(x + 8ull * i, AccessKind::Load);
    sink(y + 8ull * i, AccessKind::Load);
    sink(w + 8ull * i, AccessKind::Store);
  }
}

// Each row reads its matrix row, gathers x (diagonal included), reads r[i]
// and writes x[i].
template <class Sink>
void symgs_trace(const SparseMatrixCRS& a, const kernels::CrsLayout& l, std::uint64_t r,
                 std::uint64_t x, Sink&& sink) {
  auto row = [&](Index i) {
    sink(r + 8ull * i, AccessKind::Load);
    kernels::crs_row_trace(a, l, x, i, sink);
    sink(x + 8ull * i, AccessKind::Store);
  };
  for (Index i = 0; i < a.n_rows; ++i) row(i);
  for (Index i = a.n_rows - 1; i >= 0; --i) row(i);
}

}  // namespace rooftrace::hpcg
