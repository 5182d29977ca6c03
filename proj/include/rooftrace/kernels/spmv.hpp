#pragma once

// CRS sparse matrix-vector kernels (SpMV and the matrix power kernel
// y = A^p x) in execute and trace mode.

#include <cstdint>
#include <span>
#include <vector>

#include "rooftrace/errors.hpp"
#include "rooftrace/kernels/layout.hpp"
#include "rooftrace/machine_model.hpp"
#include "rooftrace/sparse/crs.hpp"
#include "rooftrace/trace.hpp"

namespace rooftrace::kernels {

using sparse::Index;
using sparse::SparseMatrixCRS;

inline void spmv(const SparseMatrixCRS& m, std::span<const double> x, std::span<double> y) {
  if (x.size() != static_cast<std::size_t>(m.n_cols))
    throw DomainError("spmv: x has " + std::to_string(x.size()) + " entries, matrix has " +
                      std::to_string(m.n_cols) + " columns");
  if (y.size() != static_cast<std::size_t>(m.n_rows)) throw DomainError("spmv: y length mismatch");
  for (Index i = 0; i < m.n_rows; ++i) {
    double sum = 0.0;
    for (Index k = m.row_ptr[i]; k < m.row_ptr[i + 1]; ++k) sum += m.values[k] * x[m.col_idx[k]];
    y[i] = sum;
  }
}

inline std::vector<double> spmv(const SparseMatrixCRS& m, std::span<const double> x) {
  std::vector<double> y(m.n_rows);
  spmv(m, x, y);
  return y;
}

// y[0] = x, y[i] = A y[i-1]; returns all p + 1 vectors.
inline std::vector<std::vector<double>> spmpv(const SparseMatrixCRS& m, std::span<const double> x,
                                              int p) {
  if (!m.square()) throw DomainError("spmpv needs a square matrix");
  if (p < 1) throw DomainError("spmpv power must be >= 1");
  std::vector<std::vector<double>> y;
  y.reserve(p + 1);
  y.emplace_back(x.begin(), x.end());
  for (int i = 1; i <= p; ++i) y.push_back(spmv(m, y.back()));
  return y;
}

inline std::uint64_t spmv_flops(const SparseMatrixCRS& m) { return 2ull * m.n_nz(); }

// ---------------------------------------------------------------------------
// Trace mode

struct CrsLayout {
  std::uint64_t values = 0;
  std::uint64_t col_idx = 0;
  std::uint64_t row_ptr = 0;

  static CrsLayout allocate(const SparseMatrixCRS& m, AddressSpace& space) {
    CrsLayout l;
    l.values = space.allocate(8ull * m.n_nz());
    l.col_idx = space.allocate(4ull * m.n_nz());
    l.row_ptr = space.allocate(4ull * (m.n_rows + 1));
    return l;
  }
};

// One row of a straightforward CRS loop: both row pointers, then value,
// index and x element per nonzero. The caller emits the row's result store.
template <class Sink>
void crs_row_trace(const SparseMatrixCRS& m, const CrsLayout& a, std::uint64_t x, Index i,
                   Sink& sink) {
  sink(a.row_ptr + 4ull * i, AccessKind::Load);
  sink(a.row_ptr + 4ull * (i + 1), AccessKind::Load);
  for (Index k = m.row_ptr[i]; k < m.row_ptr[i + 1]; ++k) {
    sink(a.values + 8ull * k, AccessKind::Load);
    sink(a.col_idx + 4ull * k, AccessKind::Load);
    sink(x + 8ull * m.col_idx[k], AccessKind::Load);
  }
}

template <class Sink>
void spmv_trace(const SparseMatrixCRS& m, const CrsLayout& a, std::uint64_t x, std::uint64_t y,
                Sink&& sink) {
  for (Index i = 0; i < m.n_rows; ++i) {
    crs_row_trace(m, a, x, i, sink);
    sink(y + 8ull * i, AccessKind::Store);
  }
}

struct SpmpvLayout {
  CrsLayout matrix;
  std::vector<std::uint64_t> vectors;  // p + 1 vectors of n_rows doubles

  static SpmpvLayout allocate(const SparseMatrixCRS& m, int p, AddressSpace& space) {
    SpmpvLayout l;
    l.matrix = CrsLayout::allocate(m, space);
    for (int i = 0; i <= p; ++i) l.vectors.push_back(space.allocate(8ull * m.n_rows));
    return l;
  }
};

template <class Sink>
void spmpv_trace(const SparseMatrixCRS& m, int p, const SpmpvLayout& l, Sink&& sink) {
  if (!m.square()) throw DomainError("spmpv needs a square matrix");
  if (p < 1 || l.vectors.size() < static_cast<std::size_t>(p) + 1)
    throw DomainError("spmpv layout does not hold p + 1 vectors");
  for (int i = 1; i <= p; ++i) spmv_trace(m, l.matrix, l.vectors[i - 1], l.vectors[i], sink);
}

inline Trace gen_spmv_trace(const SparseMatrixCRS& m) {
  AddressSpace space;
  const auto a = CrsLayout::allocate(m, space);
  const auto x = space.allocate(8ull * m.n_cols);
  const auto y = space.allocate(8ull * m.n_rows);
  Trace t;
  t.records.reserve(3ull * m.n_nz() + 3ull * m.n_rows);
  spmv_trace(m, a, x, y, t);
  t.work_count = m.n_rows;
  return t;
}

// Lower bound on memory traffic per nonzero for an LRU-cached SpMV whose
// vectors stay in cache: 12 + 28 / nnzr bytes.
using rooftrace::min_spmv_traffic;

}  // namespace rooftrace::kernels
