#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <span>
#include <string>
#include <tuple>
#include <vector>

#include "rooftrace/errors.hpp"

namespace rooftrace::sparse {

using Index = std::int32_t;  // 4-byte column indices and row pointers

// Compressed row storage, 8-byte values. Rows are sorted by column.
struct SparseMatrixCRS {
  Index n_rows = 0;
  Index n_cols = 0;
  std::vector<double> values;
  std::vector<Index> col_idx;
  std::vector<Index> row_ptr{0};

  Index n_nz() const { return static_cast<Index>(values.size()); }
  double n_nzr() const { return n_rows == 0 ? 0.0 : static_cast<double>(n_nz()) / n_rows; }
  bool square() const { return n_rows == n_cols; }
  Index row_length(Index i) const { return row_ptr[i + 1] - row_ptr[i]; }

  std::span<const Index> cols(Index i) const {
    return {col_idx.data() + row_ptr[i], static_cast<std::size_t>(row_length(i))};
  }
  std::span<const double> vals(Index i) const {
    return {values.data() + row_ptr[i], static_cast<std::size_t>(row_length(i))};
  }

  void validate() const {
    if (n_rows < 0 || n_cols < 0) throw DomainError("negative matrix dimension");
    if (row_ptr.size() != static_cast<std::size_t>(n_rows) + 1)
      throw DomainError("row_ptr must have n_rows + 1 entries");
    if (row_ptr.front() != 0) throw DomainError("row_ptr[0] must be 0");
    if (row_ptr.back() != n_nz()) throw DomainError("row_ptr[n_rows] must equal n_nz");
    if (col_idx.size() != values.size()) throw DomainError("col_idx and values differ in length");
    for (Index i = 0; i < n_rows; ++i) {
      if (row_ptr[i + 1] < row_ptr[i]) throw DomainError("row_ptr must be non-decreasing");
      for (Index k = row_ptr[i]; k < row_ptr[i + 1]; ++k) {
        if (col_idx[k] < 0 || col_idx[k] >= n_cols)
          throw DomainError("column index out of range in row " + std::to_string(i));
        if (k > row_ptr[i] && col_idx[k] <= col_idx[k - 1])
          throw DomainError("column indices not strictly increasing in row " + std::to_string(i));
      }
    }
  }
};

struct Triplet {
  Index row;
  Index col;
  double value;
};

// Builds a CRS matrix from unordered triplets; duplicates are summed.
inline SparseMatrixCRS from_triplets(Index n_rows, Index n_cols, std::vector<Triplet> t) {
  std::sort(t.begin(), t.end(), [](const Triplet& a, const Triplet& b) {
    return std::tie(a.row, a.col) < std::tie(b.row, b.col);
  });
  SparseMatrixCRS m;
  m.n_rows = n_rows;
  m.n_cols = n_cols;
  m.row_ptr.assign(static_cast<std::size_t>(n_rows) + 1, 0);
  for (std::size_t k = 0; k < t.size(); ++k) {
    const auto& e = t[k];
    if (e.row < 0 || e.row >= n_rows || e.col < 0 || e.col >= n_cols)
      throw DomainError("triplet index out of range");
    if (!m.values.empty() && k > 0 && t[k - 1].row == e.row && t[k - 1].col == e.col) {
      m.values.back() += e.value;
      continue;
    }
    m.values.push_back(e.value);
    m.col_idx.push_back(e.col);
    ++m.row_ptr[e.row + 1];
  }
  std::partial_sum(m.row_ptr.begin(), m.row_ptr.end(), m.row_ptr.begin());
  return m;
}

// max |i - j| over stored entries
inline Index bandwidth(const SparseMatrixCRS& m) {
  Index bw = 0;
  for (Index i = 0; i < m.n_rows; ++i)
    for (Index j : m.cols(i)) bw = std::max<Index>(bw, j > i ? j - i : i - j);
  return bw;
}

inline bool is_permutation(std::span<const Index> p) {
  std::vector<char> seen(p.size(), 0);
  for (Index v : p) {
    if (v < 0 || static_cast<std::size_t>(v) >= p.size() || seen[v]) return false;
    seen[v] = 1;
  }
  return true;
}

// B = P A P^T with new_of_old[i] the new index of row/column i.
inline SparseMatrixCRS permute_symmetric(const SparseMatrixCRS& a,
                                         std::span<const Index> new_of_old) {
  if (!a.square()) throw DomainError("symmetric permutation needs a square matrix");
  if (new_of_old.size() != static_cast<std::size_t>(a.n_rows))
    throw DomainError("permutation length does not match matrix");
  if (!is_permutation(new_of_old)) throw DomainError("not a permutation");
  std::vector<Triplet> t;
  t.reserve(a.values.size());
  for (Index i = 0; i < a.n_rows; ++i)
    for (Index k = a.row_ptr[i]; k < a.row_ptr[i + 1]; ++k)
      t.push_back({new_of_old[i], new_of_old[a.col_idx[k]], a.values[k]});
  return from_triplets(a.n_rows, a.n_cols, std::move(t));
}

}  // namespace rooftrace::sparse
