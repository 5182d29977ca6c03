#pragma once

// HPCG-style 27-point stencil problem on an nx x ny x nz grid: diagonal 26,
// every neighbor -1, rows ordered x fastest.

#include <cstdint>
#include <vector>

#include "rooftrace/errors.hpp"
#include "rooftrace/sparse/crs.hpp"

namespace rooftrace::kernels {

struct Grid {
  sparse::Index nx = 1, ny = 1, nz = 1;

  sparse::Index rows() const { return nx * ny * nz; }
  sparse::Index index(sparse::Index ix, sparse::Index iy, sparse::Index iz) const {
    return ix + nx * (iy + ny * iz);
  }
};

inline sparse::SparseMatrixCRS stencil27_matrix(const Grid& g) {
  if (g.nx < 1 || g.ny < 1 || g.nz < 1) throw DomainError("grid dimensions must be >= 1");
  const std::uint64_t n = static_cast<std::uint64_t>(g.nx) * g.ny * g.nz;
  if (n * 27 > 0x7fffffffull) throw DomainError("grid too large for 4-byte indices");
  sparse::SparseMatrixCRS m;
  m.n_rows = m.n_cols = g.rows();
  m.row_ptr.assign(1, 0);
  m.values.reserve(n * 27);
  m.col_idx.reserve(n * 27);
  for (sparse::Index iz = 0; iz < g.nz; ++iz)
    for (sparse::Index iy = 0; iy < g.ny; ++iy)
      for (sparse::Index ix = 0; ix < g.nx; ++ix) {
        const auto row = g.index(ix, iy, iz);
        for (int dz = -1; dz <= 1; ++dz)
          for (int dy = -1; dy <= 1; ++dy)
            for (int dx = -1; dx <= 1; ++dx) {
              const auto jx = ix + dx, jy = iy + dy, jz = iz + dz;
              if (jx < 0 || jx >= g.nx || jy < 0 || jy >= g.ny || jz < 0 || jz >= g.nz) continue;
              const auto col = g.index(jx, jy, jz);
              m.col_idx.push_back(col);
              m.values.push_back(col == row ? 26.0 : -1.0);
            }
        m.row_ptr.push_back(static_cast<sparse::Index>(m.values.size()));
      }
  return m;
}

inline sparse::SparseMatrixCRS stencil27_matrix(sparse::Index nx, sparse::Index ny,
                                                sparse::Index nz) {
  return stencil27_matrix(Grid{nx, ny, nz});
}

}  // namespace rooftrace::kernels
