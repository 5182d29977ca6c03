#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "rooftrace/errors.hpp"
#include "rooftrace/kernels/stencil.hpp"
#include "rooftrace/sparse/crs.hpp"

namespace rooftrace::hpcg {

using sparse::Index;
using sparse::SparseMatrixCRS;

struct MgLevel {
  kernels::Grid grid;
  SparseMatrixCRS matrix;
  // coarse row -> fine row it injects from (every other point per dimension);
  // empty on the coarsest level
  std::vector<Index> coarse_to_fine;
};

struct Problem {
  std::vector<MgLevel> levels;  // levels[0] is the finest grid
  std::vector<double> b;        // right-hand side for an all-ones solution
  std::vector<double> x_exact;

  const SparseMatrixCRS& matrix() const { return levels.front().matrix; }
  Index rows() const { return levels.front().matrix.n_rows; }
  int depth() const { return static_cast<int>(levels.size()); }
};

// Every coarsening halves each dimension, so all dimensions must be divisible
// by 2^(depth-1), and the coarsest grid keeps at least 2 points per dimension.
inline void check_dims(const kernels::Grid& g, int depth) {
  if (depth < 1) throw DomainError("MG depth must be >= 1");
  if (g.nx < 1 || g.ny < 1 || g.nz < 1) throw DomainError("grid dimensions must be >= 1");
  const Index f = Index{1} << (depth - 1);
  for (Index d : {g.nx, g.ny, g.nz}) {
    if (d % f != 0)
      throw DomainError("grid dimension " + std::to_string(d) + " not divisible by " +
                        std::to_string(f) + " for MG depth " + std::to_string(depth));
    if (depth > 1 && d / f < 2)
      throw DomainError("grid dimension " + std::to_string(d) + " too small for MG depth " +
                        std::to_string(depth) + " (coarsest grid needs >= 2 points)");
  }
}

inline Problem build_problem(const kernels::Grid& g, int depth) {
  check_dims(g, depth);
  Problem p;
  kernels::Grid cur = g;
  for (int l = 0; l < depth; ++l) {
    MgLevel lvl;
    lvl.grid = cur;
    lvl.matrix = kernels::stencil27_matrix(cur);
    if (l + 1 < depth) {
      const kernels::Grid coarse{cur.nx / 2, cur.ny / 2, cur.nz / 2};
      lvl.coarse_to_fine.resize(coarse.rows());
      for (Index iz = 0; iz < coarse.nz; ++iz)
        for (Index iy = 0; iy < coarse.ny; ++iy)
          for (Index ix = 0; ix < coarse.nx; ++ix)
            lvl.coarse_to_fine[coarse.index(ix, iy, iz)] = cur.index(2 * ix, 2 * iy, 2 * iz);
      cur = coarse;
    }
    p.levels.push_back(std::move(lvl));
  }
  const auto& a = p.matrix();
  p.b.resize(a.n_rows);
  p.x_exact.assign(a.n_rows, 1.0);
  for (Index i = 0; i < a.n_rows; ++i) p.b[i] = 26.0 - (a.row_length(i) - 1);
  return p;
}

inline Problem build_problem(Index n, int depth) { return build_problem(kernels::Grid{n, n, n}, depth); }

}  // namespace rooftrace::hpcg
