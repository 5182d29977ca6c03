#pragma once

// Reverse Cuthill-McKee ordering on the symmetrized sparsity pattern.

#include <algorithm>
#include <utility>
#include <vector>

#include "rooftrace/sparse/crs.hpp"

namespace rooftrace::sparse {

namespace detail {

// Adjacency of A + A^T without self loops, each list sorted.
inline std::vector<std::vector<Index>> symmetric_graph(const SparseMatrixCRS& m) {
  std::vector<std::vector<Index>> adj(m.n_rows);
  for (Index i = 0; i < m.n_rows; ++i)
    for (Index j : m.cols(i))
      if (j != i) {
        adj[i].push_back(j);
        adj[j].push_back(i);
      }
  for (auto& a : adj) {
    std::sort(a.begin(), a.end());
    a.erase(std::unique(a.begin(), a.end()), a.end());
  }
  return adj;
}

// BFS levels from `root` restricted to unvisited vertices; returns the last
// level and the eccentricity.
inline std::pair<std::vector<Index>, Index> bfs_last_level(
    const std::vector<std::vector<Index>>& adj, Index root, const std::vector<char>& done,
    std::vector<Index>& mark, Index stamp) {
  std::vector<Index> level{root}, next;
  mark[root] = stamp;
  Index depth = 0;
  for (;;) {
    next.clear();
    for (Index v : level)
      for (Index w : adj[v])
        if (!done[w] && mark[w] != stamp) {
          mark[w] = stamp;
          next.push_back(w);
        }
    if (next.empty()) return {level, depth};
    level.swap(next);
    ++depth;
  }
}

// George-Liu pseudo-peripheral vertex search.
inline Index pseudo_peripheral(const std::vector<std::vector<Index>>& adj, Index start,
                               const std::vector<char>& done, std::vector<Index>& mark,
                               Index& stamp) {
  Index root = start;
  auto [last, ecc] = bfs_last_level(adj, root, done, mark, ++stamp);
  for (;;) {
    Index best = last.front();
    for (Index v : last)
      if (adj[v].size() < adj[best].size() || (adj[v].size() == adj[best].size() && v < best))
        best = v;
    auto [last2, ecc2] = bfs_last_level(adj, best, done, mark, ++stamp);
    if (ecc2 <= ecc) return root;
    root = best;
    last = std::move(last2);
    ecc = ecc2;
  }
}

}  // namespace detail

// new_of_old[i] is the position of original row i in the RCM order.
inline std::vector<Index> rcm_ordering(const SparseMatrixCRS& m) {
  if (!m.square()) throw DomainError("RCM needs a square matrix");
  const Index n = m.n_rows;
  const auto adj = detail::symmetric_graph(m);
  auto degree_less = [&](Index a, Index b) {
    return adj[a].size() != adj[b].size() ? adj[a].size() < adj[b].size() : a < b;
  };

  std::vector<Index> vertices(n);
  for (Index i = 0; i < n; ++i) vertices[i] = i;
  std::sort(vertices.begin(), vertices.end(), degree_less);

  std::vector<char> done(n, 0);
  std::vector<Index> mark(n, -1);
  Index stamp = -1;
  std::vector<Index> order;
  order.reserve(n);
  std::vector<Index> nbrs;
  for (Index seed : vertices) {
    if (done[seed]) continue;
    const Index root = detail::pseudo_peripheral(adj, seed, done, mark, stamp);
    std::size_t head = order.size();
    order.push_back(root);
    done[root] = 1;
    while (head < order.size()) {
      const Index v = order[head++];
      nbrs.clear();
      for (Index w : adj[v])
        if (!done[w]) nbrs.push_back(w);
      std::sort(nbrs.begin(), nbrs.end(), degree_less);
      for (Index w : nbrs) {
        done[w] = 1;
        order.push_back(w);
      }
    }
  }
  std::reverse(order.begin(), order.end());
  std::vector<Index> new_of_old(n);
  for (Index pos = 0; pos < n; ++pos) new_of_old[order[pos]] = pos;
  return new_of_old;
}

struct RcmResult {
  SparseMatrixCRS matrix;
  std::vector<Index> new_of_old;
};

inline RcmResult rcm_permute(const SparseMatrixCRS& m) {
  auto p = rcm_ordering(m);
  auto b = permute_symmetric(m, p);
  return {std::move(b), std::move(p)};
}

}  // namespace rooftrace::sparse
