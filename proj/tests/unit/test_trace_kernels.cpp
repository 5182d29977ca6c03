#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include "rooftrace/cache/hierarchy.hpp"
#include "rooftrace/kernels/spmv.hpp"
#include "rooftrace/kernels/stencil.hpp"
#include "rooftrace/kernels/stream.hpp"
#include "rooftrace/sparse/rcm.hpp"
#include "rooftrace/trace.hpp"

using namespace rooftrace;
using namespace rooftrace::kernels;
using sparse::Index;
using sparse::SparseMatrixCRS;

namespace {

SparseMatrixCRS random_matrix(Index n, double density, std::uint64_t seed, bool diag = true) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0, 1), v(-1, 1);
  std::vector<sparse::Triplet> t;
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j)
      if ((diag && i == j) || u(rng) < density) t.push_back({i, j, v(rng)});
  return sparse::from_triplets(n, n, std::move(t));
}

std::vector<std::vector<double>> dense(const SparseMatrixCRS& m) {
  std::vector<std::vector<double>> d(m.n_rows, std::vector<double>(m.n_cols, 0.0));
  for (Index i = 0; i < m.n_rows; ++i)
    for (Index k = m.row_ptr[i]; k < m.row_ptr[i + 1]; ++k) d[i][m.col_idx[k]] += m.values[k];
  return d;
}

std::vector<double> dense_mv(const std::vector<std::vector<double>>& d, const std::vector<double>& x) {
  std::vector<double> y(d.size(), 0.0);
  for (std::size_t i = 0; i < d.size(); ++i)
    for (std::size_t j = 0; j < x.size(); ++j) y[i] += d[i][j] * x[j];
  return y;
}

std::vector<double> random_vector(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> v(-1, 1);
  std::vector<double> x(n);
  for (auto& e : x) e = v(rng);
  return x;
}

}  // namespace

TEST(TraceIo, RoundTrip) {
  Trace t;
  t(0, AccessKind::Load);
  t(0xdeadbeefcafe, AccessKind::Store);
  t(~0ull, AccessKind::StoreNT);
  std::stringstream ss;
  write_trace(ss, t);
  EXPECT_EQ(ss.str().size(), 3 * kTraceRecordBytes);
  const auto back = read_trace(ss);
  EXPECT_EQ(back.records, t.records);
}

TEST(TraceIo, RejectsBadInput) {
  std::stringstream trunc(std::string(10, '\0'));
  EXPECT_THROW(read_trace(trunc), ParseError);
  std::string rec(9, '\0');
  rec[8] = 7;
  std::stringstream badkind(rec);
  EXPECT_THROW(read_trace(badkind), ParseError);
  EXPECT_THROW(read_trace(std::string("/nonexistent/trace.bin")), ParseError);
}

TEST(Stream, TraceShape) {
  const auto t = gen_stream_trace({StreamKind::Triad, 100, true});
  ASSERT_EQ(t.size(), 300u);
  EXPECT_EQ(t.work_count, 100u);
  EXPECT_EQ(t.records[0].kind, AccessKind::Load);
  EXPECT_EQ(t.records[1].kind, AccessKind::Load);
  EXPECT_EQ(t.records[2].kind, AccessKind::StoreNT);
  EXPECT_EQ(t.records[3].addr, t.records[0].addr + 8);
  EXPECT_EQ(gen_stream_trace({StreamKind::Copy, 10, false}).size(), 20u);
  EXPECT_THROW(gen_stream_trace({StreamKind::Triad, 0, false}), DomainError);
}

TEST(Stream, OverlappingArraysRejected) {
  StreamBases b{0, 64, 4096};
  Trace t;
  EXPECT_THROW(stream_trace({StreamKind::Triad, 100, false}, b, t), DomainError);
}

TEST(Stream, TrafficThroughTinyCaches) {
  const std::vector<cache::CacheConfig> tiny{{"L1", 1024, 4}, {"L2", 4096, 8}};
  const std::uint64_t n = 1 << 15;
  auto bytes = [&](StreamKind k, bool nt) {
    cache::CacheHierarchy h(tiny);
    return cache::run_trace(h, gen_stream_trace({k, n, nt}), n).bytes_per_work();
  };
  EXPECT_EQ(bytes(StreamKind::Triad, true), 24.0);
  EXPECT_EQ(bytes(StreamKind::Triad, false), 32.0);
  EXPECT_EQ(bytes(StreamKind::LoadOnly, false), 8.0);
  EXPECT_EQ(bytes(StreamKind::Copy, true), 16.0);
  EXPECT_EQ(bytes(StreamKind::Copy, false), 24.0);
  EXPECT_EQ(bytes(StreamKind::Update, false), 16.0);
}

TEST(Stream, ExecuteKernels) {
  std::vector<double> a(5, 0), b{1, 2, 3, 4, 5}, c{1, 1, 1, 1, 1};
  stream_triad(a, b, c, 2.0);
  EXPECT_EQ(a, (std::vector<double>{3, 4, 5, 6, 7}));
  stream_copy(a, b);
  EXPECT_EQ(a, b);
  EXPECT_EQ(stream_load(b), 15.0);
  stream_update(a, 2.0);
  EXPECT_EQ(a[4], 10.0);
}

TEST(Spmv, IdentityAndDenseOracle) {
  const auto id = sparse::from_triplets(4, 4, {{0, 0, 1}, {1, 1, 1}, {2, 2, 1}, {3, 3, 1}});
  const std::vector<double> x{1, -2, 3, 0.5};
  EXPECT_EQ(spmv(id, x), x);

  const auto m = random_matrix(50, 0.1, 42);
  const auto d = dense(m);
  const auto xr = random_vector(50, 7);
  const auto y = spmv(m, xr), yd = dense_mv(d, xr);
  for (std::size_t i = 0; i < y.size(); ++i) EXPECT_NEAR(y[i], yd[i], 1e-12 * (1 + std::abs(yd[i])));
}

TEST(Spmv, LengthMismatch) {
  const auto m = random_matrix(5, 0.3, 1);
  std::vector<double> x(4), y(5);
  EXPECT_THROW(spmv(m, x, y), DomainError);
}

TEST(Spmpv, OraclesAndIdentity) {
  const auto id = sparse::from_triplets(3, 3, {{0, 0, 1}, {1, 1, 1}, {2, 2, 1}});
  const std::vector<double> x{1, 2, 3};
  for (const auto& v : spmpv(id, x, 5)) EXPECT_EQ(v, x);

  const auto m = random_matrix(10, 0.3, 5);
  const auto xr = random_vector(10, 9);
  EXPECT_EQ(spmpv(m, xr, 1)[1], spmv(m, xr));
  const auto ys = spmpv(m, xr, 4);
  ASSERT_EQ(ys.size(), 5u);
  const auto d = dense(m);
  auto ref = xr;
  for (int p = 1; p <= 4; ++p) {
    ref = dense_mv(d, ref);
    for (std::size_t i = 0; i < ref.size(); ++i) EXPECT_NEAR(ys[p][i], ref[i], 1e-10 * (1 + std::abs(ref[i])));
  }
  EXPECT_THROW(spmpv(m, xr, 0), DomainError);
}

TEST(Spmv, PermutationConsistency) {
  auto m = random_matrix(40, 0.1, 3);
  std::vector<Index> p(40);
  std::iota(p.begin(), p.end(), 0);
  std::shuffle(p.begin(), p.end(), std::mt19937(4));
  const auto pm = sparse::permute_symmetric(m, p);
  const auto x = random_vector(40, 2);
  std::vector<double> px(40);
  for (Index i = 0; i < 40; ++i) px[p[i]] = x[i];
  const auto y = spmv(m, x), py = spmv(pm, px);
  for (Index i = 0; i < 40; ++i) EXPECT_NEAR(py[p[i]], y[i], 1e-12);
}

TEST(SpmvTrace, AgreesWithExecuteMode) {
  const auto m = random_matrix(30, 0.2, 8);
  AddressSpace space;
  const auto l = CrsLayout::allocate(m, space);
  const auto x = space.allocate(8 * 30), y = space.allocate(8 * 30);
  Trace t;
  spmv_trace(m, l, x, y, t);
  std::uint64_t values = 0, cols = 0, xs = 0, ystores = 0;
  for (const auto& r : t.records) {
    if (r.addr >= l.values && r.addr < l.values + 8ull * m.n_nz()) ++values;
    if (r.addr >= l.col_idx && r.addr < l.col_idx + 4ull * m.n_nz()) ++cols;
    if (r.addr >= x && r.addr < x + 8 * 30) ++xs;
    if (r.addr >= y && r.addr < y + 8 * 30 && r.kind == AccessKind::Store) ++ystores;
  }
  EXPECT_EQ(values, static_cast<std::uint64_t>(m.n_nz()));
  EXPECT_EQ(cols, static_cast<std::uint64_t>(m.n_nz()));
  EXPECT_EQ(xs, static_cast<std::uint64_t>(m.n_nz()));
  EXPECT_EQ(ystores, 30u);
  EXPECT_EQ(gen_spmv_trace(m).work_count, 30u);
}

TEST(SpmvTrace, BoundOnBandedMatrix) {
  // 7-point 3D operator in natural (banded) order; caches far smaller than the matrix
  std::vector<sparse::Triplet> t;
  const Index g = 14;
  for (Index z = 0; z < g; ++z)
    for (Index y = 0; y < g; ++y)
      for (Index x = 0; x < g; ++x) {
        const Index i = (z * g + y) * g + x;
        t.push_back({i, i, 6});
        if (x > 0) t.push_back({i, i - 1, -1});
        if (x + 1 < g) t.push_back({i, i + 1, -1});
        if (y > 0) t.push_back({i, i - g, -1});
        if (y + 1 < g) t.push_back({i, i + g, -1});
        if (z > 0) t.push_back({i, i - g * g, -1});
        if (z + 1 < g) t.push_back({i, i + g * g, -1});
      }
  const auto m = sparse::from_triplets(g * g * g, g * g * g, std::move(t));
  const std::vector<cache::CacheConfig> tiny{{"L1", 1024, 8}, {"L2", 4096, 8}, {"L3", 16384, 16}};
  cache::CacheHierarchy h(tiny);
  AddressSpace space;
  const auto l = SpmpvLayout::allocate(m, 4, space);
  const auto r = cache::run_generator(h, [&](auto& s) { spmpv_trace(m, 4, l, s); }, 4ull * m.n_nz());
  const double bound = min_spmv_traffic(m.n_nzr());
  EXPECT_GE(r.bytes_per_work(), bound);
  EXPECT_LE(r.bytes_per_work(), 1.3 * bound);
}

TEST(Stencil, Rows) {
  const auto m = stencil27_matrix(16, 16, 16);
  EXPECT_EQ(m.n_rows, 4096);
  const Grid g{16, 16, 16};
  const Index interior = g.index(5, 7, 9);
  EXPECT_EQ(m.row_length(interior), 27);
  auto vals = m.vals(interior);
  auto cols = m.cols(interior);
  double sum = 0;
  for (std::size_t k = 0; k < cols.size(); ++k) {
    if (cols[k] == interior) EXPECT_EQ(vals[k], 26.0);
    else EXPECT_EQ(vals[k], -1.0);
    sum += vals[k];
  }
  EXPECT_EQ(sum, 0.0);
  EXPECT_TRUE(std::is_sorted(cols.begin(), cols.end()));
  EXPECT_EQ(m.row_length(g.index(0, 0, 0)), 8);
  // A * const vanishes on interior rows
  const auto y = spmv(m, std::vector<double>(4096, 3.0));
  EXPECT_EQ(y[interior], 0.0);
  EXPECT_GT(y[g.index(0, 0, 0)], 0.0);

  const auto one = stencil27_matrix(1, 1, 1);
  ASSERT_EQ(one.n_nz(), 1);
  EXPECT_EQ(one.values[0], 26.0);
  EXPECT_THROW(stencil27_matrix(0, 4, 4), DomainError);
}

TEST(Stencil, FlopsPerInteriorRow) {
  const auto m = stencil27_matrix(3, 3, 3);
  // only the center row is interior
  EXPECT_EQ(2 * m.row_length(Grid{3, 3, 3}.index(1, 1, 1)), 54);
  EXPECT_EQ(spmv_flops(m), 2ull * m.n_nz());
}

TEST(Layout, AlignedAndDisjoint) {
  AddressSpace s;
  const auto a = s.allocate(8 * 1000), b = s.allocate(8 * 1000), c = s.allocate(12);
  EXPECT_EQ(a % 64, 0u);
  EXPECT_EQ(b % 64, 0u);
  EXPECT_GE(b, a + 8000);
  EXPECT_GE(c, b + 8000);
}
