#include <gtest/gtest.h>

#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <string>

namespace {

struct Run {
  int status = -1;
  std::string out;
};

Run run(const std::string& args) {
  const std::string cmd = std::string(ROOFTRACE_CLI) + " " + args + " 2>/dev/null";
  Run r;
  FILE* p = popen(cmd.c_str(), "r");
  if (!p) return r;
  std::array<char, 4096> buf{};
  std::size_t n;
  while ((n = fread(buf.data(), 1, buf.size(), p)) > 0) r.out.append(buf.data(), n);
  const int st = pclose(p);
  r.status = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
  return r;
}

bool contains(const std::string& s, const std::string& what) { return s.find(what) != std::string::npos; }

const std::string kData = ROOFTRACE_TEST_DATA;

}  // namespace

TEST(Cli, ModelSpmv) {
  const auto r = run("model --machine clx --kernel spmv --nnzr 27");
  EXPECT_EQ(r.status, 0);
  EXPECT_TRUE(contains(r.out, "spmv,352.00,17.64,")) << r.out;
}

TEST(Cli, ModelHpcgBdw) {
  const auto r = run("model --machine bdw --hpcg");
  EXPECT_EQ(r.status, 0);
  EXPECT_TRUE(contains(r.out, "composite,,10.27,")) << r.out;
}

TEST(Cli, ModelWaxpby) {
  const auto r = run("model --machine clx --kernel waxpby");
  EXPECT_TRUE(contains(r.out, "waxpby,24.00,9.58,")) << r.out;
}

TEST(Cli, GoldenTable) {
  const auto r = run("model --golden-table3");
  EXPECT_EQ(r.status, 0);
  for (const char* row : {"bdw,DDOT,13.30,10.23", "bdw,WAXPBY,24.00,5.67", "bdw,SpMV,352.00,10.43",
                          "bdw,MG,1760.00,10.43", "bdw,composite,,10.27", "clx,DDOT,13.30,17.29",
                          "clx,WAXPBY,24.00,9.58", "clx,SpMV,352.00,17.64", "clx,MG,1760.00,17.64",
                          "clx,composite,,17.37"})
    EXPECT_TRUE(contains(r.out, row)) << row;
  EXPECT_TRUE(contains(run("model --golden-table3 --format json").out, "\"composite_gflops\""));
}

TEST(Cli, UsageErrors) {
  EXPECT_EQ(run("model --machine skylake --hpcg").status, 1);
  EXPECT_EQ(run("model --kernel fft").status, 1);
  EXPECT_EQ(run("model").status, 1);
  EXPECT_EQ(run("").status, 1);
  EXPECT_EQ(run("model --format xml --hpcg").status, 1);
  EXPECT_EQ(run("nonsense").status, 1);
}

TEST(Cli, SimulateCurves) {
  const auto lru = run("simulate --policy true-lru --pattern load --ratio 0.5");
  EXPECT_EQ(lru.status, 0);
  EXPECT_TRUE(contains(lru.out, "0.500,1.000000")) << lru.out;
  const auto plru = run("simulate --policy tree-plru --ratio 2");
  EXPECT_TRUE(contains(plru.out, "2.000,0.00")) << plru.out;
  const auto sow = run("simulate --policy stream-one-way --pattern load --ratios 0.5..12");
  EXPECT_EQ(sow.status, 0);
  EXPECT_TRUE(contains(sow.out, "4.000,0.22")) << sow.out;
  EXPECT_TRUE(contains(sow.out, "12.000,")) << sow.out;
}

TEST(Cli, SimulateTriadAndRandomSeed) {
  const auto nt = run("simulate --pattern triad --elems 100000 --nt --llc-size 64K");
  EXPECT_TRUE(contains(nt.out, "# bytes_per_work,24.0000")) << nt.out;
  const auto wa = run("simulate --pattern triad --elems 100000 --llc-size 64K");
  EXPECT_TRUE(contains(wa.out, "# bytes_per_work,32.0000")) << wa.out;
  const auto a = run("--seed 5 simulate --pattern random --ratios 0.5,1,2");
  const auto b = run("--seed 5 simulate --pattern random --ratios 0.5,1,2");
  EXPECT_EQ(a.status, 0);
  EXPECT_EQ(a.out, b.out);
}

TEST(Cli, SimulateMissingTrace) {
  EXPECT_EQ(run("simulate --trace /nonexistent/trace.bin").status, 2);
}

TEST(Cli, SpmvTraffic) {
  const auto bound = run("spmv-traffic --bound-only --nnzr 52");
  EXPECT_TRUE(contains(bound.out, "52.000,12.538")) << bound.out;
  const auto id = run("spmv-traffic --bound-only " + kData + "/identity4096.mtx");
  EXPECT_TRUE(contains(id.out, "1.000,40.000")) << id.out;
  const auto band = run("spmv-traffic --rcm --scale 0.0003 --format json " + kData + "/banded3d_12_shuffled.mtx");
  EXPECT_EQ(band.status, 0);
  EXPECT_TRUE(contains(band.out, "\"ratio_to_bound\"")) << band.out;
  EXPECT_EQ(run("spmv-traffic /nonexistent.mtx").status, 2);
}

TEST(Cli, Hpcg) {
  const auto r = run("hpcg --size 32 --iters 25");
  EXPECT_EQ(r.status, 0);
  EXPECT_TRUE(contains(r.out, "DDOT,75,3.00,")) << r.out;
  EXPECT_TRUE(contains(r.out, "WAXPBY,75,3.00,"));
  EXPECT_TRUE(contains(r.out, "SpMV,25,1.00,"));
  EXPECT_TRUE(contains(r.out, "MG,25,1.00,"));
  EXPECT_EQ(run("hpcg --size 2 --depth 2").status, 1);
  const auto v = run("hpcg --size 16 --iters 2 --validate --machine clx");
  EXPECT_TRUE(contains(v.out, "kernel,predicted_balance,measured_balance,deviation_pct")) << v.out;
}

TEST(Cli, TimeReportsBothInterpretations) {
  const auto r = run("time --kernel triad --n 100000 --min-time 0.2 --format json");
  EXPECT_EQ(r.status, 0);
  EXPECT_TRUE(contains(r.out, "\"gbs_nominal_median\""));
  EXPECT_TRUE(contains(r.out, "\"gbs_write_allocate_median\""));
  EXPECT_TRUE(contains(r.out, "\"bytes_per_iter_write_allocate\": 32.0"));
}
