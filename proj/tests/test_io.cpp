#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <gtest/gtest.h>

#include "qlwave/io.hpp"

using namespace qlwave;
namespace fs = std::filesystem;

namespace {

Scenario small(bool snapshots) {
  auto s = parse_scenario_text(R"({"wave_speed": {"a": 1}, "profile": {"profile": "gaussian"},
                                   "grid": {"N": 256}, "solver": {"snapshot_stride": 4}})");
  s.outputs.snapshots = snapshots;
  return s;
}

fs::path scratch(const std::string& name) {
  const auto p = fs::temp_directory_path() / ("qlwave_io_" + name);
  fs::remove_all(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST(Io, DiagnosticsCsvLayout) {
  const auto r = run(small(false));
  std::stringstream ss;
  write_diagnostics_csv(ss, r.trajectory);
  std::string line;
  std::getline(ss, line);
  EXPECT_EQ(line, "t,min_c,max_R,max_S,l2_RS,lp_RS,mass_ut,e_total,F,F_resid");
  std::size_t rows = 0;
  while (std::getline(ss, line)) {
    ++rows;
    EXPECT_EQ(std::count(line.begin(), line.end(), ','), 9);
  }
  EXPECT_EQ(rows, r.trajectory.snapshots.size());
}

TEST(Io, RunOutputsAndSummarySchema) {
  const auto dir = scratch("run");
  const auto r = run(small(true));
  write_run_outputs(dir, r);
  ASSERT_TRUE(fs::exists(dir / "diagnostics.csv"));
  ASSERT_TRUE(fs::exists(dir / "summary.json"));
  const auto j = json::parse(slurp(dir / "summary.json"));
  EXPECT_EQ(j.at("schema_version"), 1);
  EXPECT_EQ(j.at("termination").at("reason"), "Degenerated");
  EXPECT_TRUE(j.at("termination").at("location").is_number());
  EXPECT_TRUE(j.at("final_diagnostics").contains("F_resid"));
  EXPECT_TRUE(j.at("checks").contains("max_R_S_over_run"));
  EXPECT_EQ(j.at("admissibility").at("admissible"), true);
  EXPECT_EQ(j.at("files").at("snapshots"), "snapshots.bin");
  EXPECT_EQ(parse_scenario(j.at("scenario")).grid.N, 256u);
  fs::remove_all(dir);
}

TEST(Io, SnapshotBinaryLayout) {
  const auto dir = scratch("snap");
  const auto r = run(small(true));
  write_run_outputs(dir, r);
  const auto& tr = r.trajectory;
  const std::size_t n = 256, k = tr.snapshots.size();
  EXPECT_EQ(fs::file_size(dir / "snapshots.bin"), k * 3 * n * 8);
  const auto bytes = slurp(dir / "snapshots.bin");
  // Snapshot 1, field R, node 100, decoded as little-endian by hand.
  const std::size_t off = ((1 * 3 + 1) * n + 100) * 8;
  std::uint64_t bits = 0;
  for (int b = 7; b >= 0; --b) bits = (bits << 8) | static_cast<unsigned char>(bytes[off + b]);
  double v;
  std::memcpy(&v, &bits, 8);
  EXPECT_EQ(v, tr.snapshots[1].R[100]);
  const auto h = json::parse(slurp(dir / "snapshots.json"));
  EXPECT_EQ(h.at("fields"), json({"u", "R", "S"}));
  EXPECT_EQ(h.at("count"), k);
  EXPECT_EQ(h.at("format"), "float64-le");

  const auto back = read_snapshots(dir);
  ASSERT_EQ(back.snapshots.size(), k);
  for (std::size_t s = 0; s < k; ++s) {
    EXPECT_EQ(back.snapshots[s].t, tr.snapshots[s].t);
    EXPECT_EQ(back.snapshots[s].u, tr.snapshots[s].u);
    EXPECT_EQ(back.snapshots[s].S, tr.snapshots[s].S);
  }
  EXPECT_EQ(back.initial().grid, tr.initial().grid);
  EXPECT_DOUBLE_EQ(back.config.lambda, 1.0);
  fs::remove_all(dir);
}

TEST(Io, DeterministicOutputs) {
  const auto a = scratch("det_a"), b = scratch("det_b");
  write_run_outputs(a, run(small(true)));
  write_run_outputs(b, run(small(true)));
  EXPECT_EQ(slurp(a / "diagnostics.csv"), slurp(b / "diagnostics.csv"));
  EXPECT_EQ(slurp(a / "snapshots.bin"), slurp(b / "snapshots.bin"));
  fs::remove_all(a);
  fs::remove_all(b);
}

TEST(Io, SweepCsv) {
  SweepResult s;
  s.rows.push_back({0.5, 256, 0.02, Termination::Degenerated, 1.1, 1.09, 0.0, 0.019, ""});
  s.rows.push_back({3.0, 256, 0.02, std::nullopt, NAN, NAN, std::nullopt, NAN, "lambda, out of range"});
  std::stringstream ss;
  write_sweep_csv(ss, s);
  std::string header, r1, r2;
  std::getline(ss, header);
  std::getline(ss, r1);
  std::getline(ss, r2);
  EXPECT_EQ(header, "lambda,N,eps_degeneracy,reason,t_final,t_cross,location,min_c_final,error");
  EXPECT_EQ(r1.substr(0, 28), "0.5,256,0.02,Degenerated,1.1");
  EXPECT_NE(r2.find("Error"), std::string::npos);
  EXPECT_EQ(std::count(r2.begin(), r2.end(), ','), 8);
}

TEST(Io, OutputDirPrecedence) {
  auto s = small(false);
  ::unsetenv(kOutDirEnv);
  EXPECT_EQ(output_dir("", &s), fs::path("qlwave_out"));
  ::setenv(kOutDirEnv, "/tmp/from_env", 1);
  EXPECT_EQ(output_dir("", &s), fs::path("/tmp/from_env"));
  s.outputs.dir = "from_config";
  EXPECT_EQ(output_dir("", &s), fs::path("from_config"));
  EXPECT_EQ(output_dir("flag", &s), fs::path("flag"));
  ::unsetenv(kOutDirEnv);
}

TEST(Io, MissingSnapshotsIsConfigError) { EXPECT_THROW(read_snapshots(scratch("none")), ConfigError); }
