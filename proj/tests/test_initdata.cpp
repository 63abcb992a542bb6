#include <cmath>
#include <filesystem>
#include <fstream>
#include <vector>

#include <gtest/gtest.h>

#include "oracle.hpp"
#include "qlwave/initdata.hpp"

using namespace qlwave;

namespace {

const double kSqrtPi = std::sqrt(std::acos(-1.0));

InitialData canonical(double A = 1.0, std::size_t n = 4096) {
  ProfileParams p;
  p.A = A;
  return make_profile(ProfileKind::Gaussian, p, GridSpec::over(-20, 20, n));
}

}  // namespace

TEST(MakeProfile, CanonicalGaussian) {
  const auto d = canonical();
  for (double v : d.u0.values) EXPECT_EQ(v, 0.0);
  EXPECT_DOUBLE_EQ(d.u1[2048], -1.0);
  EXPECT_NEAR(trapezoid(d.u1.values, d.u1.grid.dx), -kSqrtPi, 1e-12);
}

TEST(MakeProfile, ZeroAmplitudeIsTrivial) {
  const auto d = canonical(0.0);
  const auto r = check_admissibility(d.u0, d.u1, WaveSpeedModel::power_law(1), default_sign_tolerance(d.u1));
  EXPECT_TRUE(r.u1_is_trivial);
  EXPECT_FALSE(r.admissible());
}

TEST(MakeProfile, CompactBumpMass) {
  // Pinned value of -int_{-1}^{1} exp(-1/(1-x^2)) dx, computed by the oracle.
  const double pinned = -0.443993816168;
  const double ref = -oracle::integrate([](double x) { return std::exp(-1.0 / (1.0 - x * x)); }, -1.0 + 1e-15,
                                        1.0 - 1e-15, 1e-14);
  EXPECT_NEAR(ref, pinned, 1e-11);
  ProfileParams p;
  p.support = 1.0;
  const auto d = make_profile(ProfileKind::BumpCompact, p, GridSpec::over(-2, 2, 4096));
  EXPECT_NEAR(trapezoid(d.u1.values, d.u1.grid.dx), pinned, 1e-9);
  EXPECT_EQ(d.u1[0], 0.0);
  EXPECT_EQ(d.u1[4095], 0.0);
}

TEST(MakeProfile, PlateauAndSlowTail) {
  ProfileParams p;
  p.A = 0.1;
  p.u0_amp = 0.5;
  const auto g = GridSpec::over(-10, 10, 64);
  const auto pl = make_profile(ProfileKind::Plateau, p, g);
  for (std::size_t i = 0; i < g.n; ++i) {
    EXPECT_EQ(pl.u0[i], 0.5);
    EXPECT_EQ(pl.u1[i], -0.1);
  }
  p.A = 1.0;
  p.beta = 0.5;
  const auto st = make_profile(ProfileKind::SlowTail, p, g);
  EXPECT_NEAR(st.u1[0], -1.0 / std::sqrt(101.0), 1e-15);
}

TEST(MakeProfile, RejectsNonFinite) {
  ProfileParams p;
  p.A = INFINITY;
  EXPECT_THROW(make_profile(ProfileKind::Gaussian, p, GridSpec::over(-1, 1, 64)), ConfigError);
  EXPECT_THROW(parse_profile_kind("sawtooth"), ConfigError);
}

TEST(MakeProfile, CustomTableFromCsv) {
  const auto path = std::filesystem::temp_directory_path() / "qlwave_u1_table.csv";
  {
    std::ofstream f(path);
    f << "x,value\n-2,0\n-1,-0.5\n0,-1\n1,-0.5\n2,0\n";
  }
  ProfileParams p;
  p.u1_table = load_table_csv(path.string());
  const auto d = make_profile(ProfileKind::CustomTable, p, GridSpec::over(-4, 4, 64));
  EXPECT_NEAR(d.u1[32], -1.0, 1e-14);
  EXPECT_NEAR(d.u1[24], -0.5, 1e-14);
  EXPECT_EQ(d.u1[0], 0.0);
  for (double v : d.u0.values) EXPECT_EQ(v, 0.0);
  std::filesystem::remove(path);
}

TEST(Admissibility, Canonical) {
  const auto d = canonical();
  const auto r = check_admissibility(d.u0, d.u1, WaveSpeedModel::power_law(1), default_sign_tolerance(d.u1));
  EXPECT_DOUBLE_EQ(r.c0, 1.0);
  EXPECT_LE(r.sign_violation_plus, 0.0);
  EXPECT_LE(r.sign_violation_minus, 0.0);
  EXPECT_TRUE(r.admissible());
  EXPECT_TRUE(r.u1_l1_finite_proxy);
  EXPECT_NEAR(r.u1_mass, -kSqrtPi, 1e-12);
}

TEST(Admissibility, PositiveVelocityRejected) {
  const auto d = canonical(-1.0);
  const auto r = check_admissibility(d.u0, d.u1, WaveSpeedModel::power_law(1), default_sign_tolerance(d.u1));
  EXPECT_DOUBLE_EQ(r.sign_violation_plus, 1.0);
  EXPECT_FALSE(r.admissible());
}

TEST(Admissibility, TrivialVelocityRejected) {
  ProfileParams p;
  p.A = 0.0;
  p.u0_amp = 0.5;
  const auto d = make_profile(ProfileKind::Gaussian, p, GridSpec::over(-20, 20, 1024));
  const auto r = check_admissibility(d.u0, d.u1, WaveSpeedModel::power_law(1), default_sign_tolerance(d.u1));
  EXPECT_TRUE(r.u1_is_trivial);
  EXPECT_FALSE(r.admissible());
}

TEST(Admissibility, GridMismatch) {
  const auto a = canonical(1.0, 1024);
  const auto b = canonical(1.0, 2048);
  EXPECT_THROW(check_admissibility(a.u0, b.u1, WaveSpeedModel::power_law(1), 1e-10), GridMismatch);
}

TEST(Admissibility, StableUnderRefinement) {
  ProfileParams p;
  p.u0_amp = -0.2;
  p.A = 1.0;
  const auto m = WaveSpeedModel::power_law(1);
  const auto a = make_profile(ProfileKind::Gaussian, p, GridSpec::over(-20, 20, 2048));
  const auto b = make_profile(ProfileKind::Gaussian, p, GridSpec::over(-20, 20, 4096));
  const auto ra = check_admissibility(a.u0, a.u1, m, 1e-10);
  const auto rb = check_admissibility(b.u0, b.u1, m, 1e-10);
  const double dx = 40.0 / 2048;
  EXPECT_NEAR(ra.sign_violation_plus, rb.sign_violation_plus, 5 * dx * dx);
  EXPECT_NEAR(ra.u1_mass, rb.u1_mass, 1e-12);
}

TEST(Admissibility, SlowTailFlagsTruncation) {
  ProfileParams p;
  p.beta = 0.5;
  const auto d = make_profile(ProfileKind::SlowTail, p, GridSpec::over(-40, 40, 1024));
  const auto r = check_admissibility(d.u0, d.u1, WaveSpeedModel::power_law(1), 1e-10);
  EXPECT_FALSE(r.u1_l1_finite_proxy);
}

TEST(ScaleToMass, Examples) {
  const auto d = canonical();
  const auto s = scale_to_mass(d.u1, -1.0);
  EXPECT_NEAR(s[2048], -1.0 / kSqrtPi, 1e-12);
  EXPECT_NEAR(-s[2048], 0.564190, 1e-6);
  EXPECT_NEAR(trapezoid(s.values, s.grid.dx), -1.0, 1e-10);
  const auto id = scale_to_mass(d.u1, trapezoid(d.u1.values, d.u1.grid.dx));
  for (std::size_t i = 0; i < id.size(); ++i) EXPECT_NEAR(id[i], d.u1[i], 1e-15);
  EXPECT_THROW(scale_to_mass(canonical(0.0).u1, -1.0), DegenerateInput);
  EXPECT_THROW(scale_to_mass(d.u1, 1.0), SignFlip);
}

TEST(ScaleToMass, Linear) {
  const auto d = canonical(1.0, 1024);
  const auto twice = scale_to_mass(scale_to_mass(d.u1, -0.3), -2.5);
  const auto once = scale_to_mass(d.u1, -2.5);
  for (std::size_t i = 0; i < once.size(); ++i) EXPECT_NEAR(twice[i], once[i], 1e-12);
}
