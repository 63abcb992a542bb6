#include <cmath>
#include <string>

#include <gtest/gtest.h>

#include "qlwave/harness.hpp"

using namespace qlwave;

namespace {

Scenario base(std::size_t n = 512, double lambda = 1.0) {
  auto s = parse_scenario_text(R"({"wave_speed": {"a": 1}, "profile": {"profile": "gaussian", "A": 1}})");
  s.grid.N = n;
  s.solver.lambda = lambda;
  return s;
}

}  // namespace

TEST(Run, RefusesInadmissibleDataUnlessWaived) {
  auto s = base();
  s.profile.params.A = -1.0;
  EXPECT_THROW(run(s), ConfigError);
  s.admissibility_waiver = true;
  s.solver.t_max = 0.5;
  EXPECT_NO_THROW(run(s, {false, {}}));
}

TEST(Run, WaivedEquilibrium) {
  auto s = base(256);
  s.profile.params.A = 0.0;
  s.admissibility_waiver = true;
  s.solver.t_max = 3.0;
  const auto r = run(s);
  EXPECT_EQ(r.trajectory.report.reason, Termination::ReachedTmax);
  EXPECT_TRUE(r.admissibility.u1_is_trivial);
}

TEST(Run, CanonicalWarnsAboutBoundarySafety) {
  const auto r = run(base(), {false, {}});
  EXPECT_EQ(r.trajectory.report.reason, Termination::Degenerated);
  ASSERT_FALSE(r.warnings.empty());
  EXPECT_NE(r.warnings.front().find("boundary safety"), std::string::npos);
}

TEST(Sweep, RowsSortedAndComplete) {
  const auto res = lambda_sweep(base(), {1.5, 0.0, 0.5}, {512, 256}, {}, 2);
  ASSERT_EQ(res.rows.size(), 6u);
  for (std::size_t k = 1; k < res.rows.size(); ++k) {
    const auto& a = res.rows[k - 1];
    const auto& b = res.rows[k];
    EXPECT_TRUE(a.lambda < b.lambda || (a.lambda == b.lambda && a.N < b.N));
  }
  for (const auto& r : res.rows) {
    ASSERT_TRUE(r.reason.has_value()) << r.error;
    EXPECT_EQ(*r.reason, Termination::Degenerated);
    EXPECT_TRUE(r.location.has_value());
  }
}

TEST(Sweep, ConcurrentEqualsSerial) {
  const auto a = lambda_sweep(base(256), {0.0, 1.0}, {256, 512}, {0.02, 0.05}, 1);
  const auto b = lambda_sweep(base(256), {0.0, 1.0}, {256, 512}, {0.02, 0.05}, 4);
  ASSERT_EQ(a.rows.size(), b.rows.size());
  for (std::size_t k = 0; k < a.rows.size(); ++k) {
    EXPECT_EQ(a.rows[k].t_final, b.rows[k].t_final);
    EXPECT_EQ(a.rows[k].min_c_final, b.rows[k].min_c_final);
  }
}

TEST(Sweep, EmptyAndFailingRows) {
  EXPECT_TRUE(lambda_sweep(base(), {}, {512}).rows.empty());
  const auto res = lambda_sweep(base(), {1.0, 3.0}, {256});
  ASSERT_EQ(res.rows.size(), 2u);
  EXPECT_TRUE(res.rows[0].reason.has_value());
  EXPECT_FALSE(res.rows[1].reason.has_value());
  EXPECT_NE(res.rows[1].error.find("[0, 2]"), std::string::npos);
}

TEST(Sweep, GlobalRowAtLambdaTwo) {
  auto s = with_mass(base(512, 2.0), -0.5);
  s.solver.t_max = 20.0;
  const auto res = lambda_sweep(s, {2.0}, {512});
  ASSERT_TRUE(res.rows[0].reason.has_value());
  EXPECT_EQ(*res.rows[0].reason, Termination::ReachedTmax);
}

TEST(Threshold, BracketErrors) {
  auto s = base(256, 2.0);
  s.solver.t_max = 30.0;
  EXPECT_THROW(threshold_bisection(s, -0.6, -0.5, 2), BracketError);
  EXPECT_THROW(threshold_bisection(base(256, 1.0), -2.0, -0.5, 2), ConfigError);
  EXPECT_THROW(threshold_bisection(s, -0.5, -2.0, 2), ConfigError);
}

TEST(Threshold, LinearSpeedNearMinusOne) {
  auto s = base(512, 2.0);
  s.solver.t_max = 40.0;
  const auto r = threshold_bisection(s, -2.0, -0.5, 4);
  EXPECT_NEAR(r.hi - r.lo, 1.5 / 16.0, 1e-12);
  EXPECT_EQ(r.history.size(), 6u);
  EXPECT_TRUE(r.monotone);
  EXPECT_NEAR(r.mass_star, -1.0, 0.1);
}

TEST(Convergence, Validation) {
  EXPECT_THROW(convergence_study(base(), {256, 512}), ConfigError);
  EXPECT_THROW(convergence_study(base(), {256, 512, 2048}), ConfigError);
}

TEST(Convergence, FirstOrderDegeneracyTime) {
  const auto r = convergence_study(base(), {1024, 2048, 4096});
  ASSERT_EQ(r.orders.size(), 1u);
  EXPECT_GE(r.orders[0], 0.5);
  EXPECT_LE(r.orders[0], 1.5);
  EXPECT_LT(r.richardson, r.rows.back().t_cross);
}

TEST(Convergence, ConstantStateIdenticalOutcomes) {
  auto s = base(256);
  s.profile.kind = ProfileKind::Plateau;
  s.profile.params.A = 0.0;
  s.profile.params.u0_amp = 0.5;
  s.admissibility_waiver = true;
  s.solver.t_max = 1.0;
  const auto r = convergence_study(s, {256, 512, 1024});
  for (const auto& row : r.rows) {
    EXPECT_EQ(row.reason, Termination::ReachedTmax);
    EXPECT_EQ(row.t_final, 1.0);
  }
  EXPECT_TRUE(std::isnan(r.orders[0]));
}

TEST(CutoffStudy, SlowTailLowerBoundGrowsWithDomain) {
  auto s = base(1024);
  s.profile.kind = ProfileKind::SlowTail;
  s.profile.params.beta = 0.5;
  s.solver.t_max = 0.5;
  s.grid = {-20, 20, 1024};
  const auto rows = cutoff_study(s, {10, 20, 40}, {20.0});
  ASSERT_EQ(rows.size(), 3u);
  EXPECT_LT(rows[0].lower_bound, rows[1].lower_bound);
  EXPECT_LT(rows[1].lower_bound, rows[2].lower_bound);
  EXPECT_FALSE(rows[2].l1_proxy);
  EXPECT_EQ(rows[2].N, 2048u);
}
