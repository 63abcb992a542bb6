#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "qlwave/grid.hpp"
#include "qlwave/monotone_cubic.hpp"

using namespace qlwave;

TEST(GridSpec, CanonicalSpacingAndNodes) {
  const auto g = GridSpec::over(-20.0, 20.0, 4096);
  EXPECT_DOUBLE_EQ(g.dx, 40.0 / 4096.0);
  EXPECT_DOUBLE_EQ(g.x(0), -20.0);
  EXPECT_DOUBLE_EQ(g.x(2048), 0.0);
  EXPECT_DOUBLE_EQ(g.x_last(), 20.0 - 40.0 / 4096.0);
}

TEST(GridSpec, RejectsEmptyInterval) { EXPECT_THROW(GridSpec::over(1.0, 1.0, 64), ConfigError); }

TEST(DiscreteField, Validation) {
  const auto g = GridSpec::over(0.0, 1.0, 16);
  EXPECT_NO_THROW(DiscreteField(g, std::vector<double>(16, 0.0)));
  EXPECT_THROW(DiscreteField(g, std::vector<double>(15, 0.0)), GridMismatch);
  EXPECT_THROW(DiscreteField(GridSpec::over(0.0, 1.0, 8), std::vector<double>(8, 0.0)), ConfigError);
  std::vector<double> bad(16, 0.0);
  bad[3] = NAN;
  EXPECT_THROW(DiscreteField(g, bad), ConfigError);
}

TEST(Trapezoid, ExactForLinear) {
  std::vector<double> f(11);
  for (int i = 0; i <= 10; ++i) f[i] = 2.0 + 3.0 * (0.1 * i);
  EXPECT_NEAR(trapezoid(f, 0.1), 2.0 + 1.5, 1e-14);
  const auto cum = cumulative_trapezoid(f, 0.1);
  const auto tail = tail_trapezoid(f, 0.1);
  EXPECT_EQ(cum.front(), 0.0);
  EXPECT_EQ(tail.back(), 0.0);
  for (int i = 0; i <= 10; ++i) EXPECT_NEAR(cum[i] + tail[i], 3.5, 1e-14);
}

TEST(Trapezoid, NonUniformTime) {
  const std::vector<double> t{0.0, 0.5, 2.0};
  const std::vector<double> f{1.0, 1.0, 1.0};
  EXPECT_DOUBLE_EQ(trapezoid(t, f), 2.0);
  const auto c = cumulative_trapezoid(t, f);
  EXPECT_DOUBLE_EQ(c[1], 0.5);
  EXPECT_DOUBLE_EQ(c[2], 2.0);
}

TEST(CenteredDerivative, ExactForQuadraticInterior) {
  const double dx = 0.25;
  std::vector<double> f(20);
  for (int i = 0; i < 20; ++i) f[i] = std::pow(i * dx, 2);
  const auto d = centered_derivative(f, dx);
  for (int i = 0; i < 20; ++i) EXPECT_NEAR(d[i], 2.0 * i * dx, 1e-12) << i;
}

TEST(InterpolateLinear, InteriorAndClamp) {
  const auto g = GridSpec::over(0.0, 16.0, 16);
  std::vector<double> f(16);
  for (int i = 0; i < 16; ++i) f[i] = 3.0 * i;
  EXPECT_DOUBLE_EQ(interpolate_linear(g, f, 2.5), 7.5);
  EXPECT_DOUBLE_EQ(interpolate_linear(g, f, -1.0), 0.0);
  EXPECT_DOUBLE_EQ(interpolate_linear(g, f, 100.0), 45.0);
}

TEST(MonotoneCubic, ReproducesDataAndStaysMonotone) {
  const std::vector<double> x{0, 1, 2, 3, 4};
  const std::vector<double> y{0, 0.1, 0.2, 5.0, 5.1};
  const MonotoneCubic m(x, y);
  for (std::size_t k = 0; k < x.size(); ++k) EXPECT_NEAR(m(x[k]), y[k], 1e-14);
  double prev = m(0.0);
  for (int i = 1; i <= 400; ++i) {
    const double v = m(0.01 * i);
    EXPECT_GE(v, prev - 1e-14);
    EXPECT_GE(m.derivative(0.01 * i), -1e-14);
    prev = v;
  }
}

TEST(MonotoneCubic, ExactOnLines) {
  const MonotoneCubic m({-1, 0, 0.5, 2}, {-2, 0, 1, 4});
  for (double t : {-0.7, 0.2, 1.3}) {
    EXPECT_NEAR(m(t), 2.0 * t, 1e-14);
    EXPECT_NEAR(m.derivative(t), 2.0, 1e-14);
  }
}
