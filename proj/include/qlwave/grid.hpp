#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "qlwave/errors.hpp"

namespace qlwave {

/// Uniform grid x_i = x_min + i*dx, i = 0..n-1.
struct GridSpec {
  double x_min = 0.0;
  double dx = 1.0;
  std::size_t n = 0;

  /// n nodes covering [x_min, x_max) with spacing (x_max - x_min) / n.
  static GridSpec over(double x_min, double x_max, std::size_t n) {
    if (n < 2 || !(x_max > x_min)) {
      throw ConfigError("grid: need x_max > x_min and at least two nodes");
    }
    return GridSpec{x_min, (x_max - x_min) / static_cast<double>(n), n};
  }

  double x(std::size_t i) const { return x_min + static_cast<double>(i) * dx; }
  double x_last() const { return x(n - 1); }

  bool operator==(const GridSpec&) const = default;
};

/// Samples of a real function on a uniform grid.
struct DiscreteField {
  static constexpr std::size_t kMinNodes = 16;

  GridSpec grid;
  std::vector<double> values;

  DiscreteField() = default;
  DiscreteField(GridSpec g, std::vector<double> v) : grid(g), values(std::move(v)) {
    validate();
  }

  void validate() const {
    if (values.size() != grid.n) throw GridMismatch("field length does not match grid");
    if (grid.n < kMinNodes) throw ConfigError("field needs at least 16 nodes");
    if (!(grid.dx > 0.0)) throw ConfigError("field spacing must be positive");
    for (double v : values) {
      if (!std::isfinite(v)) throw ConfigError("field contains non-finite values");
    }
  }

  std::size_t size() const { return values.size(); }
  double operator[](std::size_t i) const { return values[i]; }
};

inline void require_same_grid(const GridSpec& a, const GridSpec& b, const char* what) {
  if (!(a == b)) throw GridMismatch(std::string(what) + ": fields live on different grids");
}

/// Composite trapezoid rule on a uniform grid.
inline double trapezoid(std::span<const double> f, double dx) {
  if (f.size() < 2) return 0.0;
  double s = 0.5 * (f.front() + f.back());
  for (std::size_t i = 1; i + 1 < f.size(); ++i) s += f[i];
  return s * dx;
}

/// out[i] = trapezoid of f over nodes 0..i (out[0] = 0).
inline std::vector<double> cumulative_trapezoid(std::span<const double> f, double dx) {
  std::vector<double> out(f.size(), 0.0);
  for (std::size_t i = 1; i < f.size(); ++i) out[i] = out[i - 1] + 0.5 * dx * (f[i - 1] + f[i]);
  return out;
}

/// out[i] = trapezoid of f over nodes i..n-1 (out[n-1] = 0).
inline std::vector<double> tail_trapezoid(std::span<const double> f, double dx) {
  std::vector<double> out(f.size(), 0.0);
  for (std::size_t i = f.size() - 1; i-- > 0;) out[i] = out[i + 1] + 0.5 * dx * (f[i] + f[i + 1]);
  return out;
}

/// Trapezoid over a non-uniform abscissa (used for time series).
inline double trapezoid(std::span<const double> t, std::span<const double> f) {
  double s = 0.0;
  for (std::size_t i = 1; i < t.size(); ++i) s += 0.5 * (t[i] - t[i - 1]) * (f[i] + f[i - 1]);
  return s;
}

inline std::vector<double> cumulative_trapezoid(std::span<const double> t, std::span<const double> f) {
  std::vector<double> out(t.size(), 0.0);
  for (std::size_t i = 1; i < t.size(); ++i) out[i] = out[i - 1] + 0.5 * (t[i] - t[i - 1]) * (f[i] + f[i - 1]);
  return out;
}

/// Second-order centered differences; second-order one-sided at the edges.
inline std::vector<double> centered_derivative(std::span<const double> f, double dx) {
  const std::size_t n = f.size();
  std::vector<double> d(n, 0.0);
  if (n < 3) return d;
  for (std::size_t i = 1; i + 1 < n; ++i) d[i] = (f[i + 1] - f[i - 1]) / (2.0 * dx);
  d[0] = (-3.0 * f[0] + 4.0 * f[1] - f[2]) / (2.0 * dx);
  d[n - 1] = (3.0 * f[n - 1] - 4.0 * f[n - 2] + f[n - 3]) / (2.0 * dx);
  return d;
}

/// Linear interpolation of nodal values at position x (clamped to the grid).
inline double interpolate_linear(const GridSpec& g, std::span<const double> f, double x) {
  const double s = (x - g.x_min) / g.dx;
  if (s <= 0.0) return f.front();
  const double last = static_cast<double>(g.n - 1);
  if (s >= last) return f.back();
  const auto i = static_cast<std::size_t>(s);
  const double w = s - static_cast<double>(i);
  return (1.0 - w) * f[i] + w * f[i + 1];
}

}  // namespace qlwave
