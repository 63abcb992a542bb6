#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

#include "qlwave/errors.hpp"

namespace qlwave {

/// Piecewise cubic Hermite interpolant with Fritsch-Carlson slopes.
///
/// Monotone data produce a monotone interpolant, and strictly increasing
/// data produce strictly positive slopes at every knot. Outside the knot
/// range the interpolant continues linearly with the end slope.
class MonotoneCubic {
 public:
  MonotoneCubic() = default;

  MonotoneCubic(std::vector<double> x, std::vector<double> y) : x_(std::move(x)), y_(std::move(y)) {
    if (x_.size() != y_.size()) throw ConfigError("monotone cubic: x and y differ in length");
    if (x_.size() < 2) throw ConfigError("monotone cubic: need at least two knots");
    for (std::size_t i = 0; i < x_.size(); ++i) {
      if (!std::isfinite(x_[i]) || !std::isfinite(y_[i])) {
        throw ConfigError("monotone cubic: non-finite knot");
      }
      if (i > 0 && !(x_[i] > x_[i - 1])) throw ConfigError("monotone cubic: abscissae must increase strictly");
    }
    compute_slopes();
  }

  double operator()(double x) const {
    if (x <= x_.front()) return y_.front() + d_.front() * (x - x_.front());
    if (x >= x_.back()) return y_.back() + d_.back() * (x - x_.back());
    const std::size_t k = segment(x);
    const double h = x_[k + 1] - x_[k];
    const double s = (x - x_[k]) / h;
    const double s2 = s * s, s3 = s2 * s;
    return (2 * s3 - 3 * s2 + 1) * y_[k] + (s3 - 2 * s2 + s) * h * d_[k] + (-2 * s3 + 3 * s2) * y_[k + 1] +
           (s3 - s2) * h * d_[k + 1];
  }

  double derivative(double x) const {
    if (x <= x_.front()) return d_.front();
    if (x >= x_.back()) return d_.back();
    const std::size_t k = segment(x);
    const double h = x_[k + 1] - x_[k];
    const double s = (x - x_[k]) / h;
    const double s2 = s * s;
    return (6 * s2 - 6 * s) / h * y_[k] + (3 * s2 - 4 * s + 1) * d_[k] + (-6 * s2 + 6 * s) / h * y_[k + 1] +
           (3 * s2 - 2 * s) * d_[k + 1];
  }

  const std::vector<double>& knots() const { return x_; }
  const std::vector<double>& values() const { return y_; }
  const std::vector<double>& slopes() const { return d_; }

 private:
  std::size_t segment(double x) const {
    auto it = std::upper_bound(x_.begin(), x_.end(), x);
    return static_cast<std::size_t>(std::distance(x_.begin(), it)) - 1;
  }

  static double sign(double v) { return (v > 0) - (v < 0); }

  // Three-point end formula, kept inside the monotone region (0, 3*delta].
  static double end_slope(double h0, double h1, double del0, double del1) {
    double d = ((2 * h0 + h1) * del0 - h0 * del1) / (h0 + h1);
    if (sign(d) != sign(del0)) {
      d = 0.5 * del0;
    } else if (sign(del0) != sign(del1) && std::abs(d) > std::abs(3 * del0)) {
      d = 3 * del0;
    }
    return d;
  }

  void compute_slopes() {
    const std::size_t n = x_.size();
    std::vector<double> h(n - 1), del(n - 1);
    for (std::size_t k = 0; k + 1 < n; ++k) {
      h[k] = x_[k + 1] - x_[k];
      del[k] = (y_[k + 1] - y_[k]) / h[k];
    }
    d_.assign(n, 0.0);
    if (n == 2) {
      d_[0] = d_[1] = del[0];
      return;
    }
    for (std::size_t k = 1; k + 1 < n; ++k) {
      if (del[k - 1] * del[k] > 0) {
        const double w1 = 2 * h[k] + h[k - 1];
        const double w2 = h[k] + 2 * h[k - 1];
        d_[k] = (w1 + w2) / (w1 / del[k - 1] + w2 / del[k]);
      }
    }
    d_[0] = end_slope(h[0], h[1], del[0], del[1]);
    d_[n - 1] = end_slope(h[n - 2], h[n - 3], del[n - 2], del[n - 3]);
  }

  std::vector<double> x_, y_, d_;
};

}  // namespace qlwave
