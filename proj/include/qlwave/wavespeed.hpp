#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "qlwave/errors.hpp"
#include "qlwave/monotone_cubic.hpp"

namespace qlwave {

/// Relative tolerance of every adaptive quadrature behind G, G~ and G2.
inline constexpr double kQuadratureTolerance = 1e-10;
/// Absolute tolerance in u for the bisection inverses.
inline constexpr double kInverseTolerance = 1e-12;
inline constexpr double kMaxExponent = 10.0;

namespace detail {

inline double adaptive_integral(const std::function<double(double)>& f, double a, double b) {
  if (b <= a) return 0.0;
  double err = 0.0;
  return boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, a, b, 20, kQuadratureTolerance, &err);
}

// Bisection for an increasing function; returns u in [lo, hi] with |u - u*| <= tol.
template <class F>
double bisect_increasing(F&& f, double target, double lo, double hi, double tol) {
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    (f(mid) < target ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace detail

/// The wave speed c(theta) with its antiderivative functionals
///
///   G(u)  = int_{-1}^u c,   G~(u) = int_{-1}^u sqrt(c c'),   G2(u) = int_{-1}^u c^2.
///
/// Two families are supported: the power law c = (1 + theta)^a with closed
/// forms for every functional, and a tabulated c interpolated by a monotone
/// cubic, integrated by adaptive quadrature and inverted by bisection.
/// Instances are immutable once built.
class WaveSpeedModel {
 public:
  enum class Family { PowerLaw, Tabulated };

  static constexpr double kDomainFloor = -1.0;

  static WaveSpeedModel power_law(double a) {
    if (!(a > 0.0) || !(a <= kMaxExponent)) {
      throw ConfigError("wave_speed.a must lie in (0, 10], got " + std::to_string(a));
    }
    WaveSpeedModel m;
    m.family_ = Family::PowerLaw;
    m.a_ = a;
    return m;
  }

  /// theta must start at -1 with c = 0 there and c must increase strictly.
  static WaveSpeedModel tabulated(std::vector<double> theta, std::vector<double> c) {
    if (theta.size() < 3 || theta.size() != c.size()) {
      throw ConfigError("wave_speed tabulated: need matching theta/c arrays with >= 3 samples");
    }
    if (std::abs(theta.front() - kDomainFloor) > 1e-12) {
      throw ConfigError("wave_speed tabulated: first theta sample must be -1");
    }
    if (std::abs(c.front()) > 1e-12) throw ConfigError("wave_speed tabulated: c(-1) must be 0");
    theta.front() = kDomainFloor;
    c.front() = 0.0;
    for (std::size_t i = 1; i < c.size(); ++i) {
      if (!(c[i] > c[i - 1])) throw ConfigError("wave_speed tabulated: c samples must increase strictly");
    }
    WaveSpeedModel m;
    m.family_ = Family::Tabulated;
    m.table_ = MonotoneCubic(std::move(theta), std::move(c));
    m.certify_table();
    m.build_cumulative();
    return m;
  }

  Family family() const { return family_; }
  double exponent() const { return a_; }
  const MonotoneCubic& table() const { return table_; }

  /// Notes produced while certifying a tabulated model. Smoothness is never
  /// certified; positivity and monotonicity only at the samples.
  const std::vector<std::string>& validation_notes() const { return notes_; }

  double c(double theta) const {
    check_floor(theta, "c");
    if (family_ == Family::PowerLaw) {
      const double b = 1.0 + theta;
      if (a_ == 1.0) return b;
      if (a_ == 2.0) return b * b;
      return std::pow(b, a_);
    }
    return table_(theta);
  }

  double c_prime(double theta) const {
    check_floor(theta, "c'");
    if (family_ == Family::PowerLaw) {
      if (theta == kDomainFloor) {
        if (a_ < 1.0) throw DomainError("c' is singular at theta = -1 for a < 1");
        return a_ == 1.0 ? 1.0 : 0.0;
      }
      if (a_ == 1.0) return 1.0;
      if (a_ == 2.0) return 2.0 * (1.0 + theta);
      return a_ * std::pow(1.0 + theta, a_ - 1.0);
    }
    return table_.derivative(theta);
  }

  double big_g(double u) const {
    check_floor(u, "G");
    if (family_ == Family::PowerLaw) return std::pow(1.0 + u, a_ + 1.0) / (a_ + 1.0);
    return tabulated_integral(u, g_cum_, [this](double t) { return table_(t); });
  }

  double big_g_tilde(double u) const {
    check_floor(u, "G~");
    if (family_ == Family::PowerLaw) {
      return std::sqrt(a_) * std::pow(1.0 + u, a_ + 0.5) / (a_ + 0.5);
    }
    return tabulated_integral(u, gt_cum_, [this](double t) { return sqrt_c_cprime(t); });
  }

  double big_g2(double u) const {
    check_floor(u, "G2");
    if (family_ == Family::PowerLaw) return std::pow(1.0 + u, 2.0 * a_ + 1.0) / (2.0 * a_ + 1.0);
    return tabulated_integral(u, g2_cum_, [this](double t) {
      const double v = table_(t);
      return v * v;
    });
  }

  double inv_big_g(double g) const {
    check_level(g, "G^-1");
    if (family_ == Family::PowerLaw) return std::pow((a_ + 1.0) * g, 1.0 / (a_ + 1.0)) - 1.0;
    return invert([this](double u) { return big_g(u); }, g);
  }

  double inv_big_g_tilde(double g) const {
    check_level(g, "G~^-1");
    if (family_ == Family::PowerLaw) {
      return std::pow(g * (a_ + 0.5) / std::sqrt(a_), 1.0 / (a_ + 0.5)) - 1.0;
    }
    return invert([this](double u) { return big_g_tilde(u); }, g);
  }

 private:
  WaveSpeedModel() = default;

  static void check_floor(double theta, const char* what) {
    if (!(theta >= kDomainFloor)) {
      throw DomainError(std::string(what) + " evaluated below the degeneracy point: theta = " + std::to_string(theta));
    }
  }

  static void check_level(double g, const char* what) {
    if (!(g >= 0.0)) throw DomainError(std::string(what) + " needs a non-negative level");
  }

  double sqrt_c_cprime(double t) const {
    const double p = table_(t) * table_.derivative(t);
    return p > 0.0 ? std::sqrt(p) : 0.0;
  }

  template <class F>
  double tabulated_integral(double u, const std::vector<double>& cum, F&& f) const {
    const auto& x = table_.knots();
    std::size_t k = 0;
    while (k + 1 < x.size() && x[k + 1] <= u) ++k;
    return cum[k] + detail::adaptive_integral(f, x[k], u);
  }

  template <class F>
  double invert(F&& f, double g) const {
    if (g == 0.0) return kDomainFloor;
    double hi = std::max(table_.knots().back(), 0.0);
    while (f(hi) < g) hi = 2.0 * hi + 1.0;
    return detail::bisect_increasing(f, g, kDomainFloor, hi, kInverseTolerance);
  }

  void build_cumulative() {
    const auto& x = table_.knots();
    g_cum_.assign(x.size(), 0.0);
    gt_cum_.assign(x.size(), 0.0);
    g2_cum_.assign(x.size(), 0.0);
    for (std::size_t k = 1; k < x.size(); ++k) {
      g_cum_[k] = g_cum_[k - 1] + detail::adaptive_integral([this](double t) { return table_(t); }, x[k - 1], x[k]);
      gt_cum_[k] =
          gt_cum_[k - 1] + detail::adaptive_integral([this](double t) { return sqrt_c_cprime(t); }, x[k - 1], x[k]);
      g2_cum_[k] = g2_cum_[k - 1] + detail::adaptive_integral(
                                        [this](double t) {
                                          const double v = table_(t);
                                          return v * v;
                                        },
                                        x[k - 1], x[k]);
    }
  }

  void certify_table() {
    const auto& x = table_.knots();
    for (std::size_t k = 1; k < x.size(); ++k) {
      if (!(table_.derivative(x[k]) > 0.0)) {
        throw ConfigError("wave_speed tabulated: interpolated c' is not positive at theta = " + std::to_string(x[k]));
      }
      const double mid = 0.5 * (x[k - 1] + x[k]);
      if (!(table_(mid) > 0.0)) throw ConfigError("wave_speed tabulated: interpolated c is not positive");
    }
    notes_.push_back("c > 0 and c' > 0 certified at " + std::to_string(x.size() - 1) + " samples above -1");
    notes_.push_back("smoothness of c is not certified for tabulated models");
  }

  Family family_ = Family::PowerLaw;
  double a_ = 1.0;
  MonotoneCubic table_;
  std::vector<double> g_cum_, gt_cum_, g2_cum_;
  std::vector<std::string> notes_;
};

}  // namespace qlwave
