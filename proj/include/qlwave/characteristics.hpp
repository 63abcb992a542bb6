#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "qlwave/diagnostics.hpp"
#include "qlwave/errors.hpp"
#include "qlwave/grid.hpp"
#include "qlwave/trajectory.hpp"

namespace qlwave {

enum class CharSign { Plus, Minus };
enum class Invariant { W1, W2, V1, V2 };

inline CharSign parse_char_sign(const std::string& s) {
  if (s == "plus") return CharSign::Plus;
  if (s == "minus") return CharSign::Minus;
  throw ConfigError("sign must be 'plus' or 'minus', got '" + s + "'");
}

inline Invariant parse_invariant(const std::string& s) {
  if (s == "w1") return Invariant::W1;
  if (s == "w2") return Invariant::W2;
  if (s == "v1") return Invariant::V1;
  if (s == "v2") return Invariant::V2;
  throw ConfigError("invariant must be one of w1, w2, v1, v2, got '" + s + "'");
}

/// w1 and v1 are carried by minus characteristics, w2 and v2 by plus ones.
inline CharSign carrier(Invariant inv) {
  return (inv == Invariant::W1 || inv == Invariant::V1) ? CharSign::Minus : CharSign::Plus;
}

/// Discrete curve dx/dt = +-c(u(t, x)) sampled at snapshot times.
struct CharacteristicPath {
  CharSign sign = CharSign::Plus;
  std::vector<double> times;
  std::vector<double> positions;
  bool hit_edge = false;
};

namespace detail {

// Bilinear field lookup: linear in x on each snapshot, linear in t between them.
class SpaceTimeField {
 public:
  explicit SpaceTimeField(const Trajectory& traj) : traj_(traj), times_(traj.snapshot_times()) {}

  double t_begin() const { return times_.front(); }
  double t_end() const { return times_.back(); }
  const GridSpec& grid() const { return traj_.initial().grid; }
  const std::vector<double>& times() const { return times_; }

  // Index k with times[k] <= t <= times[k+1] and weight of snapshot k+1.
  std::pair<std::size_t, double> bracket(double t) const {
    if (times_.size() == 1 || t <= times_.front()) return {0, 0.0};
    if (t >= times_.back()) return {times_.size() - 2, 1.0};
    auto it = std::upper_bound(times_.begin(), times_.end(), t);
    const std::size_t k = static_cast<std::size_t>(it - times_.begin()) - 1;
    return {k, (t - times_[k]) / (times_[k + 1] - times_[k])};
  }

  double u(double t, double x) const {
    const auto [k, w] = bracket(t);
    const auto& g = grid();
    const double a = interpolate_linear(g, traj_.snapshots[k].u, x);
    if (w == 0.0) return a;
    return (1.0 - w) * a + w * interpolate_linear(g, traj_.snapshots[k + 1].u, x);
  }

 private:
  const Trajectory& traj_;
  std::vector<double> times_;
};

}  // namespace detail

/// Traces a characteristic from (t_start, x_start) with the explicit midpoint
/// rule, one step per snapshot interval. Stops at the last snapshot or when
/// the curve would leave the grid.
inline CharacteristicPath trace(const Trajectory& traj, double x_start, double t_start, CharSign sign) {
  if (traj.snapshots.empty()) throw MissingDiagnostics("trace: trajectory has no snapshots");
  const detail::SpaceTimeField field(traj);
  const auto& g = field.grid();
  if (!(t_start >= field.t_begin() && t_start <= field.t_end()) || !(x_start >= g.x_min && x_start <= g.x_last())) {
    throw OutOfBox("trace: start point lies outside the stored space-time box");
  }
  const double dir = sign == CharSign::Plus ? 1.0 : -1.0;
  const auto& model = traj.model;
  auto speed = [&](double t, double x) { return dir * model.c(std::max(field.u(t, x), WaveSpeedModel::kDomainFloor)); };

  CharacteristicPath path;
  path.sign = sign;
  path.times.push_back(t_start);
  path.positions.push_back(x_start);
  const auto& times = field.times();
  auto next = std::upper_bound(times.begin(), times.end(), t_start);
  double t = t_start, x = x_start;
  for (; next != times.end(); ++next) {
    const double h = *next - t;
    const double x_mid = x + 0.5 * h * speed(t, x);
    const double x_new = x + h * speed(t + 0.5 * h, x_mid);
    if (x_new < g.x_min || x_new > g.x_last()) {
      path.hit_edge = true;
      break;
    }
    t = *next;
    x = x_new;
    path.times.push_back(t);
    path.positions.push_back(x);
  }
  return path;
}

/// First time at which path b falls behind path a by more than tol, given
/// that a started to the left of b. Empty when the ordering is preserved.
inline std::optional<double> first_crossing(const CharacteristicPath& a, const CharacteristicPath& b, double tol) {
  const std::size_t n = std::min(a.times.size(), b.times.size());
  for (std::size_t k = 0; k < n; ++k) {
    if (a.positions[k] > b.positions[k] + tol) return a.times[k];
  }
  return std::nullopt;
}

/// Residual of the integrated transport identity along a traced path:
///
///   inv(t, x(t)) - inv(t0, x(t0)) + mu int_{t0}^t int_{I(s)} e~(s, y) dy ds,
///
/// with I(s) = (-inf, x(s)] for w-invariants and [x(s), inf) for v-invariants,
/// truncated at the grid edges. Fields between snapshots are interpolated
/// linearly in time.
inline std::vector<double> transport_residual(const Trajectory& traj, const CharacteristicPath& path, Invariant inv,
                                              const WaveSpeedModel& model, double mu) {
  if (traj.snapshots.size() < 2) throw MissingDiagnostics("transport_residual: needs at least two snapshots");
  if (carrier(inv) != path.sign) {
    throw ConfigError("transport_residual: invariant is not carried by this characteristic family");
  }
  if (path.times.empty()) return {};
  const detail::SpaceTimeField field(traj);
  const auto& g = field.grid();
  const bool is_w = inv == Invariant::W1 || inv == Invariant::W2;

  const auto [k_lo, w_lo] = field.bracket(path.times.front());
  const auto [k_hi, w_hi] = field.bracket(path.times.back());
  const std::size_t first = k_lo, last = std::min(k_hi + 1, traj.snapshots.size() - 1);

  // Per-snapshot invariant field and running e~ integral over I.
  std::vector<std::vector<double>> inv_field(traj.snapshots.size()), e_int(traj.snapshots.size());
  for (std::size_t k = first; k <= last; ++k) {
    const auto pair = is_w ? riemann_w(traj, k) : riemann_v(traj, k);
    inv_field[k] = (inv == Invariant::W1 || inv == Invariant::V1) ? pair.first : pair.second;
    const auto e = etilde(traj.snapshots[k], model);
    e_int[k] = is_w ? cumulative_trapezoid(e, g.dx) : tail_trapezoid(e, g.dx);
  }
  auto sample = [&](const std::vector<std::vector<double>>& f, double t, double x) {
    const auto [k, w] = field.bracket(t);
    const double a = interpolate_linear(g, f[k], x);
    if (w == 0.0) return a;
    return (1.0 - w) * a + w * interpolate_linear(g, f[k + 1], x);
  };

  std::vector<double> residual(path.times.size());
  const double inv0 = sample(inv_field, path.times[0], path.positions[0]);
  double source = 0.0;
  double prev = sample(e_int, path.times[0], path.positions[0]);
  residual[0] = 0.0;
  for (std::size_t j = 1; j < path.times.size(); ++j) {
    const double cur = sample(e_int, path.times[j], path.positions[j]);
    source += 0.5 * (path.times[j] - path.times[j - 1]) * (cur + prev);
    prev = cur;
    residual[j] = sample(inv_field, path.times[j], path.positions[j]) - inv0 + mu * source;
  }
  return residual;
}

}  // namespace qlwave
