#pragma once

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <span>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "qlwave/errors.hpp"
#include "qlwave/grid.hpp"
#include "qlwave/monotone_cubic.hpp"
#include "qlwave/wavespeed.hpp"

namespace qlwave {

enum class ProfileKind { Gaussian, BumpCompact, Plateau, CustomTable, SlowTail };

struct Table {
  std::vector<double> x, value;
  bool empty() const { return x.empty(); }
};

/// Parameters of the initial-data families. Unused fields are ignored.
///
///   gaussian      u0 = u0_amp e^{-x^2},            u1 = -A e^{-x^2}
///   bump_compact  u0 = u0_amp b(x/r),               u1 = -A b(x/r),  b(y) = e^{-1/(1-y^2)} on |y| < 1
///   plateau       u0 = u0_amp,                      u1 = -A          (spatially homogeneous)
///   slow_tail     u0 = 0,                           u1 = -A (1+x^2)^{-beta}
///   custom_table  u0, u1 resampled from (x, value) tables; missing table means zero
struct ProfileParams {
  double A = 1.0;
  double u0_amp = 0.0;
  double support = 1.0;
  double beta = 0.5;
  Table u0_table;
  Table u1_table;
};

struct InitialData {
  DiscreteField u0;
  DiscreteField u1;
};

inline ProfileKind parse_profile_kind(const std::string& s) {
  if (s == "gaussian") return ProfileKind::Gaussian;
  if (s == "bump_compact") return ProfileKind::BumpCompact;
  if (s == "plateau") return ProfileKind::Plateau;
  if (s == "custom_table") return ProfileKind::CustomTable;
  if (s == "slow_tail") return ProfileKind::SlowTail;
  throw ConfigError("profile: unknown kind '" + s + "'");
}

inline std::string to_string(ProfileKind k) {
  switch (k) {
    case ProfileKind::Gaussian: return "gaussian";
    case ProfileKind::BumpCompact: return "bump_compact";
    case ProfileKind::Plateau: return "plateau";
    case ProfileKind::CustomTable: return "custom_table";
    case ProfileKind::SlowTail: return "slow_tail";
  }
  return "unknown";
}

/// Standard C-infinity bump supported on (-1, 1).
inline double standard_bump(double y) {
  if (std::abs(y) >= 1.0) return 0.0;
  return std::exp(-1.0 / (1.0 - y * y));
}

/// Two-column CSV (x,value). A leading non-numeric line is treated as a header.
inline Table load_table_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open table '" + path + "'");
  Table t;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream ss(line);
    double x = 0, v = 0;
    if (!(ss >> x >> v)) {
      if (t.x.empty() && lineno == 1) continue;
      throw ConfigError(path + ":" + std::to_string(lineno) + ": expected two numeric columns");
    }
    t.x.push_back(x);
    t.value.push_back(v);
  }
  if (t.x.size() < 2) throw ConfigError(path + ": table needs at least two rows");
  return t;
}

/// Monotone cubic resampling; values beyond the table are held constant.
inline std::vector<double> resample(const Table& t, const GridSpec& g) {
  std::vector<double> out(g.n, 0.0);
  if (t.empty()) return out;
  const MonotoneCubic interp(t.x, t.value);
  for (std::size_t i = 0; i < g.n; ++i) out[i] = interp(std::clamp(g.x(i), t.x.front(), t.x.back()));
  return out;
}

inline InitialData make_profile(ProfileKind kind, const ProfileParams& p, const GridSpec& grid) {
  for (double v : {p.A, p.u0_amp, p.support, p.beta}) {
    if (!std::isfinite(v)) throw ConfigError("profile: non-finite parameter");
  }
  std::vector<double> u0(grid.n, 0.0), u1(grid.n, 0.0);
  switch (kind) {
    case ProfileKind::Gaussian:
      for (std::size_t i = 0; i < grid.n; ++i) {
        const double e = std::exp(-grid.x(i) * grid.x(i));
        u0[i] = p.u0_amp * e;
        u1[i] = -p.A * e;
      }
      break;
    case ProfileKind::BumpCompact:
      if (!(p.support > 0.0)) throw ConfigError("profile.support must be positive");
      for (std::size_t i = 0; i < grid.n; ++i) {
        const double b = standard_bump(grid.x(i) / p.support);
        u0[i] = p.u0_amp * b;
        u1[i] = -p.A * b;
      }
      break;
    case ProfileKind::Plateau:
      std::fill(u0.begin(), u0.end(), p.u0_amp);
      std::fill(u1.begin(), u1.end(), -p.A);
      break;
    case ProfileKind::SlowTail:
      if (!(p.beta > 0.0)) throw ConfigError("profile.beta must be positive");
      for (std::size_t i = 0; i < grid.n; ++i) u1[i] = -p.A * std::pow(1.0 + grid.x(i) * grid.x(i), -p.beta);
      break;
    case ProfileKind::CustomTable:
      u0 = resample(p.u0_table, grid);
      u1 = resample(p.u1_table, grid);
      break;
  }
  return {DiscreteField(grid, std::move(u0)), DiscreteField(grid, std::move(u1))};
}

/// Outcome of checking the initial data against the degeneracy hypotheses.
struct AdmissibilityReport {
  double c0 = 0.0;                    // min over nodes of c(u0)
  double sign_violation_plus = 0.0;   // max of u1 + c(u0) u0'
  double sign_violation_minus = 0.0;  // max of u1 - c(u0) u0'
  double u1_mass = 0.0;
  bool u1_is_trivial = false;
  bool u1_l1_finite_proxy = true;
  double tolerance = 0.0;

  bool admissible() const {
    return c0 > 0.0 && sign_violation_plus <= tolerance && sign_violation_minus <= tolerance && !u1_is_trivial;
  }
};

inline double sup_norm(std::span<const double> v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

/// Grid-noise tolerance for the sign condition: 1e-10 (1 + |u1|_inf).
inline double default_sign_tolerance(const DiscreteField& u1) { return 1e-10 * (1.0 + sup_norm(u1.values)); }

inline AdmissibilityReport check_admissibility(const DiscreteField& u0, const DiscreteField& u1,
                                               const WaveSpeedModel& model, double tol) {
  require_same_grid(u0.grid, u1.grid, "check_admissibility");
  const auto& g = u0.grid;
  AdmissibilityReport r;
  r.tolerance = tol;
  const auto u0x = centered_derivative(u0.values, g.dx);
  r.c0 = std::numeric_limits<double>::infinity();
  r.sign_violation_plus = r.sign_violation_minus = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < g.n; ++i) {
    const double c = model.c(u0[i]);
    r.c0 = std::min(r.c0, c);
    r.sign_violation_plus = std::max(r.sign_violation_plus, u1[i] + c * u0x[i]);
    r.sign_violation_minus = std::max(r.sign_violation_minus, u1[i] - c * u0x[i]);
  }
  r.u1_mass = trapezoid(u1.values, g.dx);
  const double u1_sup = sup_norm(u1.values);
  r.u1_is_trivial = u1_sup < 1e-14;
  // Tail test: the boundary level spread over a half-width must be negligible
  // against the total, otherwise the discrete integral has not converged.
  const double edge = std::max(std::abs(u1.values.front()), std::abs(u1.values.back()));
  const double half_width = 0.5 * g.dx * static_cast<double>(g.n);
  double l1 = 0.0;
  for (double v : u1.values) l1 += std::abs(v) * g.dx;
  r.u1_l1_finite_proxy = r.u1_is_trivial || edge * half_width <= 1e-6 * l1;
  return r;
}

inline DiscreteField scale_to_mass(const DiscreteField& u1, double target_mass) {
  const double current = trapezoid(u1.values, u1.grid.dx);
  if (current == 0.0) throw DegenerateInput("scale_to_mass: current mass is zero");
  if ((current > 0.0) != (target_mass > 0.0) || target_mass == 0.0) {
    throw SignFlip("scale_to_mass: target mass has the opposite sign of the current mass");
  }
  const double alpha = target_mass / current;
  std::vector<double> v(u1.values);
  for (double& x : v) x *= alpha;
  return DiscreteField(u1.grid, std::move(v));
}

}  // namespace qlwave
