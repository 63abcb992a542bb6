#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <utility>
#include <vector>

#include "qlwave/errors.hpp"
#include "qlwave/grid.hpp"
#include "qlwave/solver.hpp"
#include "qlwave/trajectory.hpp"
#include "qlwave/wavespeed.hpp"

namespace qlwave {

// ---------------------------------------------------------------------------
// Pointwise functionals of a single state
// ---------------------------------------------------------------------------

/// Energy density e~ = c'(u) c(u) u_x^2.
inline std::vector<double> etilde(const State& s, const WaveSpeedModel& model,
                                  double guard = std::numeric_limits<double>::min()) {
  const auto f = derive_spatial(s, model, guard);
  std::vector<double> e(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) e[i] = model.c_prime(s.u[i]) * f.cu[i] * f.ux[i] * f.ux[i];
  return e;
}

struct InvariantPair {
  std::vector<double> first;
  std::vector<double> second;
};

/// w1 = int_{-inf}^x u_t + G(u),  w2 = int_{-inf}^x u_t - G(u).
/// The line integral is truncated at the left edge of the grid.
inline InvariantPair riemann_w(const State& s, const WaveSpeedModel& model) {
  const auto cum = cumulative_trapezoid(s.ut(), s.grid.dx);
  InvariantPair w{cum, cum};
  for (std::size_t i = 0; i < s.size(); ++i) {
    const double g = model.big_g(s.u[i]);
    w.first[i] += g;
    w.second[i] -= g;
  }
  return w;
}

/// v1 = int_x^{inf} u_t - G(u),  v2 = int_x^{inf} u_t + G(u).
inline InvariantPair riemann_v(const State& s, const WaveSpeedModel& model) {
  const auto tail = tail_trapezoid(s.ut(), s.grid.dx);
  InvariantPair v{tail, tail};
  for (std::size_t i = 0; i < s.size(); ++i) {
    const double g = model.big_g(s.u[i]);
    v.first[i] -= g;
    v.second[i] += g;
  }
  return v;
}

/// Snapshot-level variants; whole-line integrals are meaningless once the
/// boundary has been contaminated.
inline InvariantPair riemann_w(const Trajectory& traj, std::size_t snapshot) {
  if (traj.diag.boundary_taint) throw Tainted("riemann_w: run is boundary-tainted");
  return riemann_w(traj.snapshots.at(snapshot), traj.model);
}

inline InvariantPair riemann_v(const Trajectory& traj, std::size_t snapshot) {
  if (traj.diag.boundary_taint) throw Tainted("riemann_v: run is boundary-tainted");
  return riemann_v(traj.snapshots.at(snapshot), traj.model);
}

/// |R|_p^p + |S|_p^p by the trapezoid rule.
inline double lp_norms(const State& s, double p) {
  if (!(p >= 1.0)) throw ConfigError("lp_norms: p must be >= 1");
  std::vector<double> f(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (p == 2.0) {
      f[i] = s.R[i] * s.R[i] + s.S[i] * s.S[i];
    } else {
      f[i] = std::pow(std::abs(s.R[i]), p) + std::pow(std::abs(s.S[i]), p);
    }
  }
  return trapezoid(f, s.grid.dx);
}

struct SignCheck {
  double max_R;
  double max_S;
};

inline SignCheck sign_check(const State& s) {
  return {*std::max_element(s.R.begin(), s.R.end()), *std::max_element(s.S.begin(), s.S.end())};
}

/// Exponent for which the Lp norm of (R, S) is non-increasing: max{2, 2/lambda}.
inline double monotone_lp_exponent(double lambda) { return lambda > 0.0 ? std::max(2.0, 2.0 / lambda) : 2.0; }

// ---------------------------------------------------------------------------
// Trajectory functionals
// ---------------------------------------------------------------------------

/// Reference point of F: initial data (F) or the state at time T (F~).
struct FReference {
  std::optional<double> time;
  static FReference initial_data() { return {}; }
  static FReference at_time(double t) { return {t}; }
};

struct FunctionalSeries {
  std::vector<double> t;
  std::vector<double> F;
  std::vector<double> F_prime;   // -int u_t dx, read from the state
  std::vector<double> residual;  // [F'(t) - F'(t0)] - mu int_{t0}^t int e~
};

/// F(t) = -int (u(t) - u_ref) dx and the once-integrated identity F'' = mu int e~.
inline FunctionalSeries functional_F(const Trajectory& traj, FReference ref = FReference::initial_data()) {
  const auto& d = traj.diag;
  if (d.boundary_taint) throw Tainted("functional_F: run is boundary-tainted");
  if (d.rows() == 0) throw MissingDiagnostics("functional_F: empty diagnostic series");
  std::size_t k0 = 0;
  if (ref.time) {
    while (k0 + 1 < d.rows() && d.t[k0] < *ref.time) ++k0;
  }
  const double mu = traj.config.mu();
  FunctionalSeries out;
  double e_int = 0.0;
  for (std::size_t k = k0; k < d.rows(); ++k) {
    if (k > k0) e_int += 0.5 * (d.t[k] - d.t[k - 1]) * (d.e_total[k] + d.e_total[k - 1]);
    out.t.push_back(d.t[k]);
    out.F.push_back(-(d.mass_u[k] - d.mass_u[k0]));
    out.F_prime.push_back(-d.mass_ut[k]);
    out.residual.push_back((-d.mass_ut[k] + d.mass_ut[k0]) - mu * e_int);
  }
  return out;
}

/// psi = 1 on |x| <= 1, 0 on |x| >= 2, quintic smoothstep in between (C^2).
struct CutoffSpec {
  double eps = 0.1;

  static double psi(double x) {
    const double r = std::abs(x) - 1.0;
    if (r <= 0.0) return 1.0;
    if (r >= 1.0) return 0.0;
    return 1.0 - r * r * r * (10.0 + r * (-15.0 + 6.0 * r));
  }
  static double psi_prime(double x) {
    const double r = std::abs(x) - 1.0;
    if (r <= 0.0 || r >= 1.0) return 0.0;
    const double s = -30.0 * r * r * (r - 1.0) * (r - 1.0);
    return x > 0 ? s : -s;
  }
  static double psi_second(double x) {
    const double r = std::abs(x) - 1.0;
    if (r <= 0.0 || r >= 1.0) return 0.0;
    return -60.0 * r * (2.0 * r - 1.0) * (r - 1.0);
  }

  double psi_eps(double x) const { return psi(eps * x); }
};

struct CutoffSeries {
  std::vector<double> t;
  std::vector<double> F_eps;
  std::vector<double> F_eps_prime;   // -int psi_eps u_t dx
  std::vector<double> g2_term;       // int_{t0}^t -eps^2 int psi''(eps x) G2(u) dx
  std::vector<double> energy_term;   // int_{t0}^t mu int psi_eps e~ dx
  std::vector<double> residual;
  double dominant = 0.0;             // largest magnitude among the three integrated terms
};

/// F_eps(t) = -int psi(eps x) u dx together with the once-integrated identity
///
///   F_eps'' = -eps^2 int psi''(eps x) G2(u) dx + mu int psi(eps x) e~ dx.
///
/// Time integrals use the trapezoid rule over snapshot times.
inline CutoffSeries cutoff_functional(const Trajectory& traj, const CutoffSpec& spec, const WaveSpeedModel& model) {
  if (!(spec.eps > 0.0)) throw ConfigError("cutoff: eps must be positive");
  if (traj.snapshots.size() < 2) throw MissingDiagnostics("cutoff_functional: needs at least two snapshots");
  const auto& g = traj.initial().grid;
  const double half = std::min(-g.x_min, g.x_min + g.dx * static_cast<double>(g.n));
  if (2.0 / spec.eps > half) throw SupportError("cutoff: support 2/eps exceeds the half-domain");

  std::vector<double> psi(g.n), psi2(g.n);
  for (std::size_t i = 0; i < g.n; ++i) {
    psi[i] = spec.psi_eps(g.x(i));
    psi2[i] = CutoffSpec::psi_second(spec.eps * g.x(i));
  }
  const double mu = traj.config.mu();
  CutoffSeries out;
  std::vector<double> rhs_g2, rhs_e;
  std::vector<double> buf(g.n);
  for (const auto& s : traj.snapshots) {
    out.t.push_back(s.t);
    for (std::size_t i = 0; i < g.n; ++i) buf[i] = psi[i] * s.u[i];
    out.F_eps.push_back(-trapezoid(buf, g.dx));
    for (std::size_t i = 0; i < g.n; ++i) buf[i] = psi[i] * 0.5 * (s.R[i] + s.S[i]);
    out.F_eps_prime.push_back(-trapezoid(buf, g.dx));
    // int psi'' = 0, so G2 is taken relative to its left-edge value; this
    // removes the quadrature bias of int psi'' without changing the identity.
    const double g2_ref = model.big_g2(s.u.front());
    for (std::size_t i = 0; i < g.n; ++i) buf[i] = psi2[i] * (model.big_g2(s.u[i]) - g2_ref);
    rhs_g2.push_back(-spec.eps * spec.eps * trapezoid(buf, g.dx));
    const auto e = etilde(s, model);
    for (std::size_t i = 0; i < g.n; ++i) buf[i] = psi[i] * e[i];
    rhs_e.push_back(mu * trapezoid(buf, g.dx));
  }
  out.g2_term = cumulative_trapezoid(out.t, rhs_g2);
  out.energy_term = cumulative_trapezoid(out.t, rhs_e);
  for (std::size_t k = 0; k < out.t.size(); ++k) {
    const double dF = out.F_eps_prime[k] - out.F_eps_prime[0];
    out.residual.push_back(dF - out.g2_term[k] - out.energy_term[k]);
    out.dominant = std::max({out.dominant, std::abs(dF), std::abs(out.g2_term[k]), std::abs(out.energy_term[k])});
  }
  return out;
}

/// Lower-bound quantity -int psi(x / (t + 1)) u1 dx on the grid of u1.
inline double cutoff_lower_bound(const DiscreteField& u1, double t) {
  std::vector<double> f(u1.size());
  for (std::size_t i = 0; i < u1.size(); ++i) f[i] = -CutoffSpec::psi(u1.grid.x(i) / (t + 1.0)) * u1[i];
  return trapezoid(f, u1.grid.dx);
}

}  // namespace qlwave
