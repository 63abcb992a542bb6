#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <string>
#include <vector>

#include "qlwave/errors.hpp"
#include "qlwave/grid.hpp"
#include "qlwave/initdata.hpp"
#include "qlwave/wavespeed.hpp"

namespace qlwave {

/// Solver snapshot in Riemann variables R = u_t + c(u) u_x, S = u_t - c(u) u_x.
struct State {
  double t = 0.0;
  GridSpec grid;
  std::vector<double> u, R, S;

  std::size_t size() const { return u.size(); }

  /// u_t = (R + S) / 2 at every node.
  std::vector<double> ut() const {
    std::vector<double> out(u.size());
    for (std::size_t i = 0; i < u.size(); ++i) out[i] = 0.5 * (R[i] + S[i]);
    return out;
  }

  void validate() const {
    if (u.size() != grid.n || R.size() != grid.n || S.size() != grid.n) {
      throw GridMismatch("state arrays do not match the grid");
    }
  }

  bool all_finite() const {
    for (std::size_t i = 0; i < u.size(); ++i) {
      if (!std::isfinite(u[i]) || !std::isfinite(R[i]) || !std::isfinite(S[i])) return false;
    }
    return true;
  }
};

enum class Boundary { Outflow };

struct SolverConfig {
  double lambda = 1.0;
  double cfl = 0.45;
  double eps_degeneracy = 0.02;
  double blowup_factor = 20.0;
  double t_max = 50.0;
  std::size_t snapshot_stride = 1;
  Boundary boundary = Boundary::Outflow;

  double mu() const { return 2.0 - lambda; }

  void validate() const {
    if (!(lambda >= 0.0 && lambda <= 2.0)) {
      throw ConfigError("lambda must lie in [0, 2], got " + std::to_string(lambda));
    }
    if (!(cfl > 0.0 && cfl < 1.0)) throw ConfigError("solver.cfl must lie in (0, 1)");
    if (!(eps_degeneracy > 0.0)) throw ConfigError("solver.eps_degeneracy must be positive");
    if (!(blowup_factor > 1.0)) throw ConfigError("solver.blowup_factor must exceed 1");
    if (!(t_max > 0.0) || !std::isfinite(t_max)) throw ConfigError("solver.t_max must be positive");
    if (snapshot_stride < 1) throw ConfigError("solver.snapshot_stride must be >= 1");
  }
};

/// Builds (u, R, S) at t = 0 from (u0, u1); u0' by centered differences.
inline State initial_state(const InitialData& data, const WaveSpeedModel& model) {
  require_same_grid(data.u0.grid, data.u1.grid, "initial_state");
  const auto& g = data.u0.grid;
  State s;
  s.grid = g;
  s.u = data.u0.values;
  s.R.resize(g.n);
  s.S.resize(g.n);
  const auto u0x = centered_derivative(data.u0.values, g.dx);
  for (std::size_t i = 0; i < g.n; ++i) {
    const double cu = model.c(s.u[i]);
    s.R[i] = data.u1[i] + cu * u0x[i];
    s.S[i] = data.u1[i] - cu * u0x[i];
  }
  return s;
}

struct SpatialFields {
  std::vector<double> ux;
  std::vector<double> cu;
};

/// u_x reconstructed algebraically as (R - S) / (2 c(u)).
///
/// Throws NearDegenerate when min c(u) < guard (or u has dropped below -1),
/// so the division never overflows into a fault.
inline SpatialFields derive_spatial(const State& s, const WaveSpeedModel& model, double guard) {
  SpatialFields f;
  f.ux.resize(s.size());
  f.cu.resize(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (!(s.u[i] >= WaveSpeedModel::kDomainFloor)) {
      throw NearDegenerate("u dropped below -1 at x = " + std::to_string(s.grid.x(i)));
    }
    const double c = model.c(s.u[i]);
    if (c < guard) throw NearDegenerate("c(u) = " + std::to_string(c) + " below guard at x = " + std::to_string(s.grid.x(i)));
    f.cu[i] = c;
    f.ux[i] = (s.R[i] - s.S[i]) / (2.0 * c);
  }
  return f;
}

inline double degeneracy_guard(const SolverConfig& cfg) { return 0.25 * cfg.eps_degeneracy; }

struct Rates {
  std::vector<double> du, dR, dS;
};

/// Source terms of the Riemann-variable system at one node.
struct Sources {
  double R;
  double S;
};

inline Sources riemann_sources(double R, double S, double c, double cp, double lambda) {
  const double k2 = cp / (2.0 * c);
  const double k4 = lambda * cp / (4.0 * c);
  const double d = R - S;
  return {k2 * (R * S - S * S) + k4 * d * d, k2 * (S * R - R * R) + k4 * d * d};
}

/// Semi-discrete right-hand side.
///
///   R_t = c_{i+1/2} D+ R + src_R   (R travels left, forward-biased stencil)
///   S_t = -c_{i-1/2} D- S + src_S  (S travels right, backward-biased stencil)
///   u_t = (R + S) / 2
///
/// with face speeds c_{i+-1/2} = (c_i + c_{i+-1}) / 2, so that summing the
/// transport terms by parts gives centered differences of c.
///
/// Edge nodes lacking an upwind neighbour get zero transport; the outflow
/// copy after each stage overwrites them anyway.
inline Rates rhs(const State& s, const WaveSpeedModel& model, const SolverConfig& cfg) {
  const auto f = derive_spatial(s, model, degeneracy_guard(cfg));
  const std::size_t n = s.size();
  const double inv_dx = 1.0 / s.grid.dx;
  Rates r{std::vector<double>(n), std::vector<double>(n), std::vector<double>(n)};
  for (std::size_t i = 0; i < n; ++i) {
    const double c = f.cu[i];
    const double cp = model.c_prime(s.u[i]);
    const auto src = riemann_sources(s.R[i], s.S[i], c, cp, cfg.lambda);
    const double fluxR = i + 1 < n ? 0.5 * (c + f.cu[i + 1]) * (s.R[i + 1] - s.R[i]) * inv_dx : 0.0;
    const double fluxS = i > 0 ? 0.5 * (c + f.cu[i - 1]) * (s.S[i] - s.S[i - 1]) * inv_dx : 0.0;
    r.du[i] = 0.5 * (s.R[i] + s.S[i]);
    r.dR[i] = fluxR + src.R;
    r.dS[i] = -fluxS + src.S;
    if (!std::isfinite(r.du[i]) || !std::isfinite(r.dR[i]) || !std::isfinite(r.dS[i])) {
      throw SolverFault("non-finite right-hand side at x = " + std::to_string(s.grid.x(i)));
    }
  }
  return r;
}

inline void apply_outflow(State& s) {
  const std::size_t n = s.size();
  for (auto* v : {&s.u, &s.R, &s.S}) {
    (*v)[0] = (*v)[1];
    (*v)[n - 1] = (*v)[n - 2];
  }
}

inline double max_speed(const State& s, const WaveSpeedModel& model) {
  double m = 0.0;
  for (double u : s.u) m = std::max(m, model.c(u));
  return m;
}

/// dt = cfl dx / max c(u).
inline double cfl_timestep(const State& s, const WaveSpeedModel& model, const SolverConfig& cfg) {
  return cfg.cfl * s.grid.dx / max_speed(s, model);
}

/// One Heun (SSP-RK2) step of size dt.
inline State step(const State& s, const WaveSpeedModel& model, const SolverConfig& cfg, double dt) {
  const Rates k1 = rhs(s, model, cfg);
  State mid = s;
  for (std::size_t i = 0; i < s.size(); ++i) {
    mid.u[i] += dt * k1.du[i];
    mid.R[i] += dt * k1.dR[i];
    mid.S[i] += dt * k1.dS[i];
  }
  apply_outflow(mid);
  const Rates k2 = rhs(mid, model, cfg);
  State next = s;
  next.t = s.t + dt;
  for (std::size_t i = 0; i < s.size(); ++i) {
    next.u[i] += 0.5 * dt * (k1.du[i] + k2.du[i]);
    next.R[i] += 0.5 * dt * (k1.dR[i] + k2.dR[i]);
    next.S[i] += 0.5 * dt * (k1.dS[i] + k2.dS[i]);
  }
  apply_outflow(next);
  if (!next.all_finite()) throw SolverFault("non-finite state after step at t = " + std::to_string(next.t));
  for (double u : next.u) {
    if (!(u >= WaveSpeedModel::kDomainFloor)) {
      throw NearDegenerate("step overshot u = -1 at t = " + std::to_string(next.t));
    }
  }
  return next;
}

/// One step with the CFL time step.
inline State step(const State& s, const WaveSpeedModel& model, const SolverConfig& cfg) {
  return step(s, model, cfg, cfl_timestep(s, model, cfg));
}

}  // namespace qlwave
