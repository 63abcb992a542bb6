#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <vector>

#include "qlwave/diagnostics.hpp"
#include "qlwave/errors.hpp"
#include "qlwave/solver.hpp"
#include "qlwave/trajectory.hpp"

namespace qlwave {

struct RunOptions {
  bool keep_snapshots = true;
  std::vector<double> lp_exponents;  // empty: {1, 2, max(2, 2/lambda)}
};

inline std::vector<double> default_lp_exponents(double lambda) {
  std::vector<double> p{1.0, 2.0, monotone_lp_exponent(lambda)};
  std::sort(p.begin(), p.end());
  p.erase(std::unique(p.begin(), p.end()), p.end());
  return p;
}

namespace detail {

inline double min_c(const State& s, const WaveSpeedModel& model) {
  double m = std::numeric_limits<double>::infinity();
  for (double u : s.u) m = std::min(m, u >= WaveSpeedModel::kDomainFloor ? model.c(u) : 0.0);
  return m;
}

inline double max_abs_rs(const State& s) {
  double m = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i) m = std::max({m, std::abs(s.R[i]), std::abs(s.S[i])});
  return m;
}

// Flags changes above 1e-8 in the outermost 5% of nodes on either side.
class BoundaryMonitor {
 public:
  explicit BoundaryMonitor(const State& s) : width_(std::max<std::size_t>(1, (s.size() + 19) / 20)), ref_(s) {}

  bool contaminated(const State& s) const {
    const std::size_t n = s.size();
    for (std::size_t k = 0; k < width_; ++k) {
      for (std::size_t i : {k, n - 1 - k}) {
        if (std::abs(s.u[i] - ref_.u[i]) > kThreshold || std::abs(s.R[i] - ref_.R[i]) > kThreshold ||
            std::abs(s.S[i] - ref_.S[i]) > kThreshold) {
          return true;
        }
      }
    }
    return false;
  }

 private:
  static constexpr double kThreshold = 1e-8;
  std::size_t width_;
  State ref_;
};

inline void record(DiagnosticSeries& d, const State& s, const WaveSpeedModel& model, const std::vector<double>& ps,
                   double mass_u0) {
  d.t.push_back(s.t);
  d.min_c.push_back(min_c(s, model));
  const auto sc = sign_check(s);
  d.max_R.push_back(sc.max_R);
  d.max_S.push_back(sc.max_S);
  for (double p : ps) d.lp_RS[p].push_back(lp_norms(s, p));
  const double mu = trapezoid(s.u, s.grid.dx);
  d.mass_u.push_back(mu);
  d.mass_ut.push_back(trapezoid(s.ut(), s.grid.dx));
  d.e_total.push_back(trapezoid(etilde(s, model), s.grid.dx));
  d.F.push_back(-(mu - mass_u0));
}

inline std::size_t leftmost_argmin_c(const State& s, const WaveSpeedModel& model) {
  std::size_t best = 0;
  double m = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < s.size(); ++i) {
    const double c = s.u[i] >= WaveSpeedModel::kDomainFloor ? model.c(s.u[i]) : 0.0;
    if (c < m) {
      m = c;
      best = i;
    }
  }
  return best;
}

}  // namespace detail

/// Time-steps the Riemann-variable system until one of
///   min c(u) < eps_degeneracy            -> Degenerated
///   max(|R|,|S|) > factor * initial max  -> BlewUp
///   t >= t_max                           -> ReachedTmax
/// A non-finite state ends the run as SolverFault with the last valid state
/// kept as the final snapshot.
///
/// Steps that would push c(u) below eps/4 are retried with a halved dt, so a
/// Degenerated run always ends on a state with eps/4 <= min c < eps.
inline Trajectory integrate(State init, const WaveSpeedModel& model, const SolverConfig& cfg,
                            const RunOptions& opts = {}) {
  cfg.validate();
  init.validate();
  const auto ps = opts.lp_exponents.empty() ? default_lp_exponents(cfg.lambda) : opts.lp_exponents;
  Trajectory traj{model, cfg, {}, {}, {}, detail::max_abs_rs(init)};
  const double mass_u0 = trapezoid(init.u, init.grid.dx);
  const double guard = degeneracy_guard(cfg);
  const detail::BoundaryMonitor monitor(init);

  State state = std::move(init);
  detail::record(traj.diag, state, model, ps, mass_u0);
  traj.snapshots.push_back(state);
  traj.diag.snapshot_rows.push_back(0);

  auto& rep = traj.report;
  std::size_t steps = 0;
  const double t_end = cfg.t_max * (1.0 - 1e-14);
  while (true) {
    const double mc = traj.diag.min_c.back();
    if (mc < cfg.eps_degeneracy) {
      rep.reason = Termination::Degenerated;
      rep.location = state.grid.x(detail::leftmost_argmin_c(state, model));
      break;
    }
    if (detail::max_abs_rs(state) > cfg.blowup_factor * traj.initial_rs_max) {
      rep.reason = Termination::BlewUp;
      break;
    }
    if (state.t >= t_end) {
      rep.reason = Termination::ReachedTmax;
      break;
    }
    double dt = std::min(cfl_timestep(state, model, cfg), cfg.t_max - state.t);
    State next;
    bool accepted = false;
    try {
      for (int attempt = 0; attempt < 60 && !accepted; ++attempt, dt *= 0.5) {
        try {
          next = step(state, model, cfg, dt);
          accepted = detail::min_c(next, model) >= guard;
        } catch (const NearDegenerate&) {
        }
      }
      if (!accepted) throw SolverFault("time step collapsed near degeneracy at t = " + std::to_string(state.t));
    } catch (const SolverFault& e) {
      rep.reason = Termination::SolverFault;
      rep.message = e.what();
      break;
    }
    state = std::move(next);
    ++steps;
    detail::record(traj.diag, state, model, ps, mass_u0);
    if (!traj.diag.boundary_taint && monitor.contaminated(state)) traj.diag.boundary_taint = true;
    if (opts.keep_snapshots && steps % cfg.snapshot_stride == 0) {
      traj.snapshots.push_back(state);
      traj.diag.snapshot_rows.push_back(traj.diag.rows() - 1);
    }
  }
  if (traj.diag.snapshot_rows.back() != traj.diag.rows() - 1) {
    traj.snapshots.push_back(state);
    traj.diag.snapshot_rows.push_back(traj.diag.rows() - 1);
  }
  rep.t_final = state.t;
  rep.t_cross = state.t;
  const auto& d = traj.diag;
  if (rep.reason == Termination::Degenerated && d.rows() >= 2) {
    const std::size_t k = d.rows() - 1;
    const double drop = d.min_c[k - 1] - d.min_c[k];
    if (drop > 0.0) rep.t_cross = d.t[k - 1] + (d.t[k] - d.t[k - 1]) * (d.min_c[k - 1] - cfg.eps_degeneracy) / drop;
  }
  rep.steps = steps;
  rep.min_c_final = traj.diag.min_c.back();
  rep.max_RS_final = detail::max_abs_rs(state);
  return traj;
}

}  // namespace qlwave
