#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <string>
#include <thread>
#include <tuple>
#include <vector>

#include "qlwave/diagnostics.hpp"
#include "qlwave/errors.hpp"
#include "qlwave/initdata.hpp"
#include "qlwave/run.hpp"
#include "qlwave/scenario.hpp"

namespace qlwave {

struct RunResult {
  Scenario scenario;
  Trajectory trajectory;
  AdmissibilityReport admissibility;
  std::vector<std::string> warnings;
};

/// Checks the data, then integrates. Inadmissible data is refused unless the
/// scenario carries admissibility_waiver.
inline RunResult run(const Scenario& s, RunOptions opts = {}) {
  s.validate();
  const auto model = s.wave_speed.build();
  const auto data = build_initial_data(s);
  auto adm = check_admissibility(data.u0, data.u1, model, default_sign_tolerance(data.u1));
  if (!adm.admissible() && !s.admissibility_waiver) {
    std::string why = adm.u1_is_trivial ? "u1 vanishes identically"
                      : !(adm.c0 > 0.0) ? "c(u0) is not positive"
                                        : "u1 +- c(u0) u0' is not <= 0";
    throw ConfigError("initial data is not admissible (" + why + "); set admissibility_waiver to run it anyway");
  }
  std::vector<std::string> warnings;
  if (auto w = boundary_safety_warning(s, data, model)) warnings.push_back(*w);
  if (!adm.u1_l1_finite_proxy) warnings.push_back("u1 tail has not decayed at the grid edge; integrals are truncated");
  auto traj = integrate(initial_state(data, model), model, s.solver, opts);
  if (traj.diag.boundary_taint) warnings.push_back("boundary contamination detected; whole-line functionals disabled");
  return {s, std::move(traj), adm, std::move(warnings)};
}

// ---------------------------------------------------------------------------
// Sweeps
// ---------------------------------------------------------------------------

struct SweepRow {
  double lambda = 0.0;
  std::size_t N = 0;
  double eps_degeneracy = 0.0;
  std::optional<Termination> reason;  // empty when the row failed
  double t_final = std::numeric_limits<double>::quiet_NaN();
  double t_cross = std::numeric_limits<double>::quiet_NaN();
  std::optional<double> location;
  double min_c_final = std::numeric_limits<double>::quiet_NaN();
  std::string error;
};

struct SweepResult {
  std::vector<SweepRow> rows;
};

/// Runs f(0..count-1) on up to `threads` workers (0: hardware concurrency).
template <class F>
void parallel_for(std::size_t count, std::size_t threads, F&& f) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = std::min(threads, count);
  if (threads <= 1) {
    for (std::size_t i = 0; i < count; ++i) f(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < threads; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) f(i);
    });
  }
  for (auto& t : pool) t.join();
}

/// Every (lambda, N, eps) combination of the base scenario. Failures are
/// recorded per row. Rows are sorted by (lambda, N, eps).
inline SweepResult lambda_sweep(const Scenario& base, const std::vector<double>& lambdas,
                                const std::vector<std::size_t>& resolutions, std::vector<double> eps_values = {},
                                std::size_t threads = 0) {
  if (eps_values.empty()) eps_values.push_back(base.solver.eps_degeneracy);
  SweepResult out;
  for (double l : lambdas) {
    for (std::size_t n : resolutions) {
      for (double e : eps_values) {
        SweepRow row;
        row.lambda = l;
        row.N = n;
        row.eps_degeneracy = e;
        out.rows.push_back(row);
      }
    }
  }
  std::sort(out.rows.begin(), out.rows.end(), [](const SweepRow& a, const SweepRow& b) {
    return std::tie(a.lambda, a.N, a.eps_degeneracy) < std::tie(b.lambda, b.N, b.eps_degeneracy);
  });
  parallel_for(out.rows.size(), threads, [&](std::size_t i) {
    auto& row = out.rows[i];
    try {
      Scenario s = base;
      s.solver.lambda = row.lambda;
      s.solver.eps_degeneracy = row.eps_degeneracy;
      s.grid.N = row.N;
      const auto r = run(s, {false, {}});
      const auto& rep = r.trajectory.report;
      row.reason = rep.reason;
      row.t_final = rep.t_final;
      row.t_cross = rep.t_cross;
      row.location = rep.location;
      row.min_c_final = rep.min_c_final;
      if (rep.reason == Termination::SolverFault) row.error = rep.message;
    } catch (const std::exception& e) {
      row.error = e.what();
    }
  });
  return out;
}

// ---------------------------------------------------------------------------
// Threshold bisection at lambda = 2
// ---------------------------------------------------------------------------

struct ThresholdSample {
  double mass = 0.0;
  bool degenerated = false;
  Termination reason = Termination::ReachedTmax;
  double t_final = 0.0;
  double min_c = 0.0;  // minimum of c(u) over the whole run
};

struct ThresholdResult {
  double mass_star = 0.0;
  double lo = 0.0;
  double hi = 0.0;
  std::vector<ThresholdSample> history;
  bool monotone = true;  // every degenerating sample lies below every surviving one
};

inline ThresholdSample threshold_sample(const Scenario& s, double mass) {
  const auto r = run(with_mass(s, mass), {false, {}});
  const auto& d = r.trajectory.diag;
  const auto& rep = r.trajectory.report;
  if (rep.reason == Termination::SolverFault) throw SolverFault("threshold run at mass " + std::to_string(mass) +
                                                                ": " + rep.message);
  return {mass, rep.reason == Termination::Degenerated, rep.reason, rep.t_final,
          *std::min_element(d.min_c.begin(), d.min_c.end())};
}

/// Bisection on "degenerates before t_max" over the mass of u1.
inline ThresholdResult threshold_bisection(const Scenario& s, double mass_lo, double mass_hi, int iters) {
  if (s.solver.lambda != 2.0) throw ConfigError("threshold: lambda must be 2");
  if (!(mass_lo < mass_hi) || !(mass_hi < 0.0)) throw ConfigError("threshold: need mass_lo < mass_hi < 0");
  if (iters < 0) throw ConfigError("threshold: iters must be >= 0");
  ThresholdResult out;
  const auto lo = threshold_sample(s, mass_lo);
  const auto hi = threshold_sample(s, mass_hi);
  out.history = {lo, hi};
  if (!lo.degenerated || hi.degenerated) {
    throw BracketError("threshold: bracket does not straddle the threshold (lo " +
                       std::string(lo.degenerated ? "degenerates" : "survives") + ", hi " +
                       (hi.degenerated ? "degenerates" : "survives") + ")");
  }
  double a = mass_lo, b = mass_hi;
  for (int k = 0; k < iters; ++k) {
    const double m = 0.5 * (a + b);
    const auto smp = threshold_sample(s, m);
    out.history.push_back(smp);
    (smp.degenerated ? a : b) = m;
  }
  out.lo = a;
  out.hi = b;
  out.mass_star = 0.5 * (a + b);
  double worst_dead = -std::numeric_limits<double>::infinity();
  double best_alive = std::numeric_limits<double>::infinity();
  for (const auto& h : out.history) {
    if (h.degenerated) worst_dead = std::max(worst_dead, h.mass);
    else best_alive = std::min(best_alive, h.mass);
  }
  out.monotone = worst_dead < best_alive;
  return out;
}

// ---------------------------------------------------------------------------
// Convergence study
// ---------------------------------------------------------------------------

struct ConvergenceRow {
  std::size_t N = 0;
  Termination reason = Termination::ReachedTmax;
  double t_final = 0.0;
  double t_cross = 0.0;
};

struct ConvergenceResult {
  std::vector<ConvergenceRow> rows;
  std::vector<double> differences;  // t_cross(2N) - t_cross(N)
  std::vector<double> orders;       // log2(|d_N| / |d_2N|)
  double richardson = 0.0;          // extrapolated t_cross using the last observed order
};

/// Degeneracy time under grid doubling. Uses the interpolated crossing time,
/// which removes the O(dt) quantization of t_final.
inline ConvergenceResult convergence_study(const Scenario& s, std::vector<std::size_t> resolutions,
                                           std::size_t threads = 0) {
  if (resolutions.size() < 3) throw ConfigError("convergence: need at least three resolutions");
  std::sort(resolutions.begin(), resolutions.end());
  for (std::size_t k = 1; k < resolutions.size(); ++k) {
    if (resolutions[k] != 2 * resolutions[k - 1]) throw ConfigError("convergence: resolutions must double");
  }
  ConvergenceResult out;
  out.rows.resize(resolutions.size());
  std::vector<std::string> errors(resolutions.size());
  parallel_for(resolutions.size(), threads, [&](std::size_t k) {
    try {
      const auto r = run(with_resolution(s, resolutions[k]), {false, {}});
      const auto& rep = r.trajectory.report;
      if (rep.reason == Termination::SolverFault) throw SolverFault(rep.message);
      out.rows[k] = {resolutions[k], rep.reason, rep.t_final, rep.t_cross};
    } catch (const std::exception& e) {
      errors[k] = "N=" + std::to_string(resolutions[k]) + ": " + e.what();
    }
  });
  for (const auto& e : errors) {
    if (!e.empty()) throw SolverFault("convergence: " + e);
  }
  for (std::size_t k = 1; k < out.rows.size(); ++k) out.differences.push_back(out.rows[k].t_cross - out.rows[k - 1].t_cross);
  for (std::size_t k = 1; k < out.differences.size(); ++k) {
    const double num = std::abs(out.differences[k - 1]), den = std::abs(out.differences[k]);
    out.orders.push_back(num > 0.0 && den > 0.0 ? std::log2(num / den) : std::numeric_limits<double>::quiet_NaN());
  }
  const double p = out.orders.back();
  out.richardson = out.rows.back().t_cross;
  if (std::isfinite(p) && p > 0.0) out.richardson += out.differences.back() / (std::pow(2.0, p) - 1.0);
  return out;
}

// ---------------------------------------------------------------------------
// Cutoff study on truncated slowly decaying data
// ---------------------------------------------------------------------------

struct CutoffStudyRow {
  double half_width = 0.0;
  std::size_t N = 0;
  double t = 0.0;
  double lower_bound = 0.0;  // -int psi(x/(t+1)) u1 dx on the truncated grid
  bool support_inside = false;
  bool l1_proxy = false;
  double identity_residual = std::numeric_limits<double>::quiet_NaN();
  double identity_dominant = std::numeric_limits<double>::quiet_NaN();
};

/// For each half-width L the scenario is rerun on [-L, L] at the base spacing
/// and the cutoff identity is evaluated with eps = 2/L. The lower-bound
/// quantity is reported at each requested time; no verdict is attached.
inline std::vector<CutoffStudyRow> cutoff_study(const Scenario& base, const std::vector<double>& half_widths,
                                                const std::vector<double>& times) {
  const double dx = (base.grid.x_max - base.grid.x_min) / static_cast<double>(base.grid.N);
  std::vector<CutoffStudyRow> rows;
  for (double L : half_widths) {
    if (!(L > 0.0)) throw ConfigError("cutoff-study: half-widths must be positive");
    std::size_t n = kMinGridNodes;
    while (static_cast<double>(n) * dx < 2.0 * L * (1.0 - 1e-12) && n < kMaxGridNodes) n *= 2;
    Scenario s = base;
    s.grid = {-L, L, n};
    s.admissibility_waiver = true;
    s.solver.snapshot_stride = std::max<std::size_t>(1, static_cast<std::size_t>(std::floor(5.0 / s.solver.cfl)));
    const auto r = run(s);
    const auto data = build_initial_data(s);
    double residual = std::numeric_limits<double>::quiet_NaN(), dominant = residual;
    try {
      const auto cs = cutoff_functional(r.trajectory, CutoffSpec{2.0 / L}, r.trajectory.model);
      residual = 0.0;
      for (double v : cs.residual) residual = std::max(residual, std::abs(v));
      dominant = cs.dominant;
    } catch (const Error&) {
    }
    for (double t : times) {
      rows.push_back({L, n, t, cutoff_lower_bound(data.u1, t), 2.0 * (t + 1.0) <= L, r.admissibility.u1_l1_finite_proxy,
                      residual, dominant});
    }
  }
  return rows;
}

}  // namespace qlwave
