#pragma once

#include <bit>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "qlwave/characteristics.hpp"
#include "qlwave/diagnostics.hpp"
#include "qlwave/errors.hpp"
#include "qlwave/harness.hpp"
#include "qlwave/scenario.hpp"

namespace qlwave {

/// Name of the environment variable holding the default output directory.
inline constexpr const char* kOutDirEnv = "QLWAVE_OUT_DIR";

/// Output directory: explicit flag, then the config, then the environment,
/// then ./qlwave_out.
inline std::filesystem::path output_dir(const std::string& flag, const Scenario* s = nullptr) {
  if (!flag.empty()) return flag;
  if (s && !s->outputs.dir.empty()) return s->outputs.dir;
  if (const char* env = std::getenv(kOutDirEnv); env && *env) return env;
  return "qlwave_out";
}

/// Shortest round-trip decimal form; "nan" for missing values.
inline std::string fmt(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace detail {

inline std::ofstream open_out(const std::filesystem::path& p) {
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
  std::ofstream out(p, std::ios::binary);
  if (!out) throw Error("cannot write '" + p.string() + "'");
  return out;
}

inline json number_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

}  // namespace detail

// ---------------------------------------------------------------------------
// diagnostics.csv
// ---------------------------------------------------------------------------

inline constexpr const char* kDiagnosticsHeader = "t,min_c,max_R,max_S,l2_RS,lp_RS,mass_ut,e_total,F,F_resid";

/// One row per stored snapshot. lp_RS uses p = max(2, 2/lambda); F_resid is
/// the once-integrated F identity residual (nan when boundary-tainted).
inline void write_diagnostics_csv(std::ostream& out, const Trajectory& traj) {
  const auto& d = traj.diag;
  const double p = monotone_lp_exponent(traj.config.lambda);
  const auto nan = std::numeric_limits<double>::quiet_NaN();
  const auto l2 = d.lp_RS.find(2.0);
  const auto lp = d.lp_RS.find(p);
  std::vector<double> resid(d.rows(), nan);
  if (!d.boundary_taint) resid = functional_F(traj).residual;
  out << kDiagnosticsHeader << '\n';
  for (std::size_t k : d.snapshot_rows) {
    out << fmt(d.t[k]) << ',' << fmt(d.min_c[k]) << ',' << fmt(d.max_R[k]) << ',' << fmt(d.max_S[k]) << ','
        << fmt(l2 != d.lp_RS.end() ? l2->second[k] : nan) << ',' << fmt(lp != d.lp_RS.end() ? lp->second[k] : nan)
        << ',' << fmt(d.mass_ut[k]) << ',' << fmt(d.e_total[k]) << ',' << fmt(d.F[k]) << ',' << fmt(resid[k]) << '\n';
  }
}

inline void write_diagnostics_csv(const std::filesystem::path& path, const Trajectory& traj) {
  auto out = detail::open_out(path);
  write_diagnostics_csv(out, traj);
}

// ---------------------------------------------------------------------------
// summary.json
// ---------------------------------------------------------------------------

inline json to_json(const TerminationReport& r) {
  return {{"reason", to_string(r.reason)},
          {"t_final", r.t_final},
          {"t_cross", r.t_cross},
          {"location", r.location ? json(*r.location) : json(nullptr)},
          {"min_c_final", r.min_c_final},
          {"max_RS_final", r.max_RS_final},
          {"steps", r.steps},
          {"message", r.message}};
}

inline json to_json(const AdmissibilityReport& a, bool waived) {
  return {{"admissible", a.admissible()},
          {"waived", waived},
          {"c0", a.c0},
          {"sign_violation_plus", a.sign_violation_plus},
          {"sign_violation_minus", a.sign_violation_minus},
          {"tolerance", a.tolerance},
          {"u1_mass", a.u1_mass},
          {"u1_is_trivial", a.u1_is_trivial},
          {"u1_l1_finite_proxy", a.u1_l1_finite_proxy}};
}

/// Largest relative increase of a series between consecutive entries.
inline double max_relative_increase(const std::vector<double>& v) {
  double worst = 0.0;
  for (std::size_t k = 1; k < v.size(); ++k) {
    if (v[k - 1] > 0.0) worst = std::max(worst, (v[k] - v[k - 1]) / v[k - 1]);
  }
  return worst;
}

inline json summary_json(const RunResult& r, bool snapshots_written) {
  const auto& traj = r.trajectory;
  const auto& d = traj.diag;
  const std::size_t k = d.rows() - 1;
  json lp = json::object(), lp_growth = json::object();
  for (const auto& [p, series] : d.lp_RS) {
    lp[fmt(p)] = series[k];
    lp_growth[fmt(p)] = max_relative_increase(series);
  }
  double sign_max = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < d.rows(); ++i) sign_max = std::max({sign_max, d.max_R[i], d.max_S[i]});
  double min_c_run = std::numeric_limits<double>::infinity();
  for (double v : d.min_c) min_c_run = std::min(min_c_run, v);
  double f_resid = std::numeric_limits<double>::quiet_NaN();
  double f_prime0 = f_resid;
  if (!d.boundary_taint) {
    const auto fs = functional_F(traj);
    f_resid = fs.residual.back();
    f_prime0 = fs.F_prime.front();
  }
  return {{"schema_version", 1},
          {"termination", to_json(traj.report)},
          {"final_diagnostics",
           {{"t", d.t[k]},
            {"min_c", d.min_c[k]},
            {"max_R", d.max_R[k]},
            {"max_S", d.max_S[k]},
            {"lp_RS", lp},
            {"mass_ut", d.mass_ut[k]},
            {"e_total", d.e_total[k]},
            {"F", d.F[k]},
            {"F_resid", detail::number_or_null(f_resid)}}},
          {"checks",
           {{"max_R_S_over_run", sign_max},
            {"min_c_over_run", min_c_run},
            {"lp_max_relative_increase", lp_growth},
            {"F_prime_initial", detail::number_or_null(f_prime0)},
            {"boundary_taint", d.boundary_taint}}},
          {"admissibility", to_json(r.admissibility, r.scenario.admissibility_waiver)},
          {"scenario", to_json(r.scenario)},
          {"warnings", r.warnings},
          {"validation_notes", traj.model.validation_notes()},
          {"files",
           {{"diagnostics", "diagnostics.csv"},
            {"snapshots", snapshots_written ? json("snapshots.bin") : json(nullptr)},
            {"snapshots_header", snapshots_written ? json("snapshots.json") : json(nullptr)}}}};
}

// ---------------------------------------------------------------------------
// Snapshots: raw little-endian f64, row-major [snapshot][field u,R,S][node]
// ---------------------------------------------------------------------------

namespace detail {

inline void write_f64_le(std::ostream& out, const std::vector<double>& v) {
  if constexpr (std::endian::native == std::endian::little) {
    out.write(reinterpret_cast<const char*>(v.data()), static_cast<std::streamsize>(v.size() * sizeof(double)));
  } else {
    for (double x : v) {
      auto bits = std::bit_cast<std::uint64_t>(x);
      unsigned char b[8];
      for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>(bits >> (8 * i));
      out.write(reinterpret_cast<const char*>(b), 8);
    }
  }
}

inline std::vector<double> read_f64_le(std::istream& in, std::size_t n) {
  std::vector<unsigned char> raw(n * 8);
  in.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(raw.size()));
  if (static_cast<std::size_t>(in.gcount()) != raw.size()) throw Error("snapshot file is truncated");
  std::vector<double> v(n);
  for (std::size_t k = 0; k < n; ++k) {
    std::uint64_t bits = 0;
    for (int i = 7; i >= 0; --i) bits = (bits << 8) | raw[8 * k + static_cast<std::size_t>(i)];
    v[k] = std::bit_cast<double>(bits);
  }
  return v;
}

}  // namespace detail

inline void write_snapshots(const std::filesystem::path& dir, const Trajectory& traj, const Scenario& s) {
  {
    auto out = detail::open_out(dir / "snapshots.bin");
    for (const auto& st : traj.snapshots) {
      detail::write_f64_le(out, st.u);
      detail::write_f64_le(out, st.R);
      detail::write_f64_le(out, st.S);
    }
  }
  const auto& g = traj.initial().grid;
  json header = {{"format", "float64-le"},
                 {"layout", "row-major [snapshot][field][node]"},
                 {"fields", {"u", "R", "S"}},
                 {"count", traj.snapshots.size()},
                 {"n", g.n},
                 {"x0", g.x_min},
                 {"dx", g.dx},
                 {"times", traj.snapshot_times()},
                 {"lambda", traj.config.lambda},
                 {"eps_degeneracy", traj.config.eps_degeneracy},
                 {"wave_speed", to_json(s.wave_speed)},
                 {"boundary_taint", traj.diag.boundary_taint},
                 {"termination", to_json(traj.report)}};
  auto out = detail::open_out(dir / "snapshots.json");
  out << header.dump(2) << '\n';
}

/// Reloads snapshots written by write_snapshots. Scalar diagnostics are not
/// restored; the result supports tracing and snapshot-level functionals.
inline Trajectory read_snapshots(const std::filesystem::path& dir) {
  std::ifstream hin(dir / "snapshots.json");
  if (!hin) throw ConfigError("no snapshots.json in '" + dir.string() + "' (run with outputs.snapshots = true)");
  json h;
  try {
    h = json::parse(hin);
  } catch (const json::exception& e) {
    throw ConfigError("snapshots.json: " + std::string(e.what()));
  }
  const auto model = parse_wave_speed(h.at("wave_speed")).build();
  SolverConfig cfg;
  cfg.lambda = h.at("lambda").get<double>();
  cfg.eps_degeneracy = h.at("eps_degeneracy").get<double>();
  const GridSpec g{h.at("x0").get<double>(), h.at("dx").get<double>(), h.at("n").get<std::size_t>()};
  const auto times = h.at("times").get<std::vector<double>>();
  const std::size_t count = h.at("count").get<std::size_t>();
  if (times.size() != count) throw ConfigError("snapshots.json: times and count disagree");

  std::ifstream in(dir / "snapshots.bin", std::ios::binary);
  if (!in) throw ConfigError("cannot open snapshots.bin in '" + dir.string() + "'");
  Trajectory traj{model, cfg, {}, {}, {}, 0.0};
  for (std::size_t k = 0; k < count; ++k) {
    State s;
    s.t = times[k];
    s.grid = g;
    s.u = detail::read_f64_le(in, g.n);
    s.R = detail::read_f64_le(in, g.n);
    s.S = detail::read_f64_le(in, g.n);
    traj.snapshots.push_back(std::move(s));
  }
  traj.diag.boundary_taint = h.value("boundary_taint", false);
  if (h.contains("termination")) {
    const auto& t = h.at("termination");
    traj.report.reason = parse_termination(t.at("reason").get<std::string>());
    traj.report.t_final = t.at("t_final").get<double>();
  }
  return traj;
}

// ---------------------------------------------------------------------------
// Run outputs and tabular reports
// ---------------------------------------------------------------------------

inline void write_run_outputs(const std::filesystem::path& dir, const RunResult& r) {
  std::filesystem::create_directories(dir);
  write_diagnostics_csv(dir / "diagnostics.csv", r.trajectory);
  const bool snaps = r.scenario.outputs.snapshots;
  if (snaps) write_snapshots(dir, r.trajectory, r.scenario);
  auto out = detail::open_out(dir / "summary.json");
  out << summary_json(r, snaps).dump(2) << '\n';
}

inline constexpr const char* kSweepHeader = "lambda,N,eps_degeneracy,reason,t_final,t_cross,location,min_c_final,error";

inline void write_sweep_csv(std::ostream& out, const SweepResult& s) {
  out << kSweepHeader << '\n';
  for (const auto& r : s.rows) {
    std::string err = r.error;
    for (char& ch : err) {
      if (ch == ',' || ch == '\n') ch = ' ';
    }
    out << fmt(r.lambda) << ',' << r.N << ',' << fmt(r.eps_degeneracy) << ','
        << (r.reason ? to_string(*r.reason) : std::string("Error")) << ',' << fmt(r.t_final) << ','
        << fmt(r.t_cross) << ',' << (r.location ? fmt(*r.location) : std::string("")) << ',' << fmt(r.min_c_final)
        << ',' << err << '\n';
  }
}

/// Trace output: t, x, u and c interpolated on the path, and the transport
/// residual of the requested invariant.
inline void write_trace_csv(std::ostream& out, const Trajectory& traj, const CharacteristicPath& path,
                            const std::vector<double>& residual) {
  const detail::SpaceTimeField field(traj);
  out << "t,x,u_interp,c_interp,residual\n";
  for (std::size_t j = 0; j < path.times.size(); ++j) {
    const double u = field.u(path.times[j], path.positions[j]);
    out << fmt(path.times[j]) << ',' << fmt(path.positions[j]) << ',' << fmt(u) << ','
        << fmt(traj.model.c(std::max(u, WaveSpeedModel::kDomainFloor))) << ','
        << fmt(j < residual.size() ? residual[j] : std::numeric_limits<double>::quiet_NaN()) << '\n';
  }
}

}  // namespace qlwave
