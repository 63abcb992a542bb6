// Command-line front end for the qlwave library.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qlwave/qlwave.hpp"

namespace fs = std::filesystem;
using namespace qlwave;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitFault = 2;
constexpr int kExitInadmissible = 3;

int exit_code(Termination t) { return t == Termination::SolverFault ? kExitFault : kExitOk; }

void print_warnings(const std::vector<std::string>& w) {
  for (const auto& m : w) std::cerr << "warning: " << m << '\n';
}

int cmd_run(const std::string& config, const std::string& out_flag, bool snapshots) {
  auto s = load_scenario(config);
  if (snapshots) s.outputs.snapshots = true;
  const auto r = run(s);
  print_warnings(r.warnings);
  const auto dir = output_dir(out_flag, &s);
  write_run_outputs(dir, r);
  const auto& rep = r.trajectory.report;
  std::cout << "reason=" << to_string(rep.reason) << " t_final=" << fmt(rep.t_final);
  if (rep.location) std::cout << " location=" << fmt(*rep.location);
  std::cout << " min_c_final=" << fmt(rep.min_c_final) << " steps=" << rep.steps << " out=" << dir.string() << '\n';
  if (!rep.message.empty()) std::cerr << rep.message << '\n';
  return exit_code(rep.reason);
}

int cmd_sweep(const std::string& config, const std::vector<double>& lambdas, const std::vector<std::size_t>& ns,
              const std::vector<double>& eps, const std::string& out_flag, std::size_t threads) {
  const auto s = load_scenario(config);
  std::vector<std::size_t> res = ns.empty() ? std::vector<std::size_t>{s.grid.N} : ns;
  for (auto n : res) (void)with_resolution(s, n);
  const auto result = lambda_sweep(s, lambdas, res, eps, threads);
  const auto dir = output_dir(out_flag, &s);
  fs::create_directories(dir);
  std::ofstream f(dir / "sweep.csv");
  write_sweep_csv(f, result);
  write_sweep_csv(std::cout, result);
  for (const auto& r : result.rows) {
    if (r.reason == Termination::SolverFault) return kExitFault;
  }
  return kExitOk;
}

int cmd_threshold(const std::string& config, double lo, double hi, int iters, const std::string& out_flag) {
  const auto s = load_scenario(config);
  const auto r = threshold_bisection(s, lo, hi, iters);
  json hist = json::array();
  for (const auto& h : r.history) {
    hist.push_back({{"mass", h.mass},
                    {"degenerated", h.degenerated},
                    {"reason", to_string(h.reason)},
                    {"t_final", h.t_final},
                    {"min_c", h.min_c}});
  }
  const json out = {{"mass_star", r.mass_star}, {"bracket", {r.lo, r.hi}}, {"monotone", r.monotone}, {"history", hist}};
  const auto dir = output_dir(out_flag, &s);
  fs::create_directories(dir);
  std::ofstream(dir / "threshold.json") << out.dump(2) << '\n';
  std::cout << out.dump(2) << '\n';
  if (!r.monotone) std::cerr << "warning: degeneracy predicate was not monotone over the sampled masses\n";
  return kExitOk;
}

int cmd_trace(const std::string& traj_dir, double x0, double t0, const std::string& sign, const std::string& inv_name,
              const std::string& out_file) {
  const auto inv = parse_invariant(inv_name);
  const auto sgn = parse_char_sign(sign);
  const auto traj = read_snapshots(traj_dir);
  const auto path = trace(traj, x0, t0, sgn);
  std::vector<double> residual;
  if (carrier(inv) == sgn) {
    residual = transport_residual(traj, path, inv, traj.model, traj.config.mu());
  } else {
    std::cerr << "warning: " << inv_name << " is not carried by " << sign << " characteristics; residual omitted\n";
  }
  if (out_file.empty()) {
    write_trace_csv(std::cout, traj, path, residual);
  } else {
    std::ofstream f(out_file);
    if (!f) throw ConfigError("cannot write '" + out_file + "'");
    write_trace_csv(f, traj, path, residual);
  }
  return kExitOk;
}

int cmd_convergence(const std::string& config, const std::vector<std::size_t>& ns, std::size_t threads) {
  const auto s = load_scenario(config);
  const auto r = convergence_study(s, ns, threads);
  std::cout << "N,reason,t_final,t_cross,difference,order\n";
  for (std::size_t k = 0; k < r.rows.size(); ++k) {
    const auto& row = r.rows[k];
    std::cout << row.N << ',' << to_string(row.reason) << ',' << fmt(row.t_final) << ',' << fmt(row.t_cross) << ','
              << (k > 0 ? fmt(r.differences[k - 1]) : "") << ',' << (k > 1 ? fmt(r.orders[k - 2]) : "") << '\n';
  }
  std::cout << "richardson_t_cross," << fmt(r.richardson) << '\n';
  return kExitOk;
}

int cmd_check_data(const std::string& config) {
  const auto s = load_scenario(config);
  const auto model = s.wave_speed.build();
  const auto data = build_initial_data(s);
  const auto adm = check_admissibility(data.u0, data.u1, model, default_sign_tolerance(data.u1));
  json out = to_json(adm, s.admissibility_waiver);
  if (auto w = boundary_safety_warning(s, data, model)) out["boundary_safety"] = *w;
  out["validation_notes"] = model.validation_notes();
  std::cout << out.dump(2) << '\n';
  return adm.admissible() ? kExitOk : kExitInadmissible;
}

int cmd_cutoff_study(const std::string& config, const std::vector<double>& widths, const std::vector<double>& times,
                     const std::string& out_flag) {
  const auto s = load_scenario(config);
  const auto rows = cutoff_study(s, widths, times);
  const auto dir = output_dir(out_flag, &s);
  fs::create_directories(dir);
  std::ofstream f(dir / "cutoff_study.csv");
  for (std::ostream* o : {static_cast<std::ostream*>(&f), static_cast<std::ostream*>(&std::cout)}) {
    *o << "half_width,N,t,lower_bound,support_inside,u1_l1_finite_proxy,identity_residual,identity_dominant\n";
    for (const auto& r : rows) {
      *o << fmt(r.half_width) << ',' << r.N << ',' << fmt(r.t) << ',' << fmt(r.lower_bound) << ','
         << (r.support_inside ? 1 : 0) << ',' << (r.l1_proxy ? 1 : 0) << ',' << fmt(r.identity_residual) << ','
         << fmt(r.identity_dominant) << '\n';
    }
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Quasilinear wave equation: degeneracy experiments in Riemann variables"};
  app.require_subcommand(1);

  std::string config, out, traj, sign = "plus", invariant = "w2", trace_out;
  std::vector<double> lambdas, eps, widths{20, 40, 80}, times{0, 1, 2, 5};
  std::vector<std::size_t> resolutions;
  double lo = -2.0, hi = -0.5, x0 = 0.0, t0 = 0.0;
  int iters = 6;
  std::size_t threads = 0;
  bool snapshots = false;

  auto* run_cmd = app.add_subcommand("run", "integrate one scenario and write diagnostics.csv, summary.json");
  run_cmd->add_option("--config", config, "scenario JSON")->required();
  run_cmd->add_option("--out", out, std::string("output directory (default: config, then $") + kOutDirEnv + ")");
  run_cmd->add_flag("--snapshots", snapshots, "also write snapshots.bin and snapshots.json");

  auto* sweep_cmd = app.add_subcommand("sweep", "run every (lambda, N, eps) combination and write sweep.csv");
  sweep_cmd->add_option("--config", config, "base scenario JSON")->required();
  sweep_cmd->add_option("--lambdas", lambdas, "comma-separated lambda values")->delimiter(',');
  sweep_cmd->add_option("--resolutions", resolutions, "comma-separated grid sizes")->delimiter(',');
  sweep_cmd->add_option("--eps", eps, "comma-separated degeneracy thresholds")->delimiter(',');
  sweep_cmd->add_option("--out", out, "output directory");
  sweep_cmd->add_option("--threads", threads, "worker threads (0: all cores)");

  auto* thr_cmd = app.add_subcommand("threshold", "bisect the lambda = 2 degeneracy threshold in the mass of u1");
  thr_cmd->add_option("--config", config, "scenario JSON with lambda = 2")->required();
  thr_cmd->add_option("--lo", lo, "mass that degenerates")->required();
  thr_cmd->add_option("--hi", hi, "mass that survives")->required();
  thr_cmd->add_option("--iters", iters, "bisection steps")->required();
  thr_cmd->add_option("--out", out, "output directory");

  auto* trace_cmd = app.add_subcommand("trace", "trace a characteristic through stored snapshots");
  trace_cmd->add_option("--traj", traj, "directory holding snapshots.bin and snapshots.json")->required();
  trace_cmd->add_option("--x0", x0, "starting position")->required();
  trace_cmd->add_option("--t0", t0, "starting time");
  trace_cmd->add_option("--sign", sign, "plus or minus")->check(CLI::IsMember({"plus", "minus"}));
  trace_cmd->add_option("--invariant", invariant, "w1, w2, v1 or v2")->check(CLI::IsMember({"w1", "w2", "v1", "v2"}));
  trace_cmd->add_option("--out", trace_out, "CSV file (default: stdout)");

  auto* conv_cmd = app.add_subcommand("convergence", "degeneracy time under grid doubling");
  conv_cmd->add_option("--config", config, "scenario JSON")->required();
  conv_cmd->add_option("--resolutions", resolutions, "at least three doubling grid sizes")->delimiter(',')->required();
  conv_cmd->add_option("--threads", threads, "worker threads (0: all cores)");

  auto* check_cmd = app.add_subcommand("check-data", "report admissibility of the initial data");
  check_cmd->add_option("--config", config, "scenario JSON")->required();

  auto* cut_cmd = app.add_subcommand("cutoff-study", "cutoff lower bound over a ladder of domain sizes");
  cut_cmd->add_option("--config", config, "scenario JSON (slow_tail profile)")->required();
  cut_cmd->add_option("--half-widths", widths, "comma-separated half-widths L of [-L, L]")->delimiter(',');
  cut_cmd->add_option("--times", times, "comma-separated times t")->delimiter(',');
  cut_cmd->add_option("--out", out, "output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (*run_cmd) return cmd_run(config, out, snapshots);
    if (*sweep_cmd) return cmd_sweep(config, lambdas, resolutions, eps, out, threads);
    if (*thr_cmd) return cmd_threshold(config, lo, hi, iters, out);
    if (*trace_cmd) return cmd_trace(traj, x0, t0, sign, invariant, trace_out);
    if (*conv_cmd) return cmd_convergence(config, resolutions, threads);
    if (*check_cmd) return cmd_check_data(config);
    if (*cut_cmd) return cmd_cutoff_study(config, widths, times, out);
  } catch (const qlwave::SolverFault& e) {
    std::cerr << "solver fault: " << e.what() << '\n';
    return kExitFault;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfig;
  }
  return kExitOk;
}
