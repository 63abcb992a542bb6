#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "qlwave/solver.hpp"
#include "qlwave/wavespeed.hpp"

namespace qlwave {

enum class Termination { Degenerated, BlewUp, ReachedTmax, SolverFault };

inline std::string to_string(Termination t) {
  switch (t) {
    case Termination::Degenerated: return "Degenerated";
    case Termination::BlewUp: return "BlewUp";
    case Termination::ReachedTmax: return "ReachedTmax";
    case Termination::SolverFault: return "SolverFault";
  }
  return "Unknown";
}

inline Termination parse_termination(const std::string& s) {
  if (s == "Degenerated") return Termination::Degenerated;
  if (s == "BlewUp") return Termination::BlewUp;
  if (s == "ReachedTmax") return Termination::ReachedTmax;
  if (s == "SolverFault") return Termination::SolverFault;
  throw ConfigError("unknown termination reason '" + s + "'");
}

struct TerminationReport {
  Termination reason = Termination::ReachedTmax;
  double t_final = 0.0;
  double t_cross = 0.0;            // eps crossing of min c, linear between the last two steps
  std::optional<double> location;  // leftmost argmin of c(u) when Degenerated
  double min_c_final = 0.0;
  double max_RS_final = 0.0;
  std::size_t steps = 0;
  std::string message;
};

/// Scalar diagnostics recorded after every accepted step (row 0 is t = 0).
struct DiagnosticSeries {
  std::vector<double> t;
  std::vector<double> min_c;
  std::vector<double> max_R;
  std::vector<double> max_S;
  std::map<double, std::vector<double>> lp_RS;  // p -> |R|_p^p + |S|_p^p
  std::vector<double> mass_ut;                  // int u_t dx
  std::vector<double> mass_u;                   // int u dx
  std::vector<double> e_total;                  // int e~ dx
  std::vector<double> F;                        // -int (u - u0) dx
  std::vector<std::size_t> snapshot_rows;       // row index of each stored snapshot
  bool boundary_taint = false;

  std::size_t rows() const { return t.size(); }
};

/// Output of a solver run.
struct Trajectory {
  WaveSpeedModel model;
  SolverConfig config;
  std::vector<State> snapshots;  // first is t = 0, last is the final state
  DiagnosticSeries diag;
  TerminationReport report;
  double initial_rs_max = 0.0;

  const State& initial() const { return snapshots.front(); }
  const State& final_state() const { return snapshots.back(); }

  std::vector<double> snapshot_times() const {
    std::vector<double> t;
    t.reserve(snapshots.size());
    for (const auto& s : snapshots) t.push_back(s.t);
    return t;
  }
};

}  // namespace qlwave
