#pragma once

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "qlwave/errors.hpp"
#include "qlwave/initdata.hpp"
#include "qlwave/solver.hpp"
#include "qlwave/wavespeed.hpp"

namespace qlwave {

using json = nlohmann::json;

struct WaveSpeedSpec {
  std::string family = "power_law";
  double a = 1.0;
  std::vector<double> theta, c;

  WaveSpeedModel build() const {
    if (family == "power_law") return WaveSpeedModel::power_law(a);
    return WaveSpeedModel::tabulated(theta, c);
  }
};

struct ProfileSpec {
  ProfileKind kind = ProfileKind::Gaussian;
  ProfileParams params;
  std::optional<double> mass;  // rescale u1 to this integral
  std::string u0_csv, u1_csv;  // sources of custom tables, if read from disk
};

struct GridConfig {
  double x_min = -20.0;
  double x_max = 20.0;
  std::size_t N = 4096;

  GridSpec spec() const { return GridSpec::over(x_min, x_max, N); }
};

struct OutputConfig {
  std::string dir;
  bool snapshots = false;
};

/// One experiment: wave speed, data, lambda, grid, solver and output settings.
struct Scenario {
  std::string description;
  WaveSpeedSpec wave_speed;
  ProfileSpec profile;
  GridConfig grid;
  SolverConfig solver;  // solver.lambda holds the scenario lambda
  OutputConfig outputs;
  bool admissibility_waiver = false;

  double lambda() const { return solver.lambda; }
  void validate() const;
};

inline constexpr std::size_t kMinGridNodes = std::size_t{1} << 6;
inline constexpr std::size_t kMaxGridNodes = std::size_t{1} << 20;

inline bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

inline void Scenario::validate() const {
  if (!is_power_of_two(grid.N) || grid.N < kMinGridNodes || grid.N > kMaxGridNodes) {
    throw ConfigError("grid.N must be a power of two in [64, 1048576], got " + std::to_string(grid.N));
  }
  if (!(grid.x_max > grid.x_min) || !std::isfinite(grid.x_min) || !std::isfinite(grid.x_max)) {
    throw ConfigError("grid: need finite x_min < x_max");
  }
  solver.validate();
  // Characteristics are traced between snapshots, which must stay within
  // five cells of each other: c dt_snap <= stride * cfl * dx.
  if (static_cast<double>(solver.snapshot_stride) * solver.cfl > 5.0) {
    throw ConfigError("solver.snapshot_stride * solver.cfl must not exceed 5");
  }
}

namespace detail {

class JsonReader {
 public:
  JsonReader(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) throw ConfigError(where() + ": expected an object");
  }

  std::string where(const std::string& key = "") const {
    if (key.empty()) return path_.empty() ? std::string("config") : path_;
    return "field '" + (path_.empty() ? key : path_ + "." + key) + "'";
  }

  bool has(const std::string& key) const {
    seen_.insert(key);
    return j_.contains(key);
  }

  const json& raw(const std::string& key) const {
    seen_.insert(key);
    return j_.at(key);
  }

  double number(const std::string& key, double fallback) const {
    if (!has(key)) return fallback;
    const auto& v = j_.at(key);
    if (!v.is_number()) throw ConfigError(where(key) + ": expected a number");
    return v.get<double>();
  }

  std::size_t count(const std::string& key, std::size_t fallback) const {
    if (!has(key)) return fallback;
    const auto& v = j_.at(key);
    if (!v.is_number_integer() || v.get<long long>() < 0) {
      throw ConfigError(where(key) + ": expected a non-negative integer");
    }
    return v.get<std::size_t>();
  }

  bool flag(const std::string& key, bool fallback) const {
    if (!has(key)) return fallback;
    const auto& v = j_.at(key);
    if (!v.is_boolean()) throw ConfigError(where(key) + ": expected true or false");
    return v.get<bool>();
  }

  std::string text(const std::string& key, const std::string& fallback) const {
    if (!has(key)) return fallback;
    const auto& v = j_.at(key);
    if (!v.is_string()) throw ConfigError(where(key) + ": expected a string");
    return v.get<std::string>();
  }

  std::vector<double> numbers(const std::string& key) const {
    if (!has(key)) return {};
    const auto& v = j_.at(key);
    if (!v.is_array()) throw ConfigError(where(key) + ": expected an array of numbers");
    std::vector<double> out;
    for (const auto& e : v) {
      if (!e.is_number()) throw ConfigError(where(key) + ": expected an array of numbers");
      out.push_back(e.get<double>());
    }
    return out;
  }

  JsonReader child(const std::string& key) const { return JsonReader(raw(key), path_.empty() ? key : path_ + "." + key); }

  void reject_unknown() const {
    for (auto it = j_.begin(); it != j_.end(); ++it) {
      if (!seen_.count(it.key())) throw ConfigError(where(it.key()) + ": unknown key");
    }
  }

 private:
  const json& j_;
  std::string path_;
  mutable std::set<std::string> seen_;
};

inline Table read_table(const JsonReader& r, const std::string& key) {
  const auto t = r.child(key);
  Table out{t.numbers("x"), t.numbers("value")};
  t.reject_unknown();
  if (out.x.size() != out.value.size() || out.x.size() < 2) {
    throw ConfigError(r.where(key) + ": x and value must have equal length >= 2");
  }
  return out;
}

inline std::string resolve(const std::filesystem::path& base, const std::string& p) {
  const std::filesystem::path q(p);
  return (q.is_absolute() || base.empty()) ? q.string() : (base / q).string();
}

}  // namespace detail

inline WaveSpeedSpec parse_wave_speed(const json& j, const std::string& path = "wave_speed") {
  const detail::JsonReader r(j, path);
  WaveSpeedSpec w;
  w.family = r.text("family", "power_law");
  if (w.family == "power_law") {
    w.a = r.number("a", 1.0);
  } else if (w.family == "tabulated") {
    w.theta = r.numbers("theta");
    w.c = r.numbers("c");
  } else {
    throw ConfigError(r.where("family") + ": expected 'power_law' or 'tabulated', got '" + w.family + "'");
  }
  r.reject_unknown();
  try {
    (void)w.build();
  } catch (const Error& e) {
    throw ConfigError(r.where() + ": " + e.what());
  }
  return w;
}

inline json to_json(const WaveSpeedSpec& w) {
  if (w.family == "power_law") return {{"family", "power_law"}, {"a", w.a}};
  return {{"family", "tabulated"}, {"theta", w.theta}, {"c", w.c}};
}

/// Parses a scenario document. Relative table paths resolve against base_dir.
inline Scenario parse_scenario(const json& doc, const std::filesystem::path& base_dir = {}) {
  const detail::JsonReader root(doc, "");
  Scenario s;
  s.description = root.text("description", "");

  if (!root.has("wave_speed")) throw ConfigError("field 'wave_speed': missing");
  s.wave_speed = parse_wave_speed(root.raw("wave_speed"));

  if (!root.has("profile")) throw ConfigError("field 'profile': missing");
  {
    const auto p = root.child("profile");
    s.profile.kind = parse_profile_kind(p.text("profile", "gaussian"));
    auto& q = s.profile.params;
    q.A = p.number("A", q.A);
    q.u0_amp = p.number("u0_amp", q.u0_amp);
    q.support = p.number("support", q.support);
    q.beta = p.number("beta", q.beta);
    if (p.has("mass")) s.profile.mass = p.number("mass", 0.0);
    if (p.has("u0_table")) q.u0_table = detail::read_table(p, "u0_table");
    if (p.has("u1_table")) q.u1_table = detail::read_table(p, "u1_table");
    s.profile.u0_csv = p.text("u0_csv", "");
    s.profile.u1_csv = p.text("u1_csv", "");
    if (!s.profile.u0_csv.empty()) q.u0_table = load_table_csv(detail::resolve(base_dir, s.profile.u0_csv));
    if (!s.profile.u1_csv.empty()) q.u1_table = load_table_csv(detail::resolve(base_dir, s.profile.u1_csv));
    p.reject_unknown();
  }

  s.solver.lambda = root.number("lambda", s.solver.lambda);

  if (root.has("grid")) {
    const auto g = root.child("grid");
    s.grid.x_min = g.number("x_min", s.grid.x_min);
    s.grid.x_max = g.number("x_max", s.grid.x_max);
    s.grid.N = g.count("N", s.grid.N);
    g.reject_unknown();
  }

  if (root.has("solver")) {
    const auto v = root.child("solver");
    auto& c = s.solver;
    c.cfl = v.number("cfl", c.cfl);
    c.eps_degeneracy = v.number("eps_degeneracy", c.eps_degeneracy);
    c.blowup_factor = v.number("blowup_factor", c.blowup_factor);
    c.t_max = v.number("t_max", c.t_max);
    c.snapshot_stride = v.count("snapshot_stride", c.snapshot_stride);
    const auto b = v.text("boundary", "outflow");
    if (b != "outflow") throw ConfigError(v.where("boundary") + ": only 'outflow' is supported");
    v.reject_unknown();
  }

  if (root.has("outputs")) {
    const auto o = root.child("outputs");
    s.outputs.dir = o.text("dir", "");
    s.outputs.snapshots = o.flag("snapshots", false);
    o.reject_unknown();
  }

  s.admissibility_waiver = root.flag("admissibility_waiver", false);
  root.reject_unknown();
  s.validate();
  return s;
}

/// Parses JSON text; syntax errors carry line and column.
inline Scenario parse_scenario_text(const std::string& text, const std::filesystem::path& base_dir = {}) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i + 1 < e.byte && i < text.size(); ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw ConfigError("config syntax error at line " + std::to_string(line) + ", column " + std::to_string(col) +
                      ": " + e.what());
  }
  return parse_scenario(doc, base_dir);
}

inline Scenario load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config '" + path.string() + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  try {
    return parse_scenario_text(ss.str(), path.parent_path());
  } catch (const ConfigError& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

inline json to_json(const Scenario& s) {
  const auto& q = s.profile.params;
  json profile = {{"profile", to_string(s.profile.kind)}, {"A", q.A}, {"u0_amp", q.u0_amp}};
  if (s.profile.kind == ProfileKind::BumpCompact) profile["support"] = q.support;
  if (s.profile.kind == ProfileKind::SlowTail) profile["beta"] = q.beta;
  if (s.profile.mass) profile["mass"] = *s.profile.mass;
  if (s.profile.kind == ProfileKind::CustomTable) {
    if (!q.u0_table.empty()) profile["u0_table"] = {{"x", q.u0_table.x}, {"value", q.u0_table.value}};
    if (!q.u1_table.empty()) profile["u1_table"] = {{"x", q.u1_table.x}, {"value", q.u1_table.value}};
  }
  const auto& c = s.solver;
  return {{"description", s.description},
          {"wave_speed", to_json(s.wave_speed)},
          {"profile", profile},
          {"lambda", c.lambda},
          {"grid", {{"x_min", s.grid.x_min}, {"x_max", s.grid.x_max}, {"N", s.grid.N}}},
          {"solver",
           {{"cfl", c.cfl},
            {"eps_degeneracy", c.eps_degeneracy},
            {"blowup_factor", c.blowup_factor},
            {"t_max", c.t_max},
            {"snapshot_stride", c.snapshot_stride},
            {"boundary", "outflow"}}},
          {"outputs", {{"dir", s.outputs.dir}, {"snapshots", s.outputs.snapshots}}},
          {"admissibility_waiver", s.admissibility_waiver}};
}

/// Initial data on the scenario grid, rescaled to the requested u1 mass.
inline InitialData build_initial_data(const Scenario& s) {
  auto data = make_profile(s.profile.kind, s.profile.params, s.grid.spec());
  if (s.profile.mass) data.u1 = scale_to_mass(data.u1, *s.profile.mass);
  return data;
}

/// Scenario with the data rescaled so that int u1 = mass.
inline Scenario with_mass(Scenario s, double mass) {
  s.profile.mass = mass;
  return s;
}

/// Same domain at a new resolution.
inline Scenario with_resolution(Scenario s, std::size_t n) {
  s.grid.N = n;
  s.validate();
  return s;
}

/// Boundary-safety rule: the grid must hold the data support plus the
/// distance travelled at the initial top speed during [0, t_max] on both
/// sides. Returns a message when the rule is violated.
inline std::optional<std::string> boundary_safety_warning(const Scenario& s, const InitialData& d,
                                                          const WaveSpeedModel& model) {
  const auto& g = d.u0.grid;
  double c_sup = 0.0;
  for (double u : d.u0.values) c_sup = std::max(c_sup, model.c(u));
  const double level = 1e-10 * (1.0 + std::max(sup_norm(d.u0.values), sup_norm(d.u1.values)));
  std::size_t lo = g.n, hi = 0;
  for (std::size_t i = 0; i < g.n; ++i) {
    if (std::abs(d.u0[i] - d.u0.values.front()) > level || std::abs(d.u1[i] - d.u1.values.front()) > level) {
      lo = std::min(lo, i);
      hi = std::max(hi, i);
    }
  }
  const double support = lo <= hi && lo < g.n ? g.x(hi) - g.x(lo) : 0.0;
  const double width = s.grid.x_max - s.grid.x_min;
  const double need = 2.0 * s.solver.t_max * c_sup + support;
  if (width >= need) return std::nullopt;
  std::ostringstream os;
  os << "boundary safety: grid width " << width << " is below 2 t_max c_sup + support = " << need
     << "; boundary contamination is monitored at run time";
  return os.str();
}

}  // namespace qlwave
