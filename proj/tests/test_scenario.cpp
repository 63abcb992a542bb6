#include <string>

#include <gtest/gtest.h>

#include "qlwave/scenario.hpp"

using namespace qlwave;

namespace {

const char* kCanonical = R"({
  "wave_speed": {"family": "power_law", "a": 1.0},
  "profile": {"profile": "gaussian", "A": 1.0, "u0_amp": 0.0},
  "lambda": 1.0,
  "grid": {"x_min": -20, "x_max": 20, "N": 4096},
  "solver": {"cfl": 0.45, "eps_degeneracy": 0.02, "t_max": 50}
})";

std::string error_of(const std::string& text) {
  try {
    parse_scenario_text(text);
  } catch (const ConfigError& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST(Scenario, ParsesCanonical) {
  const auto s = parse_scenario_text(kCanonical);
  EXPECT_EQ(s.wave_speed.family, "power_law");
  EXPECT_EQ(s.profile.kind, ProfileKind::Gaussian);
  EXPECT_EQ(s.grid.N, 4096u);
  EXPECT_DOUBLE_EQ(s.lambda(), 1.0);
  EXPECT_DOUBLE_EQ(s.solver.t_max, 50.0);
  EXPECT_FALSE(s.admissibility_waiver);
  EXPECT_FALSE(s.profile.mass.has_value());
}

TEST(Scenario, RoundTripsThroughJson) {
  const auto s = parse_scenario_text(kCanonical);
  const auto again = parse_scenario(to_json(s));
  EXPECT_EQ(to_json(again), to_json(s));
}

TEST(Scenario, LambdaBoundNamed) {
  const auto msg = error_of(R"({"wave_speed": {"a": 1}, "profile": {"profile": "gaussian"}, "lambda": 3})");
  EXPECT_NE(msg.find("[0, 2]"), std::string::npos) << msg;
}

TEST(Scenario, GridMustBePowerOfTwo) {
  EXPECT_NE(error_of(R"({"wave_speed": {"a": 1}, "profile": {}, "grid": {"N": 100}})").find("power of two"),
            std::string::npos);
  EXPECT_FALSE(error_of(R"({"wave_speed": {"a": 1}, "profile": {}, "grid": {"N": 32}})").empty());
  EXPECT_FALSE(error_of(R"({"wave_speed": {"a": 1}, "profile": {}, "grid": {"N": 2097152}})").empty());
  EXPECT_TRUE(error_of(R"({"wave_speed": {"a": 1}, "profile": {}, "grid": {"N": 64}})").empty());
}

TEST(Scenario, FieldContextInErrors) {
  auto msg = error_of(R"({"wave_speed": {"a": 1}, "profile": {"A": "big"}})");
  EXPECT_NE(msg.find("profile.A"), std::string::npos) << msg;
  msg = error_of(R"({"wave_speed": {"a": 1}, "profile": {}, "solver": {"cfll": 0.4}})");
  EXPECT_NE(msg.find("solver.cfll"), std::string::npos) << msg;
  msg = error_of(R"({"wave_speed": {"family": "cubic"}, "profile": {}})");
  EXPECT_NE(msg.find("wave_speed.family"), std::string::npos) << msg;
  msg = error_of(R"({"wave_speed": {"a": -1}, "profile": {}})");
  EXPECT_NE(msg.find("wave_speed"), std::string::npos) << msg;
  msg = error_of(R"({"profile": {}})");
  EXPECT_NE(msg.find("wave_speed"), std::string::npos) << msg;
}

TEST(Scenario, SyntaxErrorsCarryLine) {
  const auto msg = error_of("{\n  \"wave_speed\": {\"a\": 1},\n  \"profile\": {,}\n}");
  EXPECT_NE(msg.find("line 3"), std::string::npos) << msg;
}

TEST(Scenario, SnapshotStrideBoundedForTracing) {
  EXPECT_FALSE(error_of(R"({"wave_speed": {"a": 1}, "profile": {}, "solver": {"snapshot_stride": 12}})").empty());
  EXPECT_TRUE(error_of(R"({"wave_speed": {"a": 1}, "profile": {}, "solver": {"snapshot_stride": 11}})").empty());
}

TEST(Scenario, TabulatedAndTables) {
  const auto s = parse_scenario_text(R"({
    "wave_speed": {"family": "tabulated", "theta": [-1, 0, 1, 2], "c": [0, 1, 4, 9]},
    "profile": {"profile": "custom_table", "u1_table": {"x": [-1, 0, 1], "value": [0, -1, 0]}},
    "grid": {"x_min": -4, "x_max": 4, "N": 64}
  })");
  EXPECT_EQ(s.wave_speed.family, "tabulated");
  const auto d = build_initial_data(s);
  EXPECT_NEAR(d.u1[32], -1.0, 1e-14);
  EXPECT_NE(error_of(R"({"wave_speed": {"family": "tabulated", "theta": [-1, 0, 1], "c": [0, 2, 1]}, "profile": {}})"),
            "");
}

TEST(Scenario, MassRescaling) {
  const auto s = with_mass(parse_scenario_text(R"({"wave_speed": {"a": 1}, "profile": {}, "grid": {"N": 1024}})"), -0.5);
  const auto d = build_initial_data(s);
  EXPECT_NEAR(trapezoid(d.u1.values, d.u1.grid.dx), -0.5, 1e-12);
}

TEST(Scenario, BoundarySafetyRule) {
  auto s = parse_scenario_text(kCanonical);
  const auto model = s.wave_speed.build();
  EXPECT_TRUE(boundary_safety_warning(s, build_initial_data(s), model).has_value());
  s.solver.t_max = 2.0;
  EXPECT_FALSE(boundary_safety_warning(s, build_initial_data(s), model).has_value());
}
