// Copyright 2026 The heraldsim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>

#include <algorithm>
#include <cstdlib>
#include <sstream>

#include "heraldsim/errors.hpp"
#include "heraldsim/serialize.hpp"
#include "heraldsim/sweep.hpp"

namespace heraldsim {
namespace {

std::string field_of(const nlohmann::json& j) {
  try {
    sweep_config_from_json(j);
  } catch (const ConfigError& e) {
    return e.field();
  }
  return "<none>";
}

TEST(Serialize, FormatDoubleRoundTrips) {
  for (double x : {0.1, 1.0 / 3.0, 6160.0803, -2.5e-17, 1e300}) EXPECT_EQ(std::strtod(format_double(x).c_str(), nullptr), x);
  EXPECT_EQ(format_double(0.5), "0.5");
  EXPECT_EQ(format_double(100.0), "100");
}

TEST(Serialize, ParseErrorsCarryPosition) {
  try {
    parse_json("{\n  \"a\": 1,\n  oops\n}", "cfg.json");
    FAIL() << "expected ConfigError";
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("cfg.json:3:"), std::string::npos) << e.what();
  }
  EXPECT_EQ(parse_json("{\"a\": [1, 2]}")["a"][1], 2);
}

TEST(Serialize, Overrides) {
  nlohmann::json j = nlohmann::json::object();
  apply_override(j, "C=[100,600]");
  apply_override(j, "variant=dfs");
  apply_override(j, "params.kappa=12.5");
  apply_override(j, "tune=false");
  EXPECT_EQ(j["C"], nlohmann::json({100, 600}));
  EXPECT_EQ(j["variant"], "dfs");
  EXPECT_EQ(j["params"]["kappa"], 12.5);
  EXPECT_EQ(j["tune"], false);
  EXPECT_THROW(apply_override(j, "no_equals_sign"), ConfigError);
}

TEST(SweepConfig, PresetsExpandRange) {
  const auto c2 = sweep_config_from_json(preset("fig2"));
  EXPECT_EQ(c2.variant, Setup::Nonlocal);
  EXPECT_DOUBLE_EQ(c2.lambda, 10.0);
  EXPECT_EQ(c2.C_values, (std::vector<double>{100, 600}));
  ASSERT_EQ(c2.Delta_E2_over_gamma.size(), 10u);
  EXPECT_DOUBLE_EQ(c2.Delta_E2_over_gamma.front(), 60.0);
  EXPECT_DOUBLE_EQ(c2.Delta_E2_over_gamma.back(), 240.0);
  const auto c4 = sweep_config_from_json(preset("fig4"));
  EXPECT_EQ(c4.variant, Setup::DFS);
  EXPECT_DOUBLE_EQ(c4.lambda, 1.84);
  EXPECT_THROW(preset("fig3"), ConfigError);
}

TEST(SweepConfig, StrictFieldsNameTheCulprit) {
  const nlohmann::json ok = {{"variant", "nonlocal"}, {"C", 600}, {"Delta_E2_over_gamma", 180}};
  EXPECT_NO_THROW(sweep_config_from_json(ok));
  auto bad = ok;
  bad["colour"] = 1;
  EXPECT_EQ(field_of(bad), "colour");
  bad = ok;
  bad["Delta_E2_over_gamma"] = nlohmann::json::array();
  EXPECT_EQ(field_of(bad), "Delta_E2_over_gamma");
  bad = ok;
  bad["level"] = "exact";
  EXPECT_EQ(field_of(bad), "level");
  bad = ok;
  bad["workers"] = 0;
  EXPECT_EQ(field_of(bad), "workers");
  bad = ok;
  bad["variant"] = "ring";
  EXPECT_EQ(field_of(bad), "variant");
}

TEST(SweepConfig, JsonRoundTrip) {
  const auto c = sweep_config_from_json(preset("fig4"));
  const auto d = sweep_config_from_json(to_json(c));
  EXPECT_EQ(d.C_values, c.C_values);
  EXPECT_EQ(d.Delta_E2_over_gamma, c.Delta_E2_over_gamma);
  EXPECT_EQ(d.variant, c.variant);
  EXPECT_EQ(d.level, c.level);
}

SweepConfig analytic_sweep(unsigned workers) {
  nlohmann::json j = {{"variant", "nonlocal"},
                      {"C", {600, 100}},
                      {"Delta_E2_over_gamma", {{"start", 100}, {"stop", 160}, {"step", 30}}},
                      {"level", "effective"},
                      {"workers", workers},
                      {"record_runtime", false}};
  return sweep_config_from_json(j);
}

TEST(Sweep, RowsSortedAndCsvDeterministic) {
  const auto rows = run_sweep(analytic_sweep(1));
  ASSERT_EQ(rows.size(), 6u);
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const bool ordered = rows[i - 1].C < rows[i].C ||
                         (rows[i - 1].C == rows[i].C && rows[i - 1].Delta_E2_over_gamma < rows[i].Delta_E2_over_gamma);
    EXPECT_TRUE(ordered);
  }
  std::ostringstream a, b;
  write_csv(a, rows, false);
  write_csv(b, run_sweep(analytic_sweep(3)), false);
  EXPECT_EQ(a.str(), b.str());
  const std::string csv = a.str();
  EXPECT_EQ(csv.substr(0, csv.find('\n')), kCsvHeader);
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 7);
  for (const auto& r : rows) {
    EXPECT_GT(r.P_numeric, 0.0);
    EXPECT_LT(r.P_numeric, 1.0);
    EXPECT_GT(r.t_CZ_gamma, 0.0);
  }
}

}  // namespace
}  // namespace heraldsim
