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

#include <cmath>

#include "heraldsim/errors.hpp"
#include "heraldsim/params.hpp"

namespace heraldsim {
namespace {

TEST(PhysicalParams, JsonRoundTrip) {
  PhysicalParams p = caption_params(Setup::Nonlocal, 600, 10, 180);
  p.L_fc = 1.0;
  p.alpha_l = 0.01;
  nlohmann::json j = p;
  EXPECT_EQ(j.get<PhysicalParams>(), p);
  EXPECT_TRUE(j.contains("Delta_E2"));
  EXPECT_TRUE(j.contains("stark_compensation"));
}

TEST(PhysicalParams, UnknownKeyNamesField) {
  nlohmann::json j = caption_params(Setup::Nonlocal, 600, 10, 180);
  j["kapa"] = 1.0;
  try {
    (void)j.get<PhysicalParams>();
    FAIL() << "expected ConfigError";
  } catch (const ConfigError& e) {
    EXPECT_EQ(e.field(), "kapa");
  }
  nlohmann::json k = caption_params(Setup::Nonlocal, 600, 10, 180);
  k["g"] = "big";
  try {
    (void)k.get<PhysicalParams>();
    FAIL() << "expected ConfigError";
  } catch (const ConfigError& e) {
    EXPECT_EQ(e.field(), "g");
  }
}

TEST(PhysicalParams, ValidateRejectsBadValues) {
  const PhysicalParams good = caption_params(Setup::Nonlocal, 100, 10, 100);
  EXPECT_NO_THROW(good.validate());
  auto bad = good;
  bad.kappa = 0.0;
  EXPECT_THROW(bad.validate(), std::invalid_argument);
  bad = good;
  bad.Omega = -1.0;
  EXPECT_THROW(bad.validate(), std::invalid_argument);
  bad = good;
  bad.alpha_l = 1.0;
  EXPECT_THROW(bad.validate(), std::invalid_argument);
  bad = good;
  bad.Delta_e = NAN;
  EXPECT_THROW(bad.validate(), std::invalid_argument);
  bad = good;
  bad.alpha = 2.0;  // inconsistent with g_f^2 / g^2
  EXPECT_THROW(bad.validate(), std::invalid_argument);
}

TEST(PhysicalParams, ScaledMultipliesRates) {
  const PhysicalParams p = caption_params(Setup::Nonlocal, 100, 10, 100);
  const PhysicalParams q = p.scaled(3.0);
  EXPECT_DOUBLE_EQ(q.g, 3 * p.g);
  EXPECT_DOUBLE_EQ(q.kappa, 3 * p.kappa);
  EXPECT_DOUBLE_EQ(q.Delta_E2, 3 * p.Delta_E2);
  EXPECT_DOUBLE_EQ(q.alpha, p.alpha);
  EXPECT_NEAR(ReducedParams::from(q).C, ReducedParams::from(p).C, 1e-9);
}

TEST(CaptionParams, EffectiveRabiFrequencyIsGammaOverThree) {
  for (double C : {50.0, 100.0, 600.0, 1000.0}) {
    for (double d : {60.0, 180.0, 240.0}) {
      const auto r = ReducedParams::from(caption_params(Setup::Nonlocal, C, 10, d));
      EXPECT_NEAR(r.Omega_tilde, 1.0 / 3.0, 1e-14);
      EXPECT_NEAR(r.C, C, 1e-9 * C);
      EXPECT_NEAR(r.lambda, 10.0, 1e-12);
    }
  }
  const auto dfs = caption_params(Setup::DFS, 600, 1.84, 220);
  EXPECT_EQ(dfs.J_1, 0.0);
  EXPECT_GT(dfs.J_2, 0.0);
}

TEST(ReducedParams, DimensionlessCombinations) {
  const auto r = ReducedParams::from(caption_params(Setup::Nonlocal, 600, 10, 180));
  EXPECT_NEAR(r.D, 1.0 / std::sqrt(600.0), 1e-15);
  EXPECT_NEAR(r.d, 1.0, 1e-15);
  EXPECT_NEAR(r.G, 10.0 * std::sqrt(600.0), 1e-9);
  EXPECT_NEAR(r.Gbar * r.G, 1.0, 1e-15);
  EXPECT_EQ(r.J_tilde_1.imag(), -0.5);
  EXPECT_EQ(r.J_tilde_2.imag(), -0.5);
  EXPECT_NEAR(r.J_tilde_1.real(), 2.0 * r.J_tilde_2.real(), 1e-9);
  EXPECT_NEAR(r.D_1, std::sqrt((r.Gbar * r.Gbar + 1.0 / 600.0) / 2.0), 1e-15);
  EXPECT_NEAR(r.gamma_g_tilde, 1.0 * std::pow(r.Omega_m_tilde / (2 * 180.0), 2), 1e-15);
  // Recomputation is idempotent.
  const auto again = ReducedParams::from(caption_params(Setup::Nonlocal, 600, 10, 180));
  EXPECT_EQ(again.Z_p, r.Z_p);
}

TEST(ScalingFactor, MatchesIndependentEvaluation) {
  // Z_p at lambda = 10, d = 1; quoted success probability exp(-Z_p pi / sqrt(600)).
  const double zp = scaling_factor_zp(10.0, 1.0);
  EXPECT_NEAR(zp, 4.44969957310053151, 1e-12);
  EXPECT_NEAR(std::exp(-zp * M_PI / std::sqrt(600.0)), 0.5651318890243716, 1e-12);
}

TEST(Setup, Parsing) {
  EXPECT_EQ(setup_from_string("nonlocal"), Setup::Nonlocal);
  EXPECT_EQ(setup_from_string("dfs"), Setup::DFS);
  EXPECT_THROW(setup_from_string("local"), ConfigError);
  EXPECT_EQ(to_string(Setup::DFS), "dfs");
}

}  // namespace
}  // namespace heraldsim
