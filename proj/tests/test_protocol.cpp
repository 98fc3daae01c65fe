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
#include <numbers>
#include <random>

#include "heraldsim/errors.hpp"
#include "heraldsim/protocol.hpp"
#include "test_util.hpp"

namespace heraldsim {
namespace {

using std::numbers::pi;
using testing::tuned;

CMatrix ideal_cz() {
  CMatrix u = CMatrix::Identity(4, 4);
  u(3, 3) = -1.0;
  return u;
}

TEST(PulseTime, Examples) {
  const auto a = pulse_time({0.0, 0.0, 1.0});
  EXPECT_DOUBLE_EQ(a.t_CZ, pi);
  EXPECT_DOUBLE_EQ(a.T_pi, pi);
  const auto b = pulse_time({-1.0, -2.0, -5.0});
  EXPECT_DOUBLE_EQ(b.t_CZ, pi / 2.0);
  EXPECT_DOUBLE_EQ(b.T_pi, pi / 5.0);
  EXPECT_THROW(pulse_time({1.0, 2.0, 3.0}), DegenerateParameters);
}

TEST(Correction, CompletesControlledPhase) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int k = 0; k < 20; ++k) {
    const std::array<double, 3> D{u(rng), u(rng), u(rng)};
    const double t = pulse_time(D).t_CZ;
    const CMatrix U = single_qubit_correction(D[0], D[1], t);
    EXPECT_NEAR(std::abs(U.determinant()), 1.0, 1e-14);
    CMatrix raw = CMatrix::Zero(4, 4);
    for (int i = 0; i < 4; ++i) raw(i, i) = std::exp(Complex(0, -D[static_cast<std::size_t>(i / 2 + i % 2)] * t));
    const CMatrix g = testing::kron(U, U) * raw;
    for (int i = 0; i < 3; ++i) EXPECT_LT(std::abs(g(i, i) - 1.0), 1e-12);
    EXPECT_LT(std::abs(g(3, 3) + 1.0), 1e-12);
  }
}

TEST(Target, CzOnPlusPlus) {
  const CVector t = cz_target_state();
  EXPECT_NEAR(t.norm(), 1.0, 1e-15);
  EXPECT_NEAR(t(3).real(), -0.5, 1e-15);
}

TEST(Level, Parsing) {
  EXPECT_EQ(level_from_string("full"), Level::FullME);
  EXPECT_EQ(level_from_string("EffectiveME"), Level::EffectiveME);
  EXPECT_EQ(level_from_string("analytic"), Level::Analytic);
  EXPECT_THROW(level_from_string("exact"), ConfigError);
}

TEST(NonlocalGate, FullMasterEquationAtReportedPoint) {
  const auto r = run_cphase_nonlocal(tuned(Setup::Nonlocal, 600, 10, 180));
  EXPECT_LE(r.infidelity, 3e-4);
  EXPECT_NEAR(r.P_success, r.P_analytic, 0.03);
  EXPECT_NEAR(r.P_success, 0.557, 0.01);
  EXPECT_LT(r.max_trace_drift, 1e-8);
  EXPECT_GT(r.min_eigenvalue, -1e-9);
  EXPECT_EQ(r.stats.reachable_states, 36u);
  EXPECT_NEAR(r.rho_qubit.trace().real(), 1.0, 1e-12);
}

TEST(NonlocalGate, WeakerCooperativity) {
  const auto r = run_cphase_nonlocal(tuned(Setup::Nonlocal, 100, 10, 100));
  EXPECT_LT(r.infidelity, 2e-3);
  EXPECT_GT(r.P_success, 0.1);
}

TEST(NonlocalGate, LevelsAgree) {
  const auto p = tuned(Setup::Nonlocal, 600, 10, 180);
  GateOptions o;
  const auto full = run_cphase_nonlocal(p, o);
  o.level = Level::EffectiveME;
  const auto eff = run_cphase_nonlocal(p, o);
  o.level = Level::Analytic;
  const auto ana = run_cphase_nonlocal(p, o);
  EXPECT_NEAR(full.P_success, eff.P_success, 1e-3);
  EXPECT_NEAR(full.infidelity, eff.infidelity, 1e-5);
  EXPECT_DOUBLE_EQ(full.t_gate, eff.t_gate);
  EXPECT_NEAR(ana.P_success, ana.P_analytic, 0.01);
  EXPECT_EQ(eff.stats.method, "effective");
  EXPECT_EQ(ana.stats.method, "closed-form");
}

TEST(NonlocalGate, BalancedRatesGiveUnitFidelity) {
  GateOptions o;
  o.level = Level::EffectiveME;
  o.force_balanced_rates = true;
  const auto r = run_cphase_nonlocal(tuned(Setup::Nonlocal, 600, 10, 180), o);
  EXPECT_NEAR(r.fidelity, 1.0, 1e-12);
  EXPECT_NEAR(r.P_success, std::exp(-r.Gamma * r.t_gate), 1e-12);
}

TEST(NonlocalGate, InvariantUnderUnitRescaling) {
  const auto p = tuned(Setup::Nonlocal, 100, 10, 100);
  const auto a = run_cphase_nonlocal(p);
  const auto b = run_cphase_nonlocal(p.scaled(7.0));
  EXPECT_NEAR(a.P_success, b.P_success, 1e-7);
  EXPECT_NEAR(a.infidelity, b.infidelity, 1e-7);
  EXPECT_NEAR(a.t_gate, 7.0 * b.t_gate, 1e-9 * a.t_gate);
}

TEST(NonlocalGate, ProcessFidelity) {
  GateOptions o;
  o.process_fidelity = true;
  const auto p = tuned(Setup::Nonlocal, 600, 10, 180);
  const auto r = run_cphase_nonlocal(p, o);
  ASSERT_TRUE(r.process_fidelity.has_value());
  EXPECT_GT(*r.process_fidelity, 0.999);
  const auto ch = gate_channel(Setup::Nonlocal, p, o);
  EXPECT_NEAR(process_fidelity(ch.superop, ideal_cz()), *r.process_fidelity, 1e-12);
  EXPECT_GT(ch.P_mean, 0.5);
  // Ideal CZ has unit process fidelity with itself.
  EXPECT_NEAR(process_fidelity(unitary_superop(ideal_cz()), ideal_cz()), 1.0, 1e-15);
}

TEST(DfsGate, ReportedPoint) {
  const auto r = run_cphase_dfs(tuned(Setup::DFS, 600, 1.84, 220));
  EXPECT_LE(r.infidelity, 2.4e-4);
  EXPECT_NEAR(r.P_success, 0.74, 0.03);
  const auto low = run_cphase_dfs(tuned(Setup::DFS, 100, 1.84, 220));
  EXPECT_GT(r.P_success, low.P_success);
  EXPECT_EQ(r.variant, GateVariant::LocalCZ_DFS);
}

TEST(GateResult, JsonKeys) {
  GateOptions o;
  o.level = Level::Analytic;
  const auto r = run_cphase_nonlocal(tuned(Setup::Nonlocal, 600, 10, 180), o);
  nlohmann::json j = r;
  for (const char* k : {"variant", "level", "t_gate", "T_pi", "P_success", "P_analytic", "fidelity", "infidelity",
                        "correction_phases", "leakage", "shifts", "Gamma", "integrator", "max_trace_drift",
                        "min_eigenvalue", "runtime_s", "params_echo"})
    EXPECT_TRUE(j.contains(k)) << k;
  EXPECT_EQ(j["level"], "Analytic");
  EXPECT_FALSE(j.contains("process_fidelity"));
}

}  // namespace
}  // namespace heraldsim
