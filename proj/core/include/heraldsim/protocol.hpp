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

#pragma once

#include <array>
#include <optional>
#include <string>

#include <json.hpp>

#include "heraldsim/dynamics.hpp"
#include "heraldsim/effective.hpp"
#include "heraldsim/model.hpp"
#include "heraldsim/params.hpp"

namespace heraldsim {

enum class GateVariant { NonlocalCZ, LocalCZ_DFS };
enum class Level { FullME, EffectiveME, Analytic };

std::string to_string(GateVariant v);
std::string to_string(Level l);
/// Accepts "full", "effective", "analytic" (and the enum spellings).
Level level_from_string(const std::string& s);

struct PulseTiming {
  double t_CZ = 0.0;
  double T_pi = 0.0;
};

/// t_CZ = pi / |D2 - 2 D1 + D0| and T_pi = pi / |D2|. Throws
/// DegenerateParameters when the conditional phase rate vanishes.
PulseTiming pulse_time(const std::array<double, 3>& shifts);

/// diag(exp(i D0 t / 2), exp(i (2 D1 - D0) t / 2)).
CMatrix single_qubit_correction(double Delta_0, double Delta_1, double t);

/// (|00> + |01> + |10> - |11>) / 2.
CVector cz_target_state();

struct GateOptions {
  Level level = Level::FullME;
  ModelOptions model;
  EvolveOptions evolve;
  /// EffectiveME only: replace every Gamma_N (and the |g> dephasing
  /// amplitude) by a common value, leaving the shifts untouched.
  bool force_balanced_rates = false;
  /// Also compute the process fidelity against CZ from 16 basis inputs.
  bool process_fidelity = false;
};

struct GateResult {
  GateVariant variant = GateVariant::NonlocalCZ;
  Level level = Level::FullME;
  double t_gate = 0.0;
  double T_pi = 0.0;
  double P_success = 0.0;
  double P_analytic = 0.0;
  double fidelity = 0.0;
  double infidelity = 0.0;
  std::array<double, 2> correction_phases{};
  double leakage = 0.0;
  std::array<double, 3> shifts{};
  double Gamma = 0.0;
  std::optional<double> process_fidelity;
  IntegratorStats stats;
  double max_trace_drift = 0.0;
  double min_eigenvalue = 0.0;
  double runtime_s = 0.0;
  /// Heralded, corrected two-qubit state (normalized by P_success).
  CMatrix rho_qubit;
  PhysicalParams params_echo;
};

void to_json(nlohmann::json& j, const GateResult& r);

GateResult run_cphase_nonlocal(const PhysicalParams& p, const GateOptions& opts = {});
GateResult run_cphase_dfs(const PhysicalParams& p, const GateOptions& opts = {});
GateResult run_cphase(Setup setup, const PhysicalParams& p, const GateOptions& opts = {});

/// Heralded conditional channel on the two qubits (q1 most significant),
/// including the single-qubit corrections, as a 16x16 superoperator acting
/// on column-major vec(rho). Not trace preserving: Tr[E(rho)] is the herald
/// probability.
struct GateChannel {
  CMatrix superop;
  double P_mean = 0.0;  // herald probability for the maximally mixed input
  double t_gate = 0.0;
};

GateChannel gate_channel(Setup setup, const PhysicalParams& p, const GateOptions& opts = {});

/// Process fidelity Tr(S_U^dag S) / d^2 of a channel normalized to unit mean
/// herald probability.
double process_fidelity(const CMatrix& superop, const CMatrix& unitary);

/// Superoperator conj(U) kron U of a unitary.
CMatrix unitary_superop(const CMatrix& U);

}  // namespace heraldsim
