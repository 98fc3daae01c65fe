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
#include <complex>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "heraldsim/hilbert.hpp"
#include "heraldsim/model.hpp"
#include "heraldsim/params.hpp"

namespace heraldsim {

enum class Provenance { NumericInversion, ClosedForm, WeakDrive, Balanced };

std::string to_string(Provenance p);

/// Effective shift and decay amplitudes for one qubit configuration. (m, n)
/// count the qubit atoms in |1> (q1, q2).
struct SectorRecord {
  int m = 0;
  int n = 0;
  double Delta = 0.0;
  /// Amplitudes keyed by channel: "g", "f", "c1".."c3" or "c+"/"c-", "1", "2".
  /// Qubit channels are present only when that atom is in |1>.
  std::map<std::string, Complex> rates;
  double Gamma = 0.0;

  Complex rate(const std::string& channel) const;
};

/// Sum of |r|^2 over every heralded (g -> f or qubit-decay) channel.
double assemble_gamma(const SectorRecord& s);

struct EffectiveModel {
  Setup setup = Setup::Nonlocal;
  Provenance provenance = Provenance::NumericInversion;
  /// Indexed by 2 m + n.
  std::array<SectorRecord, 4> sectors;

  const SectorRecord& sector(int m, int n) const { return sectors[static_cast<std::size_t>(2 * m + n)]; }
  SectorRecord& sector(int m, int n) { return sectors[static_cast<std::size_t>(2 * m + n)]; }
  /// Shifts (Delta_0, Delta_1, Delta_2) with Delta_1 taken from sector (1, 0).
  std::array<double, 3> shifts() const;
};

/// Relative differences between two records of the same sector. Rate gaps
/// are |(|r_a|^2 - |r_b|^2)| over max(|r_a|^2, |r_b|^2), floored at 1e-12 of
/// the sector's total |r|^2 so that channels that vanish identically compare
/// equal.
struct SectorGap {
  double Delta = 0.0;
  double rate_abs2 = 0.0;
  double Gamma = 0.0;
};

SectorGap sector_gap(const SectorRecord& a, const SectorRecord& b);

void to_json(nlohmann::json& j, const SectorRecord& s);
void to_json(nlohmann::json& j, const EffectiveModel& e);

/// H_e - (i/2) sum_j L_j^dag L_j on the full space.
Operator build_h_nh(const ModelOperators& m);

/// Single-excitation block reached from the driven ground state of one
/// qubit configuration.
struct ExcitedBlock {
  Index ground = 0;              // flat index of |m, n; g; vac>
  std::vector<Index> states;     // flat indices of the block, ascending
  CMatrix h_nh;                  // block of H_NH
  CVector drive;                 // V|ground> restricted to the block
};

ExcitedBlock excited_block(const ModelOperators& m, int qm, int qn);

/// Effective operators by direct inversion of H_NH on each excited block.
/// Throws DegenerateParameters when a block is numerically singular.
EffectiveModel effective_operators_numeric(const ModelOperators& m);

/// Closed-form shift and amplitudes of the three-cavity setup. The returned
/// shift includes the |g> compensation term when enabled, so it is directly
/// comparable with the numeric inversion.
SectorRecord delta_n_closed_form(const PhysicalParams& p, int m, int n);
EffectiveModel effective_closed_form(const PhysicalParams& p);

/// Weak-mixing (Omega_m << Delta_E2) simplification of the closed forms.
SectorRecord delta_n_weak_drive(const PhysicalParams& p, int m, int n);
EffectiveModel effective_weak_drive(const PhysicalParams& p);

struct TuneResult {
  PhysicalParams params;
  double Gamma = 0.0;
  std::vector<std::string> warnings;
};

/// Replaces Delta_E1 and Delta_e to equalize decay across sectors.
TuneResult tune_detunings_nonlocal(const PhysicalParams& p);
TuneResult tune_detunings_dfs(const PhysicalParams& p);

/// Asymptotic shifts (Delta_0, Delta_1, Delta_2) after tuning.
std::array<double, 3> balanced_shifts_nonlocal(const PhysicalParams& tuned, double Gamma);
std::array<double, 3> balanced_shifts_dfs(const PhysicalParams& tuned, double Gamma);

/// Tuned total decay rate Omega_tilde^2 / (2 gamma alpha C).
double target_gamma(const PhysicalParams& p);

struct AnalyticProbability {
  double P_exp = 0.0;
  double P_linear = 0.0;
  double Z_p = 0.0;
};

AnalyticProbability analytic_success_probability(const PhysicalParams& tuned, double t);

}  // namespace heraldsim
