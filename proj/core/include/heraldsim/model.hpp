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

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "heraldsim/hilbert.hpp"
#include "heraldsim/params.hpp"

namespace heraldsim {

enum class Variant { Nonlocal3Cav, DFS2Cav, EliminatedE2 };

std::string to_string(Variant v);

struct ModelOptions {
  int n_max = 1;
  std::optional<int> excitation_cap = 2;
  /// Level that |e> decays into: "d" (dump level), or "0"/"1" to alias the
  /// dump onto a qubit level.
  std::string decay_target = "d";
};

struct LabeledOperator {
  std::string label;
  Operator op;
};

/// Partition of the full model into excited-manifold Hamiltonian, drive and
/// collapse operators. Slot layout: q1, q2, aux, then the cavity modes.
struct ModelOperators {
  Variant variant;
  Setup setup;
  SpacePtr space;
  Operator H_e;
  Operator V;
  Operator H_total;
  std::vector<LabeledOperator> lindblads;
  PhysicalParams params;
  ModelOptions options;
  std::size_t q1 = 0;
  std::size_t q2 = 1;
  std::size_t aux = 2;
  std::vector<std::size_t> modes;

  /// Throws std::invalid_argument for unknown labels.
  const Operator& lindblad(std::string_view label) const;
  std::vector<Operator> lindblad_ops() const;
};

/// (c1, c2, c3) for three mode slots or (a_plus, a_minus) for two. Mode slots
/// are taken in declaration order; any other count throws.
std::vector<Operator> normal_modes(const SpacePtr& space);

/// Three coupled cavities A-B-C with qubit atoms in A and C and the auxiliary
/// atom in B, written in the rotating frame where c1 is resonant.
ModelOperators build_nonlocal_model(const PhysicalParams& p, const ModelOptions& opts = {});

/// Two coupled cavities B-C with both qubit atoms in C.
ModelOperators build_dfs_model(const PhysicalParams& p, const ModelOptions& opts = {});

/// Adiabatically removes |E2>, leaving a three-level auxiliary atom driven by
/// -Omega_tilde |E1><g| with E1 shifted by -Omega_m^2/(4 Delta_E2) and an
/// effective E1 -> g decay at gamma_g_tilde.
ModelOperators eliminate_E2(const ModelOperators& m, const PhysicalParams& p);

/// Zero-energy state of the eliminated model with both qubits in |0>.
CVector dark_state(const ModelOperators& m, const PhysicalParams& p);

/// Extra cavity loss from fiber attenuation: -c ln(1 - alpha_l) / (2 L_fc).
double fiber_loss_rate(double L_fc, double alpha_l, double c_fiber = 2.0e8);

}  // namespace heraldsim
