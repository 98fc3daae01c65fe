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

#include <map>
#include <variant>
#include <vector>

#include "heraldsim/hilbert.hpp"
#include "heraldsim/protocol.hpp"

namespace heraldsim {

// Atoms are numbered from 1; atom 1 is the most significant bit of the
// register. A logical qubit lives on a pair of atoms with
// |0_L> = |01> and |1_L> = |10>.

enum class SingleQubit { H, S, X, Z };

struct SingleQubitGate {
  SingleQubit gate;
  int atom;
};

struct HeraldedCZ {
  int first;
  int second;
  GateVariant variant;
  double probability = 1.0;
};

using CircuitElement = std::variant<SingleQubitGate, HeraldedCZ>;

struct LogicalCircuit {
  int num_atoms = 0;
  std::vector<CircuitElement> elements;  // in time order

  double success_probability() const;
  std::size_t heralded_count() const;
  /// Appends `later` (same register) after this circuit.
  LogicalCircuit& then(const LogicalCircuit& later);
};

/// H_L = [(HSHZ) x (HSH)] CNOT_ab [(HSX) x X], CNOT_ab = H_b CZ_ab H_b.
LogicalCircuit logical_hadamard(int a = 1, int b = 2, int num_atoms = 2);

/// CNOT_L = (I x H_L) CZ_13 (I x H_L) on atoms 1..4; the CZ between atoms 1
/// and 3 is nonlocal, the ones inside H_L are DFS-local.
LogicalCircuit logical_cnot();

/// Sets the herald probability of every CZ element of the given variant.
void set_probabilities(LogicalCircuit& c, GateVariant v, double p);

CMatrix single_qubit_matrix(SingleQubit g);

/// Ideal 2^n x 2^n unitary of the circuit.
CMatrix ideal_unitary(const LogicalCircuit& c);

/// Physical index of a logical basis state; logical qubit k sits on atoms
/// (2k+1, 2k+2).
Index dfs_index(int logical, int num_logical);

/// Restriction <dfs(a)| U |dfs(b)> to the logical basis.
CMatrix restrict_to_dfs(const CMatrix& U);

/// min_phi ||A - e^{i phi} B||_max, aligning on B's largest entry.
double distance_up_to_phase(const CMatrix& A, const CMatrix& B);

/// Deviation of the logical action of the ideal circuit under conjugation by
/// exp(i phi_k (Z_a + Z_b)) on every logical pair.
double collective_dephasing_deviation(const LogicalCircuit& c, const std::vector<double>& phases);

CMatrix cnot_matrix();
CMatrix hadamard_matrix();
CMatrix ideal_cz_channel();

struct LogicalChannel {
  CMatrix superop;      // d_L^2 x d_L^2 on column-major vec, unnormalized
  double probability;   // herald probability for the maximally mixed logical input
  double fidelity;      // process fidelity against the ideal logical action
};

/// Composes ideal single-qubit gates with the given conditional two-qubit
/// channels (16x16, see GateChannel) and restricts to the logical space.
/// Throws std::invalid_argument if a CZ element has no channel.
LogicalChannel apply_circuit_channel(const LogicalCircuit& c, const std::map<GateVariant, CMatrix>& channels);

}  // namespace heraldsim
