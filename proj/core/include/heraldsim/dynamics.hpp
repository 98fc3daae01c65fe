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

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "heraldsim/effective.hpp"
#include "heraldsim/hilbert.hpp"
#include "heraldsim/model.hpp"

namespace heraldsim {

/// Precomputed pieces of the Lindblad generator
///   d rho/dt = -i (H_nh rho - rho H_nh^dag) + sum_j L_j rho L_j^dag,
/// with H_nh = H - (i/2) sum_j L_j^dag L_j.
class LindbladKernel {
 public:
  LindbladKernel(const Operator& H, const std::vector<Operator>& Ls);

  Index dim() const noexcept { return h_nh_.rows(); }
  void apply(const CMatrix& rho, CMatrix& out) const;
  CMatrix operator()(const CMatrix& rho) const {
    CMatrix out;
    apply(rho, out);
    return out;
  }

 private:
  SparseMatrix h_nh_;
  SparseMatrix h_nh_dag_;
  std::vector<SparseMatrix> ls_;
  std::vector<SparseMatrix> ls_dag_;
};

/// Right-hand side i[rho, H] + sum_j (L rho L^dag - {L^dag L, rho}/2).
CMatrix lindblad_rhs(const DensityMatrix& rho, const Operator& H, const std::vector<Operator>& Ls);

/// Adaptive Dormand-Prince 5(4) for matrix-valued ODEs with dense output.
class DormandPrince {
 public:
  using Rhs = std::function<void(double, const CMatrix&, CMatrix&)>;

  struct Options {
    double rtol = 1e-9;
    double atol = 1e-12;
    double h_initial = 0.0;  // 0 picks a step from the derivative scale
    std::size_t max_steps = 5'000'000;
  };

  struct Stats {
    std::size_t accepted = 0;
    std::size_t rejected = 0;
    std::size_t rhs_calls = 0;
    double max_error_estimate = 0.0;
  };

  DormandPrince(Rhs f, Options opts);

  /// Integrates from t0 to t_final; `on_sample(k, y)` is called for every
  /// requested sample time (ascending, within [t0, t_final]), using dense
  /// output between steps. Returns y(t_final), landing on it exactly.
  CMatrix integrate(const CMatrix& y0, double t0, double t_final, std::span<const double> sample_times,
                    const std::function<void(std::size_t, const CMatrix&)>& on_sample);

  const Stats& stats() const noexcept { return stats_; }

 private:
  Rhs f_;
  Options opts_;
  Stats stats_;
};

/// Exact propagation by the matrix exponential of the Lindblad generator,
/// restricted to the subspace reachable from a seed support. The reachable
/// set is split into components that H_nh and every L_j map into
/// themselves, so rho decomposes into independent component-pair blocks
/// whose small superoperators are exponentiated directly.
class LindbladPropagator {
 public:
  LindbladPropagator(const Operator& H, const std::vector<Operator>& Ls, std::span<const Index> seed);

  std::size_t reachable_states() const noexcept { return reachable_; }
  const std::vector<std::vector<Index>>& components() const noexcept { return comps_; }
  std::size_t largest_block() const noexcept;

  /// Precomputed exp(t L) per block.
  struct StepMap {
    double t = 0.0;
    std::vector<CMatrix> blocks;  // index a * ncomp + b
  };
  StepMap step_map(double t) const;

  /// Applies a step map. Entries of rho outside the reachable set must be
  /// zero; throws std::invalid_argument otherwise.
  CMatrix apply(const StepMap& map, const CMatrix& rho) const;
  CMatrix propagate(const CMatrix& rho, double t) const { return apply(step_map(t), rho); }

 private:
  CMatrix block_generator(std::size_t a, std::size_t b) const;

  std::vector<std::vector<Index>> comps_;
  std::vector<CMatrix> h_nh_blocks_;              // per component
  std::vector<std::vector<CMatrix>> l_blocks_;    // [j][component]
  std::vector<int> comp_of_;                      // full index -> component or -1
  std::size_t reachable_ = 0;
  Index dim_ = 0;
};

/// Support of rho: indices whose row or column holds a nonzero entry.
std::vector<Index> support_of(const CMatrix& rho);

enum class Method { Auto, DormandPrince, Exponential };

std::string to_string(Method m);

struct EvolveOptions {
  Method method = Method::Auto;
  double tol = 1e-9;
  std::size_t samples = 200;
  /// Auto switches to the exponential route when the reachable set is at
  /// most this large.
  std::size_t exponential_limit = 400;
  bool check_positivity = true;
};

struct IntegratorStats {
  std::string method;
  std::size_t steps = 0;
  std::size_t rejected = 0;
  double max_error_estimate = 0.0;
  std::size_t reachable_states = 0;
};

struct EvolutionResult {
  DensityMatrix rho_final;
  std::vector<double> times;
  std::vector<double> herald_prob_trace;
  IntegratorStats stats;
  double max_trace_drift = 0.0;
  double max_hermiticity_error = 0.0;
  double min_eigenvalue = 0.0;
};

struct HeraldSpec {
  std::size_t slot;
  std::string level;
};

/// Generic Lindblad evolution. When `herald` is set the probability of that
/// level is recorded at every sample.
EvolutionResult evolve_lindblad(const DensityMatrix& rho0, const Operator& H, const std::vector<Operator>& Ls,
                                double t_final, const EvolveOptions& opts = {},
                                std::optional<HeraldSpec> herald = std::nullopt);

/// Full-model evolution under H_total and the model's collapse operators;
/// records P(aux = g).
EvolutionResult evolve(const DensityMatrix& rho0, const ModelOperators& m, double t_final,
                       const EvolveOptions& opts = {});

struct EffectiveEvolution {
  CMatrix rho_qubit;  // unnormalized, 4x4 in |q1 q2>, q1 most significant
  double P = 0.0;
};

/// Closed-form ground-space propagation of the heralded branch:
///   rho_ij(t) = rho_ij(0) exp[-i(D_i - D_j)t - (G_i + G_j)t/2
///                              + (r_i r_j^* - |r_i|^2/2 - |r_j|^2/2) t]
/// with r the |g> dephasing amplitudes; for sector-independent r this is the
/// textbook form.
EffectiveEvolution evolve_effective(const CMatrix& rho_qubit0, const EffectiveModel& eff, double t);

/// Effective master-equation operators on q1{0,1,d} x q2{0,1,d} x aux{g,f}.
struct EffectiveMaster {
  SpacePtr space;
  Operator H;
  std::vector<LabeledOperator> lindblads;
  std::size_t aux = 2;
};

EffectiveMaster effective_master_operators(const EffectiveModel& eff);

/// Embeds a 4x4 qubit state with the auxiliary atom in |g>.
DensityMatrix effective_initial_state(const EffectiveMaster& em, const CMatrix& rho_qubit0);

/// Unnormalized heralded qubit block <g|rho|g> on {0,1}^2.
CMatrix effective_heralded_block(const EffectiveMaster& em, const DensityMatrix& rho);

struct HeraldedState {
  CMatrix rho_qubit;  // 4x4 on {0,1}^2, normalized by P (trace = 1 - leakage)
  double P = 0.0;
  double leakage = 0.0;
};

/// Projects aux onto |g>, traces out cavities, and separates qubit-subspace
/// population from |e>/|d> leakage.
HeraldedState herald_and_reduce(const DensityMatrix& rho, const ModelOperators& m);

}  // namespace heraldsim
