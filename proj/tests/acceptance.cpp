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

// End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and
// exits nonzero if any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "heraldsim/dynamics.hpp"
#include "heraldsim/effective.hpp"
#include "heraldsim/logical.hpp"
#include "heraldsim/model.hpp"
#include "heraldsim/protocol.hpp"
#include "test_util.hpp"

namespace {

using namespace heraldsim;
using testing::tuned;

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

// Every full-model gate run is recorded for the conservation criterion.
struct Conservation {
  double worst_drift = 0.0;
  double worst_min_eig = 0.0;
  int runs = 0;
  void add(const GateResult& r) {
    worst_drift = std::max(worst_drift, r.max_trace_drift);
    worst_min_eig = std::min(worst_min_eig, r.min_eigenvalue);
    ++runs;
  }
} conservation;

GateResult full_gate(Setup s, const PhysicalParams& p, const GateOptions& o = {}) {
  auto r = run_cphase(s, p, o);
  conservation.add(r);
  return r;
}

Outcome cross_oracle() {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> C(50, 1000), lam(2, 20), d(60, 240);
  double worst_delta = 0.0, worst_rate = 0.0;
  const int n = 25;
  for (int k = 0; k < n; ++k) {
    const auto p = tuned(Setup::Nonlocal, C(rng), lam(rng), d(rng));
    const auto num = effective_operators_numeric(build_nonlocal_model(p));
    const auto cf = effective_closed_form(p);
    for (std::size_t s = 0; s < 4; ++s) {
      const auto g = sector_gap(num.sectors[s], cf.sectors[s]);
      worst_delta = std::max(worst_delta, g.Delta);
      worst_rate = std::max(worst_rate, g.rate_abs2);
    }
  }
  return {worst_delta <= 1e-8 && worst_rate <= 1e-6,
          fmt("%d parameter sets, max rel gap Delta %.2e, |r|^2 %.2e", n, worst_delta, worst_rate)};
}

Outcome dark_state_check() {
  const auto p = tuned(Setup::Nonlocal, 600, 10, 180);
  const auto m = eliminate_E2(build_nonlocal_model(p), p);
  const CVector psi = dark_state(m, p);
  const CMatrix H = m.H_total.dense();
  const double ratio = (H * psi).norm() / H.cwiseAbs().rowwise().sum().maxCoeff();
  return {ratio <= 1e-10, fmt("||H psi_d|| / ||H|| = %.2e", ratio)};
}

Outcome fig2a() {
  double worst = 0.0;
  double P180 = 0.0;
  for (double d = 100; d <= 240; d += 20) {
    const auto r = full_gate(Setup::Nonlocal, tuned(Setup::Nonlocal, 600, 10, d));
    worst = std::max(worst, std::abs(r.P_success - r.P_analytic));
    if (d == 180) P180 = r.P_success;
  }
  return {worst <= 0.03 && std::abs(P180 - 0.56) <= 0.03,
          fmt("max |P - P_analytic| = %.4f over Delta_E2 in [100, 240]; P(180) = %.4f", worst, P180)};
}

Outcome fig2b() {
  const auto a = full_gate(Setup::Nonlocal, tuned(Setup::Nonlocal, 100, 10, 100));
  const auto b = full_gate(Setup::Nonlocal, tuned(Setup::Nonlocal, 600, 10, 180));
  return {a.infidelity <= 2e-3 && b.infidelity <= 6e-4,
          fmt("1-F = %.3e (C=100, 100), %.3e (C=600, 180)", a.infidelity, b.infidelity)};
}

Outcome fig4() {
  const auto r = full_gate(Setup::DFS, tuned(Setup::DFS, 600, 1.84, 220));
  return {std::abs(r.P_success - 0.74) <= 0.03 && r.infidelity <= 2.4e-4,
          fmt("P' = %.4f, 1-F = %.3e", r.P_success, r.infidelity)};
}

Outcome truncation() {
  const auto p = tuned(Setup::Nonlocal, 600, 10, 180);
  GateOptions o;
  const auto a = full_gate(Setup::Nonlocal, p, o);
  o.model.n_max = 2;
  const auto b = full_gate(Setup::Nonlocal, p, o);
  const double dP = std::abs(a.P_success - b.P_success);
  const double dF = std::abs(a.infidelity - b.infidelity) / a.infidelity;
  return {dP < 0.005 && dF < 0.2, fmt("|dP| = %.2e, rel d(1-F) = %.2e (dims %td -> %td)", dP, dF,
                                      build_nonlocal_model(p).space->dim(),
                                      build_nonlocal_model(p, o.model).space->dim())};
}

Outcome effective_propagator() {
  const auto p = tuned(Setup::Nonlocal, 600, 10, 180);
  const auto eff = effective_operators_numeric(build_nonlocal_model(p));
  const auto em = effective_master_operators(eff);
  std::vector<Operator> Ls;
  for (const auto& l : em.lindblads) Ls.push_back(l.op);
  const LindbladKernel kernel(em.H, Ls);
  const double t_cz = pulse_time(eff.shifts()).t_CZ;
  std::vector<double> ts;
  for (int k = 0; k <= 20; ++k) ts.push_back(t_cz * k / 20.0);
  std::mt19937_64 rng(7);
  double worst = 0.0;
  for (int s = 0; s < 10; ++s) {
    const CMatrix rho = testing::random_density(4, rng);
    DormandPrince dp([&](double, const CMatrix& y, CMatrix& dy) { kernel.apply(y, dy); }, {1e-12, 1e-15});
    dp.integrate(effective_initial_state(em, rho).matrix(), 0.0, t_cz, ts, [&](std::size_t k, const CMatrix& y) {
      const CMatrix num = effective_heralded_block(em, DensityMatrix(em.space, y));
      worst = std::max(worst, trace_distance(num, evolve_effective(rho, eff, ts[k]).rho_qubit));
    });
  }
  return {worst < 1e-9, fmt("max trace distance %.2e over 10 states x 21 times", worst)};
}

Outcome exact_balance() {
  GateOptions o;
  o.level = Level::EffectiveME;
  o.force_balanced_rates = true;
  const auto r = run_cphase_nonlocal(tuned(Setup::Nonlocal, 600, 10, 180), o);
  return {std::abs(1.0 - r.fidelity) <= 1e-12, fmt("1-F = %.2e", 1.0 - r.fidelity)};
}

Outcome logical_layer() {
  const auto h = logical_hadamard();
  const auto c = logical_cnot();
  const double dh = distance_up_to_phase(restrict_to_dfs(ideal_unitary(h)), hadamard_matrix());
  const double dc = distance_up_to_phase(restrict_to_dfs(ideal_unitary(c)), cnot_matrix());
  double deph = 0.0;
  for (double a : {0.3, 1.1, 2.7})
    deph = std::max({deph, collective_dephasing_deviation(h, {a}), collective_dephasing_deviation(c, {a, -0.7 * a})});
  const auto nl = full_gate(Setup::Nonlocal, tuned(Setup::Nonlocal, 600, 10, 180));
  const auto dfs = full_gate(Setup::DFS, tuned(Setup::DFS, 600, 1.84, 220));
  auto circ = c;
  set_probabilities(circ, GateVariant::NonlocalCZ, nl.P_success);
  set_probabilities(circ, GateVariant::LocalCZ_DFS, dfs.P_success);
  const double P = circ.success_probability();
  return {dh <= 1e-12 && dc <= 1e-12 && deph <= 1e-12 && std::abs(P - 0.56 * 0.74 * 0.74) <= 0.05,
          fmt("H_L %.1e, CNOT_L %.1e, dephasing %.1e, P_CNOT_L = %.4f", dh, dc, deph, P)};
}

Outcome conservation_suite() {
  const auto p = tuned(Setup::Nonlocal, 100, 10, 100);
  const auto a = full_gate(Setup::Nonlocal, p);
  double dP = 0.0, dF = 0.0;
  for (double s : {0.3, 7.0}) {
    const auto b = full_gate(Setup::Nonlocal, p.scaled(s));
    dP = std::max(dP, std::abs(a.P_success - b.P_success));
    dF = std::max(dF, std::abs(a.fidelity - b.fidelity));
  }
  return {conservation.worst_drift <= 1e-8 && conservation.worst_min_eig >= -1e-7 && dP < 1e-6 && dF < 1e-6,
          fmt("%d runs: max trace drift %.1e, min eigenvalue %.1e; rescaling |dP| %.1e, |dF| %.1e", conservation.runs,
              conservation.worst_drift, conservation.worst_min_eig, dP, dF)};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"effective cross-oracle", cross_oracle},
      {"dark state", dark_state_check},
      {"nonlocal herald probability", fig2a},
      {"nonlocal infidelity", fig2b},
      {"DFS gate", fig4},
      {"truncation convergence", truncation},
      {"effective propagator", effective_propagator},
      {"exact balance", exact_balance},
      {"logical layer", logical_layer},
      {"conservation", conservation_suite},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("%s %2zu %s: %s [%.2f s]\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first, o.detail.c_str(),
                dt);
    std::fflush(stdout);
    failed += !o.pass;
  }
  return failed == 0 ? 0 : 1;
}
