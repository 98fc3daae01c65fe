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

#include "heraldsim/protocol.hpp"

#include <chrono>
#include <cmath>
#include <map>
#include <stdexcept>

#include <unsupported/Eigen/KroneckerProduct>

#include "heraldsim/errors.hpp"

namespace heraldsim {

using nlohmann::json;
using namespace std::complex_literals;

std::string to_string(GateVariant v) { return v == GateVariant::NonlocalCZ ? "NonlocalCZ" : "LocalCZ_DFS"; }

std::string to_string(Level l) {
  switch (l) {
    case Level::FullME:
      return "FullME";
    case Level::EffectiveME:
      return "EffectiveME";
    case Level::Analytic:
      return "Analytic";
  }
  return "?";
}

Level level_from_string(const std::string& s) {
  if (s == "full" || s == "FullME") return Level::FullME;
  if (s == "effective" || s == "EffectiveME") return Level::EffectiveME;
  if (s == "analytic" || s == "Analytic") return Level::Analytic;
  throw ConfigError("level must be full, effective or analytic, got '" + s + "'", "level");
}

PulseTiming pulse_time(const std::array<double, 3>& shifts) {
  const double rate = shifts[2] - 2.0 * shifts[1] + shifts[0];
  if (!(std::abs(rate) > 0) || !std::isfinite(rate)) {
    throw DegenerateParameters("conditional phase rate D2 - 2 D1 + D0 vanishes");
  }
  PulseTiming t;
  t.t_CZ = M_PI / std::abs(rate);
  t.T_pi = shifts[2] != 0.0 ? M_PI / std::abs(shifts[2]) : INFINITY;
  return t;
}

CMatrix single_qubit_correction(double Delta_0, double Delta_1, double t) {
  CMatrix U = CMatrix::Zero(2, 2);
  U(0, 0) = std::exp(1i * (Delta_0 * t / 2.0));
  U(1, 1) = std::exp(1i * ((2.0 * Delta_1 - Delta_0) * t / 2.0));
  return U;
}

CVector cz_target_state() {
  CVector psi(4);
  psi << 0.5, 0.5, 0.5, -0.5;
  return psi;
}

CMatrix unitary_superop(const CMatrix& U) { return Eigen::kroneckerProduct(U.conjugate(), U); }

double process_fidelity(const CMatrix& superop, const CMatrix& unitary) {
  const Index d = unitary.rows();
  if (superop.rows() != d * d || superop.cols() != d * d) throw std::invalid_argument("superoperator shape mismatch");
  const CMatrix id = CMatrix::Identity(d, d) / static_cast<double>(d);
  const CVector out = superop * Eigen::Map<const CVector>(id.data(), d * d);
  const Eigen::Map<const CMatrix> out_m(out.data(), d, d);
  const double p = out_m.trace().real();
  if (!(p > 0)) throw HeraldImpossible("channel has zero mean herald probability", p);
  const CMatrix su = unitary_superop(unitary);
  return (su.adjoint() * superop).trace().real() / (p * static_cast<double>(d * d));
}

void to_json(json& j, const GateResult& r) {
  j = json{{"variant", to_string(r.variant)},
           {"level", to_string(r.level)},
           {"t_gate", r.t_gate},
           {"T_pi", r.T_pi},
           {"P_success", r.P_success},
           {"P_analytic", r.P_analytic},
           {"fidelity", r.fidelity},
           {"infidelity", r.infidelity},
           {"correction_phases", r.correction_phases},
           {"leakage", r.leakage},
           {"shifts", r.shifts},
           {"Gamma", r.Gamma},
           {"integrator",
            {{"method", r.stats.method},
             {"steps", r.stats.steps},
             {"rejected", r.stats.rejected},
             {"reachable_states", r.stats.reachable_states}}},
           {"max_trace_drift", r.max_trace_drift},
           {"min_eigenvalue", r.min_eigenvalue},
           {"runtime_s", r.runtime_s},
           {"params_echo", r.params_echo}};
  if (r.process_fidelity) j["process_fidelity"] = *r.process_fidelity;
}

namespace {

ModelOperators build_model(Setup setup, const PhysicalParams& p, const ModelOptions& o) {
  return setup == Setup::Nonlocal ? build_nonlocal_model(p, o) : build_dfs_model(p, o);
}

std::array<double, 3> balanced_shifts(Setup setup, const PhysicalParams& p, double Gamma) {
  return setup == Setup::Nonlocal ? balanced_shifts_nonlocal(p, Gamma) : balanced_shifts_dfs(p, Gamma);
}

/// Sector table with the asymptotic shifts and a common decay rate.
EffectiveModel balanced_model(Setup setup, const PhysicalParams& p) {
  const double Gamma = target_gamma(p);
  const auto s = balanced_shifts(setup, p, Gamma);
  EffectiveModel e;
  e.setup = setup;
  e.provenance = Provenance::Balanced;
  const Complex rg = p.Omega * std::sqrt(p.gamma_g) / (2.0 * p.Delta_E2);
  for (int m = 0; m < 2; ++m) {
    for (int n = 0; n < 2; ++n) {
      auto& r = e.sector(m, n);
      r.m = m;
      r.n = n;
      r.Delta = s[static_cast<std::size_t>(m + n)];
      r.rates["g"] = rg;
      r.Gamma = Gamma;
    }
  }
  return e;
}

void force_balance(EffectiveModel& e, double Gamma) {
  const Complex rg = e.sector(0, 0).rate("g");
  for (auto& s : e.sectors) {
    s.Gamma = Gamma;
    s.rates["g"] = rg;
  }
}

CMatrix plus_plus() {
  CVector v = CVector::Constant(4, 0.5);
  return v * v.adjoint();
}

Index full_index(const ModelOperators& m, int q1, int q2) {
  std::vector<std::string> labels(m.space->num_slots(), "0");
  labels[m.q1] = std::to_string(q1);
  labels[m.q2] = std::to_string(q2);
  labels[m.aux] = "g";
  return m.space->index_of_labels(labels);
}

CMatrix full_initial(const ModelOperators& m, const CMatrix& rho_q) {
  CMatrix r = CMatrix::Zero(m.space->dim(), m.space->dim());
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) r(full_index(m, i / 2, i % 2), full_index(m, j / 2, j % 2)) = rho_q(i, j);
  return r;
}

/// Unnormalized <g| Tr_cav[rho] |g> on the qubit levels {0,1}^2. Works for
/// non-Hermitian inputs, where no herald probability exists.
CMatrix heralded_block(const ModelOperators& m, const CMatrix& rho) {
  const auto& sp = *m.space;
  const int g = sp.slot(m.aux).level_index("g");
  std::map<Index, std::vector<std::pair<Index, int>>> by_rest;  // mode code -> (state, qubit index)
  for (Index s = 0; s < sp.dim(); ++s) {
    auto st = sp.state(s);
    if (st[m.aux] != g || st[m.q1] > 1 || st[m.q2] > 1) continue;
    Index code = 0;
    for (auto k : m.modes) code = code * sp.slot(k).dim() + st[k];
    by_rest[code].emplace_back(s, 2 * st[m.q1] + st[m.q2]);
  }
  CMatrix out = CMatrix::Zero(4, 4);
  for (const auto& [code, members] : by_rest)
    for (const auto& [s, a] : members)
      for (const auto& [t, b] : members) out(a, b) += rho(s, t);
  return out;
}

struct Plan {
  std::optional<ModelOperators> model;
  EffectiveModel eff;
  std::array<double, 3> shifts{};
  PulseTiming timing;
  double Gamma = 0.0;
  CMatrix UU;
};

Plan make_plan(Setup setup, const PhysicalParams& p, const GateOptions& opts) {
  Plan plan;
  plan.Gamma = target_gamma(p);
  if (opts.level == Level::Analytic) {
    plan.eff = balanced_model(setup, p);
  } else {
    plan.model = build_model(setup, p, opts.model);
    plan.eff = effective_operators_numeric(*plan.model);
    if (opts.force_balanced_rates) force_balance(plan.eff, plan.Gamma);
  }
  plan.shifts = plan.eff.shifts();
  plan.timing = pulse_time(plan.shifts);
  const CMatrix U = single_qubit_correction(plan.shifts[0], plan.shifts[1], plan.timing.t_CZ);
  plan.UU = Eigen::kroneckerProduct(U, U);
  return plan;
}

}  // namespace

GateResult run_cphase(Setup setup, const PhysicalParams& p, const GateOptions& opts) {
  const auto start = std::chrono::steady_clock::now();
  p.validate();
  Plan plan = make_plan(setup, p, opts);
  const double t = plan.timing.t_CZ;

  GateResult r;
  r.variant = setup == Setup::Nonlocal ? GateVariant::NonlocalCZ : GateVariant::LocalCZ_DFS;
  r.level = opts.level;
  r.t_gate = t;
  r.T_pi = plan.timing.T_pi;
  r.shifts = plan.shifts;
  r.Gamma = plan.Gamma;
  r.P_analytic = std::exp(-plan.Gamma * t);
  r.correction_phases = {plan.shifts[0] * t / 2.0, (2.0 * plan.shifts[1] - plan.shifts[0]) * t / 2.0};
  r.params_echo = p;

  CMatrix rho_q;
  if (opts.level == Level::FullME) {
    const auto& m = *plan.model;
    DensityMatrix rho0(m.space, full_initial(m, plus_plus()));
    auto ev = evolve(rho0, m, t, opts.evolve);
    auto h = herald_and_reduce(ev.rho_final, m);
    r.P_success = h.P;
    r.leakage = h.leakage;
    rho_q = h.rho_qubit;
    r.stats = ev.stats;
    r.max_trace_drift = ev.max_trace_drift;
    r.min_eigenvalue = ev.min_eigenvalue;
  } else {
    auto ev = evolve_effective(plus_plus(), plan.eff, t);
    if (!(ev.P >= 1e-12)) throw HeraldImpossible("effective herald probability vanishes", ev.P);
    r.P_success = ev.P;
    rho_q = ev.rho_qubit / ev.P;
    r.stats.method = opts.level == Level::Analytic ? "closed-form" : "effective";
  }
  r.rho_qubit = plan.UU * rho_q * plan.UU.adjoint();
  const CVector psi = cz_target_state();
  r.fidelity = std::clamp((psi.adjoint() * r.rho_qubit * psi)(0).real(), 0.0, 1.0);
  r.infidelity = 1.0 - r.fidelity;

  if (opts.process_fidelity) {
    const auto ch = gate_channel(setup, p, opts);
    CMatrix cz = CMatrix::Identity(4, 4);
    cz(3, 3) = -1.0;
    r.process_fidelity = process_fidelity(ch.superop, cz);
  }
  r.runtime_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

GateResult run_cphase_nonlocal(const PhysicalParams& p, const GateOptions& opts) {
  return run_cphase(Setup::Nonlocal, p, opts);
}

GateResult run_cphase_dfs(const PhysicalParams& p, const GateOptions& opts) {
  return run_cphase(Setup::DFS, p, opts);
}

GateChannel gate_channel(Setup setup, const PhysicalParams& p, const GateOptions& opts) {
  p.validate();
  Plan plan = make_plan(setup, p, opts);
  const double t = plan.timing.t_CZ;
  GateChannel ch;
  ch.t_gate = t;
  ch.superop = CMatrix::Zero(16, 16);

  std::optional<LindbladPropagator> prop;
  std::optional<LindbladPropagator::StepMap> step;
  if (opts.level == Level::FullME && opts.evolve.method != Method::DormandPrince) {
    const auto& m = *plan.model;
    std::vector<Index> seed;
    for (int i = 0; i < 4; ++i) seed.push_back(full_index(m, i / 2, i % 2));
    prop.emplace(m.H_total, m.lindblad_ops(), seed);
    step = prop->step_map(t);
  }

  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) {
      CMatrix in = CMatrix::Zero(4, 4);
      in(i, j) = 1.0;
      CMatrix out;
      if (opts.level == Level::FullME) {
        const auto& m = *plan.model;
        CMatrix r0 = full_initial(m, in);
        CMatrix rt;
        if (prop) {
          rt = prop->apply(*step, r0);
        } else {
          EvolveOptions eo = opts.evolve;
          eo.samples = 2;
          eo.check_positivity = false;
          rt = evolve_lindblad(DensityMatrix(m.space, r0), m.H_total, m.lindblad_ops(), t, eo).rho_final.matrix();
        }
        out = heralded_block(m, rt);
      } else {
        out = evolve_effective(in, plan.eff, t).rho_qubit;
      }
      out = plan.UU * out * plan.UU.adjoint();
      ch.superop.col(i + 4 * j) = Eigen::Map<const CVector>(out.data(), 16);
    }
  }
  const CMatrix id = CMatrix::Identity(4, 4) / 4.0;
  const CVector mixed = ch.superop * Eigen::Map<const CVector>(id.data(), 16);
  ch.P_mean = (mixed(0) + mixed(5) + mixed(10) + mixed(15)).real();
  return ch;
}

}  // namespace heraldsim
