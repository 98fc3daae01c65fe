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
#include <random>

#include "heraldsim/dynamics.hpp"
#include "heraldsim/errors.hpp"
#include "heraldsim/protocol.hpp"
#include "test_util.hpp"

namespace heraldsim {
namespace {

using testing::tuned;

SpacePtr one_mode(int n_max) { return build_space({Subsystem::mode("a", n_max)}); }

CMatrix fock(int dim, int n) {
  CMatrix r = CMatrix::Zero(dim, dim);
  r(n, n) = 1.0;
  return r;
}

TEST(LindbladRhs, AmplitudeDamping) {
  auto s = one_mode(1);
  const double kappa = 2.5;
  const Operator L = std::sqrt(kappa) * annihilator(s, 0);
  const CMatrix d = lindblad_rhs(DensityMatrix(s, fock(2, 1)), Operator::zero(s), {L});
  EXPECT_LT((d - kappa * (fock(2, 0) - fock(2, 1))).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(LindbladRhs, TracelessAndHermitianForRandomInputs) {
  auto s = build_space({Subsystem::atom("q", {"0", "1", "e"}), Subsystem::mode("a", 2)});
  std::mt19937_64 rng(9);
  std::normal_distribution<double> n;
  CMatrix h(s->dim(), s->dim()), l(s->dim(), s->dim());
  for (Index i = 0; i < h.size(); ++i) {
    h(i) = Complex(n(rng), n(rng));
    l(i) = Complex(n(rng), n(rng));
  }
  h = (h + h.adjoint()).eval();
  const Operator H(s, h.sparseView());
  const Operator L(s, l.sparseView());
  for (int k = 0; k < 10; ++k) {
    const CMatrix rho = testing::random_density(s->dim(), rng);
    const CMatrix d = lindblad_rhs(DensityMatrix(s, rho), H, {L});
    EXPECT_LT(std::abs(d.trace()), 1e-12);
    EXPECT_LT((d - d.adjoint()).cwiseAbs().maxCoeff(), 1e-12);
  }
  // rho = H commutes with H.
  EXPECT_LT(lindblad_rhs(DensityMatrix(s, h), H, {}).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_THROW(lindblad_rhs(DensityMatrix(one_mode(1), fock(2, 0)), H, {}), std::invalid_argument);
}

TEST(DormandPrince, ExactExponentialWithDenseOutput) {
  // y' = A y with A diagonal complex; check every dense-output sample.
  CMatrix A = CMatrix::Zero(2, 2);
  A(0, 0) = Complex(-0.3, 2.0);
  A(1, 1) = Complex(-1.0, -0.5);
  DormandPrince dp([&](double, const CMatrix& y, CMatrix& dy) { dy = A * y; }, {1e-10, 1e-13});
  CMatrix y0 = CMatrix::Ones(2, 1);
  std::vector<double> ts{0.0, 0.37, 1.1, 2.9, 4.0};
  double worst = 0.0;
  const CMatrix yf = dp.integrate(y0, 0.0, 4.0, ts, [&](std::size_t k, const CMatrix& y) {
    for (int i = 0; i < 2; ++i) worst = std::max(worst, std::abs(y(i) - std::exp(A(i, i) * ts[k])));
  });
  EXPECT_LT(worst, 1e-8);
  EXPECT_LT(std::abs(yf(0) - std::exp(A(0, 0) * 4.0)), 1e-9);
  EXPECT_GT(dp.stats().accepted, 0u);
}

TEST(DormandPrince, ExhaustedBudgetThrows) {
  DormandPrince::Options o;
  o.max_steps = 3;
  DormandPrince dp([](double, const CMatrix& y, CMatrix& dy) { dy = Complex(0, 50.0) * y; }, o);
  EXPECT_THROW(dp.integrate(CMatrix::Ones(1, 1), 0.0, 100.0, {}, {}), IntegratorFailure);
}

class CavityDecay : public ::testing::TestWithParam<Method> {};

TEST_P(CavityDecay, MeanPhotonNumberDecaysExponentially) {
  auto s = one_mode(3);
  const double kappa = 1.7;
  const Operator a = annihilator(s, 0);
  const CMatrix n = (a.adjoint() * a).dense();
  EvolveOptions o;
  o.method = GetParam();
  o.samples = 11;
  const double t = 2.0;
  const auto res = evolve_lindblad(DensityMatrix(s, fock(4, 2)), Operator::zero(s), {std::sqrt(kappa) * a}, t, o);
  EXPECT_NEAR((n * res.rho_final.matrix()).trace().real(), 2.0 * std::exp(-kappa * t), 1e-8);
  EXPECT_LT(res.max_trace_drift, 1e-8);
  EXPECT_GE(res.min_eigenvalue, -1e-9);
  EXPECT_EQ(res.stats.method, to_string(GetParam()));
}

INSTANTIATE_TEST_SUITE_P(Methods, CavityDecay, ::testing::Values(Method::DormandPrince, Method::Exponential));

TEST(Evolve, NoDriveGroundStateIsStationary) {
  auto p = tuned(Setup::Nonlocal, 100, 10, 100);
  p.Omega = 0.0;
  const auto m = build_nonlocal_model(p);
  std::vector<std::string> lab{"1", "0", "g", "0", "0", "0"};
  CVector psi = CVector::Zero(m.space->dim());
  psi(m.space->index_of_labels(lab)) = 1.0;
  const auto rho0 = DensityMatrix::pure(m.space, psi);
  for (Method meth : {Method::Exponential, Method::DormandPrince}) {
    EvolveOptions o;
    o.method = meth;
    o.samples = 5;
    const auto res = evolve(rho0, m, 500.0, o);
    EXPECT_LT((res.rho_final.matrix() - rho0.matrix()).cwiseAbs().maxCoeff(), 1e-12);
    for (double P : res.herald_prob_trace) EXPECT_NEAR(P, 1.0, 1e-12);
    const auto h = herald_and_reduce(res.rho_final, m);
    EXPECT_EQ(h.leakage, 0.0);
  }
}

TEST(Evolve, ExponentialAgreesWithDormandPrinceOnGateModel) {
  // Weak-coupling point on the cap-1 space keeps explicit integration cheap.
  const auto p = tuned(Setup::Nonlocal, 20, 2, 60);
  ModelOptions mo;
  mo.excitation_cap = 1;
  const auto m = build_nonlocal_model(p, mo);
  CMatrix rq = CMatrix::Constant(4, 4, 0.25);
  CMatrix r0 = CMatrix::Zero(m.space->dim(), m.space->dim());
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      std::vector<std::string> a{std::to_string(i / 2), std::to_string(i % 2), "g", "0", "0", "0"};
      std::vector<std::string> b{std::to_string(j / 2), std::to_string(j % 2), "g", "0", "0", "0"};
      r0(m.space->index_of_labels(a), m.space->index_of_labels(b)) = rq(i, j);
    }
  const DensityMatrix rho0(m.space, r0);
  EvolveOptions ex, dp;
  ex.method = Method::Exponential;
  dp.method = Method::DormandPrince;
  dp.tol = 1e-10;
  ex.samples = dp.samples = 3;
  const double t = 40.0;
  const auto a = evolve(rho0, m, t, ex);
  const auto b = evolve(rho0, m, t, dp);
  EXPECT_LT(trace_distance(a.rho_final.matrix(), b.rho_final.matrix()), 1e-8);
  EXPECT_GT(b.stats.steps, 10u);
  EXPECT_LT(b.max_trace_drift, 1e-8);
}

TEST(Evolve, HalvingToleranceConverges) {
  auto s = build_space({Subsystem::atom("q", {"g", "e"}, {"e"}), Subsystem::mode("a", 2)});
  const Operator a = annihilator(s, 1);
  const Operator sm = transition(s, 0, "g", "e");
  const Operator H = 3.0 * (sm.adjoint() * a + a.adjoint() * sm) + 0.7 * (a.adjoint() * a);
  CVector psi = CVector::Zero(s->dim());
  psi(s->index_of_labels(std::vector<std::string>{"e", "1"})) = 1.0;
  const auto rho0 = DensityMatrix::pure(s, psi);
  const std::vector<Operator> Ls{std::sqrt(0.4) * a, std::sqrt(0.2) * sm};
  EvolveOptions o;
  o.method = Method::DormandPrince;
  o.samples = 2;
  const double tol = 1e-7;
  o.tol = tol;
  const auto r1 = evolve_lindblad(rho0, H, Ls, 5.0, o);
  o.tol = tol / 2;
  const auto r2 = evolve_lindblad(rho0, H, Ls, 5.0, o);
  EXPECT_LT(trace_distance(r1.rho_final.matrix(), r2.rho_final.matrix()), 10 * tol);
  o.method = Method::Exponential;
  const auto exact = evolve_lindblad(rho0, H, Ls, 5.0, o);
  EXPECT_LT(trace_distance(r2.rho_final.matrix(), exact.rho_final.matrix()), 10 * tol);
}

TEST(Evolve, RejectsBadArguments) {
  auto s = one_mode(1);
  const DensityMatrix r(s, fock(2, 0));
  EvolveOptions o;
  EXPECT_THROW(evolve_lindblad(r, Operator::zero(s), {}, -1.0, o), std::invalid_argument);
  o.tol = 0;
  EXPECT_THROW(evolve_lindblad(r, Operator::zero(s), {}, 1.0, o), std::invalid_argument);
}

TEST(Propagator, ReachableComponentsOfGateModel) {
  const auto p = tuned(Setup::Nonlocal, 600, 10, 180);
  const auto m = build_nonlocal_model(p);
  std::vector<Index> seed;
  for (const char* q1 : {"0", "1"})
    for (const char* q2 : {"0", "1"}) {
      std::vector<std::string> lab{q1, q2, "g", "0", "0", "0"};
      seed.push_back(m.space->index_of_labels(lab));
    }
  LindbladPropagator prop(m.H_total, m.lindblad_ops(), seed);
  EXPECT_EQ(prop.reachable_states(), 36u);
  std::vector<std::size_t> sizes;
  for (const auto& c : prop.components()) sizes.push_back(c.size());
  std::sort(sizes.begin(), sizes.end());
  EXPECT_EQ(sizes, (std::vector<std::size_t>{7, 9, 9, 11}));
  CMatrix outside = CMatrix::Zero(m.space->dim(), m.space->dim());
  outside(m.space->dim() - 1, m.space->dim() - 1) = 1.0;
  EXPECT_THROW(prop.propagate(outside, 1.0), std::invalid_argument);
}

TEST(EvolveEffective, IdentityAtZeroAndBalancedDecay) {
  std::mt19937_64 rng(4);
  const CMatrix rho = testing::random_density(4, rng);
  const auto p = tuned(Setup::Nonlocal, 600, 10, 180);
  const auto eff = effective_operators_numeric(build_nonlocal_model(p));
  const auto e0 = evolve_effective(rho, eff, 0.0);
  EXPECT_LT((e0.rho_qubit - rho).cwiseAbs().maxCoeff(), 1e-15);
  EXPECT_NEAR(e0.P, 1.0, 1e-15);

  auto bal = eff;
  const double G = target_gamma(p);
  for (auto& s : bal.sectors) s.Gamma = G;
  for (double t : {10.0, 1000.0, 6000.0}) EXPECT_NEAR(evolve_effective(rho, bal, t).P, std::exp(-G * t), 1e-15);
}

TEST(EvolveEffective, MatchesIntegratedEffectiveMasterEquation) {
  const auto p = tuned(Setup::Nonlocal, 600, 10, 180);
  const auto eff = effective_operators_numeric(build_nonlocal_model(p));
  const auto em = effective_master_operators(eff);
  std::vector<Operator> Ls;
  for (const auto& l : em.lindblads) Ls.push_back(l.op);
  const double t_cz = pulse_time(eff.shifts()).t_CZ;
  std::mt19937_64 rng(77);
  double worst = 0.0;
  for (int k = 0; k < 10; ++k) {
    const CMatrix rho = testing::random_density(4, rng);
    for (double frac : {0.3, 1.0}) {
      EvolveOptions o;
      o.method = Method::DormandPrince;
      o.tol = 1e-12;
      o.samples = 2;
      const auto res = evolve_lindblad(effective_initial_state(em, rho), em.H, Ls, frac * t_cz, o);
      const CMatrix num = effective_heralded_block(em, res.rho_final);
      const auto ana = evolve_effective(rho, eff, frac * t_cz);
      worst = std::max(worst, trace_distance(num, ana.rho_qubit));
    }
  }
  EXPECT_LT(worst, 1e-9);
}

TEST(HeraldAndReduce, ProductAndMixture) {
  const auto p = tuned(Setup::Nonlocal, 100, 10, 100);
  const auto m = build_nonlocal_model(p);
  std::mt19937_64 rng(12);
  const CMatrix rq = testing::random_density(4, rng);
  auto idx = [&](int q, const char* aux) {
    std::vector<std::string> lab{std::to_string(q / 2), std::to_string(q % 2), aux, "0", "0", "0"};
    return m.space->index_of_labels(lab);
  };
  CMatrix r = CMatrix::Zero(m.space->dim(), m.space->dim());
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) r(idx(i, "g"), idx(j, "g")) = rq(i, j);
  auto h = herald_and_reduce(DensityMatrix(m.space, r), m);
  EXPECT_NEAR(h.P, 1.0, 1e-15);
  EXPECT_LT((h.rho_qubit - rq).cwiseAbs().maxCoeff(), 1e-15);

  CMatrix mix = 0.5 * r;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) mix(idx(i, "f"), idx(j, "f")) = 0.5 * rq(i, j);
  h = herald_and_reduce(DensityMatrix(m.space, mix), m);
  EXPECT_NEAR(h.P, 0.5, 1e-15);

  CMatrix none = CMatrix::Zero(m.space->dim(), m.space->dim());
  none(idx(0, "f"), idx(0, "f")) = 1.0;
  EXPECT_THROW(herald_and_reduce(DensityMatrix(m.space, none), m), HeraldImpossible);
}

}  // namespace
}  // namespace heraldsim
