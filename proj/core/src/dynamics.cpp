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

#include "heraldsim/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>
#include <stdexcept>

#include "heraldsim/errors.hpp"

namespace heraldsim {

using namespace std::complex_literals;

// ---------------------------------------------------------------------------
// Generator

LindbladKernel::LindbladKernel(const Operator& H, const std::vector<Operator>& Ls) {
  h_nh_ = H.matrix();
  for (const auto& L : Ls) {
    if (L.space() != H.space()) throw std::invalid_argument("collapse operator lives on a different space");
    SparseMatrix ldl = L.matrix().adjoint() * L.matrix();
    h_nh_ -= 0.5i * ldl;
    ls_.push_back(L.matrix());
    ls_dag_.push_back(L.matrix().adjoint());
  }
  h_nh_.makeCompressed();
  h_nh_dag_ = h_nh_.adjoint();
}

void LindbladKernel::apply(const CMatrix& rho, CMatrix& out) const {
  if (rho.rows() != dim() || rho.cols() != dim()) throw std::invalid_argument("state shape does not match kernel");
  CMatrix hr = h_nh_ * rho;
  CMatrix rh = rho * h_nh_dag_;
  out.noalias() = -1i * (hr - rh);
  for (std::size_t j = 0; j < ls_.size(); ++j) {
    if (ls_[j].nonZeros() == 0) continue;
    CMatrix lr = ls_[j] * rho;
    out.noalias() += lr * ls_dag_[j];
  }
}

CMatrix lindblad_rhs(const DensityMatrix& rho, const Operator& H, const std::vector<Operator>& Ls) {
  if (rho.space() != H.space()) throw std::invalid_argument("state and Hamiltonian live on different spaces");
  return LindbladKernel(H, Ls)(rho.matrix());
}

// ---------------------------------------------------------------------------
// Dormand-Prince 5(4)

namespace dp {
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double a71 = 35.0 / 384, a73 = 500.0 / 1113, a74 = 125.0 / 192, a75 = -2187.0 / 6784, a76 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                 e6 = 22.0 / 525, e7 = -1.0 / 40;
// Continuous extension.
constexpr double d1 = -12715105075.0 / 11282082432, d3 = 87487479700.0 / 32700410799,
                 d4 = -10690763975.0 / 1880347072, d5 = 701980252875.0 / 199316789632,
                 d6 = -1453857185.0 / 822651844, d7 = 69997945.0 / 29380423;
}  // namespace dp

DormandPrince::DormandPrince(Rhs f, Options opts) : f_(std::move(f)), opts_(opts) {
  if (!(opts_.rtol > 0) || !(opts_.atol >= 0)) throw std::invalid_argument("tolerances must be positive");
}

CMatrix DormandPrince::integrate(const CMatrix& y0, double t0, double t_final, std::span<const double> sample_times,
                                 const std::function<void(std::size_t, const CMatrix&)>& on_sample) {
  using namespace dp;
  if (t_final < t0) throw std::invalid_argument("t_final must not precede t0");
  stats_ = {};
  auto scale_of = [&](const CMatrix& a, const CMatrix& b) {
    return (opts_.atol + opts_.rtol * a.cwiseAbs().cwiseMax(b.cwiseAbs()).array()).matrix().eval();
  };
  auto rms = [](const Eigen::ArrayXXd& x) { return std::sqrt(x.square().mean()); };

  std::size_t next = 0;
  auto emit_until = [&](double t_hi, auto&& value_at) {
    while (next < sample_times.size() && sample_times[next] <= t_hi) {
      on_sample(next, value_at(sample_times[next]));
      ++next;
    }
  };

  CMatrix y = y0;
  double t = t0;
  emit_until(t0, [&](double) { return y; });
  if (t_final == t0) return y;

  CMatrix k1(y.rows(), y.cols()), k2 = k1, k3 = k1, k4 = k1, k5 = k1, k6 = k1, k7 = k1, tmp = k1;
  f_(t, y, k1);
  ++stats_.rhs_calls;

  double h = opts_.h_initial;
  if (!(h > 0)) {
    const auto sc = scale_of(y, y);
    const double d0 = rms(y.cwiseAbs().array() / sc.array());
    const double d1n = rms(k1.cwiseAbs().array() / sc.array());
    h = (d0 < 1e-5 || d1n < 1e-5) ? 1e-6 : 0.01 * d0 / d1n;
  }
  h = std::min(h, t_final - t0);

  const double span = t_final - t0;
  while (t < t_final) {
    if (stats_.accepted + stats_.rejected >= opts_.max_steps) {
      std::ostringstream os;
      os << "step budget of " << opts_.max_steps << " exhausted at t = " << t << " of " << t_final
         << " (last h = " << h << "); the problem is likely stiff";
      throw IntegratorFailure(os.str());
    }
    bool last = false;
    if (t + h >= t_final || (t_final - (t + h)) < 1e-12 * span) {
      h = t_final - t;
      last = true;
    }
    if (h < 1e-14 * std::max(std::abs(t), span)) {
      std::ostringstream os;
      os << "step size underflow (h = " << h << ") at t = " << t << "; requested tolerance " << opts_.rtol
         << " cannot be met";
      throw IntegratorFailure(os.str());
    }

    tmp = y + h * (a21 * k1);
    f_(t + c2 * h, tmp, k2);
    tmp = y + h * (a31 * k1 + a32 * k2);
    f_(t + c3 * h, tmp, k3);
    tmp = y + h * (a41 * k1 + a42 * k2 + a43 * k3);
    f_(t + c4 * h, tmp, k4);
    tmp = y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4);
    f_(t + c5 * h, tmp, k5);
    tmp = y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5);
    f_(t + h, tmp, k6);
    CMatrix y_new = y + h * (a71 * k1 + a73 * k3 + a74 * k4 + a75 * k5 + a76 * k6);
    f_(t + h, y_new, k7);
    stats_.rhs_calls += 6;

    const CMatrix err = h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);
    const double en = rms(err.cwiseAbs().array() / scale_of(y, y_new).array());

    if (en <= 1.0) {
      ++stats_.accepted;
      stats_.max_error_estimate = std::max(stats_.max_error_estimate, en);
      const double t_new = last ? t_final : t + h;
      if (next < sample_times.size() && sample_times[next] <= t_new) {
        const CMatrix ydiff = y_new - y;
        const CMatrix bspl = h * k1 - ydiff;
        const CMatrix r4 = ydiff - h * k7 - bspl;
        const CMatrix r5 = h * (d1 * k1 + d3 * k3 + d4 * k4 + d5 * k5 + d6 * k6 + d7 * k7);
        const double t_old = t;
        emit_until(t_new, [&](double ts) -> CMatrix {
          if (ts >= t_new) return y_new;
          const double th = (ts - t_old) / h;
          const double th1 = 1.0 - th;
          return y + th * (ydiff + th1 * (bspl + th * (r4 + th1 * r5)));
        });
      }
      y = std::move(y_new);
      t = t_new;
      k1.swap(k7);  // first-same-as-last
    } else {
      ++stats_.rejected;
      last = false;
    }
    const double fac = en > 0 ? 0.9 * std::pow(en, -0.2) : 5.0;
    h *= std::clamp(fac, 0.2, 5.0);
    if (last) break;
  }
  return y;
}

// ---------------------------------------------------------------------------
// Evolution drivers

std::string to_string(Method m) {
  switch (m) {
    case Method::Auto:
      return "auto";
    case Method::DormandPrince:
      return "dopri5";
    case Method::Exponential:
      return "exponential";
  }
  return "?";
}

EvolutionResult evolve_lindblad(const DensityMatrix& rho0, const Operator& H, const std::vector<Operator>& Ls,
                                double t_final, const EvolveOptions& opts, std::optional<HeraldSpec> herald) {
  if (rho0.space() != H.space()) throw std::invalid_argument("state and Hamiltonian live on different spaces");
  if (!(t_final >= 0) || !std::isfinite(t_final)) throw std::invalid_argument("t_final must be finite and >= 0");
  if (!(opts.tol > 0)) throw std::invalid_argument("tol must be positive");
  if (opts.samples < 2) throw std::invalid_argument("need at least two samples");

  const auto& space = rho0.space();
  std::vector<Index> herald_idx;
  if (herald) {
    const int lv = space->slot(herald->slot).level_index(herald->level);
    for (Index i = 0; i < space->dim(); ++i)
      if (space->state(i)[herald->slot] == lv) herald_idx.push_back(i);
  }

  EvolutionResult res{rho0, {}, {}, {}, 0.0, 0.0, 0.0};
  res.times.resize(opts.samples);
  for (std::size_t k = 0; k < opts.samples; ++k)
    res.times[k] = k + 1 == opts.samples ? t_final : t_final * static_cast<double>(k) / static_cast<double>(opts.samples - 1);
  res.herald_prob_trace.assign(opts.samples, 0.0);
  const double tr0 = rho0.trace().real();
  res.min_eigenvalue = INFINITY;

  auto observe = [&](std::size_t k, const CMatrix& r) {
    double p = 0.0;
    for (Index i : herald_idx) p += r(i, i).real();
    res.herald_prob_trace[k] = p;
    res.max_trace_drift = std::max(res.max_trace_drift, std::abs(r.trace() - tr0));
    res.max_hermiticity_error = std::max(res.max_hermiticity_error, (r - r.adjoint()).cwiseAbs().maxCoeff());
    if (opts.check_positivity) {
      res.min_eigenvalue = std::min(res.min_eigenvalue, DensityMatrix(space, r).min_eigenvalue());
    }
  };

  Method method = opts.method;
  std::optional<LindbladPropagator> prop;
  if (method != Method::DormandPrince) {
    const auto seed = support_of(rho0.matrix());
    prop.emplace(H, Ls, seed);
    if (method == Method::Auto) {
      method = prop->reachable_states() <= opts.exponential_limit ? Method::Exponential : Method::DormandPrince;
    }
  }
  res.stats.method = to_string(method);

  if (method == Method::Exponential) {
    res.stats.reachable_states = prop->reachable_states();
    const double dt = t_final / static_cast<double>(opts.samples - 1);
    const auto step = prop->step_map(dt);
    CMatrix r = rho0.matrix();
    observe(0, r);
    for (std::size_t k = 1; k + 1 < opts.samples; ++k) {
      r = prop->apply(step, r);
      observe(k, r);
    }
    // The final state comes from one exact exponential, not the grid.
    CMatrix fin = prop->propagate(rho0.matrix(), t_final);
    observe(opts.samples - 1, fin);
    res.rho_final = DensityMatrix(space, std::move(fin));
    res.stats.steps = opts.samples - 1;
  } else {
    LindbladKernel kernel(H, Ls);
    DormandPrince::Options dopts;
    dopts.rtol = opts.tol;
    dopts.atol = opts.tol * 1e-3;
    DormandPrince integ([&](double, const CMatrix& y, CMatrix& dy) { kernel.apply(y, dy); }, dopts);
    CMatrix fin = integ.integrate(rho0.matrix(), 0.0, t_final, res.times, observe);
    res.rho_final = DensityMatrix(space, std::move(fin));
    res.stats.steps = integ.stats().accepted;
    res.stats.rejected = integ.stats().rejected;
    res.stats.max_error_estimate = integ.stats().max_error_estimate;
    res.stats.reachable_states = support_of(res.rho_final.matrix()).size();
  }
  if (!opts.check_positivity) res.min_eigenvalue = std::nan("");
  return res;
}

EvolutionResult evolve(const DensityMatrix& rho0, const ModelOperators& m, double t_final, const EvolveOptions& opts) {
  if (rho0.space() != m.space) throw std::invalid_argument("initial state is not on the model space");
  return evolve_lindblad(rho0, m.H_total, m.lindblad_ops(), t_final, opts, HeraldSpec{m.aux, "g"});
}

// ---------------------------------------------------------------------------
// Effective ground-space dynamics

EffectiveEvolution evolve_effective(const CMatrix& rho_qubit0, const EffectiveModel& eff, double t) {
  if (rho_qubit0.rows() != 4 || rho_qubit0.cols() != 4) throw std::invalid_argument("qubit state must be 4x4");
  EffectiveEvolution out;
  out.rho_qubit = CMatrix::Zero(4, 4);
  for (int i = 0; i < 4; ++i) {
    const auto& si = eff.sectors[static_cast<std::size_t>(i)];
    const Complex ri = si.rate("g");
    for (int j = 0; j < 4; ++j) {
      const auto& sj = eff.sectors[static_cast<std::size_t>(j)];
      const Complex rj = sj.rate("g");
      const Complex expo = -1i * (si.Delta - sj.Delta) * t - 0.5 * (si.Gamma + sj.Gamma) * t +
                           (ri * std::conj(rj) - 0.5 * std::norm(ri) - 0.5 * std::norm(rj)) * t;
      out.rho_qubit(i, j) = rho_qubit0(i, j) * std::exp(expo);
    }
  }
  out.P = out.rho_qubit.trace().real();
  return out;
}

EffectiveMaster effective_master_operators(const EffectiveModel& eff) {
  auto space = build_space({Subsystem::atom("q1", {"0", "1", "d"}), Subsystem::atom("q2", {"0", "1", "d"}),
                            Subsystem::atom("aux", {"g", "f"})});
  EffectiveMaster em{space, Operator::zero(space), {}, 2};
  const Operator gg = transition(space, 2, "g", "g");
  const Operator fg = transition(space, 2, "f", "g");
  auto proj = [&](int m, int n) {
    return transition(space, 0, std::to_string(m), std::to_string(m)) *
           transition(space, 1, std::to_string(n), std::to_string(n));
  };

  std::set<std::string> channels;
  for (const auto& s : eff.sectors)
    for (const auto& [ch, r] : s.rates) channels.insert(ch);

  for (int m = 0; m < 2; ++m)
    for (int n = 0; n < 2; ++n) em.H += eff.sector(m, n).Delta * (gg * proj(m, n));

  for (const auto& ch : channels) {
    Operator L = Operator::zero(space);
    for (int m = 0; m < 2; ++m) {
      for (int n = 0; n < 2; ++n) {
        const Complex r = eff.sector(m, n).rate(ch);
        if (r == Complex{}) continue;
        if (ch == "g") {
          L += r * (gg * proj(m, n));
        } else if (ch == "1") {
          if (m == 1) L += r * (fg * transition(space, 0, "d", "1") * proj(m, n));
        } else if (ch == "2") {
          if (n == 1) L += r * (fg * transition(space, 1, "d", "1") * proj(m, n));
        } else {
          L += r * (fg * proj(m, n));
        }
      }
    }
    em.lindblads.push_back({ch, L.with_label("L_eff_" + ch)});
  }
  em.H = em.H.with_label("H_eff");
  return em;
}

DensityMatrix effective_initial_state(const EffectiveMaster& em, const CMatrix& rho_qubit0) {
  if (rho_qubit0.rows() != 4 || rho_qubit0.cols() != 4) throw std::invalid_argument("qubit state must be 4x4");
  CMatrix r = CMatrix::Zero(em.space->dim(), em.space->dim());
  auto idx = [&](int i) {
    const std::string labels[3] = {std::to_string(i / 2), std::to_string(i % 2), "g"};
    return em.space->index_of_labels(labels);
  };
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) r(idx(i), idx(j)) = rho_qubit0(i, j);
  return DensityMatrix(em.space, std::move(r));
}

CMatrix effective_heralded_block(const EffectiveMaster& em, const DensityMatrix& rho) {
  CMatrix out(4, 4);
  auto idx = [&](int i) {
    const std::string labels[3] = {std::to_string(i / 2), std::to_string(i % 2), "g"};
    return em.space->index_of_labels(labels);
  };
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) out(i, j) = rho.matrix()(idx(i), idx(j));
  return out;
}

HeraldedState herald_and_reduce(const DensityMatrix& rho, const ModelOperators& m) {
  if (rho.space() != m.space) throw std::invalid_argument("state is not on the model space");
  auto h = herald_project(rho, m.aux, "g");
  // q1 and q2 keep positions 0 and 1 after the auxiliary slot is removed.
  const std::size_t keep[2] = {m.q1, m.q2};
  DensityMatrix q = partial_trace(h.state, keep);
  const auto& qs = *q.space();
  HeraldedState out;
  out.P = h.probability;
  out.rho_qubit = CMatrix::Zero(4, 4);
  for (int i = 0; i < 4; ++i) {
    const int li[2] = {i / 2, i % 2};
    for (int j = 0; j < 4; ++j) {
      const int lj[2] = {j / 2, j % 2};
      out.rho_qubit(i, j) = q.matrix()(*qs.index_of(li), *qs.index_of(lj));
    }
  }
  out.leakage = std::max(0.0, 1.0 - out.rho_qubit.trace().real());
  return out;
}

}  // namespace heraldsim
