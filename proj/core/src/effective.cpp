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

#include "heraldsim/effective.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>
#include <stdexcept>

#include "heraldsim/errors.hpp"

namespace heraldsim {

using namespace std::complex_literals;
using nlohmann::json;

namespace {

const double kSqrt2 = std::sqrt(2.0);
constexpr double kPoleTol = 1e-12;
constexpr double kMaxCondition = 1e12;

void check_pole(Complex value, double scale, const char* what) {
  if (!(std::abs(value) > kPoleTol * scale)) {
    std::ostringstream os;
    os << what << " vanishes (|value| = " << std::abs(value) << ", scale = " << scale << ")";
    throw DegenerateParameters(os.str());
  }
}

void finish(SectorRecord& s) { s.Gamma = assemble_gamma(s); }

Operator h_nh_of(const ModelOperators& m) {
  Operator h = m.H_e;
  for (const auto& l : m.lindblads) h += (-0.5i) * (l.op.adjoint() * l.op);
  return h.with_label("H_NH");
}

ExcitedBlock block_from(const ModelOperators& m, const Operator& h_nh, int qm, int qn) {
  if ((qm != 0 && qm != 1) || (qn != 0 && qn != 1)) throw std::invalid_argument("sector indices must be 0 or 1");
  const auto& space = *m.space;
  std::vector<std::string> labels(space.num_slots(), "0");
  labels[m.q1] = std::to_string(qm);
  labels[m.q2] = std::to_string(qn);
  labels[m.aux] = "g";
  ExcitedBlock b;
  b.ground = space.index_of_labels(labels);

  const SparseMatrix& V = m.V.matrix();
  const SparseMatrix& H = m.H_e.matrix();
  std::set<Index> seen;
  std::vector<Index> frontier;
  for (Index r = 0; r < V.rows(); ++r) {
    if (std::abs(V.coeff(r, b.ground)) > 0.0 && seen.insert(r).second) frontier.push_back(r);
  }
  // H_e is Hermitian, so the row pattern equals the column pattern.
  while (!frontier.empty()) {
    const Index i = frontier.back();
    frontier.pop_back();
    for (SparseMatrix::InnerIterator it(H, i); it; ++it) {
      const Index j = it.col();
      if (j != b.ground && seen.insert(j).second) frontier.push_back(j);
    }
  }
  b.states.assign(seen.begin(), seen.end());
  const Index k = static_cast<Index>(b.states.size());
  b.h_nh = CMatrix::Zero(k, k);
  b.drive = CVector::Zero(k);
  for (Index a = 0; a < k; ++a) {
    b.drive(a) = V.coeff(b.states[a], b.ground);
    for (Index c = 0; c < k; ++c) b.h_nh(a, c) = h_nh.matrix().coeff(b.states[a], b.states[c]);
  }
  return b;
}

}  // namespace

std::string to_string(Provenance p) {
  switch (p) {
    case Provenance::NumericInversion:
      return "NumericInversion";
    case Provenance::ClosedForm:
      return "ClosedForm";
    case Provenance::WeakDrive:
      return "WeakDrive";
    case Provenance::Balanced:
      return "Balanced";
  }
  return "?";
}

Complex SectorRecord::rate(const std::string& channel) const {
  auto it = rates.find(channel);
  return it == rates.end() ? Complex{} : it->second;
}

double assemble_gamma(const SectorRecord& s) {
  double G = 0.0;
  for (const auto& [ch, r] : s.rates) {
    if (ch == "g") continue;
    if (ch == "1" && s.m != 1) continue;
    if (ch == "2" && s.n != 1) continue;
    G += std::norm(r);
  }
  return G;
}

std::array<double, 3> EffectiveModel::shifts() const {
  return {sector(0, 0).Delta, sector(1, 0).Delta, sector(1, 1).Delta};
}

SectorGap sector_gap(const SectorRecord& a, const SectorRecord& b) {
  auto rel = [](double u, double v, double floor) {
    const double s = std::max({std::abs(u), std::abs(v), floor});
    return s > 0 ? std::abs(u - v) / s : 0.0;
  };
  double total = 0.0;
  for (const auto& [ch, r] : a.rates) total += std::norm(r);
  SectorGap g;
  g.Delta = rel(a.Delta, b.Delta, 0.0);
  g.Gamma = rel(a.Gamma, b.Gamma, 0.0);
  for (const auto& [ch, r] : a.rates) g.rate_abs2 = std::max(g.rate_abs2, rel(std::norm(r), std::norm(b.rate(ch)), 1e-12 * total));
  for (const auto& [ch, r] : b.rates) g.rate_abs2 = std::max(g.rate_abs2, rel(std::norm(a.rate(ch)), std::norm(r), 1e-12 * total));
  return g;
}

void to_json(json& j, const SectorRecord& s) {
  json rates = json::object();
  for (const auto& [ch, r] : s.rates) rates[ch] = {{"re", r.real()}, {"im", r.imag()}, {"abs2", std::norm(r)}};
  j = json{{"m", s.m}, {"n", s.n}, {"Delta", s.Delta}, {"Gamma", s.Gamma}, {"rates", rates}};
}

void to_json(json& j, const EffectiveModel& e) {
  j = json{{"setup", to_string(e.setup)}, {"provenance", to_string(e.provenance)}, {"sectors", e.sectors}};
}

Operator build_h_nh(const ModelOperators& m) { return h_nh_of(m); }

ExcitedBlock excited_block(const ModelOperators& m, int qm, int qn) {
  return block_from(m, h_nh_of(m), qm, qn);
}

EffectiveModel effective_operators_numeric(const ModelOperators& m) {
  if (m.V.nonzeros() == 0) throw std::invalid_argument("effective operators need a nonzero drive");
  const Operator h_nh = h_nh_of(m);
  EffectiveModel out;
  out.setup = m.setup;
  out.provenance = Provenance::NumericInversion;

  for (int qm = 0; qm < 2; ++qm) {
    for (int qn = 0; qn < 2; ++qn) {
      ExcitedBlock b = block_from(m, h_nh, qm, qn);
      Eigen::JacobiSVD<CMatrix> svd(b.h_nh);
      const auto& sv = svd.singularValues();
      const double cond = sv(sv.size() - 1) > 0 ? sv(0) / sv(sv.size() - 1) : INFINITY;
      if (!(cond < kMaxCondition)) {
        std::ostringstream os;
        os << "H_NH block of sector (" << qm << "," << qn << ") is singular, condition number " << cond;
        throw DegenerateParameters(os.str());
      }
      const CVector x = b.h_nh.partialPivLu().solve(b.drive);

      SectorRecord s;
      s.m = qm;
      s.n = qn;
      s.Delta = m.H_e.coeff(b.ground, b.ground).real() - (b.drive.adjoint() * x)(0).real();

      CVector full = CVector::Zero(m.space->dim());
      for (std::size_t a = 0; a < b.states.size(); ++a) full(b.states[a]) = x(static_cast<Index>(a));
      for (const auto& l : m.lindblads) {
        if (l.label == "1" && qm != 1) continue;
        if (l.label == "2" && qn != 1) continue;
        const CVector y = l.op.matrix() * full;
        Index arg = 0;
        const double peak = y.cwiseAbs().maxCoeff(&arg);
        // Each channel lands on a single ground-type state; keep its phase
        // and the full norm.
        s.rates[l.label] = peak > 0 ? y(arg) * (y.norm() / peak) : Complex{};
      }
      finish(s);
      out.sector(qm, qn) = s;
    }
  }
  return out;
}

SectorRecord delta_n_closed_form(const PhysicalParams& p, int m, int n) {
  const auto rp = ReducedParams::from(p);
  const double C = rp.C, Cf = rp.C_f, gamma = p.gamma, Om = p.Omega;
  const Complex J1 = rp.J_tilde_1, J2 = rp.J_tilde_2, De = rp.Delta_e_tilde;
  const Complex DE1 = rp.Delta_E1_tilde, DE2 = rp.Delta_E2_tilde;
  const double Omt_m = rp.Omega_m_tilde;
  const double mn = m * n, mpn = m + n, mmn = m - n;

  const Complex S1 = Cf * (2.0i * J1 + 1.0) - 2.0 * DE1 * J1;
  const Complex S2 = 4.0i * Cf - DE1 * (2.0i * J1 + 1.0);
  const Complex Z = 4.0 * DE1 * DE2 - Omt_m * Omt_m;
  const Complex R1 = De * C * mpn * (J2 + 2.0 * J1 + 2.0i * J1 * J2) - 2.0 * C * C * mn * (2.0i * J1 + 1.0) -
                     4.0 * De * De * J1 * J2;
  const Complex R2 = 4.0 * De * C * mpn * (2.0i * (J1 + 2.0 * J2) + 1.0) - 32.0i * C * C * mn -
                     8.0 * De * De * J2 * (2.0i * J1 + 1.0);
  const Complex X = Cf * DE2 * R2 - R1 * Z;
  check_pole(X, std::abs(Cf * DE2 * R2) + std::abs(R1 * Z), "X_N");

  const Complex br = C * De * mpn * (S1 + J2 * S2) - 2.0 * De * De * J2 * S1 - 2.0 * mn * C * C * S2;
  const Complex delta = std::sqrt(Cf) * Om * Omt_m / (std::sqrt(gamma) * X);

  SectorRecord s;
  s.m = m;
  s.n = n;
  s.Delta = -(Om * Om / gamma) * (br / X).real();
  if (p.stark_compensation && Om > 0) s.Delta += Om * Om / (4.0 * p.Delta_E2);
  s.rates["g"] = 2.0 * Om * std::sqrt(p.gamma_g) / (gamma * X) * br;
  s.rates["f"] = Om * Omt_m * R1 * std::sqrt(p.gamma_f) / (gamma * X);
  s.rates["c1"] = 2.0 * kSqrt2 * 1.0i * delta * (De * C * (J1 + J2) * mpn - 2.0 * De * De * J1 * J2 - 2.0 * C * C * mn);
  s.rates["c2"] = kSqrt2 * delta * (2.0 * De * De * J2 + 4.0i * C * C * mn - C * De * (1.0 + 2.0i * J2) * mpn);
  s.rates["c3"] = C * delta * (De * (1.0 - 2.0i * J1) * mmn);
  if (m == 1) s.rates["1"] = std::sqrt(2.0 * C) * delta * ((1.0 - 2.0i * J1) * (n * C - De * J2));
  if (n == 1) s.rates["2"] = std::sqrt(2.0 * C) * delta * ((1.0 - 2.0i * J1) * (m * C - De * J2));
  finish(s);
  return s;
}

EffectiveModel effective_closed_form(const PhysicalParams& p) {
  EffectiveModel e;
  e.setup = Setup::Nonlocal;
  e.provenance = Provenance::ClosedForm;
  for (int m = 0; m < 2; ++m)
    for (int n = 0; n < 2; ++n) e.sector(m, n) = delta_n_closed_form(p, m, n);
  return e;
}

SectorRecord delta_n_weak_drive(const PhysicalParams& p, int m, int n) {
  const auto rp = ReducedParams::from(p);
  const double C = rp.C, Cf = rp.C_f, gamma = p.gamma, Om = p.Omega, Omt = rp.Omega_tilde;
  const Complex J1 = rp.J_tilde_1, J2 = rp.J_tilde_2, De = rp.Delta_e_tilde, DE1 = rp.Delta_E1_tilde;
  const Complex DE2 = rp.Delta_E2_tilde;
  const double Omt_m = rp.Omega_m_tilde;
  const double mn = m * n, mpn = m + n, mmn = m - n;

  const Complex R = 2.0 * De * De * (-1.0i + 2.0 * J1) * J2 + 8.0 * C * C * mn -
                    C * De * (-1.0i + 2.0 * J1 + 4.0 * J2) * mpn;
  const Complex Q = 4.0i * De * J1 * J2 + 2.0 * C * C * (1.0i - 2.0 * J1) * mn +
                    C * De * (2.0 * J1 * J2 - 1.0i * (J2 + 2.0 * J1)) * mpn;
  const Complex den = Cf * R + DE1 * Q;
  check_pole(den, std::abs(Cf * R) + std::abs(DE1 * Q), "C_f R + Delta_E1 Q");

  // X_N only enters through alpha' * delta, where it cancels; it is still
  // evaluated to keep the printed structure and catch its pole.
  const Complex R1 = De * C * mpn * (J2 + 2.0 * J1 + 2.0i * J1 * J2) - 2.0 * C * C * mn * (2.0i * J1 + 1.0) -
                     4.0 * De * De * J1 * J2;
  const Complex R2 = 4.0 * De * C * mpn * (2.0i * (J1 + 2.0 * J2) + 1.0) - 32.0i * C * C * mn -
                     8.0 * De * De * J2 * (2.0i * J1 + 1.0);
  const Complex Z = 4.0 * DE1 * DE2 - Omt_m * Omt_m;
  const Complex X = Cf * DE2 * R2 - R1 * Z;
  check_pole(X, std::abs(Cf * DE2 * R2) + std::abs(R1 * Z), "X_N");

  const Complex delta = std::sqrt(Cf) * Om * Omt_m / (std::sqrt(gamma) * X);
  const Complex delta_p = Omt * std::sqrt(Cf) / (2.0 * std::sqrt(gamma) * den);
  const Complex alpha_p = 1.0i * Omt * X / (2.0 * Om * p.Omega_m * den);

  SectorRecord s;
  s.m = m;
  s.n = n;
  s.Delta = -(Omt * Omt / (4.0 * gamma)) * (Q / den).real();
  if (!p.stark_compensation && Om > 0) s.Delta -= Om * Om / (4.0 * p.Delta_E2);

  Complex rg = Om * std::sqrt(p.gamma_g) / (2.0 * p.Delta_E2);
  const bool unit_ratios = p.alpha == 1.0 && p.beta == 1.0;
  if (!unit_ratios) rg += Omt * Q * std::sqrt(rp.gamma_g_tilde) / (2.0 * gamma * den);
  s.rates["g"] = rg;
  s.rates["f"] = -Omt * Q * std::sqrt(p.gamma_f) / (2.0 * gamma * den);
  s.rates["c1"] = 2.0 * kSqrt2 * delta_p * (2.0 * De * De * J1 * J2 + 2.0 * C * C * mn - C * De * (J1 + J2) * mpn);
  s.rates["c2"] = kSqrt2 * delta_p * (2.0i * De * De * J2 - 4.0 * C * C * mn + C * De * (2.0 * J2 - 1.0i) * mpn);
  s.rates["c3"] = delta_p * (C * De * (1.0i + 2.0 * J1) * mmn);
  if (m == 1) s.rates["1"] = alpha_p * std::sqrt(2.0 * C) * delta * ((1.0 - 2.0i * J1) * (n * C - De * J2));
  if (n == 1) s.rates["2"] = alpha_p * std::sqrt(2.0 * C) * delta * ((1.0 - 2.0i * J1) * (m * C - De * J2));
  finish(s);
  return s;
}

EffectiveModel effective_weak_drive(const PhysicalParams& p) {
  EffectiveModel e;
  e.setup = Setup::Nonlocal;
  e.provenance = Provenance::WeakDrive;
  for (int m = 0; m < 2; ++m)
    for (int n = 0; n < 2; ++n) e.sector(m, n) = delta_n_weak_drive(p, m, n);
  return e;
}

double target_gamma(const PhysicalParams& p) {
  const auto rp = ReducedParams::from(p);
  return rp.Omega_tilde * rp.Omega_tilde / (2.0 * p.gamma * p.alpha * rp.C);
}

TuneResult tune_detunings_nonlocal(const PhysicalParams& p) {
  const auto rp = ReducedParams::from(p);
  if (!(rp.G > 0)) throw std::invalid_argument("tuning needs J > 0");
  TuneResult t;
  t.params = p;
  const double C = rp.C, D = rp.D, Gb = rp.Gbar;
  if (std::abs(Gb - 2.0 * D) <= 1e-14 * std::max(Gb, 2.0 * D)) {
    throw DegenerateParameters("Gbar = 2D makes the Delta_e tuning singular");
  }
  t.params.Delta_E1 = p.gamma * p.alpha * C * D / kSqrt2;
  t.params.Delta_e = p.gamma * (-2.0 + C * (Gb * Gb - 4.0 * D * Gb)) / (2.0 * kSqrt2 * (Gb - 2.0 * D));
  t.Gamma = target_gamma(p);
  if (C < 20) t.warnings.push_back("C < 20: state-independent decay only holds for C >> 1");
  if (rp.G < 5) t.warnings.push_back("G < 5: state-independent decay only holds for G >> 1");
  return t;
}

TuneResult tune_detunings_dfs(const PhysicalParams& p) {
  const auto rp = ReducedParams::from(p);
  if (p.J_1 != 0.0) throw std::invalid_argument("DFS tuning needs J_1 = 0");
  if (!(rp.G > 0)) throw std::invalid_argument("tuning needs J > 0");
  TuneResult t;
  t.params = p;
  t.params.Delta_e = p.gamma / (2.0 * (2.0 * rp.D_1 + rp.Gbar));
  t.params.Delta_E1 = p.gamma * p.alpha * rp.C * (rp.D_1 + rp.Gbar);
  t.Gamma = target_gamma(p);
  if (rp.C < 20) t.warnings.push_back("C < 20: state-independent decay only holds for C >> 1");
  if (rp.G < 5) t.warnings.push_back("G < 5: state-independent decay only holds for G >> 1");
  return t;
}

std::array<double, 3> balanced_shifts_nonlocal(const PhysicalParams& tuned, double Gamma) {
  const auto rp = ReducedParams::from(tuned);
  const double C = rp.C, D = rp.D, Gb = rp.Gbar;
  const double d0 = -Gamma * (4.0 * D - Gb) / (8.0 * kSqrt2);
  const double d1 = -(Gamma / kSqrt2) * (2.0 * D - Gb) / (2.0 / C + Gb * Gb - D * Gb + 2.0 * D * D);
  const double d2 = -(Gamma / kSqrt2) * (2.0 * D - Gb) / (1.0 / C + Gb * Gb / 2.0 - D * Gb + 2.0 * D * D);
  return {d0, d1, d2};
}

std::array<double, 3> balanced_shifts_dfs(const PhysicalParams& tuned, double Gamma) {
  const auto rp = ReducedParams::from(tuned);
  const double C = rp.C, D1 = rp.D_1, Gb = rp.Gbar;
  std::array<double, 3> out{};
  out[0] = -Gamma * D1 / 2.0;
  for (int k = 1; k <= 2; ++k) {
    out[static_cast<std::size_t>(k)] = -(rp.Omega_tilde * rp.Omega_tilde / (2.0 * tuned.gamma)) * k *
                                       (2.0 * D1 + Gb) /
                                       (tuned.alpha * C * (4.0 * k * D1 * D1 + 2.0 * k * D1 * Gb + 1.0 / C));
  }
  return out;
}

AnalyticProbability analytic_success_probability(const PhysicalParams& tuned, double t) {
  const auto rp = ReducedParams::from(tuned);
  AnalyticProbability a;
  a.P_exp = std::exp(-target_gamma(tuned) * t);
  a.Z_p = rp.Z_p;
  a.P_linear = 1.0 - a.Z_p * M_PI / std::sqrt(rp.C);
  return a;
}

}  // namespace heraldsim
