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

#include "heraldsim/model.hpp"

#include <cmath>
#include <stdexcept>

#include "heraldsim/errors.hpp"

namespace heraldsim {

namespace {

const double kSqrt2 = std::sqrt(2.0);

SpacePtr make_space(Setup setup, bool eliminated, const ModelOptions& o) {
  std::vector<Subsystem> slots;
  slots.push_back(Subsystem::atom("q1", {"0", "1", "e", "d"}, {"e"}));
  slots.push_back(Subsystem::atom("q2", {"0", "1", "e", "d"}, {"e"}));
  if (eliminated) {
    slots.push_back(Subsystem::atom("aux", {"g", "f", "E1"}, {"E1"}));
  } else {
    slots.push_back(Subsystem::atom("aux", {"g", "f", "E1", "E2"}, {"E1", "E2"}));
  }
  if (setup == Setup::Nonlocal) slots.push_back(Subsystem::mode("A", o.n_max));
  slots.push_back(Subsystem::mode("B", o.n_max));
  slots.push_back(Subsystem::mode("C", o.n_max));
  return build_space(std::move(slots), o.excitation_cap);
}

Operator hc_pair(const Operator& x) { return x + x.adjoint(); }

ModelOperators assemble(const PhysicalParams& p, Setup setup, bool eliminated, const ModelOptions& o) {
  p.validate();
  if (o.decay_target != "d" && o.decay_target != "0" && o.decay_target != "1") {
    throw std::invalid_argument("decay_target must be 'd', '0' or '1'");
  }
  if (setup == Setup::Nonlocal) {
    if (!(p.J_1 > 0) || std::abs(p.J_1 - p.J_2) > 1e-12 * p.J_2) {
      throw std::invalid_argument("nonlocal model needs J_1 = J_2 > 0");
    }
  } else if (p.J_1 != 0.0 || !(p.J_2 > 0)) {
    throw std::invalid_argument("DFS model needs J_1 = 0 and J_2 > 0");
  }
  if (p.Delta_E2 == 0.0 && (eliminated || (p.stark_compensation && p.Omega > 0))) {
    throw DegenerateParameters("Delta_E2 = 0 makes the E2 elimination singular");
  }

  auto space = make_space(setup, eliminated, o);
  const std::size_t q[2] = {0, 1};
  const std::size_t aux = 2;
  auto tr = [&](std::size_t slot, const char* up, const char* lo) { return transition(space, slot, up, lo); };

  const auto modes = normal_modes(space);
  Operator H = Operator::zero(space);

  // Auxiliary atom.
  if (eliminated) {
    H += (p.Delta_E1 - p.Omega_m * p.Omega_m / (4.0 * p.Delta_E2)) * tr(aux, "E1", "E1");
  } else {
    H += p.Delta_E1 * tr(aux, "E1", "E1") + p.Delta_E2 * tr(aux, "E2", "E2");
    H += hc_pair(0.5 * p.Omega_m * tr(aux, "E1", "E2"));
  }

  // Cavity couplings. Annihilators act before raising transitions so no
  // intermediate state leaves the capped basis.
  const double J = p.J_2;
  if (setup == Setup::Nonlocal) {
    const Operator& c1 = modes[0];
    const Operator& c2 = modes[1];
    const Operator& c3 = modes[2];
    for (int k = 0; k < 2; ++k) {
      const double S = k == 0 ? 1.0 : -1.0;
      Operator K = 0.5 * p.g * (c1 + c2 + (kSqrt2 * S) * c3);
      H += hc_pair(tr(q[k], "e", "1") * K);
      H += p.Delta_e * tr(q[k], "e", "e");
    }
    H += hc_pair((p.g_f / kSqrt2) * (tr(aux, "E1", "f") * (c2 - c1)));
    H += (2.0 * kSqrt2 * J) * (c2.adjoint() * c2) + (kSqrt2 * J) * (c3.adjoint() * c3);
  } else {
    const Operator& ap = modes[0];
    const Operator& am = modes[1];
    for (int k = 0; k < 2; ++k) {
      H += hc_pair((p.g / kSqrt2) * (tr(q[k], "e", "1") * (ap - am)));
      H += p.Delta_e * tr(q[k], "e", "e");
    }
    H += hc_pair((p.g_f / kSqrt2) * (tr(aux, "E1", "f") * (ap + am)));
    H += (2.0 * J) * (ap.adjoint() * ap);
  }

  // Drive-induced Stark shift of |g> and its compensation.
  if (p.Omega > 0) {
    const double shift = p.Omega * p.Omega / (4.0 * p.Delta_E2);
    if (!eliminated && p.stark_compensation) H += shift * tr(aux, "g", "g");
    if (eliminated && !p.stark_compensation) H += (-shift) * tr(aux, "g", "g");
  }

  Operator V = eliminated
                   ? (-p.Omega * p.Omega_m / (2.0 * p.Delta_E2)) * tr(aux, "E1", "g")
                   : (0.5 * p.Omega) * tr(aux, "E2", "g");

  std::vector<LabeledOperator> Ls;
  const double sk = std::sqrt(p.kappa);
  if (setup == Setup::Nonlocal) {
    Ls.push_back({"c1", sk * modes[0]});
    Ls.push_back({"c2", sk * modes[1]});
    Ls.push_back({"c3", sk * modes[2]});
  } else {
    Ls.push_back({"c+", sk * modes[0]});
    Ls.push_back({"c-", sk * modes[1]});
  }
  Ls.push_back({"f", std::sqrt(p.gamma_f) * tr(aux, "f", "E1")});
  if (eliminated) {
    const double gg = p.gamma_g * p.Omega_m * p.Omega_m / (4.0 * p.Delta_E2 * p.Delta_E2);
    Ls.push_back({"g", std::sqrt(gg) * tr(aux, "g", "E1")});
  } else {
    Ls.push_back({"g", std::sqrt(p.gamma_g) * tr(aux, "g", "E2")});
  }
  const std::string& tgt = o.decay_target;
  Ls.push_back({"1", std::sqrt(p.gamma) * transition(space, q[0], tgt, "e")});
  Ls.push_back({"2", std::sqrt(p.gamma) * transition(space, q[1], tgt, "e")});
  for (auto& l : Ls) l.op = l.op.with_label("L_" + l.label);

  Operator Htot = H + V + V.adjoint();
  std::vector<std::size_t> mode_slots;
  for (std::size_t k = 3; k < space->num_slots(); ++k) mode_slots.push_back(k);
  Variant variant = eliminated ? Variant::EliminatedE2
                               : (setup == Setup::Nonlocal ? Variant::Nonlocal3Cav : Variant::DFS2Cav);
  return ModelOperators{variant,
                        setup,
                        space,
                        H.with_label("H_e"),
                        V.with_label("V"),
                        Htot.with_label("H"),
                        std::move(Ls),
                        p,
                        o,
                        0,
                        1,
                        aux,
                        std::move(mode_slots)};
}

}  // namespace

std::string to_string(Variant v) {
  switch (v) {
    case Variant::Nonlocal3Cav:
      return "Nonlocal3Cav";
    case Variant::DFS2Cav:
      return "DFS2Cav";
    case Variant::EliminatedE2:
      return "EliminatedE2";
  }
  return "?";
}

const Operator& ModelOperators::lindblad(std::string_view label) const {
  for (const auto& l : lindblads)
    if (l.label == label) return l.op;
  throw std::invalid_argument("no Lindblad operator labeled '" + std::string(label) + "'");
}

std::vector<Operator> ModelOperators::lindblad_ops() const {
  std::vector<Operator> out;
  out.reserve(lindblads.size());
  for (const auto& l : lindblads) out.push_back(l.op);
  return out;
}

std::vector<Operator> normal_modes(const SpacePtr& space) {
  std::vector<Operator> a;
  for (std::size_t k = 0; k < space->num_slots(); ++k)
    if (space->slot(k).is_mode()) a.push_back(annihilator(space, k));
  if (a.size() == 3) {
    const double s2 = std::sqrt(2.0);
    return {(0.5 * (a[0] - s2 * a[1] + a[2])).with_label("c1"),
            (0.5 * (a[0] + s2 * a[1] + a[2])).with_label("c2"),
            ((1.0 / s2) * (a[0] - a[2])).with_label("c3")};
  }
  if (a.size() == 2) {
    const double r = 1.0 / std::sqrt(2.0);
    return {(r * (a[0] + a[1])).with_label("a+"), (r * (a[0] - a[1])).with_label("a-")};
  }
  throw std::invalid_argument("normal_modes needs two or three mode slots, found " +
                              std::to_string(a.size()));
}

ModelOperators build_nonlocal_model(const PhysicalParams& p, const ModelOptions& opts) {
  return assemble(p, Setup::Nonlocal, false, opts);
}

ModelOperators build_dfs_model(const PhysicalParams& p, const ModelOptions& opts) {
  return assemble(p, Setup::DFS, false, opts);
}

ModelOperators eliminate_E2(const ModelOperators& m, const PhysicalParams& p) {
  if (m.variant == Variant::EliminatedE2) throw std::invalid_argument("model already has E2 eliminated");
  if (p.Delta_E2 == 0.0) throw DegenerateParameters("Delta_E2 = 0 makes the E2 elimination singular");
  return assemble(p, m.setup, true, m.options);
}

CVector dark_state(const ModelOperators& m, const PhysicalParams& p) {
  if (m.variant != Variant::EliminatedE2) throw std::invalid_argument("dark_state needs the eliminated model");
  const auto& space = m.space;
  const std::size_t n = space->num_slots();
  std::vector<std::string> ground(n, "0");
  ground[m.aux] = "g";
  CVector g_vac = CVector::Zero(space->dim());
  g_vac(space->index_of_labels(ground)) = 1.0;

  // One photon in the resonant normal mode (c1, or a- for the DFS setup).
  const auto modes = normal_modes(space);
  const Operator& res = m.setup == Setup::Nonlocal ? modes[0] : modes[1];
  std::vector<std::string> f_lab = ground;
  f_lab[m.aux] = "f";
  CVector f_vac = CVector::Zero(space->dim());
  f_vac(space->index_of_labels(f_lab)) = 1.0;
  CVector f_one = res.matrix().adjoint() * f_vac;

  // The E1 <-> f coupling enters with sign -1 for c1 and +1 for a-.
  const double sign = m.setup == Setup::Nonlocal ? -1.0 : 1.0;
  const double Ot = p.Omega * p.Omega_m / (2.0 * p.Delta_E2);
  CVector psi = p.g_f * g_vac + sign * std::sqrt(2.0) * Ot * f_one;
  return psi / std::sqrt(p.g_f * p.g_f + 2.0 * Ot * Ot);
}

double fiber_loss_rate(double L_fc, double alpha_l, double c_fiber) {
  if (!(L_fc > 0)) throw std::invalid_argument("L_fc must be positive");
  if (alpha_l < 0 || alpha_l >= 1) throw std::invalid_argument("alpha_l must lie in [0, 1)");
  return -c_fiber * std::log1p(-alpha_l) / (2.0 * L_fc);
}

}  // namespace heraldsim
