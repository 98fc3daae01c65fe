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

#include "heraldsim/params.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "heraldsim/errors.hpp"

namespace heraldsim {

using nlohmann::json;

std::string to_string(Setup s) { return s == Setup::Nonlocal ? "nonlocal" : "dfs"; }

Setup setup_from_string(const std::string& s) {
  if (s == "nonlocal") return Setup::Nonlocal;
  if (s == "dfs") return Setup::DFS;
  throw ConfigError("variant must be 'nonlocal' or 'dfs', got '" + s + "'", "variant");
}

namespace {

void require(bool ok, const std::string& what) {
  if (!ok) throw std::invalid_argument(what);
}

bool close_rel(double a, double b, double tol) {
  return std::abs(a - b) <= tol * std::max({std::abs(a), std::abs(b), 1e-300});
}

}  // namespace

void PhysicalParams::validate() const {
  require(kappa > 0 && std::isfinite(kappa), "kappa must be positive");
  require(gamma > 0 && std::isfinite(gamma), "gamma must be positive");
  require(g > 0 && std::isfinite(g), "g must be positive");
  require(g_f > 0 && std::isfinite(g_f), "g_f must be positive");
  require(gamma_g >= 0 && std::isfinite(gamma_g), "gamma_g must be non-negative");
  require(gamma_f >= 0 && std::isfinite(gamma_f), "gamma_f must be non-negative");
  require(J_1 >= 0 && std::isfinite(J_1), "J_1 must be non-negative");
  require(J_2 >= 0 && std::isfinite(J_2), "J_2 must be non-negative");
  require(Omega >= 0 && std::isfinite(Omega), "Omega must be non-negative");
  require(Omega_m >= 0 && std::isfinite(Omega_m), "Omega_m must be non-negative");
  require(std::isfinite(Delta_e) && std::isfinite(Delta_E1) && std::isfinite(Delta_E2),
          "detunings must be finite");
  require(alpha > 0 && beta > 0, "alpha and beta must be positive");
  require(close_rel(alpha, g_f * g_f / (g * g), 1e-9), "alpha must equal g_f^2 / g^2");
  require(close_rel(beta, gamma_f / gamma, 1e-9) || (gamma_f == 0 && beta == 0),
          "beta must equal gamma_f / gamma");
  if (alpha_l) require(*alpha_l >= 0 && *alpha_l < 1, "alpha_l must lie in [0, 1)");
  if (L_fc) require(*L_fc > 0, "L_fc must be positive");
}

PhysicalParams PhysicalParams::scaled(double s) const {
  PhysicalParams q = *this;
  for (double* v : {&q.g, &q.g_f, &q.J_1, &q.J_2, &q.kappa, &q.gamma, &q.gamma_g, &q.gamma_f,
                    &q.Omega, &q.Omega_m, &q.Delta_e, &q.Delta_E1, &q.Delta_E2}) {
    *v *= s;
  }
  return q;
}

void to_json(json& j, const PhysicalParams& p) {
  j = json{{"g", p.g},
           {"g_f", p.g_f},
           {"J_1", p.J_1},
           {"J_2", p.J_2},
           {"kappa", p.kappa},
           {"gamma", p.gamma},
           {"gamma_g", p.gamma_g},
           {"gamma_f", p.gamma_f},
           {"Omega", p.Omega},
           {"Omega_m", p.Omega_m},
           {"Delta_e", p.Delta_e},
           {"Delta_E1", p.Delta_E1},
           {"Delta_E2", p.Delta_E2},
           {"alpha", p.alpha},
           {"beta", p.beta},
           {"stark_compensation", p.stark_compensation},
           {"L_fc", p.L_fc ? json(*p.L_fc) : json(nullptr)},
           {"alpha_l", p.alpha_l ? json(*p.alpha_l) : json(nullptr)}};
}

void from_json(const json& j, PhysicalParams& p) {
  if (!j.is_object()) throw ConfigError("physical parameters must be a JSON object");
  PhysicalParams out;
  struct Field {
    const char* key;
    double* target;
  };
  const Field fields[] = {
      {"g", &out.g},           {"g_f", &out.g_f},         {"J_1", &out.J_1},
      {"J_2", &out.J_2},       {"kappa", &out.kappa},     {"gamma", &out.gamma},
      {"gamma_g", &out.gamma_g}, {"gamma_f", &out.gamma_f}, {"Omega", &out.Omega},
      {"Omega_m", &out.Omega_m}, {"Delta_e", &out.Delta_e}, {"Delta_E1", &out.Delta_E1},
      {"Delta_E2", &out.Delta_E2}, {"alpha", &out.alpha},   {"beta", &out.beta},
  };
  for (const auto& [key, value] : j.items()) {
    bool matched = false;
    for (const auto& f : fields) {
      if (key != f.key) continue;
      if (!value.is_number()) throw ConfigError("field '" + key + "' must be a number", key);
      *f.target = value.get<double>();
      matched = true;
    }
    if (matched) continue;
    if (key == "stark_compensation") {
      if (!value.is_boolean()) throw ConfigError("field '" + key + "' must be a boolean", key);
      out.stark_compensation = value.get<bool>();
    } else if (key == "L_fc" || key == "alpha_l") {
      auto& slot = key == "L_fc" ? out.L_fc : out.alpha_l;
      if (value.is_null()) {
        slot.reset();
      } else if (value.is_number()) {
        slot = value.get<double>();
      } else {
        throw ConfigError("field '" + key + "' must be a number or null", key);
      }
    } else {
      throw ConfigError("unknown parameter field '" + key + "'", key);
    }
  }
  p = out;
}

PhysicalParams caption_params(Setup setup, double C, double lambda, double Delta_E2_over_gamma) {
  if (!(C > 0) || !(lambda > 0)) throw std::invalid_argument("C and lambda must be positive");
  PhysicalParams p;
  p.gamma = 1.0;
  p.kappa = 10.0 * p.gamma;
  p.gamma_g = p.gamma;
  p.gamma_f = p.gamma;
  p.alpha = 1.0;
  p.beta = 1.0;
  p.g = std::sqrt(C * p.kappa * p.gamma);
  p.g_f = std::sqrt(p.alpha) * p.g;
  const double J = lambda * p.kappa * std::sqrt(C);
  p.J_1 = setup == Setup::Nonlocal ? J : 0.0;
  p.J_2 = J;
  p.Delta_E2 = Delta_E2_over_gamma * p.gamma;
  const double c4 = std::pow(C, 0.25);
  p.Omega = p.Delta_E2 / (6.0 * c4);
  p.Omega_m = 4.0 * p.gamma * c4;
  return p;
}

double scaling_factor_zp(double lambda, double d) {
  const double s2 = std::sqrt(2.0);
  const double l2 = lambda * lambda;
  const double a = 1.0 - 2.0 * d * lambda;
  return s2 * d + (1.0 + 2.0 * l2) * (1.0 + 2.0 * l2) / (s2 * d * l2 * a * a) +
         (3.0 + 6.0 * l2) / (s2 * lambda * (2.0 * d * lambda - 1.0));
}

ReducedParams ReducedParams::from(const PhysicalParams& p) {
  using namespace std::complex_literals;
  const double s2 = std::sqrt(2.0);
  ReducedParams r;
  const double J = p.J_2;
  r.C = p.g * p.g / (p.kappa * p.gamma);
  r.C_f = p.g_f * p.g_f / (p.kappa * p.gamma);
  r.G = J / p.kappa;
  r.lambda = J / (p.kappa * std::sqrt(r.C));
  r.Gbar = r.G > 0 ? 1.0 / r.G : std::numeric_limits<double>::infinity();
  r.D = std::sqrt(p.beta / (p.alpha * r.C));
  r.D_1 = std::sqrt((r.Gbar * r.Gbar + p.beta / (p.alpha * r.C)) / 2.0);
  r.d = std::sqrt(p.beta / p.alpha);
  r.Omega_tilde = p.Delta_E2 != 0.0 ? p.Omega * p.Omega_m / (2.0 * p.Delta_E2) : 0.0;
  r.gamma_g_tilde = p.Delta_E2 != 0.0
                        ? p.gamma_g * p.Omega_m * p.Omega_m / (4.0 * p.Delta_E2 * p.Delta_E2)
                        : 0.0;
  r.Omega_m_tilde = p.Omega_m / p.gamma;
  r.J_tilde_1 = 2.0 * s2 * J / p.kappa - 0.5i;
  r.J_tilde_2 = s2 * J / p.kappa - 0.5i;
  r.Delta_e_tilde = p.Delta_e / p.gamma - 0.5i;
  r.Delta_E1_tilde = p.Delta_E1 / p.gamma - 0.5i * p.gamma_f / p.gamma;
  r.Delta_E2_tilde = p.Delta_E2 / p.gamma - 0.5i * p.gamma_g / p.gamma;
  r.Lambda_1 = -s2 * J;
  r.Lambda_2 = s2 * J;
  r.Lambda_3 = 0.0;
  r.Z_p = r.lambda > 0 ? scaling_factor_zp(r.lambda, r.d) : 0.0;
  return r;
}

}  // namespace heraldsim
