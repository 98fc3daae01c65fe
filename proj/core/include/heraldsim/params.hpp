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

#include <complex>
#include <optional>
#include <string>

#include <json.hpp>

namespace heraldsim {

/// Which cavity geometry a parameter set describes.
enum class Setup { Nonlocal, DFS };

std::string to_string(Setup s);
Setup setup_from_string(const std::string& s);

/// All rates, couplings and detunings of the composite system. Every rate is
/// an angular frequency; in practice everything is measured in units of gamma.
struct PhysicalParams {
  double g = 0.0;
  double g_f = 0.0;
  double J_1 = 0.0;
  double J_2 = 0.0;
  double kappa = 10.0;
  double gamma = 1.0;
  double gamma_g = 1.0;
  double gamma_f = 1.0;
  double Omega = 0.0;
  double Omega_m = 0.0;
  double Delta_e = 0.0;
  double Delta_E1 = 0.0;
  double Delta_E2 = 0.0;
  double alpha = 1.0;
  double beta = 1.0;
  bool stark_compensation = true;
  std::optional<double> L_fc;
  std::optional<double> alpha_l;

  /// Throws std::invalid_argument naming the first violated constraint.
  void validate() const;

  /// Same parameters with every rate multiplied by s (dimensionless ratios
  /// such as alpha and beta untouched).
  PhysicalParams scaled(double s) const;

  bool operator==(const PhysicalParams&) const = default;
};

/// Flat JSON object with exactly the field names above. Unknown keys throw
/// ConfigError naming the key.
void to_json(nlohmann::json& j, const PhysicalParams& p);
void from_json(const nlohmann::json& j, PhysicalParams& p);

/// Figure-caption parameterization at gamma = 1: kappa = 10, gamma_g =
/// gamma_f = gamma, g = g_f = sqrt(C kappa gamma), J = lambda kappa sqrt(C),
/// Omega = Delta_E2 / (6 C^{1/4}), Omega_m = 4 gamma C^{1/4}. Detunings
/// Delta_e and Delta_E1 are left at zero; see tune_detunings_*.
PhysicalParams caption_params(Setup setup, double C, double lambda, double Delta_E2_over_gamma);

/// Dimensionless combinations used throughout the closed forms.
struct ReducedParams {
  double C = 0.0;
  double C_f = 0.0;
  double G = 0.0;
  double lambda = 0.0;
  double Gbar = 0.0;
  double D = 0.0;
  double D_1 = 0.0;
  double d = 0.0;
  double Omega_tilde = 0.0;
  double gamma_g_tilde = 0.0;
  double Omega_m_tilde = 0.0;
  std::complex<double> J_tilde_1;
  std::complex<double> J_tilde_2;
  std::complex<double> Delta_e_tilde;
  std::complex<double> Delta_E1_tilde;
  std::complex<double> Delta_E2_tilde;
  // Normal-mode frequencies relative to the bare cavity frequency.
  double Lambda_1 = 0.0;
  double Lambda_2 = 0.0;
  double Lambda_3 = 0.0;
  double Z_p = 0.0;

  static ReducedParams from(const PhysicalParams& p);
};

/// Success-probability scaling factor Z_p(lambda, d).
double scaling_factor_zp(double lambda, double d);

}  // namespace heraldsim
