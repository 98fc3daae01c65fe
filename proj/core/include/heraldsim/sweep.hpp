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

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "heraldsim/params.hpp"
#include "heraldsim/protocol.hpp"

namespace heraldsim {

/// One run description. JSON keys (all optional except where noted):
///   variant            "nonlocal" | "dfs"
///   C                  number or list (required with caption_rules)
///   lambda             number
///   Delta_E2_over_gamma number, list, or {"start", "stop", "step"}
///   caption_rules      bool; false requires "params"
///   params             PhysicalParams object
///   tune               bool, equalize decay via the detunings
///   level              "full" | "effective" | "analytic"
///   n_max, excitation_cap, tol, method ("auto" | "dopri5" | "exponential")
///   output_path, workers, record_runtime, process_fidelity
struct SweepConfig {
  Setup variant = Setup::Nonlocal;
  std::vector<double> C_values;
  double lambda = 10.0;
  std::vector<double> Delta_E2_over_gamma;
  bool caption_rules = true;
  std::optional<PhysicalParams> params;
  bool tune = true;
  Level level = Level::FullME;
  int n_max = 1;
  int excitation_cap = 2;
  double tol = 1e-9;
  Method method = Method::Auto;
  std::string output_path;
  unsigned workers = 1;
  bool record_runtime = true;
  bool process_fidelity = false;

  /// Throws ConfigError naming the offending field.
  void validate() const;
};

SweepConfig sweep_config_from_json(const nlohmann::json& j);
nlohmann::json to_json(const SweepConfig& c);

/// Built-in "fig2" (nonlocal, lambda 10) and "fig4" (DFS, lambda 1.84)
/// sweeps over C in {100, 600} and Delta_E2/gamma in 60..240.
nlohmann::json preset(const std::string& name);

GateOptions gate_options(const SweepConfig& c);

/// Parameters of one sweep point, tuned if requested.
PhysicalParams point_params(const SweepConfig& c, double C, double Delta_E2_over_gamma,
                            std::vector<std::string>* warnings = nullptr);

struct SweepRow {
  double C = 0.0;
  double lambda = 0.0;
  double Delta_E2_over_gamma = 0.0;
  double t_CZ_gamma = 0.0;
  double P_numeric = 0.0;
  double P_analytic = 0.0;
  double infidelity = 0.0;
  double leakage = 0.0;
  double runtime_s = 0.0;
  std::size_t integrator_steps = 0;
};

inline constexpr const char* kCsvHeader =
    "C,lambda,delta_E2_over_gamma,t_CZ_gamma,P_numeric,P_analytic,infidelity,leakage,runtime_s,integrator_steps";

/// Runs every (C, Delta_E2) point on `workers` threads; rows sorted by
/// (C, Delta_E2). The first failure is rethrown after all workers stop.
std::vector<SweepRow> run_sweep(const SweepConfig& c);

/// Header plus one line per row. runtime_s is written as 0 when
/// record_runtime is false so that output is reproducible byte for byte.
void write_csv(std::ostream& out, const std::vector<SweepRow>& rows, bool record_runtime = true);

}  // namespace heraldsim
