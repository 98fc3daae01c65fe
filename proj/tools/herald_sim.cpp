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

// herald-sim: gate runs, parameter sweeps and effective-model dumps.
//
// Exit codes: 0 success, 1 configuration error, 2 herald impossible,
// 3 integrator failure.

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "heraldsim/effective.hpp"
#include "heraldsim/errors.hpp"
#include "heraldsim/model.hpp"
#include "heraldsim/protocol.hpp"
#include "heraldsim/serialize.hpp"
#include "heraldsim/sweep.hpp"

namespace {

using nlohmann::json;
using namespace heraldsim;

enum Exit { kOk = 0, kConfig = 1, kHerald = 2, kIntegrator = 3 };

struct Common {
  std::string config;
  std::vector<std::string> sets;
  std::string out;
  int workers = 0;
  std::string level;
  bool gnuplot_hint = false;
};

void add_common(CLI::App* cmd, Common& c, bool sweep_like) {
  cmd->add_option("--config", c.config, "JSON config file");
  cmd->add_option("--set", c.sets, "Override a config field, key=value (repeatable)");
  cmd->add_option("--out", c.out, "Output path (default: stdout)");
  cmd->add_option("--level", c.level, "Simulation level")->check(CLI::IsMember({"full", "effective", "analytic"}));
  if (sweep_like) {
    cmd->add_option("--workers", c.workers, "Parallel sweep points (default: $HERALD_SIM_WORKERS or 1)")
        ->check(CLI::PositiveNumber);
    cmd->add_flag("--gnuplot-hint", c.gnuplot_hint, "Print a gnuplot snippet for the CSV");
  }
}

SweepConfig assemble(const Common& c, json base) {
  if (!c.config.empty()) base.merge_patch(load_json_file(c.config));
  for (const auto& s : c.sets) apply_override(base, s);
  if (!c.level.empty()) base["level"] = c.level;
  if (c.workers > 0) {
    base["workers"] = c.workers;
  } else if (!base.contains("workers")) {
    if (const char* env = std::getenv("HERALD_SIM_WORKERS")) {
      char* end = nullptr;
      const long w = std::strtol(env, &end, 10);
      if (end == env || *end != '\0' || w < 1) throw ConfigError("HERALD_SIM_WORKERS must be a positive integer", "workers");
      base["workers"] = w;
    }
  }
  if (!c.out.empty()) base["output_path"] = c.out;
  return sweep_config_from_json(base);
}

void emit(const std::string& path, const std::string& text) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(path);
  if (!f) throw ConfigError("cannot write '" + path + "'", "out");
  f << text;
  if (!f) throw ConfigError("failed writing '" + path + "'", "out");
}

struct Point {
  PhysicalParams params;
  std::vector<std::string> warnings;
};

Point single_point(const SweepConfig& cfg) {
  Point pt;
  if (cfg.caption_rules) {
    if (cfg.C_values.size() != 1 || cfg.Delta_E2_over_gamma.size() != 1) {
      throw ConfigError("this command runs one point; give a single C and Delta_E2_over_gamma", "C");
    }
    pt.params = point_params(cfg, cfg.C_values[0], cfg.Delta_E2_over_gamma[0], &pt.warnings);
  } else {
    pt.params = point_params(cfg, 0.0, 0.0, &pt.warnings);
  }
  return pt;
}

int cmd_gate(const Common& c) {
  const SweepConfig cfg = assemble(c, json::object());
  const Point pt = single_point(cfg);
  const GateResult r = run_cphase(cfg.variant, pt.params, gate_options(cfg));
  json j = r;
  j["warnings"] = pt.warnings;
  emit(cfg.output_path, j.dump(2) + "\n");
  return kOk;
}

json sector_gaps(const EffectiveModel& a, const EffectiveModel& b) {
  json out = json::array();
  for (int m = 0; m < 2; ++m) {
    for (int n = 0; n < 2; ++n) {
      const SectorGap g = sector_gap(a.sector(m, n), b.sector(m, n));
      out.push_back({{"m", m}, {"n", n}, {"Delta", g.Delta}, {"rate_abs2_max", g.rate_abs2}, {"Gamma", g.Gamma}});
    }
  }
  return out;
}

int cmd_effective(const Common& c) {
  const SweepConfig cfg = assemble(c, json::object());
  const Point pt = single_point(cfg);
  ModelOptions mo;
  mo.n_max = cfg.n_max;
  mo.excitation_cap = cfg.excitation_cap;
  const ModelOperators model =
      cfg.variant == Setup::Nonlocal ? build_nonlocal_model(pt.params, mo) : build_dfs_model(pt.params, mo);
  const EffectiveModel numeric = effective_operators_numeric(model);

  json j;
  j["params"] = pt.params;
  j["Gamma_target"] = target_gamma(pt.params);
  j["warnings"] = pt.warnings;
  j["models"] = json::array({numeric});
  j["gaps"] = json::object();
  if (cfg.variant == Setup::Nonlocal) {
    const EffectiveModel closed = effective_closed_form(pt.params);
    const EffectiveModel weak = effective_weak_drive(pt.params);
    j["models"].push_back(closed);
    j["models"].push_back(weak);
    j["gaps"]["NumericInversion_vs_ClosedForm"] = sector_gaps(numeric, closed);
    j["gaps"]["NumericInversion_vs_WeakDrive"] = sector_gaps(numeric, weak);
    j["balanced_shifts"] = balanced_shifts_nonlocal(pt.params, target_gamma(pt.params));
  } else {
    j["balanced_shifts"] = balanced_shifts_dfs(pt.params, target_gamma(pt.params));
  }
  emit(cfg.output_path, j.dump(2) + "\n");
  return kOk;
}

int cmd_tune(const Common& c) {
  SweepConfig cfg = assemble(c, json::object());
  cfg.tune = true;
  const Point pt = single_point(cfg);
  json j{{"params", pt.params}, {"Gamma", target_gamma(pt.params)}, {"warnings", pt.warnings}};
  emit(cfg.output_path, j.dump(2) + "\n");
  return kOk;
}

void gnuplot_hint(std::ostream& os, const std::string& csv) {
  const std::string f = csv.empty() ? "sweep.csv" : csv;
  os << "# gnuplot\n"
     << "set datafile separator ','\n"
     << "set key autotitle columnhead\n"
     << "set multiplot layout 1,2\n"
     << "set xlabel 'Delta_E2/gamma'; set ylabel 'P'\n"
     << "plot '" << f << "' using 3:5 with points title 'P numeric', '' using 3:6 with lines title 'P analytic'\n"
     << "set logscale y; set ylabel '1-F'\n"
     << "plot '" << f << "' using 3:7 with linespoints title 'infidelity'\n"
     << "unset multiplot\n";
}

int cmd_sweep(const Common& c, json base) {
  const SweepConfig cfg = assemble(c, std::move(base));
  const auto rows = run_sweep(cfg);
  std::ostringstream os;
  write_csv(os, rows, cfg.record_runtime);
  emit(cfg.output_path, os.str());
  if (c.gnuplot_hint) gnuplot_hint(cfg.output_path.empty() ? std::cerr : std::cout, cfg.output_path);
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Heralded cavity-QED gate simulator"};
  app.require_subcommand(1);
  Common common;
  auto* gate = app.add_subcommand("gate", "Run one gate and print the result as JSON");
  auto* sweep = app.add_subcommand("sweep", "Sweep (C, Delta_E2) and write CSV");
  auto* effective = app.add_subcommand("effective", "Dump the effective sector table");
  auto* tune = app.add_subcommand("tune", "Print tuned parameters");
  auto* fig2 = app.add_subcommand("fig2", "Nonlocal sweep preset");
  auto* fig4 = app.add_subcommand("fig4", "DFS sweep preset");
  add_common(gate, common, false);
  add_common(effective, common, false);
  add_common(tune, common, false);
  add_common(sweep, common, true);
  add_common(fig2, common, true);
  add_common(fig4, common, true);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kConfig;
  }

  try {
    if (*gate) return cmd_gate(common);
    if (*effective) return cmd_effective(common);
    if (*tune) return cmd_tune(common);
    if (*sweep) return cmd_sweep(common, json::object());
    if (*fig2) return cmd_sweep(common, preset("fig2"));
    if (*fig4) return cmd_sweep(common, preset("fig4"));
  } catch (const ConfigError& e) {
    std::cerr << "config error";
    if (!e.field().empty()) std::cerr << " [" << e.field() << "]";
    std::cerr << ": " << e.what() << "\n";
    return kConfig;
  } catch (const HeraldImpossible& e) {
    std::cerr << "herald impossible: " << e.what() << " (P = " << e.probability() << ")\n";
    return kHerald;
  } catch (const IntegratorFailure& e) {
    std::cerr << "integrator failure: " << e.what() << "\n";
    return kIntegrator;
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid parameters: " << e.what() << "\n";
    return kConfig;
  } catch (const std::domain_error& e) {
    std::cerr << "degenerate parameters: " << e.what() << "\n";
    return kConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kConfig;
  }
  return kConfig;
}
