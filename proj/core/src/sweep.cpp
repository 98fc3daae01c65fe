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

#include "heraldsim/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <ostream>
#include <set>
#include <thread>

#include "heraldsim/effective.hpp"
#include "heraldsim/errors.hpp"
#include "heraldsim/serialize.hpp"

namespace heraldsim {

using nlohmann::json;

namespace {

double number(const json& v, const std::string& field) {
  if (!v.is_number()) throw ConfigError("field '" + field + "' must be a number", field);
  return v.get<double>();
}

bool boolean(const json& v, const std::string& field) {
  if (!v.is_boolean()) throw ConfigError("field '" + field + "' must be a boolean", field);
  return v.get<bool>();
}

std::string text(const json& v, const std::string& field) {
  if (!v.is_string()) throw ConfigError("field '" + field + "' must be a string", field);
  return v.get<std::string>();
}

int integer(const json& v, const std::string& field) {
  if (!v.is_number_integer() && !v.is_number_unsigned()) {
    throw ConfigError("field '" + field + "' must be an integer", field);
  }
  return v.get<int>();
}

std::vector<double> number_list(const json& v, const std::string& field) {
  std::vector<double> out;
  if (v.is_number()) {
    out.push_back(v.get<double>());
  } else if (v.is_array()) {
    for (const auto& x : v) out.push_back(number(x, field));
  } else if (v.is_object()) {
    for (const auto& [k, _] : v.items())
      if (k != "start" && k != "stop" && k != "step") throw ConfigError("unknown range key '" + k + "'", field + "." + k);
    if (!v.contains("start") || !v.contains("stop") || !v.contains("step")) {
      throw ConfigError("range in '" + field + "' needs start, stop and step", field);
    }
    const double start = number(v["start"], field), stop = number(v["stop"], field), step = number(v["step"], field);
    if (!(step > 0) || stop < start) throw ConfigError("range in '" + field + "' must have step > 0 and stop >= start", field);
    const auto n = static_cast<long>(std::floor((stop - start) / step + 1e-9)) + 1;
    for (long k = 0; k < n; ++k) out.push_back(start + static_cast<double>(k) * step);
  } else {
    throw ConfigError("field '" + field + "' must be a number, list or range", field);
  }
  return out;
}

Method method_from_string(const std::string& s) {
  if (s == "auto") return Method::Auto;
  if (s == "dopri5") return Method::DormandPrince;
  if (s == "exponential") return Method::Exponential;
  throw ConfigError("method must be auto, dopri5 or exponential, got '" + s + "'", "method");
}

std::string level_key(Level l) {
  switch (l) {
    case Level::FullME:
      return "full";
    case Level::EffectiveME:
      return "effective";
    case Level::Analytic:
      return "analytic";
  }
  return "full";
}

}  // namespace

void SweepConfig::validate() const {
  if (caption_rules) {
    if (C_values.empty()) throw ConfigError("C list is empty", "C");
    if (Delta_E2_over_gamma.empty()) throw ConfigError("Delta_E2_over_gamma list is empty", "Delta_E2_over_gamma");
    for (double c : C_values)
      if (!(c > 0)) throw ConfigError("C values must be positive", "C");
    if (!(lambda > 0)) throw ConfigError("lambda must be positive", "lambda");
    for (double d : Delta_E2_over_gamma)
      if (!std::isfinite(d) || d == 0.0) throw ConfigError("Delta_E2_over_gamma values must be finite and nonzero", "Delta_E2_over_gamma");
  } else if (!params) {
    throw ConfigError("caption_rules=false requires a params object", "params");
  }
  if (!(tol > 0)) throw ConfigError("tol must be positive", "tol");
  if (n_max < 1) throw ConfigError("n_max must be at least 1", "n_max");
  if (excitation_cap < 1) throw ConfigError("excitation_cap must be at least 1", "excitation_cap");
  if (workers < 1) throw ConfigError("workers must be at least 1", "workers");
}

SweepConfig sweep_config_from_json(const json& j) {
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  SweepConfig c;
  for (const auto& [key, v] : j.items()) {
    if (key == "variant") {
      c.variant = setup_from_string(text(v, key));
    } else if (key == "C" || key == "C_values") {
      c.C_values = number_list(v, key);
    } else if (key == "lambda") {
      c.lambda = number(v, key);
    } else if (key == "Delta_E2_over_gamma") {
      c.Delta_E2_over_gamma = number_list(v, key);
    } else if (key == "caption_rules") {
      c.caption_rules = boolean(v, key);
    } else if (key == "params") {
      if (v.is_null()) {
        c.params.reset();
      } else {
        try {
          c.params = v.get<PhysicalParams>();
        } catch (const ConfigError& e) {
          throw ConfigError(std::string("params: ") + e.what(), "params." + e.field());
        }
      }
    } else if (key == "tune") {
      c.tune = boolean(v, key);
    } else if (key == "level") {
      c.level = level_from_string(text(v, key));
    } else if (key == "n_max") {
      c.n_max = integer(v, key);
    } else if (key == "excitation_cap") {
      c.excitation_cap = integer(v, key);
    } else if (key == "tol") {
      c.tol = number(v, key);
    } else if (key == "method") {
      c.method = method_from_string(text(v, key));
    } else if (key == "output_path") {
      c.output_path = text(v, key);
    } else if (key == "workers") {
      const int w = integer(v, key);
      if (w < 1) throw ConfigError("workers must be at least 1", key);
      c.workers = static_cast<unsigned>(w);
    } else if (key == "record_runtime") {
      c.record_runtime = boolean(v, key);
    } else if (key == "process_fidelity") {
      c.process_fidelity = boolean(v, key);
    } else {
      throw ConfigError("unknown config field '" + key + "'", key);
    }
  }
  c.validate();
  return c;
}

json to_json(const SweepConfig& c) {
  json j{{"variant", to_string(c.variant)},
         {"C", c.C_values},
         {"lambda", c.lambda},
         {"Delta_E2_over_gamma", c.Delta_E2_over_gamma},
         {"caption_rules", c.caption_rules},
         {"tune", c.tune},
         {"level", level_key(c.level)},
         {"n_max", c.n_max},
         {"excitation_cap", c.excitation_cap},
         {"tol", c.tol},
         {"method", to_string(c.method)},
         {"output_path", c.output_path},
         {"workers", c.workers},
         {"record_runtime", c.record_runtime},
         {"process_fidelity", c.process_fidelity}};
  if (c.params) j["params"] = *c.params;
  return j;
}

json preset(const std::string& name) {
  json range{{"start", 60}, {"stop", 240}, {"step", 20}};
  if (name == "fig2") {
    return json{{"variant", "nonlocal"}, {"C", {100, 600}}, {"lambda", 10.0}, {"Delta_E2_over_gamma", range},
                {"caption_rules", true}, {"level", "full"}};
  }
  if (name == "fig4") {
    return json{{"variant", "dfs"}, {"C", {100, 600}}, {"lambda", 1.84}, {"Delta_E2_over_gamma", range},
                {"caption_rules", true}, {"level", "full"}};
  }
  throw ConfigError("unknown preset '" + name + "'", "preset");
}

GateOptions gate_options(const SweepConfig& c) {
  GateOptions o;
  o.level = c.level;
  o.model.n_max = c.n_max;
  o.model.excitation_cap = c.excitation_cap;
  o.evolve.tol = c.tol;
  o.evolve.method = c.method;
  o.process_fidelity = c.process_fidelity;
  return o;
}

PhysicalParams point_params(const SweepConfig& c, double C, double Delta_E2_over_gamma,
                            std::vector<std::string>* warnings) {
  PhysicalParams p = c.caption_rules ? caption_params(c.variant, C, c.lambda, Delta_E2_over_gamma) : *c.params;
  if (!c.tune) return p;
  TuneResult t = c.variant == Setup::Nonlocal ? tune_detunings_nonlocal(p) : tune_detunings_dfs(p);
  if (warnings) warnings->insert(warnings->end(), t.warnings.begin(), t.warnings.end());
  return t.params;
}

std::vector<SweepRow> run_sweep(const SweepConfig& c) {
  c.validate();
  struct Point {
    double C, dE2;
  };
  std::vector<Point> points;
  if (c.caption_rules) {
    // Duplicates would only produce identical rows.
    std::set<std::pair<double, double>> seen;
    for (double C : c.C_values)
      for (double d : c.Delta_E2_over_gamma)
        if (seen.emplace(C, d).second) points.push_back({C, d});
  } else {
    const auto r = ReducedParams::from(*c.params);
    points.push_back({r.C, c.params->Delta_E2 / c.params->gamma});
  }

  const GateOptions opts = gate_options(c);
  std::vector<SweepRow> rows(points.size());
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::atomic<bool> stop{false};

  auto worker = [&] {
    for (;;) {
      const std::size_t k = next.fetch_add(1);
      if (k >= points.size() || stop.load()) return;
      try {
        const PhysicalParams p = point_params(c, points[k].C, points[k].dE2);
        const GateResult g = run_cphase(c.variant, p, opts);
        SweepRow& r = rows[k];
        r.C = points[k].C;
        r.lambda = c.caption_rules ? c.lambda : ReducedParams::from(p).lambda;
        r.Delta_E2_over_gamma = points[k].dE2;
        r.t_CZ_gamma = g.t_gate * p.gamma;
        r.P_numeric = g.P_success;
        r.P_analytic = g.P_analytic;
        r.infidelity = g.infidelity;
        r.leakage = g.leakage;
        r.runtime_s = g.runtime_s;
        r.integrator_steps = g.stats.steps;
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        stop = true;
        return;
      }
    }
  };

  const unsigned n = std::max(1u, std::min<unsigned>(c.workers, static_cast<unsigned>(points.size())));
  if (n == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned i = 0; i < n; ++i) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  if (failure) std::rethrow_exception(failure);

  std::sort(rows.begin(), rows.end(), [](const SweepRow& a, const SweepRow& b) {
    return std::tie(a.C, a.Delta_E2_over_gamma) < std::tie(b.C, b.Delta_E2_over_gamma);
  });
  return rows;
}

void write_csv(std::ostream& out, const std::vector<SweepRow>& rows, bool record_runtime) {
  out << kCsvHeader << '\n';
  for (const auto& r : rows) {
    out << format_double(r.C) << ',' << format_double(r.lambda) << ',' << format_double(r.Delta_E2_over_gamma) << ','
        << format_double(r.t_CZ_gamma) << ',' << format_double(r.P_numeric) << ',' << format_double(r.P_analytic)
        << ',' << format_double(r.infidelity) << ',' << format_double(r.leakage) << ','
        << format_double(record_runtime ? r.runtime_s : 0.0) << ',' << r.integrator_steps << '\n';
  }
}

}  // namespace heraldsim
