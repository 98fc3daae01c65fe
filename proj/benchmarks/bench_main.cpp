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

#include <benchmark/benchmark.h>

#include <random>

#include "heraldsim/dynamics.hpp"
#include "heraldsim/effective.hpp"
#include "heraldsim/model.hpp"
#include "heraldsim/protocol.hpp"

namespace {

using namespace heraldsim;

PhysicalParams tuned_nonlocal(double C, double dE2) {
  return tune_detunings_nonlocal(caption_params(Setup::Nonlocal, C, 10.0, dE2)).params;
}

// One Lindblad right-hand side on the full 512-state nonlocal space.
void BM_LindbladRhs(benchmark::State& state) {
  ModelOptions mo;
  mo.excitation_cap = std::nullopt;
  const auto m = build_nonlocal_model(tuned_nonlocal(600, 180), mo);
  const LindbladKernel k(m.H_total, m.lindblad_ops());
  std::mt19937_64 rng(1);
  std::normal_distribution<double> n;
  CMatrix rho(k.dim(), k.dim());
  for (Index i = 0; i < rho.size(); ++i) rho(i) = Complex(n(rng), n(rng));
  CMatrix out;
  for (auto _ : state) {
    k.apply(rho, out);
    benchmark::DoNotOptimize(out.data());
  }
  state.SetLabel("dim " + std::to_string(k.dim()));
}
BENCHMARK(BM_LindbladRhs)->Unit(benchmark::kMillisecond);

void BM_FullGate(benchmark::State& state) {
  const auto p = tuned_nonlocal(600, 180);
  for (auto _ : state) benchmark::DoNotOptimize(run_cphase_nonlocal(p).fidelity);
}
BENCHMARK(BM_FullGate)->Unit(benchmark::kMillisecond)->Iterations(3);

void BM_DfsGate(benchmark::State& state) {
  const auto p = tune_detunings_dfs(caption_params(Setup::DFS, 600, 1.84, 220)).params;
  for (auto _ : state) benchmark::DoNotOptimize(run_cphase_dfs(p).fidelity);
}
BENCHMARK(BM_DfsGate)->Unit(benchmark::kMillisecond)->Iterations(3);

void BM_EffectiveNumeric(benchmark::State& state) {
  const auto m = build_nonlocal_model(tuned_nonlocal(600, 180));
  for (auto _ : state) benchmark::DoNotOptimize(effective_operators_numeric(m).sectors[3].Gamma);
}
BENCHMARK(BM_EffectiveNumeric)->Unit(benchmark::kMicrosecond);

void BM_EffectiveClosedForm(benchmark::State& state) {
  const auto p = tuned_nonlocal(600, 180);
  for (auto _ : state) benchmark::DoNotOptimize(effective_closed_form(p).sectors[3].Gamma);
}
BENCHMARK(BM_EffectiveClosedForm)->Unit(benchmark::kMicrosecond);

void BM_TuneNonlocal(benchmark::State& state) {
  const auto p = caption_params(Setup::Nonlocal, 600, 10.0, 180);
  for (auto _ : state) benchmark::DoNotOptimize(tune_detunings_nonlocal(p).Gamma);
}
BENCHMARK(BM_TuneNonlocal)->Unit(benchmark::kMicrosecond);

}  // namespace

BENCHMARK_MAIN();
