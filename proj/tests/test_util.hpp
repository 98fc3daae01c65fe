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

#include <random>

#include "heraldsim/effective.hpp"
#include "heraldsim/hilbert.hpp"
#include "heraldsim/params.hpp"

namespace heraldsim::testing {

inline PhysicalParams tuned(Setup s, double C, double lambda, double dE2) {
  const PhysicalParams p = caption_params(s, C, lambda, dE2);
  return (s == Setup::Nonlocal ? tune_detunings_nonlocal(p) : tune_detunings_dfs(p)).params;
}

inline CMatrix random_density(Index dim, std::mt19937_64& rng, Index rank = -1) {
  std::normal_distribution<double> n(0.0, 1.0);
  if (rank < 0) rank = dim;
  CMatrix a(dim, rank);
  for (Index i = 0; i < dim; ++i)
    for (Index j = 0; j < rank; ++j) a(i, j) = Complex(n(rng), n(rng));
  CMatrix rho = a * a.adjoint();
  return rho / rho.trace();
}

inline CMatrix kron(const CMatrix& a, const CMatrix& b) {
  CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Index i = 0; i < a.rows(); ++i)
    for (Index j = 0; j < a.cols(); ++j) out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

}  // namespace heraldsim::testing
