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

#include <algorithm>
#include <map>
#include <numeric>
#include <stdexcept>

#include <unsupported/Eigen/KroneckerProduct>
#include <unsupported/Eigen/MatrixFunctions>

#include "heraldsim/dynamics.hpp"

namespace heraldsim {

namespace {

using ColSparse = Eigen::SparseMatrix<Complex, Eigen::ColMajor>;

struct DisjointSet {
  std::vector<Index> parent;
  explicit DisjointSet(Index n) : parent(static_cast<std::size_t>(n)) {
    std::iota(parent.begin(), parent.end(), Index{0});
  }
  Index find(Index x) {
    while (parent[static_cast<std::size_t>(x)] != x) {
      auto& p = parent[static_cast<std::size_t>(x)];
      p = parent[static_cast<std::size_t>(p)];
      x = p;
    }
    return x;
  }
  void unite(Index a, Index b) {
    a = find(a);
    b = find(b);
    if (a != b) parent[static_cast<std::size_t>(std::max(a, b))] = std::min(a, b);
  }
};

CMatrix dense_block(const SparseMatrix& m, const std::vector<Index>& idx) {
  const Index n = static_cast<Index>(idx.size());
  CMatrix out = CMatrix::Zero(n, n);
  for (Index a = 0; a < n; ++a)
    for (Index b = 0; b < n; ++b) out(a, b) = m.coeff(idx[static_cast<std::size_t>(a)], idx[static_cast<std::size_t>(b)]);
  return out;
}

}  // namespace

std::vector<Index> support_of(const CMatrix& rho) {
  std::vector<Index> s;
  for (Index i = 0; i < rho.rows(); ++i) {
    if (rho.row(i).cwiseAbs().maxCoeff() > 0.0 || rho.col(i).cwiseAbs().maxCoeff() > 0.0) s.push_back(i);
  }
  return s;
}

LindbladPropagator::LindbladPropagator(const Operator& H, const std::vector<Operator>& Ls,
                                       std::span<const Index> seed)
    : dim_(H.dim()) {
  SparseMatrix h_nh = H.matrix();
  for (const auto& L : Ls) {
    if (L.space() != H.space()) throw std::invalid_argument("collapse operator lives on a different space");
    SparseMatrix ldl = L.matrix().adjoint() * L.matrix();
    h_nh -= Complex(0.0, 0.5) * ldl;
  }

  // Column access: entries (i, j) with j reachable make i reachable.
  std::vector<ColSparse> ops;
  ops.emplace_back(h_nh);
  for (const auto& L : Ls) ops.emplace_back(L.matrix());

  std::vector<char> in(static_cast<std::size_t>(dim_), 0);
  std::vector<Index> frontier;
  for (Index s : seed) {
    if (s < 0 || s >= dim_) throw std::out_of_range("seed index out of range");
    if (!in[static_cast<std::size_t>(s)]) {
      in[static_cast<std::size_t>(s)] = 1;
      frontier.push_back(s);
    }
  }
  DisjointSet ds(dim_);
  while (!frontier.empty()) {
    const Index j = frontier.back();
    frontier.pop_back();
    for (const auto& op : ops) {
      for (ColSparse::InnerIterator it(op, j); it; ++it) {
        const Index i = it.row();
        ds.unite(i, j);
        if (!in[static_cast<std::size_t>(i)]) {
          in[static_cast<std::size_t>(i)] = 1;
          frontier.push_back(i);
        }
      }
    }
  }

  std::map<Index, std::size_t> root_to_comp;
  comp_of_.assign(static_cast<std::size_t>(dim_), -1);
  for (Index i = 0; i < dim_; ++i) {
    if (!in[static_cast<std::size_t>(i)]) continue;
    ++reachable_;
    const Index r = ds.find(i);
    auto [it, fresh] = root_to_comp.emplace(r, comps_.size());
    if (fresh) comps_.emplace_back();
    comps_[it->second].push_back(i);
    comp_of_[static_cast<std::size_t>(i)] = static_cast<int>(it->second);
  }

  for (const auto& c : comps_) h_nh_blocks_.push_back(dense_block(h_nh, c));
  for (const auto& L : Ls) {
    std::vector<CMatrix> per;
    for (const auto& c : comps_) per.push_back(dense_block(L.matrix(), c));
    l_blocks_.push_back(std::move(per));
  }
}

std::size_t LindbladPropagator::largest_block() const noexcept {
  std::size_t m = 0;
  for (const auto& c : comps_) m = std::max(m, c.size());
  return m * m;
}

CMatrix LindbladPropagator::block_generator(std::size_t a, std::size_t b) const {
  const Index na = static_cast<Index>(comps_[a].size());
  const Index nb = static_cast<Index>(comps_[b].size());
  const CMatrix Ia = CMatrix::Identity(na, na);
  const CMatrix Ib = CMatrix::Identity(nb, nb);
  const Complex i1(0.0, 1.0);
  // Column-major vec: vec(A X B) = (B^T kron A) vec(X).
  CMatrix M = -i1 * CMatrix(Eigen::kroneckerProduct(Ib, h_nh_blocks_[a]));
  M += i1 * CMatrix(Eigen::kroneckerProduct(h_nh_blocks_[b].conjugate(), Ia));
  for (const auto& per : l_blocks_) M += CMatrix(Eigen::kroneckerProduct(per[b].conjugate(), per[a]));
  return M;
}

LindbladPropagator::StepMap LindbladPropagator::step_map(double t) const {
  StepMap map;
  map.t = t;
  const std::size_t nc = comps_.size();
  map.blocks.resize(nc * nc);
  for (std::size_t a = 0; a < nc; ++a) {
    for (std::size_t b = 0; b < nc; ++b) {
      CMatrix M = block_generator(a, b) * t;
      map.blocks[a * nc + b] = M.exp();
    }
  }
  return map;
}

CMatrix LindbladPropagator::apply(const StepMap& map, const CMatrix& rho) const {
  if (rho.rows() != dim_ || rho.cols() != dim_) throw std::invalid_argument("state has wrong dimension");
  for (Index i = 0; i < dim_; ++i) {
    const bool ri = comp_of_[static_cast<std::size_t>(i)] >= 0;
    for (Index j = 0; j < dim_; ++j) {
      if ((!ri || comp_of_[static_cast<std::size_t>(j)] < 0) && rho(i, j) != Complex{}) {
        throw std::invalid_argument("state has weight outside the propagator's reachable set");
      }
    }
  }
  const std::size_t nc = comps_.size();
  CMatrix out = CMatrix::Zero(dim_, dim_);
  for (std::size_t a = 0; a < nc; ++a) {
    const auto& A = comps_[a];
    for (std::size_t b = 0; b < nc; ++b) {
      const auto& B = comps_[b];
      const Index na = static_cast<Index>(A.size()), nb = static_cast<Index>(B.size());
      CVector v(na * nb);
      for (Index q = 0; q < nb; ++q)
        for (Index p = 0; p < na; ++p) v(q * na + p) = rho(A[static_cast<std::size_t>(p)], B[static_cast<std::size_t>(q)]);
      const CVector w = map.blocks[a * nc + b] * v;
      for (Index q = 0; q < nb; ++q)
        for (Index p = 0; p < na; ++p) out(A[static_cast<std::size_t>(p)], B[static_cast<std::size_t>(q)]) = w(q * na + p);
    }
  }
  return out;
}

}  // namespace heraldsim
