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

#include "heraldsim/logical.hpp"

#include <cmath>
#include <stdexcept>

namespace heraldsim {

namespace {

using namespace std::complex_literals;

Index bit(Index x, int atom, int n) { return (x >> (n - atom)) & 1; }

void check_atom(int atom, int n) {
  if (atom < 1 || atom > n) throw std::out_of_range("atom index outside the register");
}

CMatrix embed_single(const CMatrix& u, int atom, int n) {
  check_atom(atom, n);
  const Index dim = Index{1} << n;
  const Index mask = Index{1} << (n - atom);
  CMatrix out = CMatrix::Zero(dim, dim);
  for (Index c = 0; c < dim; ++c) {
    const Index b = bit(c, atom, n);
    for (Index a = 0; a < 2; ++a) {
      if (u(a, b) == Complex{}) continue;
      out((c & ~mask) | (a ? mask : 0), c) += u(a, b);
    }
  }
  return out;
}

CMatrix cz_full(int i, int j, int n) {
  check_atom(i, n);
  check_atom(j, n);
  const Index dim = Index{1} << n;
  CMatrix out = CMatrix::Identity(dim, dim);
  for (Index x = 0; x < dim; ++x)
    if (bit(x, i, n) && bit(x, j, n)) out(x, x) = -1.0;
  return out;
}

// Applies a two-qubit superoperator (column-major vec, first atom most
// significant) to atoms (i, j) of an n-atom density matrix.
CMatrix apply_pair_channel(const CMatrix& S, const CMatrix& rho, int i, int j, int n) {
  const Index dim = Index{1} << n;
  const Index mi = Index{1} << (n - i), mj = Index{1} << (n - j);
  auto pair = [&](Index x) { return 2 * bit(x, i, n) + bit(x, j, n); };
  auto with_pair = [&](Index x, Index p) { return (x & ~(mi | mj)) | ((p >> 1) ? mi : 0) | ((p & 1) ? mj : 0); };
  CMatrix out = CMatrix::Zero(dim, dim);
  for (Index r = 0; r < dim; ++r) {
    for (Index c = 0; c < dim; ++c) {
      const Complex v = rho(r, c);
      if (v == Complex{}) continue;
      const Index col = pair(r) + 4 * pair(c);
      for (Index p = 0; p < 4; ++p)
        for (Index q = 0; q < 4; ++q) {
          const Complex s = S(p + 4 * q, col);
          if (s != Complex{}) out(with_pair(r, p), with_pair(c, q)) += s * v;
        }
    }
  }
  return out;
}

void append_single(LogicalCircuit& c, int atom, std::initializer_list<SingleQubit> gates) {
  for (auto g : gates) c.elements.emplace_back(SingleQubitGate{g, atom});
}

}  // namespace

double LogicalCircuit::success_probability() const {
  double p = 1.0;
  for (const auto& e : elements)
    if (const auto* cz = std::get_if<HeraldedCZ>(&e)) p *= cz->probability;
  return p;
}

std::size_t LogicalCircuit::heralded_count() const {
  std::size_t k = 0;
  for (const auto& e : elements) k += std::holds_alternative<HeraldedCZ>(e) ? 1 : 0;
  return k;
}

LogicalCircuit& LogicalCircuit::then(const LogicalCircuit& later) {
  if (later.num_atoms != num_atoms) throw std::invalid_argument("circuits act on different registers");
  elements.insert(elements.end(), later.elements.begin(), later.elements.end());
  return *this;
}

LogicalCircuit logical_hadamard(int a, int b, int num_atoms) {
  check_atom(a, num_atoms);
  check_atom(b, num_atoms);
  LogicalCircuit c;
  c.num_atoms = num_atoms;
  using enum SingleQubit;
  // (HSX) x X
  append_single(c, a, {X, S, H});
  append_single(c, b, {X});
  // CNOT_ab = H_b CZ_ab H_b
  append_single(c, b, {H});
  c.elements.emplace_back(HeraldedCZ{a, b, GateVariant::LocalCZ_DFS});
  append_single(c, b, {H});
  // (HSHZ) x (HSH)
  append_single(c, a, {Z, H, S, H});
  append_single(c, b, {H, S, H});
  return c;
}

LogicalCircuit logical_cnot() {
  LogicalCircuit c;
  c.num_atoms = 4;
  c.then(logical_hadamard(3, 4, 4));
  c.elements.emplace_back(HeraldedCZ{1, 3, GateVariant::NonlocalCZ});
  c.then(logical_hadamard(3, 4, 4));
  return c;
}

void set_probabilities(LogicalCircuit& c, GateVariant v, double p) {
  for (auto& e : c.elements)
    if (auto* cz = std::get_if<HeraldedCZ>(&e); cz && cz->variant == v) cz->probability = p;
}

CMatrix single_qubit_matrix(SingleQubit g) {
  CMatrix m(2, 2);
  switch (g) {
    case SingleQubit::H:
      m << 1.0, 1.0, 1.0, -1.0;
      m /= std::sqrt(2.0);
      break;
    case SingleQubit::S:
      m << 1.0, 0.0, 0.0, 1i;
      break;
    case SingleQubit::X:
      m << 0.0, 1.0, 1.0, 0.0;
      break;
    case SingleQubit::Z:
      m << 1.0, 0.0, 0.0, -1.0;
      break;
  }
  return m;
}

CMatrix ideal_unitary(const LogicalCircuit& c) {
  const Index dim = Index{1} << c.num_atoms;
  CMatrix U = CMatrix::Identity(dim, dim);
  for (const auto& e : c.elements) {
    if (const auto* g = std::get_if<SingleQubitGate>(&e)) {
      U = embed_single(single_qubit_matrix(g->gate), g->atom, c.num_atoms) * U;
    } else {
      const auto& cz = std::get<HeraldedCZ>(e);
      U = cz_full(cz.first, cz.second, c.num_atoms) * U;
    }
  }
  return U;
}

Index dfs_index(int logical, int num_logical) {
  Index x = 0;
  for (int k = 0; k < num_logical; ++k) {
    const int bitv = (logical >> (num_logical - 1 - k)) & 1;
    x = (x << 2) | (bitv ? 0b10 : 0b01);
  }
  return x;
}

CMatrix restrict_to_dfs(const CMatrix& U) {
  const Index dim = U.rows();
  int n = 0;
  while ((Index{1} << n) < dim) ++n;
  if ((Index{1} << n) != dim || n % 2 != 0) throw std::invalid_argument("register must hold an even number of atoms");
  const int nl = n / 2;
  const Index dl = Index{1} << nl;
  CMatrix out(dl, dl);
  for (Index a = 0; a < dl; ++a)
    for (Index b = 0; b < dl; ++b) out(a, b) = U(dfs_index(static_cast<int>(a), nl), dfs_index(static_cast<int>(b), nl));
  return out;
}

double distance_up_to_phase(const CMatrix& A, const CMatrix& B) {
  if (A.rows() != B.rows() || A.cols() != B.cols()) throw std::invalid_argument("shape mismatch");
  Index r = 0, c = 0;
  B.cwiseAbs().maxCoeff(&r, &c);
  Complex phase = 1.0;
  if (std::abs(A(r, c)) > 0) phase = A(r, c) / std::abs(A(r, c)) / (B(r, c) / std::abs(B(r, c)));
  return (A - phase * B).cwiseAbs().maxCoeff();
}

double collective_dephasing_deviation(const LogicalCircuit& c, const std::vector<double>& phases) {
  const int n = c.num_atoms;
  if (n % 2 != 0 || static_cast<int>(phases.size()) != n / 2) {
    throw std::invalid_argument("need one phase per logical pair");
  }
  const Index dim = Index{1} << n;
  CMatrix D = CMatrix::Identity(dim, dim);
  for (Index x = 0; x < dim; ++x) {
    double z = 0.0;
    for (int k = 0; k < n / 2; ++k) {
      const double zz = (bit(x, 2 * k + 1, n) ? -1.0 : 1.0) + (bit(x, 2 * k + 2, n) ? -1.0 : 1.0);
      z += phases[static_cast<std::size_t>(k)] * zz;
    }
    D(x, x) = std::exp(1i * z);
  }
  const CMatrix U = ideal_unitary(c);
  const CMatrix conj = D.adjoint() * U * D;
  return (restrict_to_dfs(conj) - restrict_to_dfs(U)).cwiseAbs().maxCoeff();
}

CMatrix cnot_matrix() {
  CMatrix m = CMatrix::Zero(4, 4);
  m(0, 0) = m(1, 1) = m(2, 3) = m(3, 2) = 1.0;
  return m;
}

CMatrix hadamard_matrix() { return single_qubit_matrix(SingleQubit::H); }

CMatrix ideal_cz_channel() {
  CMatrix cz = CMatrix::Identity(4, 4);
  cz(3, 3) = -1.0;
  return unitary_superop(cz);
}

LogicalChannel apply_circuit_channel(const LogicalCircuit& c, const std::map<GateVariant, CMatrix>& channels) {
  const int n = c.num_atoms;
  if (n % 2 != 0) throw std::invalid_argument("register must hold an even number of atoms");
  for (const auto& e : c.elements) {
    if (const auto* cz = std::get_if<HeraldedCZ>(&e)) {
      const auto it = channels.find(cz->variant);
      if (it == channels.end()) throw std::invalid_argument("no channel for heralded CZ variant " + to_string(cz->variant));
      if (it->second.rows() != 16 || it->second.cols() != 16) throw std::invalid_argument("CZ channel must be 16x16");
    }
  }
  const int nl = n / 2;
  const Index dl = Index{1} << nl;
  const Index dim = Index{1} << n;

  // Single-qubit gates embedded once.
  std::vector<CMatrix> singles(c.elements.size());
  for (std::size_t k = 0; k < c.elements.size(); ++k)
    if (const auto* g = std::get_if<SingleQubitGate>(&c.elements[k]))
      singles[k] = embed_single(single_qubit_matrix(g->gate), g->atom, n);

  LogicalChannel out;
  out.superop = CMatrix::Zero(dl * dl, dl * dl);
  double trace_sum = 0.0;
  for (Index a = 0; a < dl; ++a) {
    for (Index b = 0; b < dl; ++b) {
      CMatrix rho = CMatrix::Zero(dim, dim);
      rho(dfs_index(static_cast<int>(a), nl), dfs_index(static_cast<int>(b), nl)) = 1.0;
      for (std::size_t k = 0; k < c.elements.size(); ++k) {
        if (const auto* cz = std::get_if<HeraldedCZ>(&c.elements[k])) {
          rho = apply_pair_channel(channels.at(cz->variant), rho, cz->first, cz->second, n);
        } else {
          rho = singles[k] * rho * singles[k].adjoint();
        }
      }
      if (a == b) trace_sum += rho.trace().real();
      const CMatrix r = restrict_to_dfs(rho);
      out.superop.col(a + dl * b) = Eigen::Map<const CVector>(r.data(), dl * dl);
    }
  }
  out.probability = trace_sum / static_cast<double>(dl);
  const CMatrix target = unitary_superop(restrict_to_dfs(ideal_unitary(c)));
  out.fidelity = out.probability > 0
                     ? (target.adjoint() * out.superop).trace().real() /
                           (out.probability * static_cast<double>(dl * dl))
                     : 0.0;
  return out;
}

}  // namespace heraldsim
