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

#include "heraldsim/hilbert.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <set>
#include <stdexcept>
#include <unordered_map>

#include "heraldsim/errors.hpp"

namespace heraldsim {

namespace {

using Triplet = Eigen::Triplet<Complex>;

constexpr double kHeraldFloor = 1e-12;

void prune(SparseMatrix& m) {
  m.prune([](Index, Index, const Complex& v) { return std::abs(v) > kSparsePurge; });
  m.makeCompressed();
}

}  // namespace

// ---------------------------------------------------------------------------
// Subsystem

Subsystem Subsystem::atom(std::string name, std::vector<std::string> levels,
                          std::vector<std::string> excited) {
  if (levels.size() < 2) {
    throw std::invalid_argument("atom '" + name + "' needs at least two levels");
  }
  std::set<std::string> seen;
  for (const auto& l : levels) {
    if (!seen.insert(l).second) {
      throw std::invalid_argument("duplicate level '" + l + "' in atom '" + name + "'");
    }
  }
  Subsystem s;
  s.kind_ = Kind::Atom;
  s.name_ = std::move(name);
  s.dim_ = static_cast<int>(levels.size());
  s.excitation_.assign(levels.size(), 0);
  for (const auto& e : excited) {
    auto it = std::find(levels.begin(), levels.end(), e);
    if (it == levels.end()) {
      throw std::invalid_argument("excited level '" + e + "' not declared in atom '" + s.name_ + "'");
    }
    s.excitation_[static_cast<std::size_t>(it - levels.begin())] = 1;
  }
  s.levels_ = std::move(levels);
  return s;
}

Subsystem Subsystem::mode(std::string name, int n_max) {
  if (n_max < 1) throw std::invalid_argument("mode '" + name + "' needs n_max >= 1");
  Subsystem s;
  s.kind_ = Kind::Mode;
  s.name_ = std::move(name);
  s.dim_ = n_max + 1;
  for (int n = 0; n <= n_max; ++n) {
    s.levels_.push_back(std::to_string(n));
    s.excitation_.push_back(n);
  }
  return s;
}

int Subsystem::level_index(std::string_view level) const {
  if (!is_atom()) throw std::invalid_argument("slot '" + name_ + "' is a mode, not an atom");
  auto it = std::find(levels_.begin(), levels_.end(), level);
  if (it == levels_.end()) {
    throw std::invalid_argument("unknown level '" + std::string(level) + "' on atom '" + name_ + "'");
  }
  return static_cast<int>(it - levels_.begin());
}

bool Subsystem::has_level(std::string_view level) const noexcept {
  return is_atom() && std::find(levels_.begin(), levels_.end(), level) != levels_.end();
}

// ---------------------------------------------------------------------------
// HilbertSpace

HilbertSpace::HilbertSpace(std::vector<Subsystem> slots, std::optional<int> excitation_cap)
    : slots_(std::move(slots)), cap_(excitation_cap) {
  if (slots_.empty()) throw std::invalid_argument("a Hilbert space needs at least one slot");
  if (cap_ && *cap_ < 0) throw std::invalid_argument("excitation cap must be non-negative");
  std::set<std::string> names;
  for (const auto& s : slots_) {
    if (!names.insert(s.name()).second) {
      throw std::invalid_argument("duplicate slot name '" + s.name() + "'");
    }
  }

  const std::size_t n = slots_.size();
  strides_.assign(n, 1);
  for (std::size_t k = n; k-- > 0;) {
    strides_[k] = product_dim_;
    product_dim_ *= slots_[k].dim();
  }
  lookup_.assign(static_cast<std::size_t>(product_dim_), -1);

  std::vector<int> local(n, 0);
  for (Index code = 0; code < product_dim_; ++code) {
    Index rem = code;
    int exc = 0;
    for (std::size_t k = 0; k < n; ++k) {
      local[k] = static_cast<int>(rem / strides_[k]);
      rem %= strides_[k];
      exc += slots_[k].excitation(local[k]);
    }
    if (cap_ && exc > *cap_) continue;
    lookup_[static_cast<std::size_t>(code)] = dim_++;
    states_.insert(states_.end(), local.begin(), local.end());
    excitation_.push_back(exc);
  }
}

std::size_t HilbertSpace::slot_index(std::string_view name) const {
  for (std::size_t k = 0; k < slots_.size(); ++k) {
    if (slots_[k].name() == name) return k;
  }
  throw std::invalid_argument("no slot named '" + std::string(name) + "'");
}

std::span<const int> HilbertSpace::state(Index i) const {
  if (i < 0 || i >= dim_) throw std::out_of_range("basis index out of range");
  return {states_.data() + static_cast<std::size_t>(i) * slots_.size(), slots_.size()};
}

Index HilbertSpace::product_code(std::span<const int> local) const {
  if (local.size() != slots_.size()) throw std::invalid_argument("multi-index has wrong length");
  Index code = 0;
  for (std::size_t k = 0; k < local.size(); ++k) {
    if (local[k] < 0 || local[k] >= slots_[k].dim()) {
      throw std::out_of_range("local index out of range on slot '" + slots_[k].name() + "'");
    }
    code += local[k] * strides_[k];
  }
  return code;
}

std::optional<Index> HilbertSpace::index_of(std::span<const int> local) const {
  Index idx = lookup_[static_cast<std::size_t>(product_code(local))];
  if (idx < 0) return std::nullopt;
  return idx;
}

Index HilbertSpace::index_of_labels(std::span<const std::string> labels) const {
  if (labels.size() != slots_.size()) throw std::invalid_argument("label list has wrong length");
  std::vector<int> local(labels.size());
  for (std::size_t k = 0; k < labels.size(); ++k) {
    const auto& s = slots_[k];
    if (s.is_atom()) {
      local[k] = s.level_index(labels[k]);
    } else {
      int n = -1;
      auto [p, ec] = std::from_chars(labels[k].data(), labels[k].data() + labels[k].size(), n);
      if (ec != std::errc{} || p != labels[k].data() + labels[k].size()) {
        throw std::invalid_argument("mode label must be a photon number, got '" + labels[k] + "'");
      }
      local[k] = n;
    }
  }
  auto idx = index_of(local);
  if (!idx) throw std::invalid_argument("state is excluded by the excitation cap");
  return *idx;
}

SpacePtr build_space(std::vector<Subsystem> slots, std::optional<int> excitation_cap) {
  return std::make_shared<const HilbertSpace>(std::move(slots), excitation_cap);
}

// ---------------------------------------------------------------------------
// Operator

Operator::Operator(SpacePtr space, SparseMatrix entries, std::string label)
    : space_(std::move(space)), entries_(std::move(entries)), label_(std::move(label)) {
  if (!space_) throw std::invalid_argument("operator needs a space");
  if (entries_.rows() != space_->dim() || entries_.cols() != space_->dim()) {
    throw std::invalid_argument("operator shape does not match space dimension");
  }
  canonicalize();
}

Operator Operator::identity(SpacePtr space) {
  SparseMatrix id(space->dim(), space->dim());
  id.setIdentity();
  return Operator(std::move(space), std::move(id), "I");
}

Operator Operator::zero(SpacePtr space) {
  SparseMatrix z(space->dim(), space->dim());
  return Operator(std::move(space), std::move(z), "0");
}

void Operator::canonicalize() { prune(entries_); }

void Operator::require_same_space(const Operator& other) const {
  if (space_ != other.space_) throw std::invalid_argument("operators live on different spaces");
}

Operator Operator::adjoint() const {
  SparseMatrix adj = entries_.adjoint();
  return Operator(space_, std::move(adj), label_.empty() ? label_ : label_ + "^dag");
}

Operator Operator::with_label(std::string label) const {
  Operator out = *this;
  out.label_ = std::move(label);
  return out;
}

Operator& Operator::operator+=(const Operator& other) {
  require_same_space(other);
  entries_ += other.entries_;
  canonicalize();
  return *this;
}

Operator& Operator::operator-=(const Operator& other) {
  require_same_space(other);
  entries_ -= other.entries_;
  canonicalize();
  return *this;
}

Operator& Operator::operator*=(Complex scalar) {
  entries_ *= scalar;
  canonicalize();
  return *this;
}

Operator operator*(const Operator& a, const Operator& b) {
  a.require_same_space(b);
  SparseMatrix p = a.entries_ * b.entries_;
  return Operator(a.space_, std::move(p));
}

// ---------------------------------------------------------------------------
// DensityMatrix

DensityMatrix::DensityMatrix(SpacePtr space, CMatrix entries)
    : space_(std::move(space)), entries_(std::move(entries)) {
  if (!space_) throw std::invalid_argument("density matrix needs a space");
  if (entries_.rows() != space_->dim() || entries_.cols() != space_->dim()) {
    throw std::invalid_argument("density matrix shape does not match space dimension");
  }
}

DensityMatrix DensityMatrix::pure(SpacePtr space, const CVector& psi) {
  return DensityMatrix(std::move(space), psi * psi.adjoint());
}

double DensityMatrix::hermiticity_error() const {
  return (entries_ - entries_.adjoint()).cwiseAbs().maxCoeff();
}

double DensityMatrix::min_eigenvalue() const {
  std::vector<Index> support;
  for (Index i = 0; i < dim(); ++i) {
    if (entries_.row(i).cwiseAbs().maxCoeff() > 0.0 || entries_.col(i).cwiseAbs().maxCoeff() > 0.0) {
      support.push_back(i);
    }
  }
  if (support.empty()) return 0.0;
  const Index n = static_cast<Index>(support.size());
  CMatrix sub(n, n);
  for (Index a = 0; a < n; ++a)
    for (Index b = 0; b < n; ++b) sub(a, b) = entries_(support[a], support[b]);
  CMatrix herm = 0.5 * (sub + sub.adjoint());
  Eigen::SelfAdjointEigenSolver<CMatrix> es(herm, Eigen::EigenvaluesOnly);
  double lo = es.eigenvalues().minCoeff();
  // Rows outside the support contribute exact zero eigenvalues.
  return n < dim() ? std::min(lo, 0.0) : lo;
}

void DensityMatrix::validate(bool normalized) const {
  const double herm = hermiticity_error();
  if (herm > 1e-10) throw std::domain_error("density matrix not Hermitian: " + std::to_string(herm));
  const Complex tr = trace();
  if (std::abs(tr.imag()) > 1e-9) throw std::domain_error("density matrix trace not real");
  if (normalized) {
    if (std::abs(tr.real() - 1.0) > 1e-9) {
      throw std::domain_error("density matrix trace != 1: " + std::to_string(tr.real()));
    }
  } else if (tr.real() <= 0.0 || tr.real() > 1.0 + 1e-9) {
    throw std::domain_error("unnormalized density matrix trace outside (0, 1]");
  }
  const double lo = min_eigenvalue();
  if (lo < -1e-9) throw std::domain_error("density matrix not positive: " + std::to_string(lo));
}

// ---------------------------------------------------------------------------
// Free functions

Operator embed(const CMatrix& local_op, std::size_t slot_index, const SpacePtr& space,
               std::string label) {
  if (slot_index >= space->num_slots()) throw std::out_of_range("slot index out of range");
  const int d = space->slot(slot_index).dim();
  if (local_op.rows() != d || local_op.cols() != d) {
    throw std::invalid_argument("local operator dimension does not match slot '" +
                                space->slot(slot_index).name() + "'");
  }
  std::vector<Triplet> trips;
  std::vector<int> target(space->num_slots());
  for (Index col = 0; col < space->dim(); ++col) {
    auto src = space->state(col);
    const int c = src[slot_index];
    std::copy(src.begin(), src.end(), target.begin());
    for (int r = 0; r < d; ++r) {
      const Complex v = local_op(r, c);
      if (std::abs(v) <= kSparsePurge) continue;
      target[slot_index] = r;
      if (auto row = space->index_of(target)) trips.emplace_back(*row, col, v);
    }
  }
  SparseMatrix m(space->dim(), space->dim());
  m.setFromTriplets(trips.begin(), trips.end());
  return Operator(space, std::move(m), std::move(label));
}

Operator annihilator(const SpacePtr& space, std::size_t slot_index) {
  const auto& s = space->slot(slot_index);
  if (!s.is_mode()) throw std::invalid_argument("slot '" + s.name() + "' is not a bosonic mode");
  CMatrix a = CMatrix::Zero(s.dim(), s.dim());
  for (int n = 1; n < s.dim(); ++n) a(n - 1, n) = std::sqrt(static_cast<double>(n));
  return embed(a, slot_index, space, "a_" + s.name());
}

Operator transition(const SpacePtr& space, std::size_t slot_index, std::string_view upper,
                    std::string_view lower) {
  const auto& s = space->slot(slot_index);
  const int u = s.level_index(upper);
  const int l = s.level_index(lower);
  CMatrix op = CMatrix::Zero(s.dim(), s.dim());
  op(u, l) = 1.0;
  return embed(op, slot_index, space,
               "|" + std::string(upper) + "><" + std::string(lower) + "|_" + s.name());
}

DensityMatrix partial_trace(const DensityMatrix& rho, std::span<const std::size_t> keep) {
  const auto& space = *rho.space();
  if (keep.empty()) throw std::invalid_argument("partial_trace needs at least one kept slot");
  std::vector<bool> kept(space.num_slots(), false);
  for (auto k : keep) {
    if (k >= space.num_slots()) throw std::out_of_range("kept slot index out of range");
    if (kept[k]) throw std::invalid_argument("kept slot listed twice");
    kept[k] = true;
  }

  std::vector<Subsystem> out_slots;
  std::vector<std::size_t> kept_order, traced_order;
  for (std::size_t k = 0; k < space.num_slots(); ++k) {
    if (kept[k]) {
      out_slots.push_back(space.slot(k));
      kept_order.push_back(k);
    } else {
      traced_order.push_back(k);
    }
  }
  auto out_space = build_space(std::move(out_slots));

  // Group retained states by the configuration of the traced slots; each
  // excluded product state would carry zero amplitude, so the lift is implicit.
  std::unordered_map<Index, std::vector<std::pair<Index, Index>>> groups;
  std::vector<int> kept_local(kept_order.size());
  for (Index i = 0; i < space.dim(); ++i) {
    auto st = space.state(i);
    Index tcode = 0;
    for (auto k : traced_order) tcode = tcode * space.slot(k).dim() + st[k];
    for (std::size_t a = 0; a < kept_order.size(); ++a) kept_local[a] = st[kept_order[a]];
    groups[tcode].emplace_back(i, *out_space->index_of(kept_local));
  }

  CMatrix out = CMatrix::Zero(out_space->dim(), out_space->dim());
  const CMatrix& r = rho.matrix();
  for (const auto& [code, members] : groups) {
    for (const auto& [i, oi] : members)
      for (const auto& [j, oj] : members) out(oi, oj) += r(i, j);
  }
  return DensityMatrix(out_space, std::move(out));
}

double level_probability(const DensityMatrix& rho, std::size_t slot_index, std::string_view level) {
  const auto& space = *rho.space();
  const int lv = space.slot(slot_index).level_index(level);
  double p = 0.0;
  for (Index i = 0; i < space.dim(); ++i) {
    if (space.state(i)[slot_index] == lv) p += rho.matrix()(i, i).real();
  }
  return p;
}

HeraldOutcome herald_project(const DensityMatrix& rho, std::size_t slot_index, std::string_view level) {
  const auto& space = *rho.space();
  if (slot_index >= space.num_slots()) throw std::out_of_range("slot index out of range");
  const auto& s = space.slot(slot_index);
  const int lv = s.level_index(level);
  if (space.num_slots() < 2) throw std::invalid_argument("cannot herald the only slot of a space");

  std::vector<Subsystem> rest;
  for (std::size_t k = 0; k < space.num_slots(); ++k)
    if (k != slot_index) rest.push_back(space.slot(k));
  std::optional<int> cap = space.excitation_cap();
  if (cap) cap = *cap - s.excitation(lv);
  auto out_space = build_space(std::move(rest), cap);

  std::vector<std::pair<Index, Index>> map;  // (index in rho, index in out)
  std::vector<int> local(space.num_slots() - 1);
  for (Index i = 0; i < space.dim(); ++i) {
    auto st = space.state(i);
    if (st[slot_index] != lv) continue;
    std::size_t a = 0;
    for (std::size_t k = 0; k < st.size(); ++k)
      if (k != slot_index) local[a++] = st[k];
    map.emplace_back(i, *out_space->index_of(local));
  }

  CMatrix out = CMatrix::Zero(out_space->dim(), out_space->dim());
  double p = 0.0;
  for (const auto& [i, oi] : map) {
    p += rho.matrix()(i, i).real();
    for (const auto& [j, oj] : map) out(oi, oj) = rho.matrix()(i, j);
  }
  if (p < kHeraldFloor) {
    throw HeraldImpossible("herald on level '" + std::string(level) + "' has probability " +
                               std::to_string(p),
                           p);
  }
  out /= p;
  return {DensityMatrix(out_space, std::move(out)), p};
}

double trace_distance(const CMatrix& a, const CMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) throw std::invalid_argument("shape mismatch");
  CMatrix d = a - b;
  Eigen::BDCSVD<CMatrix> svd(d);
  return 0.5 * svd.singularValues().sum();
}

}  // namespace heraldsim
