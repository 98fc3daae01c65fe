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
#include <cstddef>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

namespace heraldsim {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using SparseMatrix = Eigen::SparseMatrix<Complex, Eigen::RowMajor>;
using Index = Eigen::Index;

/// Entries with magnitude at or below this are dropped from sparse operators.
inline constexpr double kSparsePurge = 1e-15;

/// One tensor factor: either a few-level atom with named levels or a bosonic
/// mode truncated at `n_max` photons.
class Subsystem {
 public:
  enum class Kind { Atom, Mode };

  /// Levels listed in `excited` count as one excitation each when an
  /// excitation cap is applied.
  static Subsystem atom(std::string name, std::vector<std::string> levels,
                        std::vector<std::string> excited = {});
  static Subsystem mode(std::string name, int n_max);

  Kind kind() const noexcept { return kind_; }
  bool is_atom() const noexcept { return kind_ == Kind::Atom; }
  bool is_mode() const noexcept { return kind_ == Kind::Mode; }
  const std::string& name() const noexcept { return name_; }
  int dim() const noexcept { return dim_; }
  int n_max() const noexcept { return dim_ - 1; }
  const std::vector<std::string>& levels() const noexcept { return levels_; }

  /// Throws std::invalid_argument for unknown levels or mode slots.
  int level_index(std::string_view level) const;
  bool has_level(std::string_view level) const noexcept;

  /// Excitation number carried by local basis state `local`.
  int excitation(int local) const noexcept { return excitation_[static_cast<std::size_t>(local)]; }

 private:
  Kind kind_ = Kind::Atom;
  std::string name_;
  int dim_ = 0;
  std::vector<std::string> levels_;
  std::vector<int> excitation_;
};

/// Tensor-product basis with optional global excitation cap. Basis states are
/// ordered lexicographically in slot order (first slot most significant).
class HilbertSpace {
 public:
  HilbertSpace(std::vector<Subsystem> slots, std::optional<int> excitation_cap);

  Index dim() const noexcept { return dim_; }
  std::size_t num_slots() const noexcept { return slots_.size(); }
  const Subsystem& slot(std::size_t i) const { return slots_.at(i); }
  const std::vector<Subsystem>& slots() const noexcept { return slots_; }
  std::optional<int> excitation_cap() const noexcept { return cap_; }

  /// Slot position by name; throws std::invalid_argument if absent.
  std::size_t slot_index(std::string_view name) const;

  /// Local indices of retained basis state `i`.
  std::span<const int> state(Index i) const;
  int excitation(Index i) const { return excitation_[static_cast<std::size_t>(i)]; }

  /// Flat index of a multi-index, or nullopt if it is excluded by the cap.
  std::optional<Index> index_of(std::span<const int> local) const;

  /// Flat index of the state given by level names (atoms) or photon numbers
  /// written as decimal strings (modes), one entry per slot.
  Index index_of_labels(std::span<const std::string> labels) const;

  /// Dimension of the uncapped product space.
  Index product_dim() const noexcept { return product_dim_; }

 private:
  Index product_code(std::span<const int> local) const;

  std::vector<Subsystem> slots_;
  std::optional<int> cap_;
  std::vector<int> states_;      // row-major: dim x num_slots
  std::vector<int> excitation_;  // per retained state
  std::vector<Index> strides_;   // mixed-radix strides of the product space
  std::vector<Index> lookup_;    // product code -> retained index or -1
  Index product_dim_ = 1;
  Index dim_ = 0;
};

using SpacePtr = std::shared_ptr<const HilbertSpace>;

/// Builds a space; throws std::invalid_argument on zero slots, duplicate slot
/// names, duplicate level names, atoms with fewer than two levels or modes with
/// n_max < 1.
SpacePtr build_space(std::vector<Subsystem> slots, std::optional<int> excitation_cap = std::nullopt);

/// Sparse complex operator on a fixed space. Storage is compressed row-major
/// with entries of magnitude <= kSparsePurge removed, so equal constructions
/// give identical structures.
class Operator {
 public:
  Operator(SpacePtr space, SparseMatrix entries, std::string label = {});

  static Operator identity(SpacePtr space);
  static Operator zero(SpacePtr space);

  const SpacePtr& space() const noexcept { return space_; }
  const SparseMatrix& matrix() const noexcept { return entries_; }
  const std::string& label() const noexcept { return label_; }
  Index dim() const noexcept { return entries_.rows(); }
  Index nonzeros() const noexcept { return entries_.nonZeros(); }

  Operator adjoint() const;
  CMatrix dense() const { return CMatrix(entries_); }
  Complex coeff(Index row, Index col) const { return entries_.coeff(row, col); }
  Operator with_label(std::string label) const;

  Operator& operator+=(const Operator& other);
  Operator& operator-=(const Operator& other);
  Operator& operator*=(Complex scalar);

  friend Operator operator+(Operator a, const Operator& b) { return a += b; }
  friend Operator operator-(Operator a, const Operator& b) { return a -= b; }
  friend Operator operator*(Operator a, Complex s) { return a *= s; }
  friend Operator operator*(Complex s, Operator a) { return a *= s; }
  friend Operator operator*(const Operator& a, const Operator& b);

 private:
  void canonicalize();
  void require_same_space(const Operator& other) const;

  SpacePtr space_;
  SparseMatrix entries_;
  std::string label_;
};

/// Dense density matrix bound to a space.
class DensityMatrix {
 public:
  DensityMatrix(SpacePtr space, CMatrix entries);

  static DensityMatrix pure(SpacePtr space, const CVector& psi);

  const SpacePtr& space() const noexcept { return space_; }
  const CMatrix& matrix() const noexcept { return entries_; }
  CMatrix& matrix() noexcept { return entries_; }
  Index dim() const noexcept { return entries_.rows(); }

  Complex trace() const { return entries_.trace(); }
  /// Largest |rho - rho^dag| element.
  double hermiticity_error() const;
  /// Smallest eigenvalue of the Hermitian part, computed on the nonzero
  /// row/column support.
  double min_eigenvalue() const;

  /// Throws std::domain_error if Hermiticity, trace or positivity checks fail.
  /// `normalized` selects trace == 1 versus 0 < trace <= 1.
  void validate(bool normalized) const;

 private:
  SpacePtr space_;
  CMatrix entries_;
};

/// local_op (slot_dim x slot_dim) tensored with identity elsewhere, restricted
/// to retained basis states.
Operator embed(const CMatrix& local_op, std::size_t slot_index, const SpacePtr& space,
               std::string label = {});

/// Truncated annihilator a|n> = sqrt(n)|n-1> on a mode slot.
Operator annihilator(const SpacePtr& space, std::size_t slot_index);

/// |upper><lower| on an atom slot.
Operator transition(const SpacePtr& space, std::size_t slot_index, std::string_view upper,
                    std::string_view lower);

/// Reduced state on the kept slots. The result lives on the uncapped product
/// of the kept slots; capped inputs are lifted (excluded states are zero).
DensityMatrix partial_trace(const DensityMatrix& rho, std::span<const std::size_t> keep);

struct HeraldOutcome {
  DensityMatrix state;
  double probability;
};

/// Projects `slot_index` onto `level`, returning the normalized conditional
/// state on the remaining slots. Throws HeraldImpossible below 1e-12.
HeraldOutcome herald_project(const DensityMatrix& rho, std::size_t slot_index, std::string_view level);

/// Probability of finding `slot_index` in `level`.
double level_probability(const DensityMatrix& rho, std::size_t slot_index, std::string_view level);

/// Trace distance 0.5 * || a - b ||_1 of two same-shaped matrices.
double trace_distance(const CMatrix& a, const CMatrix& b);

}  // namespace heraldsim
