// Copyright 2026 The projens Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <compare>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "projens/types.hpp"

namespace projens {

enum class Constraint { kFull, kBlockade };
enum class Sector { kAll, kEven, kOdd };

std::string_view to_string(Constraint c);
std::string_view to_string(Sector s);
Constraint parse_constraint(std::string_view s);
Sector parse_sector(std::string_view s);

/// Computational-basis configuration of `size()` sites.
///
/// Sites are numbered 1..N. Site 1 is stored in the most significant of the
/// N low bits, so numeric order on `bits()` equals lexicographic order on the
/// printed string, and `str()` prints site 1 first.
class Bitstring {
 public:
  Bitstring() = default;
  Bitstring(std::uint64_t bits, int n);

  static Bitstring parse(std::string_view text);
  static Bitstring zeros(int n) { return Bitstring(0, n); }

  int size() const { return n_; }
  std::uint64_t bits() const { return bits_; }
  bool at(int site) const { return (bits_ >> (n_ - site)) & 1ULL; }
  Bitstring with(int site, bool value) const;
  int count_ones() const;
  std::string str() const;

  auto operator<=>(const Bitstring&) const = default;

 private:
  std::uint64_t bits_ = 0;
  int n_ = 0;
};

inline constexpr std::uint64_t site_mask(int n, int site) { return 1ULL << (n - site); }

/// True when no two adjacent sites of an N-site chain are both 1.
inline constexpr bool blockade_legal(std::uint64_t bits) { return (bits & (bits >> 1)) == 0; }

std::uint64_t reverse_sites(std::uint64_t bits, int n);

/// Site reversal z_1 z_2 ... z_N -> z_N ... z_1.
Bitstring parity_partner(const Bitstring& z);

/// Enumerated basis of an N-site chain.
///
/// States are sorted lexicographically. In a parity sector each basis element
/// is the symmetric (even) or antisymmetric (odd) combination of z and its
/// mirror, represented by min(z, mirror(z)); odd sectors have no palindromes.
class BasisMap {
 public:
  BasisMap(int n, Constraint constraint, Sector sector = Sector::kAll);

  int num_sites() const { return n_; }
  Constraint constraint() const { return constraint_; }
  Sector sector() const { return sector_; }
  std::size_t dim() const { return states_.size(); }

  std::uint64_t state(std::size_t i) const { return states_[i]; }
  Bitstring bitstring(std::size_t i) const { return Bitstring(states_[i], n_); }
  std::span<const std::uint64_t> states() const { return states_; }

  /// Dense index of a configuration; in a parity sector z and mirror(z) share one.
  std::optional<std::size_t> find(std::uint64_t bits) const;
  std::size_t index(const Bitstring& z) const;
  bool contains(std::uint64_t bits) const { return find(bits).has_value(); }

  /// Is `bits` allowed by the constraint alone (ignoring the sector)?
  bool admits(std::uint64_t bits) const {
    return constraint_ == Constraint::kFull || blockade_legal(bits);
  }

  bool operator==(const BasisMap& other) const {
    return n_ == other.n_ && constraint_ == other.constraint_ && sector_ == other.sector_;
  }

 private:
  int n_;
  Constraint constraint_;
  Sector sector_;
  std::vector<std::uint64_t> states_;
  std::vector<std::int32_t> lookup_;  // direct table for small N
};

using BasisPtr = std::shared_ptr<const BasisMap>;

/// Site-reversal operator Q as a permutation matrix (sector kAll bases only).
SparseMatrix reversal_operator(const BasisMap& basis);

/// Columns are the sector basis vectors expressed in the sector-less basis of
/// the same constraint (dim_parent x dim_sector, orthonormal columns).
SparseMatrix sector_isometry(const BasisMap& sector_basis, const BasisMap& parent);

/// Validated basis construction: 1 <= N <= 24 (full) or <= 32 (blockade).
BasisMap build_basis(int n, Constraint constraint, Sector sector = Sector::kAll);
BasisPtr make_basis(int n, Constraint constraint, Sector sector = Sector::kAll);

/// Number of length-N blockade-legal strings that are palindromes.
std::size_t count_blockade_palindromes(int n);

/// Subsystem A and its complement B within an N-site chain.
///
/// With the boundary rule active, an outcome z_B is admissible only if every
/// B-site adjacent to A reads 0, so all admissible z_B see the same z_A space.
class Bipartition {
 public:
  Bipartition(int n, std::vector<int> sites_a, bool boundary_rule = false);

  static Bipartition contiguous(int n, int first_site, int length, bool boundary_rule = false);
  static Bipartition half_chain(int n);

  int num_sites() const { return n_; }
  std::span<const int> sites_a() const { return sites_a_; }
  std::span<const int> sites_b() const { return sites_b_; }
  bool boundary_rule() const { return boundary_rule_; }
  std::span<const int> boundary_sites() const { return boundary_; }

  /// Splits a full configuration into (z_A, z_B), each ordered by site.
  std::pair<Bitstring, Bitstring> split(const Bitstring& z) const;
  std::pair<std::uint64_t, std::uint64_t> split_bits(std::uint64_t z) const;
  Bitstring join(const Bitstring& z_a, const Bitstring& z_b) const;
  std::uint64_t join_bits(std::uint64_t z_a, std::uint64_t z_b) const;

  /// Boundary-rule check on a full configuration (always true when the rule is off).
  bool admissible(std::uint64_t z) const { return !boundary_rule_ || (z & boundary_mask_) == 0; }
  /// Boundary-rule check on a z_B string.
  bool admissible_b(const Bitstring& z_b) const;

  /// Is z_A allowed by the constraint restricted to the sites of A?
  bool a_legal(std::uint64_t z_a, Constraint constraint) const;

 private:
  int n_;
  std::vector<int> sites_a_;
  std::vector<int> sites_b_;
  bool boundary_rule_;
  std::vector<int> boundary_;
  std::uint64_t boundary_mask_ = 0;
  std::vector<std::pair<int, int>> adjacent_a_;  // positions within z_A of chain-adjacent A sites
};

/// Admissible z_A configurations (sorted) and their count.
std::vector<std::uint64_t> subsystem_states(const Bipartition& bipartition, Constraint constraint);
std::size_t subsystem_dim(const Bipartition& bipartition, Constraint constraint);

std::pair<Bitstring, Bitstring> split_bitstring(const Bitstring& z, const Bipartition& bipartition);

/// Normalized amplitude vector over a basis; ||amps|| = 1 within 1e-10.
class StateVector {
 public:
  StateVector(BasisPtr basis, CVector amplitudes);

  /// Rescales `amplitudes` to unit norm (throws on a zero vector).
  static StateVector normalized(BasisPtr basis, CVector amplitudes);
  static StateVector basis_state(BasisPtr basis, const Bitstring& z);
  static StateVector zeros_state(BasisPtr basis) {
    return basis_state(basis, Bitstring::zeros(basis->num_sites()));
  }

  const BasisMap& basis() const { return *basis_; }
  const BasisPtr& basis_ptr() const { return basis_; }
  const CVector& amplitudes() const { return amps_; }
  std::size_t dim() const { return static_cast<std::size_t>(amps_.size()); }
  int num_sites() const { return basis_->num_sites(); }

  /// <z|psi> for a configuration z (parity-sector coefficients are unfolded).
  cplx amplitude(const Bitstring& z) const;
  std::vector<double> probabilities() const;
  cplx overlap(const StateVector& other) const { return amps_.dot(other.amps_); }

  static constexpr double kNormTolerance = 1e-10;

 private:
  BasisPtr basis_;
  CVector amps_;
};

}  // namespace projens
