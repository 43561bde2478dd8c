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

#include "projens/hilbert.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <sstream>

namespace projens {

std::string_view to_string(Constraint c) {
  return c == Constraint::kFull ? "full" : "blockade";
}

std::string_view to_string(Sector s) {
  switch (s) {
    case Sector::kAll: return "all";
    case Sector::kEven: return "even";
    case Sector::kOdd: return "odd";
  }
  return "all";
}

Constraint parse_constraint(std::string_view s) {
  if (s == "full") return Constraint::kFull;
  if (s == "blockade" || s == "rydberg-blockade") return Constraint::kBlockade;
  throw ConfigError("unknown basis constraint '" + std::string(s) + "'");
}

Sector parse_sector(std::string_view s) {
  if (s == "all") return Sector::kAll;
  if (s == "even" || s == "even-parity") return Sector::kEven;
  if (s == "odd" || s == "odd-parity") return Sector::kOdd;
  throw ConfigError("unknown parity sector '" + std::string(s) + "'");
}

// ---------------------------------------------------------------------------
// Bitstring

Bitstring::Bitstring(std::uint64_t bits, int n) : bits_(bits), n_(n) {
  if (n < 0 || n > 64) throw std::invalid_argument("bitstring length out of range");
  if (n < 64 && (bits >> n) != 0) throw std::invalid_argument("bits exceed bitstring length");
}

Bitstring Bitstring::parse(std::string_view text) {
  if (text.size() > 64) throw InputDataError("bitstring longer than 64 sites");
  std::uint64_t bits = 0;
  for (char c : text) {
    if (c != '0' && c != '1') {
      throw InputDataError("invalid character in bitstring '" + std::string(text) + "'");
    }
    bits = (bits << 1) | static_cast<std::uint64_t>(c == '1');
  }
  return Bitstring(bits, static_cast<int>(text.size()));
}

Bitstring Bitstring::with(int site, bool value) const {
  const std::uint64_t m = site_mask(n_, site);
  return Bitstring(value ? (bits_ | m) : (bits_ & ~m), n_);
}

int Bitstring::count_ones() const { return std::popcount(bits_); }

std::string Bitstring::str() const {
  std::string s(static_cast<std::size_t>(n_), '0');
  for (int site = 1; site <= n_; ++site) {
    if (at(site)) s[static_cast<std::size_t>(site - 1)] = '1';
  }
  return s;
}

std::uint64_t reverse_sites(std::uint64_t bits, int n) {
  std::uint64_t out = 0;
  for (int i = 0; i < n; ++i) {
    out = (out << 1) | ((bits >> i) & 1ULL);
  }
  return out;
}

Bitstring parity_partner(const Bitstring& z) {
  return Bitstring(reverse_sites(z.bits(), z.size()), z.size());
}

// ---------------------------------------------------------------------------
// BasisMap

namespace {

// Blockade-legal strings in increasing numeric order: site 1 (MSB) chooses 0 first.
void enumerate_blockade(int n, int site, std::uint64_t prefix, bool prev_one,
                        std::vector<std::uint64_t>& out) {
  if (site > n) {
    out.push_back(prefix);
    return;
  }
  enumerate_blockade(n, site + 1, prefix << 1, false, out);
  if (!prev_one) enumerate_blockade(n, site + 1, (prefix << 1) | 1ULL, true, out);
}

constexpr int kLookupMaxSites = 22;

}  // namespace

BasisMap::BasisMap(int n, Constraint constraint, Sector sector)
    : n_(n), constraint_(constraint), sector_(sector) {
  if (n < 1 || n > 32) throw ConfigError("basis site count must be in [1, 32]");
  std::vector<std::uint64_t> raw;
  if (constraint == Constraint::kFull) {
    raw.resize(std::size_t{1} << n);
    for (std::size_t i = 0; i < raw.size(); ++i) raw[i] = i;
  } else {
    enumerate_blockade(n, 1, 0, false, raw);
  }
  if (sector == Sector::kAll) {
    states_ = std::move(raw);
  } else {
    for (std::uint64_t z : raw) {
      const std::uint64_t m = reverse_sites(z, n);
      if (m < z) continue;
      if (m == z && sector == Sector::kOdd) continue;
      states_.push_back(z);
    }
  }
  const bool identity = constraint == Constraint::kFull && sector == Sector::kAll;
  if (n <= kLookupMaxSites && !identity) {
    lookup_.assign(std::size_t{1} << n, -1);
    for (std::size_t i = 0; i < states_.size(); ++i) {
      lookup_[states_[i]] = static_cast<std::int32_t>(i);
      if (sector != Sector::kAll) lookup_[reverse_sites(states_[i], n)] = static_cast<std::int32_t>(i);
    }
  }
}

std::optional<std::size_t> BasisMap::find(std::uint64_t bits) const {
  if (n_ < 64 && (bits >> n_) != 0) return std::nullopt;
  if (constraint_ == Constraint::kFull && sector_ == Sector::kAll) return static_cast<std::size_t>(bits);
  if (!lookup_.empty()) {
    const std::int32_t i = lookup_[bits];
    if (i < 0) return std::nullopt;
    return static_cast<std::size_t>(i);
  }
  std::uint64_t key = bits;
  if (sector_ != Sector::kAll) key = std::min(bits, reverse_sites(bits, n_));
  auto it = std::lower_bound(states_.begin(), states_.end(), key);
  if (it == states_.end() || *it != key) return std::nullopt;
  return static_cast<std::size_t>(it - states_.begin());
}

std::size_t BasisMap::index(const Bitstring& z) const {
  if (z.size() != n_) throw std::invalid_argument("bitstring length does not match basis");
  auto i = find(z.bits());
  if (!i) throw std::out_of_range("bitstring " + z.str() + " is not in the basis");
  return *i;
}

BasisMap build_basis(int n, Constraint constraint, Sector sector) {
  const int max_n = constraint == Constraint::kFull ? 24 : 32;
  if (n < 1 || n > max_n) {
    std::ostringstream msg;
    msg << "site count " << n << " out of supported range [1, " << max_n << "] for "
        << to_string(constraint) << " basis";
    throw ConfigError(msg.str());
  }
  return BasisMap(n, constraint, sector);
}

BasisPtr make_basis(int n, Constraint constraint, Sector sector) {
  return std::make_shared<const BasisMap>(build_basis(n, constraint, sector));
}

SparseMatrix reversal_operator(const BasisMap& basis) {
  if (basis.sector() != Sector::kAll) throw ConfigError("reversal operator needs a sector-free basis");
  const auto dim = static_cast<Eigen::Index>(basis.dim());
  std::vector<Eigen::Triplet<cplx>> entries;
  entries.reserve(basis.dim());
  for (std::size_t i = 0; i < basis.dim(); ++i) {
    const std::size_t j = *basis.find(reverse_sites(basis.state(i), basis.num_sites()));
    entries.emplace_back(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i), 1.0);
  }
  SparseMatrix q(dim, dim);
  q.setFromTriplets(entries.begin(), entries.end());
  return q;
}

SparseMatrix sector_isometry(const BasisMap& sector_basis, const BasisMap& parent) {
  if (parent.sector() != Sector::kAll || parent.num_sites() != sector_basis.num_sites() ||
      parent.constraint() != sector_basis.constraint()) {
    throw ConfigError("sector isometry needs the matching sector-free parent basis");
  }
  const int n = sector_basis.num_sites();
  const double sign = sector_basis.sector() == Sector::kOdd ? -1.0 : 1.0;
  const double h = 1.0 / std::sqrt(2.0);
  std::vector<Eigen::Triplet<cplx>> entries;
  entries.reserve(2 * sector_basis.dim());
  for (std::size_t c = 0; c < sector_basis.dim(); ++c) {
    const std::uint64_t z = sector_basis.state(c);
    const auto col = static_cast<Eigen::Index>(c);
    const auto row = static_cast<Eigen::Index>(*parent.find(z));
    if (sector_basis.sector() == Sector::kAll) {
      entries.emplace_back(row, col, 1.0);
      continue;
    }
    const std::uint64_t m = reverse_sites(z, n);
    if (m == z) {
      entries.emplace_back(row, col, 1.0);
    } else {
      entries.emplace_back(row, col, h);
      entries.emplace_back(static_cast<Eigen::Index>(*parent.find(m)), col, sign * h);
    }
  }
  SparseMatrix p(static_cast<Eigen::Index>(parent.dim()), static_cast<Eigen::Index>(sector_basis.dim()));
  p.setFromTriplets(entries.begin(), entries.end());
  return p;
}

std::size_t count_blockade_palindromes(int n) {
  std::vector<std::uint64_t> all;
  enumerate_blockade(n, 1, 0, false, all);
  return static_cast<std::size_t>(std::count_if(all.begin(), all.end(), [n](std::uint64_t z) {
    return reverse_sites(z, n) == z;
  }));
}

// ---------------------------------------------------------------------------
// Bipartition

Bipartition::Bipartition(int n, std::vector<int> sites_a, bool boundary_rule)
    : n_(n), sites_a_(std::move(sites_a)), boundary_rule_(boundary_rule) {
  if (n < 1 || n > 64) throw ConfigError("bipartition site count out of range");
  std::sort(sites_a_.begin(), sites_a_.end());
  if (sites_a_.empty()) throw ConfigError("subsystem A must not be empty");
  if (std::adjacent_find(sites_a_.begin(), sites_a_.end()) != sites_a_.end()) {
    throw ConfigError("subsystem A lists a site twice");
  }
  if (sites_a_.front() < 1 || sites_a_.back() > n) throw ConfigError("subsystem A site out of range");
  std::vector<bool> in_a(static_cast<std::size_t>(n + 2), false);
  for (int s : sites_a_) in_a[static_cast<std::size_t>(s)] = true;
  for (int s = 1; s <= n; ++s) {
    if (in_a[static_cast<std::size_t>(s)]) continue;
    sites_b_.push_back(s);
    if (in_a[static_cast<std::size_t>(s - 1)] || in_a[static_cast<std::size_t>(s + 1)]) {
      boundary_.push_back(s);
      boundary_mask_ |= site_mask(n, s);
    }
  }
  for (std::size_t i = 0; i + 1 < sites_a_.size(); ++i) {
    if (sites_a_[i + 1] == sites_a_[i] + 1) {
      adjacent_a_.emplace_back(static_cast<int>(i), static_cast<int>(i + 1));
    }
  }
}

Bipartition Bipartition::contiguous(int n, int first_site, int length, bool boundary_rule) {
  std::vector<int> a;
  for (int s = first_site; s < first_site + length; ++s) a.push_back(s);
  return Bipartition(n, std::move(a), boundary_rule);
}

Bipartition Bipartition::half_chain(int n) {
  if (n < 2) throw ConfigError("half-chain cut needs at least two sites");
  return contiguous(n, 1, n / 2, false);
}

std::pair<std::uint64_t, std::uint64_t> Bipartition::split_bits(std::uint64_t z) const {
  std::uint64_t za = 0;
  std::uint64_t zb = 0;
  for (int s : sites_a_) za = (za << 1) | ((z >> (n_ - s)) & 1ULL);
  for (int s : sites_b_) zb = (zb << 1) | ((z >> (n_ - s)) & 1ULL);
  return {za, zb};
}

std::pair<Bitstring, Bitstring> Bipartition::split(const Bitstring& z) const {
  if (z.size() != n_) throw std::invalid_argument("bitstring length does not match bipartition");
  auto [za, zb] = split_bits(z.bits());
  return {Bitstring(za, static_cast<int>(sites_a_.size())),
          Bitstring(zb, static_cast<int>(sites_b_.size()))};
}

std::uint64_t Bipartition::join_bits(std::uint64_t z_a, std::uint64_t z_b) const {
  std::uint64_t z = 0;
  const int la = static_cast<int>(sites_a_.size());
  const int lb = static_cast<int>(sites_b_.size());
  for (int i = 0; i < la; ++i) {
    if ((z_a >> (la - 1 - i)) & 1ULL) z |= site_mask(n_, sites_a_[static_cast<std::size_t>(i)]);
  }
  for (int i = 0; i < lb; ++i) {
    if ((z_b >> (lb - 1 - i)) & 1ULL) z |= site_mask(n_, sites_b_[static_cast<std::size_t>(i)]);
  }
  return z;
}

Bitstring Bipartition::join(const Bitstring& z_a, const Bitstring& z_b) const {
  if (z_a.size() != static_cast<int>(sites_a_.size()) ||
      z_b.size() != static_cast<int>(sites_b_.size())) {
    throw std::invalid_argument("subsystem bitstring lengths do not match bipartition");
  }
  return Bitstring(join_bits(z_a.bits(), z_b.bits()), n_);
}

bool Bipartition::admissible_b(const Bitstring& z_b) const {
  return admissible(join_bits(0, z_b.bits()));
}

bool Bipartition::a_legal(std::uint64_t z_a, Constraint constraint) const {
  if (constraint == Constraint::kFull) return true;
  const int la = static_cast<int>(sites_a_.size());
  for (auto [i, j] : adjacent_a_) {
    if (((z_a >> (la - 1 - i)) & 1ULL) && ((z_a >> (la - 1 - j)) & 1ULL)) return false;
  }
  return true;
}

std::vector<std::uint64_t> subsystem_states(const Bipartition& bipartition, Constraint constraint) {
  const int la = static_cast<int>(bipartition.sites_a().size());
  if (la > 30) throw ConfigError("subsystem A too large to enumerate");
  std::vector<std::uint64_t> out;
  for (std::uint64_t za = 0; za < (1ULL << la); ++za) {
    if (bipartition.a_legal(za, constraint)) out.push_back(za);
  }
  return out;
}

std::size_t subsystem_dim(const Bipartition& bipartition, Constraint constraint) {
  return subsystem_states(bipartition, constraint).size();
}

std::pair<Bitstring, Bitstring> split_bitstring(const Bitstring& z, const Bipartition& bipartition) {
  return bipartition.split(z);
}

// ---------------------------------------------------------------------------
// StateVector

StateVector::StateVector(BasisPtr basis, CVector amplitudes)
    : basis_(std::move(basis)), amps_(std::move(amplitudes)) {
  if (!basis_) throw std::invalid_argument("state vector needs a basis");
  if (static_cast<std::size_t>(amps_.size()) != basis_->dim()) {
    throw std::invalid_argument("amplitude count does not match basis dimension");
  }
  const double norm = amps_.norm();
  if (std::abs(norm - 1.0) > kNormTolerance) {
    throw NumericalError("state vector not normalized (norm " + std::to_string(norm) + ")");
  }
}

StateVector StateVector::normalized(BasisPtr basis, CVector amplitudes) {
  const double norm = amplitudes.norm();
  if (!(norm > 0.0)) throw NumericalError("cannot normalize a zero vector");
  amplitudes /= norm;
  return StateVector(std::move(basis), std::move(amplitudes));
}

StateVector StateVector::basis_state(BasisPtr basis, const Bitstring& z) {
  CVector amps = CVector::Zero(static_cast<Eigen::Index>(basis->dim()));
  amps(static_cast<Eigen::Index>(basis->index(z))) = 1.0;
  return StateVector(std::move(basis), std::move(amps));
}

cplx StateVector::amplitude(const Bitstring& z) const {
  auto i = basis_->find(z.bits());
  if (!i) return {0.0, 0.0};
  const cplx c = amps_(static_cast<Eigen::Index>(*i));
  if (basis_->sector() == Sector::kAll) return c;
  const std::uint64_t mirror = reverse_sites(z.bits(), z.size());
  if (mirror == z.bits()) return c;
  const bool flipped = basis_->state(*i) != z.bits();
  const double sign = basis_->sector() == Sector::kOdd && flipped ? -1.0 : 1.0;
  return sign * c / std::sqrt(2.0);
}

std::vector<double> StateVector::probabilities() const {
  std::vector<double> p(dim());
  for (std::size_t i = 0; i < p.size(); ++i) p[i] = std::norm(amps_(static_cast<Eigen::Index>(i)));
  return p;
}

}  // namespace projens
