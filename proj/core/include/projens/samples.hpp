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

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "projens/hilbert.hpp"
#include "projens/rng.hpp"
#include "projens/types.hpp"

namespace projens {

/// Measured bitstrings (site 1 = most significant bit) plus metadata.
struct SampleSet {
  int n_sites = 0;
  std::string basis = "full";  // constraint tag of the producing basis
  std::vector<std::uint64_t> shots;
  std::string created = "unspecified";

  std::size_t size() const { return shots.size(); }
};

/// Probability table over configurations, stored as sorted keys.
///
/// One representation serves dense and sparse tables: only keys with an entry
/// are stored, so memory follows the support, and sums run in key order.
class ProbTable {
 public:
  ProbTable() = default;
  /// Keys need not be sorted or unique; duplicates are merged.
  ProbTable(int n_sites, std::vector<std::uint64_t> keys, std::vector<double> probs);

  /// |<z|psi>|^2 over every configuration of the state's basis.
  static ProbTable from_state(const StateVector& state);
  /// Per-basis-index probabilities for a sector-free basis.
  static ProbTable from_basis(const BasisMap& basis, std::span<const double> probs);
  /// Empirical frequencies.
  static ProbTable from_samples(const SampleSet& samples);

  int num_sites() const { return n_; }
  std::size_t size() const { return keys_.size(); }
  std::span<const std::uint64_t> keys() const { return keys_; }
  std::span<const double> probs() const { return probs_; }

  /// 0 for configurations without an entry.
  double prob(std::uint64_t z) const;
  double total() const;
  double sum_squares() const;

  ProbTable normalized() const;
  ProbTable filtered(const std::function<bool(std::uint64_t)>& keep) const;

 private:
  int n_ = 0;
  std::vector<std::uint64_t> keys_;
  std::vector<double> probs_;
};

/// Readout and preparation errors. A prepared site is lost with probability
/// `prep` (it reads as 0 before readout errors); `p01` and `p10` flip 0->1 and 1->0.
struct SpamSpec {
  double prep = 0.0;
  double p01 = 0.0;
  double p10 = 0.0;

  void validate() const;
  bool trivial() const { return prep == 0.0 && p01 == 0.0 && p10 == 0.0; }
};

/// Stochastic SPAM on each shot, reproducible from `seed`.
SampleSet apply_spam(const SampleSet& samples, const SpamSpec& spam, std::uint64_t seed);
/// Exact SPAM channel on a distribution (N <= 24).
ProbTable apply_spam(const ProbTable& table, const SpamSpec& spam);

/// M i.i.d. draws from |<z|psi>|^2.
SampleSet sample_bitstrings(const StateVector& state, std::size_t m, std::uint64_t seed);
/// M i.i.d. draws from a (possibly unnormalized) table.
SampleSet sample_bitstrings(const ProbTable& table, std::size_t m, std::uint64_t seed);

/// Shot budget of the reference protocol, M = 3000 + 250 N.
inline std::size_t default_shot_budget(int n) { return 3000 + 250 * static_cast<std::size_t>(n); }

}  // namespace projens
