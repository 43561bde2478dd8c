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

#include "projens/samples.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace projens {

ProbTable::ProbTable(int n_sites, std::vector<std::uint64_t> keys, std::vector<double> probs) : n_(n_sites) {
  if (keys.size() != probs.size()) throw std::invalid_argument("probability table: size mismatch");
  std::vector<std::size_t> order(keys.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return keys[a] < keys[b]; });
  keys_.reserve(keys.size());
  probs_.reserve(keys.size());
  for (std::size_t i : order) {
    if (!(probs[i] >= 0.0) || !std::isfinite(probs[i])) {
      throw InputDataError("probability table: negative or non-finite entry");
    }
    if (n_sites < 64 && (keys[i] >> n_sites) != 0) throw InputDataError("probability table: key wider than N");
    if (!keys_.empty() && keys_.back() == keys[i]) {
      probs_.back() += probs[i];
    } else {
      keys_.push_back(keys[i]);
      probs_.push_back(probs[i]);
    }
  }
}

ProbTable ProbTable::from_state(const StateVector& state) {
  const BasisMap& b = state.basis();
  const int n = b.num_sites();
  std::vector<std::uint64_t> keys;
  std::vector<double> probs;
  keys.reserve(b.sector() == Sector::kAll ? b.dim() : 2 * b.dim());
  probs.reserve(keys.capacity());
  for (std::size_t i = 0; i < b.dim(); ++i) {
    const double p = std::norm(state.amplitudes()(static_cast<Eigen::Index>(i)));
    const std::uint64_t z = b.state(i);
    const std::uint64_t m = reverse_sites(z, n);
    if (b.sector() == Sector::kAll || m == z) {
      keys.push_back(z);
      probs.push_back(p);
    } else {
      keys.push_back(z);
      probs.push_back(0.5 * p);
      keys.push_back(m);
      probs.push_back(0.5 * p);
    }
  }
  return ProbTable(n, std::move(keys), std::move(probs));
}

ProbTable ProbTable::from_basis(const BasisMap& basis, std::span<const double> probs) {
  if (basis.sector() != Sector::kAll) throw ConfigError("from_basis needs a sector-free basis");
  if (probs.size() != basis.dim()) throw std::invalid_argument("probability count does not match basis");
  std::vector<std::uint64_t> keys(basis.states().begin(), basis.states().end());
  return ProbTable(basis.num_sites(), std::move(keys), std::vector<double>(probs.begin(), probs.end()));
}

ProbTable ProbTable::from_samples(const SampleSet& samples) {
  if (samples.shots.empty()) throw InputDataError("empty sample set");
  std::vector<std::uint64_t> keys = samples.shots;
  std::sort(keys.begin(), keys.end());
  std::vector<std::uint64_t> uniq;
  std::vector<double> probs;
  const double w = 1.0 / static_cast<double>(keys.size());
  for (std::uint64_t k : keys) {
    if (!uniq.empty() && uniq.back() == k) {
      probs.back() += w;
    } else {
      uniq.push_back(k);
      probs.push_back(w);
    }
  }
  return ProbTable(samples.n_sites, std::move(uniq), std::move(probs));
}

double ProbTable::prob(std::uint64_t z) const {
  auto it = std::lower_bound(keys_.begin(), keys_.end(), z);
  if (it == keys_.end() || *it != z) return 0.0;
  return probs_[static_cast<std::size_t>(it - keys_.begin())];
}

double ProbTable::total() const { return std::accumulate(probs_.begin(), probs_.end(), 0.0); }

double ProbTable::sum_squares() const {
  double s = 0.0;
  for (double p : probs_) s += p * p;
  return s;
}

ProbTable ProbTable::normalized() const {
  const double t = total();
  if (!(t > 0.0)) throw NumericalError("cannot normalize an empty probability table");
  ProbTable out = *this;
  for (double& p : out.probs_) p /= t;
  return out;
}

ProbTable ProbTable::filtered(const std::function<bool(std::uint64_t)>& keep) const {
  ProbTable out;
  out.n_ = n_;
  for (std::size_t i = 0; i < keys_.size(); ++i) {
    if (keep(keys_[i])) {
      out.keys_.push_back(keys_[i]);
      out.probs_.push_back(probs_[i]);
    }
  }
  return out;
}

void SpamSpec::validate() const {
  for (double p : {prep, p01, p10}) {
    if (!(p >= 0.0 && p <= 1.0)) throw ConfigError("spam probabilities must lie in [0, 1]");
  }
}

SampleSet apply_spam(const SampleSet& samples, const SpamSpec& spam, std::uint64_t seed) {
  spam.validate();
  SampleSet out = samples;
  if (spam.trivial()) return out;
  Rng rng = make_rng(seed, 0x5A4D);
  const int n = samples.n_sites;
  for (auto& z : out.shots) {
    for (int s = 1; s <= n; ++s) {
      const std::uint64_t m = site_mask(n, s);
      if (spam.prep > 0.0 && uniform01(rng) < spam.prep) z &= ~m;
      const double flip = (z & m) ? spam.p10 : spam.p01;
      if (flip > 0.0 && uniform01(rng) < flip) z ^= m;
    }
  }
  return out;
}

ProbTable apply_spam(const ProbTable& table, const SpamSpec& spam) {
  spam.validate();
  if (spam.trivial()) return table;
  const int n = table.num_sites();
  if (n > 24) throw ConfigError("exact SPAM channel limited to N <= 24");
  std::vector<double> dense(std::size_t{1} << n, 0.0);
  for (std::size_t i = 0; i < table.size(); ++i) dense[table.keys()[i]] = table.probs()[i];
  // read-1 probability given the true bit
  const double one_given_one = (1.0 - spam.prep) * (1.0 - spam.p10) + spam.prep * spam.p01;
  const double one_given_zero = spam.p01;
  for (int s = 1; s <= n; ++s) {
    const std::uint64_t m = site_mask(n, s);
    for (std::uint64_t z = 0; z < dense.size(); ++z) {
      if (z & m) continue;
      const double p0 = dense[z];
      const double p1 = dense[z | m];
      dense[z] = p0 * (1.0 - one_given_zero) + p1 * (1.0 - one_given_one);
      dense[z | m] = p0 * one_given_zero + p1 * one_given_one;
    }
  }
  std::vector<std::uint64_t> keys;
  std::vector<double> probs;
  for (std::uint64_t z = 0; z < dense.size(); ++z) {
    if (dense[z] != 0.0) {
      keys.push_back(z);
      probs.push_back(dense[z]);
    }
  }
  return ProbTable(n, std::move(keys), std::move(probs));
}

SampleSet sample_bitstrings(const ProbTable& table, std::size_t m, std::uint64_t seed) {
  if (m < 1) throw ConfigError("sample count must be >= 1");
  if (table.size() == 0) throw InputDataError("cannot sample from an empty table");
  std::vector<double> cdf(table.size());
  std::partial_sum(table.probs().begin(), table.probs().end(), cdf.begin());
  const double total = cdf.back();
  if (!(total > 0.0)) throw InputDataError("cannot sample from a zero table");
  Rng rng = make_rng(seed, 0x5A3B);
  SampleSet out;
  out.n_sites = table.num_sites();
  out.shots.reserve(m);
  for (std::size_t k = 0; k < m; ++k) {
    const double u = uniform01(rng) * total;
    auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
    if (it == cdf.end()) --it;
    // skip zero-probability entries that share the cumulative value
    std::size_t idx = static_cast<std::size_t>(it - cdf.begin());
    while (table.probs()[idx] == 0.0 && idx + 1 < cdf.size()) ++idx;
    out.shots.push_back(table.keys()[idx]);
  }
  return out;
}

SampleSet sample_bitstrings(const StateVector& state, std::size_t m, std::uint64_t seed) {
  SampleSet out = sample_bitstrings(ProbTable::from_state(state), m, seed);
  out.basis = std::string(to_string(state.basis().constraint()));
  return out;
}

}  // namespace projens
