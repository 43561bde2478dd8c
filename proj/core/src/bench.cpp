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

#include "projens/bench.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <set>
#include <string>

#include "projens/evolve.hpp"
#include "projens/parallel.hpp"

namespace projens {

std::string_view to_string(FcVariant v) {
  switch (v) {
    case FcVariant::kExact: return "exact";
    case FcVariant::kEmpirical: return "empirical";
    case FcVariant::kBlockadeParity: return "blockade-parity";
  }
  return "exact";
}

FcVariant parse_fc_variant(std::string_view s) {
  if (s == "exact") return FcVariant::kExact;
  if (s == "empirical") return FcVariant::kEmpirical;
  if (s == "blockade-parity") return FcVariant::kBlockadeParity;
  throw ConfigError("unknown estimator '" + std::string(s) + "' (expected exact, empirical or blockade-parity)");
}

namespace {

void check_tables(const ProbTable& p0, const ProbTable& p) {
  if (p0.num_sites() != p.num_sites()) throw InputDataError("probability tables have different site counts");
}

double denominator(const ProbTable& p0) {
  const double s = p0.sum_squares();
  if (!(s > 0.0)) throw InputDataError("reference table has no weight");
  return s;
}

double overlap(const ProbTable& p0, const ProbTable& p) {
  // walk both sorted key lists
  const auto k0 = p0.keys();
  const auto k1 = p.keys();
  const auto v0 = p0.probs();
  const auto v1 = p.probs();
  double s = 0.0;
  std::size_t i = 0, j = 0;
  while (i < k0.size() && j < k1.size()) {
    if (k0[i] < k1[j]) {
      ++i;
    } else if (k1[j] < k0[i]) {
      ++j;
    } else {
      s += v0[i++] * v1[j++];
    }
  }
  return s;
}

// Bootstrap standard deviation of the mean of `values`.
double bootstrap_sigma(const std::vector<double>& values, std::uint64_t seed, int resamples) {
  if (resamples < 2 || values.size() < 2) return 0.0;
  std::vector<double> means(static_cast<std::size_t>(resamples));
  parallel_for(means.size(), [&](std::size_t r) {
    Rng rng = make_rng(seed, 0xB0075700 + r);
    double s = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i) s += values[rng() % values.size()];
    means[r] = s / static_cast<double>(values.size());
  });
  const double mean = std::accumulate(means.begin(), means.end(), 0.0) / resamples;
  double var = 0.0;
  for (double m : means) var += (m - mean) * (m - mean);
  return std::sqrt(var / (resamples - 1));
}

std::uint64_t canonical(std::uint64_t z, int n) { return std::min(z, reverse_sites(z, n)); }

// Blockade-restricted, renormalized, mirror-pair-summed table and its legal mass.
std::pair<ProbTable, double> symmetrize(const ProbTable& t) {
  const int n = t.num_sites();
  std::vector<std::uint64_t> keys;
  std::vector<double> probs;
  double legal = 0.0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    const std::uint64_t z = t.keys()[i];
    if (!blockade_legal(z)) continue;
    keys.push_back(canonical(z, n));
    probs.push_back(t.probs()[i]);
    legal += t.probs()[i];
  }
  if (!(legal > 0.0)) throw InputDataError("no weight inside the blockade sector");
  for (double& p : probs) p /= legal;
  return {ProbTable(n, std::move(keys), std::move(probs)), legal};
}

void check_weight(std::optional<double> w, const char* name) {
  if (w && !(*w > 0.0 && *w <= 1.0)) throw ConfigError(std::string(name) + " must lie in (0, 1]");
}

}  // namespace

double fc_exact(const ProbTable& p0, const ProbTable& p) {
  check_tables(p0, p);
  return 2.0 * overlap(p0, p) / denominator(p0) - 1.0;
}

FcReport fc_empirical(const ProbTable& p0, const SampleSet& samples, std::uint64_t seed, int resamples) {
  if (samples.shots.empty()) throw InputDataError("empirical F_c needs at least one shot");
  if (samples.n_sites != p0.num_sites()) throw InputDataError("sample width does not match the reference table");
  const double denom = denominator(p0);
  FcReport r;
  r.variant = FcVariant::kEmpirical;
  r.shots = samples.size();
  std::vector<double> values;
  values.reserve(samples.size());
  for (std::uint64_t z : samples.shots) {
    const double q = p0.prob(z);
    if (q == 0.0 && !std::binary_search(p0.keys().begin(), p0.keys().end(), z)) ++r.out_of_basis;
    values.push_back(2.0 * q / denom - 1.0);
  }
  r.value = std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
  r.sigma = bootstrap_sigma(values, seed, resamples);
  return r;
}

FcReport fc_rydberg(const ProbTable& p0, const ProbTable& p, std::optional<double> b0, std::optional<double> b) {
  check_tables(p0, p);
  check_weight(b0, "B0");
  check_weight(b, "B");
  const auto [s0, legal0] = symmetrize(p0);
  const auto [s, legal] = symmetrize(p);
  FcReport r;
  r.variant = FcVariant::kBlockadeParity;
  r.b0 = b0.value_or(legal0);
  r.b = b.value_or(legal);
  r.value = *r.b * *r.b0 * fc_exact(s0, s);
  return r;
}

FcReport fc_rydberg(const ProbTable& p0, const SampleSet& samples, std::uint64_t seed, std::optional<double> b0,
                    std::optional<double> b, int resamples) {
  if (samples.n_sites != p0.num_sites()) throw InputDataError("sample width does not match the reference table");
  check_weight(b0, "B0");
  check_weight(b, "B");
  const auto [s0, legal0] = symmetrize(p0);
  const double denom = denominator(s0);
  std::vector<double> values;
  values.reserve(samples.size());
  FcReport r;
  for (std::uint64_t z : samples.shots) {
    if (!blockade_legal(z)) continue;
    const std::uint64_t c = canonical(z, samples.n_sites);
    if (!std::binary_search(s0.keys().begin(), s0.keys().end(), c)) ++r.out_of_basis;
    values.push_back(2.0 * s0.prob(c) / denom - 1.0);
  }
  if (values.empty()) throw InputDataError("no shot inside the blockade sector");
  r.variant = FcVariant::kBlockadeParity;
  r.shots = values.size();
  r.b0 = b0.value_or(legal0);
  r.b = b.value_or(static_cast<double>(values.size()) / static_cast<double>(samples.size()));
  const double scale = *r.b * *r.b0;
  r.value = scale * std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
  r.sigma = scale * bootstrap_sigma(values, seed, resamples);
  return r;
}

double fxeb(const ProbTable& p0, const ProbTable& p, double d) {
  check_tables(p0, p);
  return (d + 1.0) * overlap(p0, p) - 1.0;
}

KlDivergence kl_divergence(const ProbTable& p_ref, const ProbTable& p_model) {
  check_tables(p_ref, p_model);
  KlDivergence kl;
  for (std::size_t i = 0; i < p_ref.size(); ++i) {
    const double p = p_ref.probs()[i];
    if (p <= 0.0) continue;
    const double q = p_model.prob(p_ref.keys()[i]);
    if (q <= 0.0) {
      kl.support_violation = true;
      kl.value = std::numeric_limits<double>::infinity();
      return kl;
    }
    kl.value += p * std::log(p / q);
  }
  kl.value = std::max(kl.value, 0.0);
  return kl;
}

SampleComplexityFit sample_complexity(std::span<const SpreadPoint> points) {
  std::set<int> ns;
  std::set<std::size_t> ms;
  for (const auto& pt : points) {
    if (pt.n < 1 || pt.m < 1 || !(pt.sigma > 0.0)) throw InputDataError("spread points need N, M >= 1 and sigma > 0");
    ns.insert(pt.n);
    ms.insert(pt.m);
  }
  if (ns.size() < 3 || ms.size() < 4) throw ConfigError("sample-complexity fit needs >= 3 values of N and >= 4 of M");
  double sxy = 0.0, sxx = 0.0;
  for (const auto& pt : points) {
    const double y = std::log(pt.sigma * std::sqrt(static_cast<double>(pt.m)));
    sxy += pt.n * y;
    sxx += static_cast<double>(pt.n) * pt.n;
  }
  const double slope = sxy / sxx;
  double rss = 0.0;
  for (const auto& pt : points) {
    const double r = std::log(pt.sigma * std::sqrt(static_cast<double>(pt.m))) - slope * pt.n;
    rss += r * r;
  }
  const double slope_err = std::sqrt(rss / static_cast<double>(points.size() - 1) / sxx);
  SampleComplexityFit fit;
  fit.a = std::exp(slope);
  fit.a_error = fit.a * slope_err;
  fit.points = points.size();
  return fit;
}

double fc_spread(const ProbTable& p0, const ProbTable& p, std::size_t m, int repeats, std::uint64_t seed) {
  if (repeats < 2) throw ConfigError("fc_spread needs at least 2 repeats");
  std::vector<double> vals(static_cast<std::size_t>(repeats));
  parallel_for(vals.size(), [&](std::size_t r) {
    const auto s = sample_bitstrings(p, m, seed * 0x9E3779B97F4A7C15ULL + r);
    vals[r] = fc_empirical(p0, s, 0, 0).value;
  });
  const double mean = std::accumulate(vals.begin(), vals.end(), 0.0) / repeats;
  double var = 0.0;
  for (double v : vals) var += (v - mean) * (v - mean);
  return std::sqrt(var / (repeats - 1));
}

std::string_view to_string(ErrorAxis a) {
  switch (a) {
    case ErrorAxis::kX: return "x";
    case ErrorAxis::kY: return "y";
    case ErrorAxis::kZ: return "z";
  }
  return "z";
}

ErrorAxis parse_error_axis(std::string_view s) {
  if (s == "x") return ErrorAxis::kX;
  if (s == "y") return ErrorAxis::kY;
  if (s == "z") return ErrorAxis::kZ;
  throw ConfigError("unknown error axis '" + std::string(s) + "' (expected x, y or z)");
}

std::vector<SingleErrorPoint> single_error_experiment(const Hamiltonian& h, const StateVector& psi0,
                                                      const SingleErrorSpec& error, std::span<const double> taus) {
  const int n = h.basis->num_sites();
  if (h.basis->sector() != Sector::kAll) throw ConfigError("single-error experiments need a sector-free basis");
  if (h.basis->constraint() != Constraint::kFull && error.axis != ErrorAxis::kZ) {
    throw ConfigError("x and y errors leave a constrained basis; use the full basis");
  }
  if (error.site < 1 || error.site > n) throw ConfigError("error site out of range");
  if (error.t_err < 0.0) throw ConfigError("t_err must be non-negative");
  if (taus.empty() || taus.front() < 0.0) throw ConfigError("taus must be non-negative");

  StateVector at_err = psi0;
  if (error.t_err > 0.0) {
    const std::vector<double> t{error.t_err};
    at_err = evolve_exact(h, psi0, t).states.back();
  }
  const double c = std::cos(0.5 * error.angle);
  const double s = std::sin(0.5 * error.angle);
  const cplx i(0.0, 1.0);
  Eigen::Matrix2cd u;
  switch (error.axis) {
    case ErrorAxis::kX: u << c, -i * s, -i * s, c; break;
    case ErrorAxis::kY: u << c, -s, s, c; break;
    case ErrorAxis::kZ: u << c - i * s, 0.0, 0.0, c + i * s; break;
  }
  CVector amps = at_err.amplitudes();
  if (h.basis->constraint() == Constraint::kFull) {
    apply_one_qubit(amps, n, error.site, u);
  } else {
    const std::uint64_t mask = site_mask(n, error.site);
    for (std::size_t j = 0; j < h.basis->dim(); ++j) amps[static_cast<Eigen::Index>(j)] *= h.basis->state(j) & mask ? u(1, 1) : u(0, 0);
  }
  const StateVector perturbed(h.basis, amps);

  // evolve_exact wants strictly positive increasing times; tau = 0 is handled directly
  std::vector<double> positive;
  for (double t : taus) {
    if (t > 0.0) positive.push_back(t);
  }
  std::vector<StateVector> ideal, err;
  if (!positive.empty()) {
    ideal = evolve_exact(h, at_err, positive).states;
    err = evolve_exact(h, perturbed, positive).states;
  }
  std::vector<SingleErrorPoint> out;
  std::size_t k = 0;
  for (double t : taus) {
    const StateVector& a = t > 0.0 ? ideal[k] : at_err;
    const StateVector& b = t > 0.0 ? err[k] : perturbed;
    if (t > 0.0) ++k;
    SingleErrorPoint pt;
    pt.tau = t;
    pt.fidelity = std::norm(a.amplitudes().dot(b.amplitudes()));
    pt.fc = fc_exact(ProbTable::from_state(a), ProbTable::from_state(b));
    out.push_back(pt);
  }
  return out;
}

}  // namespace projens
