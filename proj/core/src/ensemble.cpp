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

#include "projens/ensemble.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <numeric>
#include <string>

#include <boost/math/special_functions/gamma.hpp>
#include <Eigen/Eigenvalues>

#include "projens/evolve.hpp"

namespace projens {

std::string_view to_string(Weighting w) {
  switch (w) {
    case Weighting::kProbability: return "p";
    case Weighting::kPowerK: return "p^k";
    case Weighting::kSquared: return "p^2";
  }
  return "p";
}

Weighting parse_weighting(std::string_view s) {
  if (s == "p") return Weighting::kProbability;
  if (s == "p^k") return Weighting::kPowerK;
  if (s == "p^2") return Weighting::kSquared;
  throw ConfigError("unknown weighting '" + std::string(s) + "' (expected p, p^k or p^2)");
}

double ProjectedEnsemble::total_weight() const {
  double s = 0.0;
  for (const auto& e : entries) s += e.weight;
  return s;
}

namespace {

void assign_weights(std::vector<EnsembleEntry>& entries, Weighting scheme, int power) {
  const int exponent = scheme == Weighting::kProbability ? 1 : scheme == Weighting::kSquared ? 2 : power;
  if (exponent < 1) throw ConfigError("weighting power must be >= 1");
  double total = 0.0;
  for (auto& e : entries) {
    e.weight = std::pow(e.p, exponent);
    total += e.weight;
  }
  if (!(total > 0.0)) throw NumericalError("projected ensemble has zero total weight");
  for (auto& e : entries) e.weight /= total;
}

}  // namespace

ProjectedEnsemble ProjectedEnsemble::reweighted(Weighting scheme, int k) const {
  ProjectedEnsemble out = *this;
  out.weighting = scheme;
  out.power = k;
  assign_weights(out.entries, scheme, k);
  return out;
}

ProjectedEnsemble project(const StateVector& psi_in, const Bipartition& bipartition, Weighting weighting, int power,
                          double threshold) {
  if (bipartition.num_sites() != psi_in.num_sites()) throw ConfigError("bipartition does not match the state");
  const StateVector psi = to_sector_free(psi_in);
  const BasisMap& b = psi.basis();
  ProjectedEnsemble ens;
  ens.bipartition = bipartition;
  ens.constraint = b.constraint();
  ens.weighting = weighting;
  ens.power = power;
  ens.a_states = subsystem_states(bipartition, b.constraint());
  const auto da = static_cast<Eigen::Index>(ens.a_states.size());

  std::map<std::uint64_t, CVector> groups;
  for (std::size_t i = 0; i < b.dim(); ++i) {
    const std::uint64_t z = b.state(i);
    if (!bipartition.admissible(z)) continue;
    const auto [za, zb] = bipartition.split_bits(z);
    auto it = groups.find(zb);
    if (it == groups.end()) it = groups.emplace(zb, CVector::Zero(da)).first;
    const auto pos = std::lower_bound(ens.a_states.begin(), ens.a_states.end(), za) - ens.a_states.begin();
    it->second[pos] = psi.amplitudes()(static_cast<Eigen::Index>(i));
  }
  for (auto& [zb, v] : groups) {
    const double p = v.squaredNorm();
    if (p < threshold) continue;
    ens.entries.push_back({zb, p, 0.0, v / std::sqrt(p)});
  }
  if (ens.entries.empty()) throw InputDataError("no admissible z_B outcome above the probability threshold");
  assign_weights(ens.entries, weighting, power);
  return ens;
}

ProjectedEnsemble haar_ensemble(int d, int n, std::uint64_t seed) {
  if (d < 1 || n < 1) throw ConfigError("haar ensemble needs d >= 1 and n >= 1");
  ProjectedEnsemble ens;
  ens.a_states.resize(static_cast<std::size_t>(d));
  std::iota(ens.a_states.begin(), ens.a_states.end(), std::uint64_t{0});
  Rng rng = make_rng(seed, 0x4AA2);
  ens.entries.reserve(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) {
    ens.entries.push_back({static_cast<std::uint64_t>(j), 1.0 / n, 1.0 / n, haar_state(d, rng)});
  }
  return ens;
}

// ---------------------------------------------------------------------------
// Moments

double rising_factorial(int d, int k) {
  double r = 1.0;
  for (int j = 0; j < k; ++j) r *= d + j;
  return r;
}

CMatrix haar_moment(int d, int k) {
  if (d < 1 || k < 1 || k > 4) throw ConfigError("haar_moment supports 1 <= k <= 4");
  Eigen::Index dim = 1;
  for (int j = 0; j < k; ++j) dim *= d;
  CMatrix m = CMatrix::Zero(dim, dim);
  std::vector<int> perm(static_cast<std::size_t>(k));
  std::iota(perm.begin(), perm.end(), 0);
  std::vector<int> digits(static_cast<std::size_t>(k));
  do {
    for (Eigen::Index col = 0; col < dim; ++col) {
      Eigen::Index rest = col;
      for (int j = k - 1; j >= 0; --j) {
        digits[static_cast<std::size_t>(j)] = static_cast<int>(rest % d);
        rest /= d;
      }
      Eigen::Index row = 0;
      for (int j = 0; j < k; ++j) row = row * d + digits[static_cast<std::size_t>(perm[static_cast<std::size_t>(j)])];
      m(row, col) += 1.0;
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  return m / rising_factorial(d, k);
}

namespace {

void check_moment_order(int k, int d) {
  if (k < 1 || k > 4) throw ConfigError("moment order must satisfy 1 <= k <= 4");
  if (k * std::log2(static_cast<double>(d)) > 24.0 + 1e-12) throw ConfigError("moment memory guard: k log2(D_A) > 24");
}

// Occupation-number basis of the symmetric subspace of (C^d)^(x k).
std::vector<std::vector<int>> occupations(int d, int k) {
  std::vector<std::vector<int>> out;
  std::vector<int> cur(static_cast<std::size_t>(d), 0);
  std::function<void(int, int)> rec = [&](int mode, int left) {
    if (mode == d - 1) {
      cur[static_cast<std::size_t>(mode)] = left;
      out.push_back(cur);
      return;
    }
    for (int c = left; c >= 0; --c) {
      cur[static_cast<std::size_t>(mode)] = c;
      rec(mode + 1, left - c);
    }
  };
  rec(0, k);
  return out;
}

}  // namespace

CMatrix ensemble_moment(const ProjectedEnsemble& ensemble, int k) {
  const int d = ensemble.dim_a();
  check_moment_order(k, d);
  Eigen::Index dim = 1;
  for (int j = 0; j < k; ++j) dim *= d;
  if (dim > 4096) throw ConfigError("full moment operator limited to D_A^k <= 4096; use design_distance");
  CMatrix m = CMatrix::Zero(dim, dim);
  for (const auto& e : ensemble.entries) {
    CVector v = e.state;
    for (int j = 1; j < k; ++j) {
      CVector w(v.size() * d);
      for (Eigen::Index a = 0; a < v.size(); ++a) w.segment(a * d, d) = v[a] * e.state;
      v = std::move(w);
    }
    m.noalias() += e.weight * (v * v.adjoint());
  }
  return m;
}

double trace_norm(const CMatrix& h) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(h, Eigen::EigenvaluesOnly);
  return es.eigenvalues().cwiseAbs().sum();
}

double design_distance(const ProjectedEnsemble& ensemble, int k) {
  const int d = ensemble.dim_a();
  check_moment_order(k, d);
  const auto occ = occupations(d, k);
  const auto s = static_cast<Eigen::Index>(occ.size());
  if (s > 6000) throw ConfigError("symmetric subspace too large for a dense distance");
  std::vector<double> norm(occ.size());
  double kfact = std::tgamma(k + 1.0);
  for (std::size_t i = 0; i < occ.size(); ++i) {
    double denom = 1.0;
    for (int c : occ[i]) denom *= std::tgamma(c + 1.0);
    norm[i] = std::sqrt(kfact / denom);
  }
  CMatrix rho = CMatrix::Zero(s, s);
  CVector v(s);
  for (const auto& e : ensemble.entries) {
    for (std::size_t i = 0; i < occ.size(); ++i) {
      cplx prod = norm[i];
      for (int a = 0; a < d; ++a) {
        for (int c = 0; c < occ[i][static_cast<std::size_t>(a)]; ++c) prod *= e.state[a];
      }
      v[static_cast<Eigen::Index>(i)] = prod;
    }
    rho.noalias() += e.weight * (v * v.adjoint());
  }
  rho -= CMatrix::Identity(s, s) / static_cast<double>(s);
  return trace_norm(rho);
}

// ---------------------------------------------------------------------------
// Histograms

Histogram make_histogram(const std::vector<double>& values, const std::vector<double>& weights, int bins) {
  if (bins < 5) throw ConfigError("histograms need at least 5 bins");
  if (values.size() != weights.size()) throw std::invalid_argument("histogram: size mismatch");
  if (values.empty()) throw InputDataError("histogram: no values");
  Histogram h;
  h.values = values.size();
  h.edges.resize(static_cast<std::size_t>(bins) + 1);
  for (int i = 0; i <= bins; ++i) h.edges[static_cast<std::size_t>(i)] = static_cast<double>(i) / bins;
  h.weight.assign(static_cast<std::size_t>(bins), 0.0);
  double total = 0.0, total2 = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double p = std::clamp(values[i], 0.0, 1.0);
    const auto bin = std::min<std::size_t>(static_cast<std::size_t>(p * bins), static_cast<std::size_t>(bins) - 1);
    h.weight[bin] += weights[i];
    total += weights[i];
    total2 += weights[i] * weights[i];
  }
  if (!(total > 0.0)) throw InputDataError("histogram: zero total weight");
  h.effective_count = total * total / total2;
  h.density.resize(h.weight.size());
  for (std::size_t i = 0; i < h.weight.size(); ++i) {
    h.weight[i] /= total;
    h.density[i] = h.weight[i] * bins;
  }
  return h;
}

namespace {

std::optional<std::size_t> a_position(const ProjectedEnsemble& e, std::optional<std::uint64_t> z_a) {
  if (!z_a) return std::nullopt;
  const auto it = std::lower_bound(e.a_states.begin(), e.a_states.end(), *z_a);
  if (it == e.a_states.end() || *it != *z_a) throw ConfigError("z_A is not in the subsystem space");
  return static_cast<std::size_t>(it - e.a_states.begin());
}

}  // namespace

Histogram conditional_histogram(const ProjectedEnsemble& ensemble, std::optional<std::uint64_t> z_a, int bins) {
  const auto pos = a_position(ensemble, z_a);
  std::vector<double> values, weights;
  for (const auto& e : ensemble.entries) {
    for (Eigen::Index a = 0; a < e.state.size(); ++a) {
      if (pos && static_cast<std::size_t>(a) != *pos) continue;
      values.push_back(std::norm(e.state[a]));
      weights.push_back(e.weight);
    }
  }
  return make_histogram(values, weights, bins);
}

namespace {

// Shot counts per admissible z_B: (z_B, per-z_A counts, total).
struct ShotGroup {
  std::uint64_t z_b;
  std::vector<double> counts;
  double total;
};

std::vector<ShotGroup> group_shots(const SampleSet& samples, const Bipartition& p, Constraint constraint,
                                   const std::vector<std::uint64_t>& a_states, int min_shots) {
  if (samples.n_sites != p.num_sites()) throw InputDataError("sample width does not match the bipartition");
  std::map<std::uint64_t, std::vector<double>> counts;
  for (std::uint64_t z : samples.shots) {
    if (!p.admissible(z)) continue;
    if (constraint == Constraint::kBlockade && !blockade_legal(z)) continue;
    const auto [za, zb] = p.split_bits(z);
    const auto it = std::lower_bound(a_states.begin(), a_states.end(), za);
    if (it == a_states.end() || *it != za) continue;
    auto& c = counts[zb];
    if (c.empty()) c.assign(a_states.size(), 0.0);
    c[static_cast<std::size_t>(it - a_states.begin())] += 1.0;
  }
  std::vector<ShotGroup> out;
  for (auto& [zb, c] : counts) {
    const double total = std::accumulate(c.begin(), c.end(), 0.0);
    if (total >= min_shots) out.push_back({zb, std::move(c), total});
  }
  if (out.empty()) throw InputDataError("no z_B outcome reaches the minimum shot count");
  return out;
}

}  // namespace

Histogram conditional_histogram(const SampleSet& samples, const Bipartition& bipartition, Constraint constraint,
                                std::optional<std::uint64_t> z_a, int bins, int min_shots) {
  const auto a_states = subsystem_states(bipartition, constraint);
  std::optional<std::size_t> pos;
  if (z_a) {
    const auto it = std::lower_bound(a_states.begin(), a_states.end(), *z_a);
    if (it == a_states.end() || *it != *z_a) throw ConfigError("z_A is not in the subsystem space");
    pos = static_cast<std::size_t>(it - a_states.begin());
  }
  const auto groups = group_shots(samples, bipartition, constraint, a_states, min_shots);
  std::vector<double> values, weights;
  for (const auto& g : groups) {
    for (std::size_t a = 0; a < g.counts.size(); ++a) {
      if (pos && a != *pos) continue;
      values.push_back(g.counts[a] / g.total);
      weights.push_back(g.total);
    }
  }
  return make_histogram(values, weights, bins);
}

double haar_density(int d, double p) { return (d - 1) * std::pow(1.0 - p, d - 2); }

MassFunction haar_mass(int d) {
  return [d](double lo, double hi) { return std::pow(1.0 - lo, d - 1) - std::pow(1.0 - hi, d - 1); };
}

double scrooge_density(double a, double b, double p) { return std::pow(a * p + b * (1.0 - p), -3.0); }

MassFunction scrooge_mass(double a, double b) {
  return [a, b](double lo, double hi) {
    if (std::abs(a - b) < 1e-12 * std::max(a, b)) return (hi - lo) / (b * b * b);
    auto prim = [&](double p) { return -0.5 / (a - b) * std::pow(b + (a - b) * p, -2.0); };
    return prim(hi) - prim(lo);
  };
}

ChiSquare chi_square_test(const Histogram& h, const MassFunction& mass, double min_expected) {
  const double n = h.effective_count;
  // merge adjacent bins left to right until each cell expects at least min_expected
  std::vector<double> obs, expct;
  double o = 0.0, e = 0.0;
  for (std::size_t i = 0; i < h.bins(); ++i) {
    o += h.weight[i] * n;
    e += mass(h.edges[i], h.edges[i + 1]) * n;
    if (e >= min_expected) {
      obs.push_back(o);
      expct.push_back(e);
      o = e = 0.0;
    }
  }
  if (e > 0.0 || o > 0.0) {
    if (expct.empty()) {
      obs.push_back(o);
      expct.push_back(e);
    } else {
      obs.back() += o;
      expct.back() += e;
    }
  }
  ChiSquare r;
  r.cells = static_cast<int>(obs.size());
  for (std::size_t i = 0; i < obs.size(); ++i) {
    if (expct[i] > 0.0) r.statistic += (obs[i] - expct[i]) * (obs[i] - expct[i]) / expct[i];
  }
  r.dof = std::max(1, r.cells - 1);
  r.p_value = boost::math::gamma_q(0.5 * r.dof, 0.5 * r.statistic);
  return r;
}

// ---------------------------------------------------------------------------
// Scalar moments

namespace {

void check_k(int k) {
  if (k < 1 || k > 6) throw ConfigError("scalar moments support 1 <= k <= 6");
}

}  // namespace

MomentEstimate moment_scalar(const ProjectedEnsemble& ensemble, int k) {
  check_k(k);
  const int d = ensemble.dim_a();
  double raw = 0.0;
  for (const auto& e : ensemble.entries) {
    double s = 0.0;
    for (Eigen::Index a = 0; a < e.state.size(); ++a) s += std::pow(std::norm(e.state[a]), k);
    raw += e.weight * s / d;
  }
  raw /= ensemble.total_weight();
  MomentEstimate m;
  m.k = k;
  m.raw = raw;
  m.rescaled = raw * rising_factorial(d, k);
  return m;
}

MomentEstimate moment_scalar(const Histogram& h, int k, int d) {
  check_k(k);
  double raw = 0.0;
  for (std::size_t i = 0; i < h.bins(); ++i) raw += std::pow(h.center(i), k) * h.weight[i];
  MomentEstimate m;
  m.k = k;
  m.raw = raw;
  m.rescaled = raw * rising_factorial(d, k);
  return m;
}

MomentEstimate moment_scalar(const SampleSet& samples, const Bipartition& bipartition, Constraint constraint, int k,
                             std::uint64_t seed, int resamples, int min_shots) {
  check_k(k);
  if (min_shots < k) throw ConfigError("min_shots must be at least k for the unbiased estimator");
  const auto a_states = subsystem_states(bipartition, constraint);
  const int d = static_cast<int>(a_states.size());
  const auto groups = group_shots(samples, bipartition, constraint, a_states, min_shots);
  auto falling = [k](double c) {
    double r = 1.0;
    for (int j = 0; j < k; ++j) r *= c - j;
    return r;
  };
  std::vector<double> per_group(groups.size());
  for (std::size_t g = 0; g < groups.size(); ++g) {
    double s = 0.0;
    for (double c : groups[g].counts) s += falling(c);
    per_group[g] = s / falling(groups[g].total) / d;
  }
  auto weighted = [&](const std::vector<std::size_t>& idx) {
    double num = 0.0, den = 0.0;
    for (std::size_t g : idx) {
      num += groups[g].total * per_group[g];
      den += groups[g].total;
    }
    return num / den;
  };
  std::vector<std::size_t> all(groups.size());
  std::iota(all.begin(), all.end(), std::size_t{0});
  MomentEstimate m;
  m.k = k;
  m.raw = weighted(all);
  const double scale = rising_factorial(d, k);
  m.rescaled = m.raw * scale;
  if (resamples > 1) {
    Rng rng = make_rng(seed, 0xB007);
    double s = 0.0, s2 = 0.0;
    std::vector<std::size_t> idx(groups.size());
    for (int r = 0; r < resamples; ++r) {
      for (auto& i : idx) i = static_cast<std::size_t>(rng() % groups.size());
      const double v = weighted(idx);
      s += v;
      s2 += v * v;
    }
    const double mean = s / resamples;
    m.raw_error = std::sqrt(std::max(0.0, s2 / resamples - mean * mean) * resamples / (resamples - 1.0));
    m.rescaled_error = m.raw_error * scale;
  }
  return m;
}

double correlator_fluctuation(const ProjectedEnsemble& ensemble) {
  const bool two_sites = ensemble.bipartition ? ensemble.bipartition->sites_a().size() == 2 : ensemble.dim_a() == 4;
  if (!two_sites || ensemble.a_states.empty() || ensemble.a_states.back() > 3) {
    throw ConfigError("correlator fluctuation needs a two-site subsystem");
  }
  double acc = 0.0;
  for (const auto& e : ensemble.entries) {
    double z1 = 0.0, z2 = 0.0, zz = 0.0;
    for (std::size_t a = 0; a < ensemble.a_states.size(); ++a) {
      const double p = std::norm(e.state[static_cast<Eigen::Index>(a)]);
      const double s1 = (ensemble.a_states[a] & 2u) ? -1.0 : 1.0;
      const double s2 = (ensemble.a_states[a] & 1u) ? -1.0 : 1.0;
      z1 += s1 * p;
      z2 += s2 * p;
      zz += s1 * s2 * p;
    }
    const double c = zz - z1 * z2;
    acc += e.weight * c * c;
  }
  return std::sqrt(acc / ensemble.total_weight());
}

// ---------------------------------------------------------------------------
// Scrooge

ScroogeParams scrooge_params(double m) {
  if (!(m > 0.0 && m < 1.0)) throw NumericalError("Scrooge density needs a marginal strictly inside (0, 1)");
  const double c = std::cbrt(2.0 * (1.0 - m) * (1.0 - m) * m * m);
  return {(1.0 - m) / c, m / c};
}

ScroogeEnsemble scrooge_ensemble(const CMatrix& rho, int n_states, std::uint64_t seed) {
  const auto d = static_cast<int>(rho.rows());
  if (rho.rows() != rho.cols() || d < 1) throw ConfigError("rho must be square");
  if ((rho - rho.adjoint()).cwiseAbs().maxCoeff() > 1e-10 || std::abs(rho.trace() - 1.0) > 1e-10) {
    throw ConfigError("rho must be Hermitian with unit trace");
  }
  Eigen::SelfAdjointEigenSolver<CMatrix> es(rho);
  if (es.eigenvalues().minCoeff() < -1e-12) throw ConfigError("rho must be positive semidefinite");
  const RVector lam = es.eigenvalues().cwiseMax(0.0);
  const CMatrix sqrt_rho = es.eigenvectors() * lam.cwiseSqrt().cast<cplx>().asDiagonal() * es.eigenvectors().adjoint();

  ScroogeEnsemble out;
  auto& ens = out.ensemble;
  ens.a_states.resize(static_cast<std::size_t>(d));
  std::iota(ens.a_states.begin(), ens.a_states.end(), std::uint64_t{0});
  Rng rng = make_rng(seed, 0x5C00);
  double total = 0.0;
  for (int j = 0; j < n_states; ++j) {
    const CVector psi = haar_state(d, rng);
    const double w = d * psi.dot(rho * psi).real();
    CVector s = sqrt_rho * psi;
    const double nrm = s.norm();
    if (nrm == 0.0) continue;
    ens.entries.push_back({static_cast<std::uint64_t>(j), w, w, s / nrm});
    total += w;
  }
  if (!(total > 0.0)) throw NumericalError("Scrooge ensemble has zero weight");
  for (auto& e : ens.entries) e.weight /= total;
  if (d == 2) {
    const double m = rho(1, 1).real();
    if (m > 0.0 && m < 1.0) out.params = scrooge_params(m);
  }
  return out;
}

}  // namespace projens
