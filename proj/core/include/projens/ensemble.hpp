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
#include <optional>
#include <string_view>
#include <vector>

#include "projens/hilbert.hpp"
#include "projens/rng.hpp"
#include "projens/samples.hpp"
#include "projens/types.hpp"

namespace projens {

/// Weights of projected states: p(z_B), p^k / sum p^k, or p^2 / sum p^2.
enum class Weighting { kProbability, kPowerK, kSquared };

std::string_view to_string(Weighting w);
Weighting parse_weighting(std::string_view s);

struct EnsembleEntry {
  std::uint64_t z_b = 0;
  double p = 0.0;       // Born probability of z_B
  double weight = 0.0;  // normalized ensemble weight
  CVector state;        // normalized, indexed like `a_states`
};

/// Weighted pure states on subsystem A. Projected ensembles carry their
/// bipartition; sampled ensembles (Haar, Scrooge) do not.
struct ProjectedEnsemble {
  std::optional<Bipartition> bipartition;
  Constraint constraint = Constraint::kFull;
  std::vector<std::uint64_t> a_states;  // z_A labels of the A-space basis
  Weighting weighting = Weighting::kProbability;
  int power = 1;
  std::vector<EnsembleEntry> entries;

  int dim_a() const { return static_cast<int>(a_states.size()); }
  double total_weight() const;
  /// Same states under a different weighting scheme.
  ProjectedEnsemble reweighted(Weighting scheme, int power = 1) const;
};

inline constexpr double kProjectionThreshold = 1e-14;

/// Conditional states (<z_B| x 1_A)|psi> / sqrt(p(z_B)) over admissible z_B
/// (boundary rule), dropping p(z_B) < threshold.
ProjectedEnsemble project(const StateVector& psi, const Bipartition& bipartition,
                          Weighting weighting = Weighting::kProbability, int power = 1,
                          double threshold = kProjectionThreshold);

/// Equal-weight ensemble of `n` Haar-random states in dimension d.
ProjectedEnsemble haar_ensemble(int d, int n, std::uint64_t seed);

// ---------------------------------------------------------------------------
// k-th moments

/// D(D+1)...(D+k-1).
double rising_factorial(int d, int k);

/// Sum of the k! permutation operators on (C^d)^(x k), divided by D(D+1)...(D+k-1). k <= 4.
CMatrix haar_moment(int d, int k);
/// sum_j w_j (|psi_j><psi_j|)^(x k) on the full tensor power. Guard: k log2(D_A) <= 24 and d^k <= 4096.
CMatrix ensemble_moment(const ProjectedEnsemble& ensemble, int k);
/// Trace norm of a Hermitian matrix.
double trace_norm(const CMatrix& hermitian);
/// || rho_ens^(k) - rho_Haar^(k) ||_1, evaluated on the symmetric subspace
/// where both operators live (dimension C(D_A + k - 1, k)).
double design_distance(const ProjectedEnsemble& ensemble, int k);

// ---------------------------------------------------------------------------
// Histograms of conditional probabilities

struct Histogram {
  std::vector<double> edges;    // bins + 1 edges on [0, 1]
  std::vector<double> weight;   // summed weight per bin (normalized to 1 overall)
  std::vector<double> density;  // weight / width, integrates to 1
  double effective_count = 0.0;  // Kish (sum w)^2 / sum w^2 of the underlying values
  std::size_t values = 0;

  std::size_t bins() const { return weight.size(); }
  double center(std::size_t i) const { return 0.5 * (edges[i] + edges[i + 1]); }
};

Histogram make_histogram(const std::vector<double>& values, const std::vector<double>& weights, int bins);

/// p(z_A | z_B) = |<z_A|psi_A(z_B)>|^2 weighted by the ensemble weights. With
/// no z_A given, all z_A are pooled.
Histogram conditional_histogram(const ProjectedEnsemble& ensemble, std::optional<std::uint64_t> z_a = std::nullopt,
                                int bins = 30);

inline constexpr int kMinShotsPerOutcome = 20;

/// Empirical p(z_A | z_B) from shots, for every z_B with at least `min_shots`
/// admissible shots; each z_B is weighted by its shot count.
Histogram conditional_histogram(const SampleSet& samples, const Bipartition& bipartition, Constraint constraint,
                                std::optional<std::uint64_t> z_a = std::nullopt, int bins = 30,
                                int min_shots = kMinShotsPerOutcome);

/// Probability mass of a reference density on [lo, hi].
using MassFunction = std::function<double(double lo, double hi)>;

/// (D - 1)(1 - p)^(D - 2).
double haar_density(int d, double p);
MassFunction haar_mass(int d);
/// (a p + b (1 - p))^-3.
double scrooge_density(double a, double b, double p);
MassFunction scrooge_mass(double a, double b);

struct ChiSquare {
  double statistic = 0.0;
  int dof = 0;
  double p_value = 0.0;
  int cells = 0;  // after merging to expected >= 5
};

/// Pearson test of a histogram against a reference, using the Kish effective count.
ChiSquare chi_square_test(const Histogram& h, const MassFunction& mass, double min_expected = 5.0);

// ---------------------------------------------------------------------------
// Scalar moments and correlators

struct MomentEstimate {
  int k = 0;
  double raw = 0.0;       // p^(k)
  double rescaled = 0.0;  // D(D+1)...(D+k-1) p^(k); k! for Haar
  double raw_error = 0.0;
  double rescaled_error = 0.0;
};

/// Mean of p(z_A|z_B)^k over the ensemble weights and all z_A. k <= 6.
MomentEstimate moment_scalar(const ProjectedEnsemble& ensemble, int k);
/// sum_bins p^k density dp.
MomentEstimate moment_scalar(const Histogram& h, int k, int d);
/// Unbiased falling-factorial estimate from shots, with a bootstrap over z_B groups.
MomentEstimate moment_scalar(const SampleSet& samples, const Bipartition& bipartition, Constraint constraint, int k,
                             std::uint64_t seed, int resamples = 200, int min_shots = kMinShotsPerOutcome);

/// sqrt(sum_zB w C^2) with C = <Z1 Z2> - <Z1><Z2> of each two-site projected state.
double correlator_fluctuation(const ProjectedEnsemble& ensemble);

// ---------------------------------------------------------------------------
// Scrooge ensemble

struct ScroogeParams {
  double a = 1.0;
  double b = 1.0;
};

/// Closed-form (a, b) of the single-qubit density from the mean m = <1|rho|1>.
ScroogeParams scrooge_params(double mean_one);

struct ScroogeEnsemble {
  ProjectedEnsemble ensemble;
  std::optional<ScroogeParams> params;  // D_A = 2 only
};

/// Haar states distorted by rho^(1/2) and weighted by D <psi|rho|psi>.
ScroogeEnsemble scrooge_ensemble(const CMatrix& rho, int n_states, std::uint64_t seed);

}  // namespace projens
