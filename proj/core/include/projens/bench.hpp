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
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "projens/models.hpp"
#include "projens/samples.hpp"

namespace projens {

enum class FcVariant { kExact, kEmpirical, kBlockadeParity };

std::string_view to_string(FcVariant v);
FcVariant parse_fc_variant(std::string_view s);

struct FcReport {
  double value = 0.0;
  FcVariant variant = FcVariant::kExact;
  std::size_t shots = 0;          // empirical variants only
  double sigma = 0.0;             // bootstrap standard deviation
  std::optional<double> b;        // blockade weight of the measured data
  std::optional<double> b0;       // blockade weight of the reference
  std::size_t out_of_basis = 0;   // shots outside the reference support
};

inline constexpr int kDefaultBootstrap = 200;

/// 2 sum p0 p / sum p0^2 - 1, summed over the support of p0.
double fc_exact(const ProbTable& p0, const ProbTable& p);

/// Unbiased shot estimator with a bootstrap error bar. Shots outside the
/// support of p0 contribute p0 = 0 and are counted in `out_of_basis`.
FcReport fc_empirical(const ProbTable& p0, const SampleSet& samples, std::uint64_t seed,
                      int resamples = kDefaultBootstrap);

/// Blockade-restricted, parity-symmetrized estimator scaled by B B0. Missing
/// weights are taken as the blockade-legal mass of the corresponding input.
FcReport fc_rydberg(const ProbTable& p0, const ProbTable& p, std::optional<double> b0 = std::nullopt,
                    std::optional<double> b = std::nullopt);
/// Shot version; illegal shots are discarded before estimation.
FcReport fc_rydberg(const ProbTable& p0, const SampleSet& samples, std::uint64_t seed,
                    std::optional<double> b0 = std::nullopt, std::optional<double> b = std::nullopt,
                    int resamples = kDefaultBootstrap);

/// (D + 1) sum p0 p - 1.
double fxeb(const ProbTable& p0, const ProbTable& p, double d);

struct KlDivergence {
  double value = 0.0;              // +inf on a support violation
  bool support_violation = false;
};

/// sum p_ref log(p_ref / p_model), natural log.
KlDivergence kl_divergence(const ProbTable& p_ref, const ProbTable& p_model);

// ---------------------------------------------------------------------------
// Sample complexity

struct SpreadPoint {
  int n = 0;
  std::size_t m = 0;
  double sigma = 0.0;
};

struct SampleComplexityFit {
  double a = 0.0;
  double a_error = 0.0;
  std::size_t points = 0;
};

/// Least squares of log(sigma sqrt(M)) = N log(a) through the origin.
/// Needs at least 3 distinct N and 4 distinct M.
SampleComplexityFit sample_complexity(std::span<const SpreadPoint> points);

/// Standard deviation of fc_empirical over `repeats` independent M-shot draws from p.
double fc_spread(const ProbTable& p0, const ProbTable& p, std::size_t m, int repeats, std::uint64_t seed);

// ---------------------------------------------------------------------------
// Single-error experiment

enum class ErrorAxis { kX, kY, kZ };

std::string_view to_string(ErrorAxis a);
ErrorAxis parse_error_axis(std::string_view s);

struct SingleErrorSpec {
  int site = 1;
  double t_err = 0.0;
  double angle = 0.0;              // rotation exp(-i angle sigma / 2)
  ErrorAxis axis = ErrorAxis::kZ;
};

struct SingleErrorPoint {
  double tau = 0.0;
  double fidelity = 0.0;
  double fc = 0.0;
};

/// Evolves psi0 to t_err, applies the rotation on one site, and compares the
/// perturbed and ideal states at t_err + tau. Sector-free bases only; x and
/// y errors need the full basis.
std::vector<SingleErrorPoint> single_error_experiment(const Hamiltonian& h, const StateVector& psi0,
                                                      const SingleErrorSpec& error, std::span<const double> taus);

}  // namespace projens
