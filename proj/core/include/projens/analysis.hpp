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

#include <span>
#include <vector>

#include <Eigen/Core>

namespace projens {

/// y = intercept + slope x with standard errors and covariance (intercept, slope).
struct LinearFit {
  double intercept = 0.0;
  double slope = 0.0;
  double intercept_error = 0.0;
  double slope_error = 0.0;
  Eigen::Matrix2d covariance = Eigen::Matrix2d::Zero();

  double operator()(double x) const { return intercept + slope * x; }
  double error(double x) const;
};

/// Ordinary least squares. Errors come from the residual variance (zero for exact data).
LinearFit fit_line(std::span<const double> x, std::span<const double> y);

/// Entropy (or any saturating quantity) against time or depth for one system size.
struct GrowthTrace {
  int n = 0;
  std::vector<double> times;
  std::vector<double> values;
};

inline constexpr double kRydbergEntanglementC = 1.35;
inline constexpr double kFsimEntanglementC = 1.0;
inline constexpr double kSu4EntanglementC = 1.7;

struct PiecewiseFit {
  double m1 = 0.0;                 // shared early slope
  double m1_error = 0.0;
  std::vector<int> n;
  std::vector<double> m2;          // late slope per N
  std::vector<double> tc;          // kink per N
  std::vector<double> tc_error;
  std::vector<double> t_ent;       // c * tc
  double c = kRydbergEntanglementC;
  LinearFit t_ent_fit;             // t_ent = alpha0 + alpha1 N
  double rss = 0.0;
};

/// Joint least squares of S(t) = m1 t (t < tc), m1 tc + m2 (t - tc) (t >= tc)
/// with m1 shared across sizes. Traces that drop by more than
/// `monotone_tolerance` below their running maximum are rejected.
PiecewiseFit fit_entanglement_time(std::span<const GrowthTrace> traces, double c = kRydbergEntanglementC,
                                   double monotone_tolerance = 0.1);

struct DecayFit {
  std::vector<int> n;
  std::vector<double> gamma;        // per N
  std::vector<double> gamma_error;
  std::vector<double> log_intercept;  // absorbs SPAM and the t = 0 offset
  LinearFit gamma_fit;              // gamma = gamma0 + gamma1 N
};

/// ln F = b - gamma t per trace, then gamma(N) linear in N.
DecayFit fit_fidelity_decay(std::span<const GrowthTrace> traces);

/// F0^N exp(-gamma(N) t_ent(N)).
double predicted_fidelity(double f0, int n, const LinearFit& gamma, const LinearFit& t_ent);

// ---------------------------------------------------------------------------
// Page equivalence and cycle fidelity

/// Page-curve constants of a random circuit's saturated half-chain entropy, eta0 + eta1 N_RUC.
double page_eta0();
inline constexpr double kPageEta1 = 0.5;

/// N_RUC = (sigma1 N + sigma0 - eta0) / eta1 given S(N) = sigma0 + sigma1 N.
LinearFit page_equivalence(const LinearFit& rydberg_entropy);

struct CycleFidelity {
  double value = 1.0;
  double error = 0.0;
  double n_ruc = 0.0;
  double d_ent = 0.0;
  double log_evolution_fidelity = 0.0;  // -gamma(N) t_ent(N)
};

/// Solves F_cycle^((N_RUC - 1) d_ent / 2) = exp(-gamma(N) t_ent(N)), with
/// first-order error propagation assuming independent fits.
CycleFidelity cycle_fidelity(const LinearFit& gamma, const LinearFit& t_ent, const LinearFit& d_ent,
                             const LinearFit& rydberg_entropy, double n);

}  // namespace projens
