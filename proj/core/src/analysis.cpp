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

#include "projens/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <set>

#include <Eigen/Dense>
#include <unsupported/Eigen/LevenbergMarquardt>

#include "projens/types.hpp"

namespace projens {

double LinearFit::error(double x) const {
  Eigen::Vector2d g(1.0, x);
  return std::sqrt(std::max(0.0, g.dot(covariance * g)));
}

LinearFit fit_line(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw std::invalid_argument("fit_line: size mismatch");
  if (x.size() < 2) throw ConfigError("a linear fit needs at least 2 points");
  const auto m = static_cast<Eigen::Index>(x.size());
  Eigen::MatrixXd a(m, 2);
  Eigen::VectorXd b(m);
  for (Eigen::Index i = 0; i < m; ++i) {
    a(i, 0) = 1.0;
    a(i, 1) = x[static_cast<std::size_t>(i)];
    b[i] = y[static_cast<std::size_t>(i)];
  }
  const Eigen::Matrix2d ata = a.transpose() * a;
  if (std::abs(ata.determinant()) < 1e-300) throw NumericalError("linear fit is degenerate (all x equal)");
  const Eigen::Vector2d p = ata.ldlt().solve(a.transpose() * b);
  LinearFit f;
  f.intercept = p[0];
  f.slope = p[1];
  if (m > 2) {
    const double s2 = (b - a * p).squaredNorm() / static_cast<double>(m - 2);
    f.covariance = s2 * ata.inverse();
    f.intercept_error = std::sqrt(f.covariance(0, 0));
    f.slope_error = std::sqrt(f.covariance(1, 1));
  }
  return f;
}

namespace {

void check_trace(const GrowthTrace& t) {
  if (t.times.size() != t.values.size() || t.times.size() < 3) {
    throw InputDataError("each trace needs >= 3 (time, value) points");
  }
  for (std::size_t i = 1; i < t.times.size(); ++i) {
    if (!(t.times[i] > t.times[i - 1])) throw InputDataError("trace times must be strictly increasing");
  }
}

// Parameters: [m1, m2_0, tc_0, m2_1, tc_1, ...].
struct PiecewiseFunctor : Eigen::DenseFunctor<double> {
  std::span<const GrowthTrace> traces;
  std::vector<std::size_t> offsets;

  PiecewiseFunctor(std::span<const GrowthTrace> t, int inputs, int values)
      : Eigen::DenseFunctor<double>(inputs, values), traces(t) {
    std::size_t o = 0;
    for (const auto& tr : traces) {
      offsets.push_back(o);
      o += tr.times.size();
    }
  }

  int operator()(const InputType& x, ValueType& f) const {
    for (std::size_t k = 0; k < traces.size(); ++k) {
      const double m1 = x[0], m2 = x[static_cast<Eigen::Index>(1 + 2 * k)], tc = x[static_cast<Eigen::Index>(2 + 2 * k)];
      for (std::size_t i = 0; i < traces[k].times.size(); ++i) {
        const double t = traces[k].times[i];
        const double model = t < tc ? m1 * t : m1 * tc + m2 * (t - tc);
        f[static_cast<Eigen::Index>(offsets[k] + i)] = model - traces[k].values[i];
      }
    }
    return 0;
  }

  int df(const InputType& x, JacobianType& j) const {
    j.setZero();
    for (std::size_t k = 0; k < traces.size(); ++k) {
      const double m1 = x[0], m2 = x[static_cast<Eigen::Index>(1 + 2 * k)], tc = x[static_cast<Eigen::Index>(2 + 2 * k)];
      const auto c2 = static_cast<Eigen::Index>(1 + 2 * k), c3 = c2 + 1;
      for (std::size_t i = 0; i < traces[k].times.size(); ++i) {
        const double t = traces[k].times[i];
        const auto r = static_cast<Eigen::Index>(offsets[k] + i);
        if (t < tc) {
          j(r, 0) = t;
        } else {
          j(r, 0) = tc;
          j(r, c2) = t - tc;
          j(r, c3) = m1 - m2;
        }
      }
    }
    return 0;
  }
};

// Best single-trace fit (m1, m2, tc) with tc on a grid of candidate kinks.
Eigen::Vector3d single_fit(const GrowthTrace& t) {
  Eigen::Vector3d best(0, 0, 0);
  double best_rss = std::numeric_limits<double>::infinity();
  const std::size_t m = t.times.size();
  for (std::size_t k = 1; k + 1 < m; ++k) {
    for (double frac : {0.0, 0.5}) {
      const double tc = t.times[k] + frac * (t.times[k + 1] - t.times[k]);
      Eigen::MatrixXd a = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(m), 2);
      Eigen::VectorXd b(static_cast<Eigen::Index>(m));
      for (std::size_t i = 0; i < m; ++i) {
        const auto r = static_cast<Eigen::Index>(i);
        const double ti = t.times[i];
        a(r, 0) = ti < tc ? ti : tc;
        a(r, 1) = ti < tc ? 0.0 : ti - tc;
        b[r] = t.values[i];
      }
      const Eigen::Vector2d p = a.colPivHouseholderQr().solve(b);
      const double rss = (a * p - b).squaredNorm();
      if (rss < best_rss) {
        best_rss = rss;
        best = Eigen::Vector3d(p[0], p[1], tc);
      }
    }
  }
  return best;
}

}  // namespace

PiecewiseFit fit_entanglement_time(std::span<const GrowthTrace> traces, double c, double monotone_tolerance) {
  std::set<int> sizes;
  for (const auto& t : traces) {
    check_trace(t);
    sizes.insert(t.n);
    double running = -std::numeric_limits<double>::infinity();
    for (double v : t.values) {
      if (v < running - monotone_tolerance) throw InputDataError("non-monotone entropy trace for N = " + std::to_string(t.n));
      running = std::max(running, v);
    }
  }
  if (sizes.size() < 3 || sizes.size() != traces.size()) {
    throw ConfigError("entanglement-time fit needs >= 3 distinct system sizes, one trace each");
  }
  if (!(c > 0.0)) throw ConfigError("C must be positive");

  const auto k = static_cast<int>(traces.size());
  int values = 0;
  for (const auto& t : traces) values += static_cast<int>(t.times.size());
  Eigen::VectorXd x(1 + 2 * k);
  double m1 = 0.0;
  for (int i = 0; i < k; ++i) {
    const auto s = single_fit(traces[static_cast<std::size_t>(i)]);
    m1 += s[0] / k;
    x[1 + 2 * i] = s[1];
    x[2 + 2 * i] = s[2];
  }
  x[0] = m1;

  PiecewiseFunctor functor(traces, 1 + 2 * k, values);
  Eigen::LevenbergMarquardt<PiecewiseFunctor> lm(functor);
  lm.setXtol(1e-14);
  lm.setFtol(1e-14);
  lm.setMaxfev(2000);
  lm.minimize(x);

  Eigen::VectorXd res(values);
  functor(x, res);
  Eigen::MatrixXd jac(values, 1 + 2 * k);
  functor.df(x, jac);

  PiecewiseFit fit;
  fit.c = c;
  fit.m1 = x[0];
  fit.rss = res.squaredNorm();
  Eigen::MatrixXd cov = Eigen::MatrixXd::Zero(1 + 2 * k, 1 + 2 * k);
  const int dof = values - (1 + 2 * k);
  if (dof > 0) {
    const Eigen::MatrixXd jtj = jac.transpose() * jac;
    Eigen::FullPivLU<Eigen::MatrixXd> lu(jtj);
    if (lu.isInvertible()) cov = fit.rss / dof * lu.inverse();
  }
  fit.m1_error = std::sqrt(std::max(0.0, cov(0, 0)));
  std::vector<double> ns;
  for (int i = 0; i < k; ++i) {
    fit.n.push_back(traces[static_cast<std::size_t>(i)].n);
    fit.m2.push_back(x[1 + 2 * i]);
    fit.tc.push_back(x[2 + 2 * i]);
    fit.tc_error.push_back(std::sqrt(std::max(0.0, cov(2 + 2 * i, 2 + 2 * i))));
    fit.t_ent.push_back(c * x[2 + 2 * i]);
    ns.push_back(fit.n.back());
  }
  fit.t_ent_fit = fit_line(ns, fit.t_ent);
  return fit;
}

DecayFit fit_fidelity_decay(std::span<const GrowthTrace> traces) {
  if (traces.empty()) throw ConfigError("decay fit needs at least one trace");
  DecayFit fit;
  std::vector<double> ns;
  for (const auto& t : traces) {
    check_trace(t);
    std::vector<double> logs;
    for (double f : t.values) {
      if (!(f > 0.0)) throw InputDataError("non-positive fidelity in the trace for N = " + std::to_string(t.n));
      logs.push_back(std::log(f));
    }
    const auto line = fit_line(t.times, logs);
    const double gamma = -line.slope;
    if (gamma < 0.0) throw NumericalError("fitted decay rate is negative for N = " + std::to_string(t.n));
    fit.n.push_back(t.n);
    fit.gamma.push_back(gamma);
    fit.gamma_error.push_back(line.slope_error);
    fit.log_intercept.push_back(line.intercept);
    ns.push_back(t.n);
  }
  if (fit.n.size() >= 2) fit.gamma_fit = fit_line(ns, fit.gamma);
  return fit;
}

double predicted_fidelity(double f0, int n, const LinearFit& gamma, const LinearFit& t_ent) {
  return std::pow(f0, n) * std::exp(-gamma(n) * t_ent(n));
}

double page_eta0() { return -0.5 / std::log(2.0); }

LinearFit page_equivalence(const LinearFit& s) {
  LinearFit map;
  map.slope = s.slope / kPageEta1;
  map.intercept = (s.intercept - page_eta0()) / kPageEta1;
  map.covariance = s.covariance / (kPageEta1 * kPageEta1);
  map.intercept_error = s.intercept_error / kPageEta1;
  map.slope_error = s.slope_error / kPageEta1;
  return map;
}

CycleFidelity cycle_fidelity(const LinearFit& gamma, const LinearFit& t_ent, const LinearFit& d_ent,
                             const LinearFit& rydberg_entropy, double n) {
  // p = (gamma0, gamma1, alpha0, alpha1, beta0, beta1, sigma0, sigma1)
  auto evaluate = [n](const Eigen::Matrix<double, 8, 1>& p, CycleFidelity* detail) {
    const double log_f = -(p[0] + p[1] * n) * (p[2] + p[3] * n);
    const double n_ruc = (p[7] * n + p[6] - page_eta0()) / kPageEta1;
    const double d = p[4] + p[5] * n_ruc;
    const double exponent = 0.5 * (n_ruc - 1.0) * d;
    if (!(exponent > 0.0)) throw NumericalError("cycle count (N_RUC - 1) d_ent / 2 must be positive");
    if (detail) {
      detail->n_ruc = n_ruc;
      detail->d_ent = d;
      detail->log_evolution_fidelity = log_f;
    }
    return std::exp(log_f / exponent);
  };
  Eigen::Matrix<double, 8, 1> p;
  p << gamma.intercept, gamma.slope, t_ent.intercept, t_ent.slope, d_ent.intercept, d_ent.slope,
      rydberg_entropy.intercept, rydberg_entropy.slope;
  Eigen::Matrix<double, 8, 8> cov = Eigen::Matrix<double, 8, 8>::Zero();
  cov.block<2, 2>(0, 0) = gamma.covariance;
  cov.block<2, 2>(2, 2) = t_ent.covariance;
  cov.block<2, 2>(4, 4) = d_ent.covariance;
  cov.block<2, 2>(6, 6) = rydberg_entropy.covariance;

  CycleFidelity out;
  out.value = evaluate(p, &out);
  Eigen::Matrix<double, 8, 1> g;
  for (int i = 0; i < 8; ++i) {
    const double h = 1e-6 * std::max(1.0, std::abs(p[i]));
    auto hi = p, lo = p;
    hi[i] += h;
    lo[i] -= h;
    g[i] = (evaluate(hi, nullptr) - evaluate(lo, nullptr)) / (2.0 * h);
  }
  out.error = std::sqrt(std::max(0.0, g.dot(cov * g)));
  return out;
}

}  // namespace projens
