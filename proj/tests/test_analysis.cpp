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

#include <cmath>

#include <gtest/gtest.h>

#include "projens/analysis.hpp"
#include "projens/types.hpp"

namespace projens {
namespace {

LinearFit line(double a, double b, double ea = 0.0, double eb = 0.0) {
  LinearFit f;
  f.intercept = a;
  f.slope = b;
  f.intercept_error = ea;
  f.slope_error = eb;
  f.covariance(0, 0) = ea * ea;
  f.covariance(1, 1) = eb * eb;
  return f;
}

GrowthTrace piecewise(int n, double m1, double m2, double tc) {
  GrowthTrace t;
  t.n = n;
  for (int i = 0; i <= 40; ++i) {
    const double x = 0.05 * i + 0.013;
    t.times.push_back(x);
    t.values.push_back(x < tc ? m1 * x : m1 * tc + m2 * (x - tc));
  }
  return t;
}

TEST(Analysis, FitLineExact) {
  const std::vector<double> x{1, 2, 3, 4}, y{3, 5, 7, 9};
  const auto f = fit_line(x, y);
  EXPECT_NEAR(f.intercept, 1.0, 1e-12);
  EXPECT_NEAR(f.slope, 2.0, 1e-12);
  EXPECT_NEAR(f.slope_error, 0.0, 1e-12);
  EXPECT_THROW(fit_line(std::vector<double>{1}, std::vector<double>{1}), ConfigError);
}

TEST(Analysis, PiecewiseSyntheticRecovery) {
  const double m1 = 2.4;
  const std::vector<std::pair<int, double>> cases{{8, 0.61}, {10, 0.74}, {12, 0.87}, {14, 1.02}};
  std::vector<GrowthTrace> traces;
  for (const auto& [n, tc] : cases) traces.push_back(piecewise(n, m1, 0.02 * n, tc));
  const auto fit = fit_entanglement_time(traces, 1.35);
  EXPECT_NEAR(fit.m1, m1, 1e-9);
  for (std::size_t i = 0; i < cases.size(); ++i) {
    EXPECT_NEAR(fit.tc[i], cases[i].second, 1e-9);
    EXPECT_NEAR(fit.m2[i], 0.02 * cases[i].first, 1e-9);
    EXPECT_NEAR(fit.t_ent[i], 1.35 * cases[i].second, 1e-9);
  }
  EXPECT_GT(fit.t_ent_fit.slope, 0.0);
  EXPECT_LT(fit.rss, 1e-18);
}

TEST(Analysis, PiecewiseRejectsBadInput) {
  std::vector<GrowthTrace> traces{piecewise(8, 2, 0.1, 0.5), piecewise(10, 2, 0.1, 0.6)};
  EXPECT_THROW(fit_entanglement_time(traces), ConfigError);
  traces.push_back(piecewise(12, 2, 0.1, 0.7));
  traces[1].values[20] -= 0.5;
  EXPECT_THROW(fit_entanglement_time(traces), InputDataError);
}

TEST(Analysis, DecaySynthetic) {
  std::vector<GrowthTrace> traces;
  for (int n : {8, 10, 12}) {
    GrowthTrace t;
    t.n = n;
    const double g = 0.12 + 0.017 * n;
    for (int i = 0; i < 20; ++i) {
      t.times.push_back(0.1 * i);
      t.values.push_back(0.9 * std::exp(-g * 0.1 * i));
    }
    traces.push_back(t);
  }
  const auto fit = fit_fidelity_decay(traces);
  EXPECT_NEAR(fit.gamma[0], 0.12 + 0.017 * 8, 1e-6);
  EXPECT_NEAR(fit.gamma_fit.intercept, 0.12, 1e-9);
  EXPECT_NEAR(fit.gamma_fit.slope, 0.017, 1e-9);
  EXPECT_NEAR(fit.log_intercept[1], std::log(0.9), 1e-9);

  GrowthTrace single;
  single.n = 4;
  for (int i = 0; i < 10; ++i) {
    single.times.push_back(i);
    single.values.push_back(std::exp(-0.3 * i));
  }
  EXPECT_NEAR(fit_fidelity_decay(std::vector<GrowthTrace>{single}).gamma[0], 0.3, 1e-6);
  single.values[3] = 0.0;
  EXPECT_THROW(fit_fidelity_decay(std::vector<GrowthTrace>{single}), InputDataError);
}

TEST(Analysis, PredictedFidelity) {
  EXPECT_NEAR(predicted_fidelity(0.99, 10, line(0.12, 0.017), line(-0.058, 0.05404)),
              std::pow(0.99, 10) * std::exp(-(0.12 + 0.17) * (-0.058 + 0.5404)), 1e-14);
}

TEST(Analysis, PageConstantsAndMap) {
  EXPECT_NEAR(page_eta0(), -0.7213475204444817, 1e-15);
  const auto map = page_equivalence(line(0.16, 0.26));
  EXPECT_NEAR(map.slope, 0.52, 1e-12);
  EXPECT_NEAR(map.intercept, 1.76, 0.005);
}

TEST(Analysis, CycleFidelityLimits) {
  const auto c = cycle_fidelity(line(0.0, 0.0), line(-0.058, 0.05404), line(-0.395, 0.557), line(0.16, 0.26), 20);
  EXPECT_DOUBLE_EQ(c.value, 1.0);
}

TEST(Analysis, CycleFidelityPublishedInputs) {
  // published decay, entanglement-time, depth and entropy fits
  const auto gamma = line(0.12, 0.017, 0.04, 0.003);
  const auto t_ent = line(-0.0580, 0.05404, 2e-4, 1e-5);
  const auto s = line(0.16, 0.26, 0.04, 0.03);
  for (int n : {10, 20, 30}) {
    EXPECT_NEAR(cycle_fidelity(gamma, t_ent, line(-0.395, 0.557, 0.017, 0.001), s, n).value, 0.987, 0.002) << n;
    EXPECT_NEAR(cycle_fidelity(gamma, t_ent, line(-3.18, 2.261, 0.77, 0.051), s, n).value, 0.9965, 0.0005) << n;
  }
}

TEST(Analysis, CycleFidelityErrorShrinksWithInputs) {
  double prev = 1e9;
  for (double s : {1.0, 0.5, 0.25, 0.1}) {
    const auto c = cycle_fidelity(line(0.12, 0.017, 0.04 * s, 0.003 * s), line(-0.058, 0.05404, 2e-4 * s, 1e-5 * s),
                                  line(-0.395, 0.557, 0.017 * s, 0.001 * s), line(0.16, 0.26, 0.04 * s, 0.03 * s), 20);
    EXPECT_LT(c.error, prev);
    prev = c.error;
  }
}

TEST(Analysis, IncreasingFits) {
  const auto t = line(-0.058, 0.05404);
  const auto map = page_equivalence(line(0.16, 0.26));
  const auto d = line(-0.395, 0.557);
  for (int n = 5; n < 30; ++n) {
    EXPECT_GT(t(n + 1), t(n));
    EXPECT_GT(d(map(n + 1)), d(map(n)));
  }
}

}  // namespace
}  // namespace projens
