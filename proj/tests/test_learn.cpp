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

#include <bit>
#include <cmath>
#include <numeric>

#include <gtest/gtest.h>

#include "projens/bench.hpp"
#include "projens/learn.hpp"

namespace projens {
namespace {

RydbergSpec bench_spec(int n) {
  RydbergSpec s;
  s.n = n;
  s.omega = 5.3;
  s.delta = 0.5;
  return s;
}

std::vector<double> linspace(double a, double b, int k) {
  std::vector<double> v(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) v[static_cast<std::size_t>(i)] = a + (b - a) * i / (k - 1);
  return v;
}

std::vector<TimedSamples> synthetic(const RydbergSpec& s, const std::vector<double>& times, std::size_t shots,
                                    std::uint64_t seed) {
  auto b = make_basis(s.n, Constraint::kBlockade);
  const auto r = evolve_exact(build_rydberg(s, b), StateVector::zeros_state(b), times);
  std::vector<TimedSamples> out;
  for (std::size_t t = 0; t < times.size(); ++t) out.push_back({times[t], sample_bitstrings(r.states[t], shots, seed + t)});
  return out;
}

TEST(Learn, ParameterNames) {
  for (auto p : {ScanParameter::kOmega, ScanParameter::kDelta, ScanParameter::kVnnn}) {
    EXPECT_EQ(parse_scan_parameter(to_string(p)), p);
  }
  EXPECT_THROW(parse_scan_parameter("c6"), ConfigError);
  EXPECT_NEAR(with_parameter(bench_spec(4), ScanParameter::kVnnn, 2.0).vnnn(), 2.0, 1e-12);
}

TEST(Learn, ScanPeaksAtGeneratingValues) {
  const auto truth = bench_spec(8);
  const auto times = linspace(0.2, 3.0, 15);
  const auto data = synthetic(truth, times, 4000, 1);
  struct Case {
    ScanParameter p;
    double value;
    double step;
  };
  for (const auto& c : {Case{ScanParameter::kOmega, 5.3, 0.1}, Case{ScanParameter::kDelta, 0.5, 0.1},
                        Case{ScanParameter::kVnnn, truth.vnnn(), 0.1}}) {
    std::vector<double> grid;
    for (int k = -5; k <= 5; ++k) grid.push_back(c.value + k * c.step);
    const auto r = scan_parameter(truth, data, c.p, grid);
    EXPECT_NEAR(r.peak, c.value, 0.5 * c.step + 1e-12) << to_string(c.p);
    EXPECT_FALSE(r.degenerate);
    EXPECT_FALSE(r.peak_at_edge);
    EXPECT_TRUE(r.window_from_saturation);
    int ones = 0;
    for (double v : r.normalized) {
      EXPECT_LE(v, 1.0);
      ones += v == 1.0;
    }
    EXPECT_EQ(ones, 1);
  }
}

TEST(Learn, FlatZeroSamplesAreDegenerate) {
  const auto truth = bench_spec(6);
  std::vector<TimedSamples> data;
  for (double t : {0.5, 1.0, 1.5, 2.0}) {
    SampleSet s;
    s.n_sites = 6;
    s.shots.assign(100, 0);
    data.push_back({t, s});
  }
  const auto grid = linspace(4.8, 5.8, 6);
  EXPECT_TRUE(scan_parameter(truth, data, ScanParameter::kOmega, grid).degenerate);
  EXPECT_THROW(scan_parameter(truth, std::span(data).first(2), ScanParameter::kOmega, grid), ConfigError);
  EXPECT_THROW(scan_parameter(truth, data, ScanParameter::kOmega, std::span(grid).first(4)), ConfigError);
}

TEST(Learn, FcPeakNarrowsWithWindow) {
  // noiseless tables stand in for infinite shots; the later window gives the sharper peak
  const auto truth = bench_spec(8);
  const auto grid = linspace(5.0, 5.6, 25);
  auto width = [&](double t0, double t1) {
    const auto times = linspace(t0, t1, 8);
    const auto data = synthetic(truth, times, 20000, 7);
    ScanOptions o;
    o.window_start = t0;
    return scan_parameter(truth, data, ScanParameter::kOmega, grid, o).fwhm;
  };
  const auto early = width(0.5, 1.0), late = width(2.5, 3.0);
  ASSERT_TRUE(early && late);
  EXPECT_LT(*late, *early);
}

TEST(Learn, RssComparatorMatchedIsZero) {
  const auto truth = bench_spec(8);
  const auto times = linspace(0.2, 2.0, 10);
  auto b = make_basis(8, Constraint::kBlockade);
  const auto r = evolve_exact(build_rydberg(truth, b), StateVector::zeros_state(b), times);
  MagnetizationTrace ref;
  ref.times = times;
  for (const auto& s : r.states) ref.sz.push_back(local_sz(s));
  std::vector<double> grid;
  for (int k = -4; k <= 4; ++k) grid.push_back(5.3 + 0.1 * k);
  const auto scan = rss_comparator(truth, ref, ScanParameter::kOmega, grid);
  EXPECT_NEAR(scan.integrated[4], 1.0, 1e-12);
  EXPECT_NEAR(scan.peak, 5.3, 1e-12);
}

TEST(Learn, LocalSzFromSamples) {
  SampleSet s;
  s.n_sites = 3;
  s.shots = {0b100, 0b101, 0b000, 0b001};
  const auto sz = local_sz(s);
  EXPECT_DOUBLE_EQ(sz[0], 0.0);
  EXPECT_DOUBLE_EQ(sz[1], 0.5);
  EXPECT_DOUBLE_EQ(sz[2], 0.0);
}

TEST(Learn, LocalFieldsZeroDisorder) {
  const auto truth = bench_spec(6);
  const auto data = synthetic(truth, linspace(0.1, 6.0, 60), 20000, 11);
  LocalLearnOptions o;
  o.restarts = 3;
  o.seed = 3;
  const auto r = learn_local_fields(truth, data, o);
  EXPECT_EQ(r.restarts, 3);
  ASSERT_EQ(r.per_restart.size(), 3u);
  for (double m : r.mean) EXPECT_NEAR(m, 0.0, 0.05);
  for (double s : r.stddev) EXPECT_GT(s, 0.0);  // bootstrap resampling spreads the restarts
}

TEST(Learn, ClusterState) {
  const auto c = cluster_state(3);
  // amplitude of |111> carries two CZ phases, |110> one
  EXPECT_NEAR(c.amplitudes()[7].real(), std::pow(2.0, -1.5), 1e-15);
  EXPECT_NEAR(c.amplitudes()[6].real(), -std::pow(2.0, -1.5), 1e-15);
}

TEST(Learn, TargetBenchmarkPureIsOne) {
  const QuenchSpec q = QuenchSpec::uniform(8, 1.0, -1.79, 0.0, 4.64);
  const auto h = build_quench(q);
  const auto psi = cluster_state(8);
  const auto times = linspace(0.0, 3.0, 16);
  const auto r = target_state_benchmark(psi, {{1.0}, {psi}}, h, times);
  EXPECT_NEAR(r.fidelity, 1.0, 1e-12);
  for (double f : r.fc) EXPECT_NEAR(f, 1.0, 1e-12);
}

TEST(Learn, TargetBenchmarkClusterHalfFidelity) {
  // global z rotation chosen so that the overlap with the ideal cluster state is 0.5
  const int n = 8;
  const auto psi = cluster_state(n);
  const auto& b = psi.basis();
  // phase theta on every site: overlap |cos(theta/2)|^(2N) = 1/2
  const double theta = 2.0 * std::acos(std::pow(0.5, 1.0 / (2.0 * n)));
  CVector v = psi.amplitudes();
  for (std::size_t i = 0; i < b.dim(); ++i) {
    const int k = std::popcount(b.state(i));
    v[static_cast<Eigen::Index>(i)] *= std::exp(cplx(0.0, theta * (k - 0.5 * n)));
  }
  const StateVector bad(psi.basis_ptr(), v);
  const auto h = build_quench(QuenchSpec::uniform(n, 1.0, -1.79, 0.0, 4.64));
  const auto times = linspace(0.0, 10.0, 41);
  const auto r = target_state_benchmark(psi, {{1.0}, {bad}}, h, times);
  EXPECT_NEAR(r.fidelity, 0.5, 1e-9);
  double late = 0.0;
  for (std::size_t t = 30; t < times.size(); ++t) late += r.fc[t] / 11.0;
  EXPECT_NEAR(late, 0.5, 0.1);
  EXPECT_NEAR(r.fc.front(), 1.0, 1e-9);  // a phase error is invisible before the quench
}

}  // namespace
}  // namespace projens
