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

// Acceptance run: one PASS/FAIL line per criterion. `--only AC<k>` runs a subset.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iterator>
#include <numeric>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "projens/analysis.hpp"
#include "projens/bench.hpp"
#include "projens/ensemble.hpp"
#include "projens/evolve.hpp"
#include "projens/learn.hpp"

using namespace projens;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::vector<double> linspace(double a, double b, int k) {
  std::vector<double> v(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) v[static_cast<std::size_t>(i)] = k == 1 ? a : a + (b - a) * i / (k - 1);
  return v;
}

std::string fmt(const char* f, double a) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

double factorial(int k) { return std::tgamma(k + 1.0); }

RydbergSpec rydberg(int n, double omega, double delta) {
  RydbergSpec s;
  s.n = n;
  s.omega = omega;
  s.delta = delta;
  s.c6 = 249.0e3;
  s.spacing = 3.75;
  return s;
}

EvolutionResult quench_zeros(const RydbergSpec& spec, std::span<const double> times) {
  auto basis = make_basis(spec.n, Constraint::kBlockade);
  EvolveOptions eo;
  eo.compute_observables = false;
  return evolve_exact(build_rydberg(spec, basis), StateVector::zeros_state(basis), times, eo);
}

double slope_loglog(const std::vector<double>& x, const std::vector<double>& y) {
  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < x.size(); ++i) {
    lx.push_back(std::log(x[i]));
    ly.push_back(std::log(y[i]));
  }
  return fit_line(lx, ly).slope;
}

double stddev(const std::vector<double>& v) {
  const double m = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
  double s = 0.0;
  for (double x : v) s += (x - m) * (x - m);
  return std::sqrt(s / static_cast<double>(v.size() - 1));
}

// Monte Carlo Haar moments of a single outcome probability against k!/(D...(D+k-1)).
Outcome ac1() {
  double worst = 0.0;
  for (int d : {2, 3, 4, 5}) {
    const auto ens = haar_ensemble(d, 100000, 0xAC1 + static_cast<std::uint64_t>(d));
    for (int k = 1; k <= 4; ++k) {
      double m = 0.0, m2 = 0.0;
      for (const auto& e : ens.entries) {
        const double v = std::pow(std::norm(e.state[0]), k);
        m += v;
        m2 += v * v;
      }
      const double n = static_cast<double>(ens.entries.size());
      m /= n;
      const double se = std::sqrt((m2 / n - m * m) / (n - 1.0));
      worst = std::max(worst, std::abs(m - factorial(k) / rising_factorial(d, k)) / se);
    }
  }
  return {worst <= 3.0, "max |z| = " + fmt("%.2f", worst) + " over D_A in 2..5, k <= 4"};
}

// Flat law for D_A = 2 and the (D-1)(1-p)^(D-2) law for D_A = 5 at Omega t = 2.3.
Outcome ac2() {
  const auto spec = rydberg(10, 4.7, 0.9);
  const std::vector<double> t{2.3 / 4.7};
  const auto psi = quench_zeros(spec, t).states.back();
  bool ok = true;
  std::string detail;
  for (const auto& sites : {std::vector<int>{5}, std::vector<int>{4, 5, 6}}) {
    const Bipartition bip(10, sites, true);
    const auto ens = project(psi, bip);
    const auto chi = chi_square_test(conditional_histogram(ens, 0, 20), haar_mass(ens.dim_a()));
    ok = ok && chi.p_value > 0.01;
    detail += "D_A=" + std::to_string(ens.dim_a()) + " p=" + fmt("%.3f", chi.p_value) + " ";
  }
  return {ok, detail};
}

// Rescaled moments averaged over the plateau t in [1, 3] us (N = 10, L_A = 2, D_A = 3).
Outcome ac3() {
  const auto spec = rydberg(10, 4.7, 0.9);
  const auto times = linspace(1.0, 3.0, 21);
  const auto ev = quench_zeros(spec, times);
  const Bipartition bip(10, {5, 6}, true);
  std::vector<double> avg(5, 0.0);
  for (const auto& s : ev.states) {
    const auto ens = project(s, bip);
    for (int k = 2; k <= 4; ++k) avg[static_cast<std::size_t>(k)] += moment_scalar(ens, k).rescaled / times.size();
  }
  bool ok = true;
  std::string detail;
  for (int k = 2; k <= 4; ++k) {
    const double r = avg[static_cast<std::size_t>(k)] / factorial(k);
    ok = ok && std::abs(r - 1.0) <= 0.10;
    detail += "k=" + std::to_string(k) + ": " + fmt("%.3f", avg[static_cast<std::size_t>(k)]) + " ";
  }
  return {ok, detail};
}

// Late-time design distance against D_B for N = 8..14 (Omega = 4.7, Delta = 0.5, C6 = 254e3, L_A = 1).
Outcome ac4() {
  const auto times = linspace(4.0, 8.0, 9);
  std::vector<double> d_b;
  std::vector<std::vector<double>> dist(3);
  for (int n = 8; n <= 14; ++n) {
    auto spec = rydberg(n, 4.7, 0.5);
    spec.c6 = 254.0e3;
    const auto ev = quench_zeros(spec, times);
    const Bipartition bip(n, {(n + 1) / 2}, true);
    std::vector<double> acc(3, 0.0);
    std::size_t outcomes = 0;
    for (const auto& s : ev.states) {
      const auto ens = project(s, bip);
      outcomes = std::max(outcomes, ens.entries.size());
      for (int k = 1; k <= 3; ++k) acc[static_cast<std::size_t>(k - 1)] += design_distance(ens, k) / times.size();
    }
    d_b.push_back(static_cast<double>(outcomes));
    for (int k = 0; k < 3; ++k) dist[static_cast<std::size_t>(k)].push_back(acc[static_cast<std::size_t>(k)]);
  }
  bool ok = true;
  std::string detail = "slopes";
  for (int k = 0; k < 3; ++k) {
    const double s = slope_loglog(d_b, dist[static_cast<std::size_t>(k)]);
    ok = ok && std::abs(s + 0.5) <= 0.15;
    detail += " k=" + std::to_string(k + 1) + ": " + fmt("%.3f", s);
  }
  return {ok, detail};
}

// Brute-force oracles: Bell distance and first moment = partial trace.
Outcome ac5() {
  auto b2 = make_basis(2, Constraint::kFull);
  CVector v = CVector::Zero(4);
  v[0] = v[3] = 1.0 / std::sqrt(2.0);
  const double bell = design_distance(project(StateVector(b2, v), Bipartition(2, {1})), 2);
  double worst = 0.0;
  Rng rng = make_rng(0xAC5, 0);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 2 + trial % 7;
    auto b = make_basis(n, Constraint::kFull);
    const auto psi = StateVector(b, haar_state(static_cast<int>(b->dim()), rng));
    const int la = 1 + trial % std::min(3, n - 1);
    const auto bip = Bipartition::contiguous(n, 1 + trial % (n - la + 1), la);
    const CMatrix diff = ensemble_moment(project(psi, bip), 1) - reduced_density_matrix(psi, bip).rho;
    worst = std::max(worst, diff.cwiseAbs().maxCoeff());
  }
  return {std::abs(bell - 2.0 / 3.0) <= 1e-12 && worst <= 1e-10,
          "Bell l1 = " + fmt("%.15f", bell) + ", max |rho_ens - rho_A| = " + fmt("%.2e", worst)};
}

// Single mid-chain z error at Omega t_err / 2 pi = 1 (N = 12) tuned to F = 0.5.
Outcome ac6() {
  const int n = 12;
  const double omega = 5.3, t_err = 1.0 / omega;
  const auto spec = rydberg(n, omega, 0.5);
  auto basis = make_basis(n, Constraint::kBlockade);
  const auto h = build_rydberg(spec, basis);
  const auto psi0 = StateVector::zeros_state(basis);
  const std::vector<double> te{t_err};
  const auto at = evolve_exact(h, psi0, te).observables.back();
  const double m = 1.0 - 2.0 * at.occupation[5];
  SingleErrorSpec e;
  e.site = 6;
  e.t_err = t_err;
  e.axis = ErrorAxis::kZ;
  e.angle = 2.0 * std::asin(std::sqrt(0.5 / (1.0 - m * m)));
  std::vector<double> taus{0.0};
  for (double tau : linspace(1.0 / omega, 3.0 / omega, 11)) taus.push_back(tau);
  const auto pts = single_error_experiment(h, psi0, e, taus);
  double worst = 0.0;
  for (std::size_t i = 1; i < pts.size(); ++i) worst = std::max(worst, std::abs(pts[i].fc - pts[i].fidelity));
  const bool failure_mode = pts[0].fc >= 0.99 && pts[0].fidelity < 0.95;
  return {worst <= 0.05 && failure_mode, "F = " + fmt("%.3f", pts[1].fidelity) + ", max |F_c - F| = " +
                                             fmt("%.3f", worst) + ", tau=0: F_c = " + fmt("%.3f", pts[0].fc)};
}

// F_c against F_XEB in a noisy SU(4) circuit, N = 12, 10^4 trajectories.
Outcome ac7() {
  CircuitSpec c;
  c.n = 12;
  c.depth = 14;
  c.gate_set = GateSet::kSu4;
  c.seed = 0xAC7;
  c = build_circuit(c);
  auto basis = make_basis(c.n, Constraint::kFull);
  const auto r = run_noisy_circuit(c, 0.005, StateVector::zeros_state(basis), 10000, 0xAC7);
  const double d = std::ldexp(1.0, c.n);
  int checked = 0;
  double worst = 0.0;
  for (std::size_t k = 0; k < r.depths.size(); ++k) {
    const auto& p0v = r.ideal_probabilities[k];
    const auto& pv = r.mean_probabilities[k];
    const auto p0 = ProbTable::from_basis(*basis, std::span<const double>(p0v.data(), static_cast<std::size_t>(p0v.size())));
    const auto p = ProbTable::from_basis(*basis, std::span<const double>(pv.data(), static_cast<std::size_t>(pv.size())));
    const double f = r.fidelity[k];
    if (std::abs(fxeb(p0, p, d) - f) > 0.3) {
      ++checked;
      worst = std::max(worst, std::abs(fc_exact(p0, p) - f));
    }
  }
  return {checked > 0 && worst <= 0.1,
          std::to_string(checked) + " depths with |F_XEB - F| > 0.3, max |F_c - F| there = " + fmt("%.3f", worst)};
}

// Sample complexity sigma(F_c) sqrt(M) = a^N under decay and static detuning disorder.
Outcome ac8() {
  NoiseModel noise;
  noise.decay_rate = 0.02;
  noise.delta_site_sigma = 0.1;
  const std::vector<double> t{1.0};
  std::vector<SpreadPoint> points;
  for (int n = 8; n <= 14; ++n) {
    const auto spec = rydberg(n, 5.3, 0.5);
    auto basis = make_basis(n, Constraint::kBlockade);
    const auto r = run_trajectories(spec, basis, noise, StateVector::zeros_state(basis), t, 100,
                                    0xAC8 + static_cast<std::uint64_t>(n));
    const auto p0 = r.ideal_table(0), p = r.table(0);
    for (std::size_t m : {1000u, 2000u, 4000u, 8000u}) {
      points.push_back({n, m, fc_spread(p0, p, m, 200, 0xAC80 + static_cast<std::uint64_t>(n) * 16 + m)});
    }
  }
  const auto fit = sample_complexity(points);
  return {fit.a >= 1.02 && fit.a <= 1.06, "a = " + fmt("%.4f", fit.a) + " +- " + fmt("%.4f", fit.a_error)};
}

// Page saturation of SU(4) circuits from the fitted saturation depth d_ent = -3.18 + 2.261 N onward,
// and the Page-equivalence algebra.
Outcome ac9() {
  bool ok = true;
  std::string detail;
  for (int n : {10, 12}) {
    const int first = static_cast<int>(std::ceil(-3.18 + 2.261 * n)), last = first + 20;
    CircuitSpec c;
    c.n = n;
    c.depth = last;
    c.seed = 0xAC9 + static_cast<std::uint64_t>(n);
    c = build_circuit(c);
    auto basis = make_basis(n, Constraint::kFull);
    const auto ev = apply_circuit(c, StateVector::zeros_state(basis));
    double s = 0.0;
    for (int d = first; d <= last; ++d) s += ev.observables[static_cast<std::size_t>(d)].entropy / (last - first + 1);
    const double target = 0.5 * n + page_eta0();
    ok = ok && std::abs(s - target) <= 0.1;
    detail += "N=" + std::to_string(n) + ": " + fmt("%.3f", s) + " (Page " + fmt("%.3f", target) + ") ";
  }
  LinearFit entropy;
  entropy.intercept = 0.16;
  entropy.slope = 0.26;
  const auto map = page_equivalence(entropy);
  ok = ok && std::abs(map.slope - 0.52) <= 1e-12 && std::abs(map.intercept - 1.76) <= 0.005;
  detail += "N_RUC = " + fmt("%.4f", map.slope) + " N + " + fmt("%.4f", map.intercept);
  return {ok, detail};
}

// Scan self-consistency and local-field recovery on synthetic noiseless shots (N = 8).
Outcome ac10() {
  const int n = 8;
  const auto base = rydberg(n, 5.3, 0.5);
  const std::size_t shots = default_shot_budget(n);
  auto make_data = [&](const RydbergSpec& truth, const std::vector<double>& times, std::uint64_t seed) {
    const auto ev = quench_zeros(truth, times);
    std::vector<TimedSamples> data;
    for (std::size_t i = 0; i < times.size(); ++i) {
      data.push_back({times[i], sample_bitstrings(ev.states[i], shots, derive_seed(seed, i))});
    }
    return data;
  };
  bool ok = true;
  std::string detail = "peaks";
  const auto scan_times = linspace(0.2, 3.0, 15);
  const auto data = make_data(base, scan_times, 0xAC10);
  for (auto p : {ScanParameter::kOmega, ScanParameter::kDelta, ScanParameter::kVnnn}) {
    const double truth = p == ScanParameter::kOmega ? base.omega : p == ScanParameter::kDelta ? base.delta : base.vnnn();
    std::vector<double> grid;
    for (int j = -5; j <= 5; ++j) grid.push_back(truth + 0.1 * j);
    const auto r = scan_parameter(base, data, p, grid);
    ok = ok && std::abs(r.peak - truth) < 1e-9;
    detail += " " + std::string(to_string(p)) + "=" + fmt("%.3f", r.peak) + "/" + fmt("%.3f", truth);
  }

  Rng rng = make_rng(0xAC10, 1);
  RydbergSpec truth = base;
  truth.delta_offsets.resize(n);
  for (double& d : truth.delta_offsets) d = 2.0 * uniform01(rng) - 1.0;
  const auto local_data = make_data(truth, linspace(0.1, 4.0, 40), 0xAC11);
  LocalLearnOptions o;
  o.seed = 0xAC12;
  const auto r = learn_local_fields(base, local_data, o);
  double worst = 0.0;
  for (std::size_t i = 0; i < r.mean.size(); ++i) {
    worst = std::max(worst, std::abs(r.mean[i] - truth.delta_offsets[i]) / r.stddev[i]);
  }
  ok = ok && worst <= 2.0;
  double bias = 0.0;
  for (std::size_t i = 0; i < r.mean.size(); ++i) bias = std::max(bias, std::abs(r.mean[i] - truth.delta_offsets[i]));
  detail += "; local fields: max |error| = " + fmt("%.3f", bias) + " MHz = " + fmt("%.1f", worst) + " restart std";
  return {ok, detail};
}

// Scrooge law at finite detuning (N = 16, Delta = 3 and 5.5 MHz) and its infinite-temperature limit.
Outcome ac11() {
  const int n = 16;
  const std::vector<double> t{3.0};
  const Bipartition bip(n, {8}, true);
  bool ok = true;
  std::string detail;
  for (double delta : {3.0, 5.5}) {
    const auto ens = project(quench_zeros(rydberg(n, 4.7, delta), t).states.back(), bip);
    const double p1 = ensemble_moment(ens, 1)(1, 1).real();
    const auto params = scrooge_params(p1);
    const auto chi = chi_square_test(conditional_histogram(ens, 1, 20), scrooge_mass(params.a, params.b));
    ok = ok && chi.p_value > 0.01;
    detail += "Delta=" + fmt("%.1f", delta) + ": <1|rho|1> = " + fmt("%.3f", p1) + ", p = " + fmt("%.3f", chi.p_value) + "; ";
  }
  const auto flat = scrooge_params(0.5);
  double dev = 0.0;
  for (double p : linspace(0.0, 1.0, 101)) dev = std::max(dev, std::abs(scrooge_density(flat.a, flat.b, p) - 1.0));
  ok = ok && dev <= 1e-12;
  return {ok, detail + "infinite-temperature max |P_S - 1| = " + fmt("%.1e", dev)};
}

// Spread of (F_c - F)/F over 50 QIMF realizations against D = 2^N.
Outcome ac12() {
  std::vector<double> d, spread;
  for (int n : {8, 10, 12}) {
    std::vector<double> rel;
    for (int r = 0; r < 50; ++r) {
      Rng rng = make_rng(0xAC12, static_cast<std::uint64_t>(n * 1000 + r));
      QimfSpec q;
      q.n = n;
      q.fields = sample_qimf_fields(n, rng);
      const auto h = build_qimf(q);
      SingleErrorSpec e;
      e.site = n / 2;
      e.t_err = 5.0;
      e.angle = 0.5 * kTwoPi / 2.0;
      e.axis = ErrorAxis::kZ;
      const std::vector<double> tau{30.0};
      const auto pt = single_error_experiment(h, StateVector::zeros_state(h.basis), e, tau).front();
      rel.push_back((pt.fc - pt.fidelity) / pt.fidelity);
    }
    d.push_back(std::ldexp(1.0, n));
    spread.push_back(stddev(rel));
  }
  const double s = slope_loglog(d, spread);
  return {std::abs(s + 0.5) <= 0.2, "sigma = " + fmt("%.4f", spread[0]) + ", " + fmt("%.4f", spread[1]) + ", " +
                                        fmt("%.4f", spread[2]) + "; slope " + fmt("%.3f", s)};
}

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

// Every shipped config run twice gives byte-identical output trees.
Outcome ac13() {
  const fs::path cli = PROJENS_CLI_PATH, configs = PROJENS_CONFIG_DIR;
  const fs::path work = fs::temp_directory_path() / "projens_ac13";
  fs::remove_all(work);
  int runs = 0;
  std::vector<std::string> bad;
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(configs)) files.push_back(entry.path());
  std::sort(files.begin(), files.end());
  for (const auto& cfg : files) {
    if (cfg.extension() != ".json") continue;
    std::ifstream in(cfg);
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    const auto at = text.find("\"command\"");
    const auto q1 = text.find('"', text.find(':', at) + 1), q2 = text.find('"', q1 + 1);
    const std::string command = text.substr(q1 + 1, q2 - q1 - 1);
    const std::string stem = cfg.stem().string();
    bool same = true;
    for (int rep = 0; rep < 2; ++rep) {
      const auto out = work / (stem + "_" + std::to_string(rep));
      const std::string cmd = "\"" + cli.string() + "\" " + command + " --config \"" + cfg.string() + "\" --out \"" +
                              out.string() + "\" > /dev/null 2>&1";
      if (std::system(cmd.c_str()) != 0) same = false;
    }
    std::set<fs::path> names;
    for (int rep = 0; rep < 2; ++rep) {
      const auto root = work / (stem + "_" + std::to_string(rep));
      if (!fs::exists(root)) continue;
      for (const auto& f : fs::recursive_directory_iterator(root)) {
        if (f.is_regular_file()) names.insert(fs::relative(f.path(), root));
      }
    }
    for (const auto& name : names) {
      const auto a = work / (stem + "_0") / name, b = work / (stem + "_1") / name;
      if (!fs::exists(a) || !fs::exists(b) || read_file(a) != read_file(b)) same = false;
    }
    if (names.empty()) same = false;
    if (!same) bad.push_back(stem);
    ++runs;
  }
  fs::remove_all(work);
  std::string detail = std::to_string(runs) + " configs rerun";
  for (const auto& b : bad) detail += ", differs: " + b;
  return {runs > 0 && bad.empty(), detail};
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"AC1", ac1}, {"AC2", ac2}, {"AC3", ac3}, {"AC4", ac4},   {"AC5", ac5},   {"AC6", ac6},  {"AC7", ac7},
      {"AC8", ac8}, {"AC9", ac9}, {"AC10", ac10}, {"AC11", ac11}, {"AC12", ac12}, {"AC13", ac13}};
  std::set<std::string> only;
  for (int i = 1; i + 1 < argc; i += 2) {
    if (std::string(argv[i]) == "--only") only.insert(argv[i + 1]);
  }
  int failed = 0;
  for (const auto& [name, run] : criteria) {
    if (!only.empty() && !only.contains(name)) continue;
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("%s %s: %s [%.1f s]\n", o.pass ? "PASS" : "FAIL", name.c_str(), o.detail.c_str(), secs);
    std::fflush(stdout);
    if (!o.pass) ++failed;
  }
  return failed == 0 ? 0 : 1;
}
