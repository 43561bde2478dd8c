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
#include <numeric>

#include <gtest/gtest.h>

#include "projens/evolve.hpp"
#include "projens/parallel.hpp"

namespace projens {
namespace {

const cplx kI(0.0, 1.0);

CMatrix dense_expm(const CMatrix& h, double t) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(h);
  CVector ph(h.rows());
  for (Eigen::Index k = 0; k < h.rows(); ++k) ph[k] = std::exp(-kI * kTwoPi * t * es.eigenvalues()[k]);
  return es.eigenvectors() * ph.asDiagonal() * es.eigenvectors().adjoint();
}

TEST(Evolve, RabiPiPulse) {
  RydbergSpec s;
  s.n = 1;
  s.omega = 5.0;
  auto b = make_basis(1, Constraint::kFull);
  const auto h = build_rydberg(s, b);
  const std::vector<double> t{M_PI / (kTwoPi * 5.0)};
  const auto r = evolve_exact(h, StateVector::zeros_state(b), t);
  EXPECT_NEAR(std::norm(r.states[0].amplitude(Bitstring::parse("1"))), 1.0, 1e-12);
}

TEST(Evolve, ZeroHamiltonian) {
  RydbergSpec s;
  s.n = 3;
  s.c6 = 0.0;
  auto b = make_basis(3, Constraint::kFull);
  const auto h = build_rydberg(s, b);
  Rng rng = make_rng(3);
  const auto psi = StateVector(b, haar_state(8, rng));
  const std::vector<double> t{0.0, 0.5, 3.0};
  for (std::size_t limit : {std::size_t{0}, std::size_t{2000}}) {
    EvolveOptions o;
    o.dense_limit = limit;
    const auto r = evolve_exact(h, psi, t, o);
    for (const auto& st : r.states) EXPECT_LT((st.amplitudes() - psi.amplitudes()).norm(), 1e-14);
  }
}

TEST(Evolve, KrylovMatchesDenseOracle) {
  IonSpec spec;
  spec.n = 8;
  const auto h = build_ion(spec);
  Rng rng = make_rng(4);
  const auto psi = StateVector(h.basis, haar_state(256, rng));
  const std::vector<double> t{0.1, 0.7, 2.5, 6.0};
  EvolveOptions o;
  o.dense_limit = 0;
  const auto r = evolve_exact(h, psi, t, o);
  const CMatrix hd(h.matrix);
  for (std::size_t i = 0; i < t.size(); ++i) {
    const CVector ref = dense_expm(hd, t[i]) * psi.amplitudes();
    EXPECT_LT((r.states[i].amplitudes() - ref).norm(), 1e-8) << t[i];
  }
}

TEST(Evolve, NormAndEnergyConserved) {
  RydbergSpec s;
  s.n = 14;
  s.omega = 4.7;
  s.delta = 0.9;
  auto b = make_basis(14, Constraint::kBlockade);
  const auto h = build_rydberg(s, b);
  std::vector<double> t;
  for (int k = 1; k <= 20; ++k) t.push_back(0.1 * k);
  for (std::size_t limit : {std::size_t{0}, std::size_t{2000}}) {
    EvolveOptions o;
    o.dense_limit = limit;
    const auto psi = StateVector::zeros_state(b);
    const auto r = evolve_exact(h, psi, t, o);
    const double e0 = psi.amplitudes().dot(h.matrix * psi.amplitudes()).real();
    const double scale = std::max(1.0, std::abs(e0));
    for (std::size_t i = 0; i < t.size(); ++i) {
      EXPECT_NEAR(r.states[i].amplitudes().norm(), 1.0, 1e-10);
      EXPECT_NEAR(r.energies[i], e0, 1e-8 * scale);
    }
  }
}

TEST(Evolve, ParityConserved) {
  RydbergSpec s;
  s.n = 10;
  s.omega = 4.7;
  s.delta = 0.9;
  for (auto c : {Constraint::kFull, Constraint::kBlockade}) {
    auto b = make_basis(10, c);
    const auto h = build_rydberg(s, b);
    std::vector<double> t;
    for (int k = 1; k <= 10; ++k) t.push_back(0.25 * k);
    const auto r = evolve_exact(h, StateVector::zeros_state(b), t);
    for (const auto& o : r.observables) EXPECT_NEAR(o.parity, 1.0, 1e-8);
  }
}

TEST(Evolve, ShortTimeBlockadeWeight) {
  RydbergSpec s;
  s.n = 10;
  s.omega = 4.7;
  s.delta = 0.9;
  auto b = make_basis(10, Constraint::kFull);
  const auto h = build_rydberg(s, b);
  const std::vector<double> t{0.05, 0.1, 0.2, 0.4};
  const auto r = evolve_exact(h, StateVector::zeros_state(b), t);
  for (const auto& o : r.observables) EXPECT_GE(o.blockade_weight, 0.99);
}

TEST(Evolve, SectorEvolutionMatchesFullChain) {
  RydbergSpec s;
  s.n = 9;
  s.omega = 4.7;
  s.delta = 0.9;
  auto all = make_basis(9, Constraint::kBlockade);
  auto even = make_basis(9, Constraint::kBlockade, Sector::kEven);
  const std::vector<double> t{0.3, 1.1};
  const auto ra = evolve_exact(build_rydberg(s, all), StateVector::zeros_state(all), t);
  const auto re = evolve_exact(build_rydberg(s, even), StateVector::zeros_state(even), t);
  for (std::size_t i = 0; i < t.size(); ++i) {
    const auto unfolded = to_sector_free(re.states[i]);
    EXPECT_LT((unfolded.amplitudes() - ra.states[i].amplitudes()).norm(), 1e-10);
    EXPECT_NEAR(re.observables[i].entropy, ra.observables[i].entropy, 1e-10);
    const auto z = Bitstring::parse("100000001");
    EXPECT_NEAR(std::abs(re.states[i].amplitude(z) - ra.states[i].amplitude(z)), 0.0, 1e-10);
  }
}

TEST(Observables, EntropyOfSimpleStates) {
  auto b = make_basis(2, Constraint::kFull);
  EXPECT_NEAR(entanglement_entropy(StateVector::zeros_state(b), Bipartition::half_chain(2)), 0.0, 1e-12);
  CVector bell = CVector::Zero(4);
  bell[0] = bell[3] = 1.0 / std::sqrt(2.0);
  EXPECT_NEAR(entanglement_entropy(StateVector(b, bell), Bipartition::half_chain(2)), 1.0, 1e-12);
}

TEST(Observables, ReducedDensityMatrixOracle) {
  // Explicit partial trace over the last N - L sites of a random 6-qubit state.
  auto b = make_basis(6, Constraint::kFull);
  Rng rng = make_rng(8);
  const StateVector psi(b, haar_state(64, rng));
  const auto rd = reduced_density_matrix(psi, Bipartition::contiguous(6, 1, 2));
  CMatrix oracle = CMatrix::Zero(4, 4);
  for (int a = 0; a < 4; ++a) {
    for (int a2 = 0; a2 < 4; ++a2) {
      for (int r = 0; r < 16; ++r) oracle(a, a2) += psi.amplitudes()[a * 16 + r] * std::conj(psi.amplitudes()[a2 * 16 + r]);
    }
  }
  EXPECT_LT((rd.rho - oracle).cwiseAbs().maxCoeff(), 1e-14);
}

CMatrix kron_site(int n, int site, const CMatrix& op) {
  CMatrix m = CMatrix::Identity(1, 1);
  for (int s = 1; s <= n; ++s) {
    CMatrix f = CMatrix::Identity(2, 2);
    if (s == site) f = op;
    else if (op.rows() == 4 && s == site + 1) continue;
    CMatrix k(m.rows() * f.rows(), m.cols() * f.cols());
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
      for (Eigen::Index c = 0; c < m.cols(); ++c) k.block(f.rows() * r, f.cols() * c, f.rows(), f.cols()) = m(r, c) * f;
    }
    m = k;
  }
  return m;
}

TEST(Circuit, KernelsMatchKronecker) {
  Rng rng = make_rng(12);
  const int n = 5;
  CVector v = haar_state(32, rng);
  for (int site = 1; site <= n; ++site) {
    const Eigen::Matrix2cd u = haar_unitary(2, rng);
    CVector w = v;
    apply_one_qubit(w, n, site, u);
    EXPECT_LT((w - kron_site(n, site, u) * v).norm(), 1e-13);
  }
  for (int site = 1; site < n; ++site) {
    const Eigen::Matrix4cd u = sample_su4(rng);
    CVector w = v;
    apply_two_qubit(w, n, site, u);
    EXPECT_LT((w - kron_site(n, site, u) * v).norm(), 1e-13);
  }
}

TEST(Circuit, SingleGateIsFirstColumn) {
  CircuitSpec c;
  c.n = 2;
  c.depth = 1;
  c.seed = 77;
  c = build_circuit(c);
  auto b = make_basis(2, Constraint::kFull);
  const auto r = apply_circuit(c, StateVector::zeros_state(b));
  EXPECT_LT((r.states[1].amplitudes() - c.layers[0].pairs[0].u.col(0)).norm(), 1e-14);
}

TEST(Circuit, IdentityGates) {
  CircuitSpec c;
  c.n = 4;
  c.depth = 3;
  c = build_circuit(c);
  for (auto& l : c.layers) {
    for (auto& g : l.pairs) g.u.setIdentity();
  }
  auto b = make_basis(4, Constraint::kFull);
  Rng rng = make_rng(1);
  const StateVector psi(b, haar_state(16, rng));
  for (const auto& s : apply_circuit(c, psi).states) EXPECT_LT((s.amplitudes() - psi.amplitudes()).norm(), 1e-14);
}

TEST(Circuit, PageEntropy) {
  for (int n : {8, 10}) {
    CircuitSpec c;
    c.n = n;
    c.depth = 4 * n;
    c.seed = 100 + n;
    c = build_circuit(c);
    const auto r = apply_circuit(c, StateVector::zeros_state(make_basis(n, Constraint::kFull)));
    double late = 0.0;
    for (int d = 2 * n; d <= 4 * n; ++d) late += r.observables[d].entropy;
    late /= (2 * n + 1);
    EXPECT_NEAR(late, n / 2.0 - 0.72, 0.1) << n;
    for (const auto& s : r.states) EXPECT_NEAR(s.amplitudes().norm(), 1.0, 1e-12);
  }
}

TEST(Noise, OuTraceStatistics) {
  Rng rng = make_rng(6);
  DriftSpec d{0.2, 0.5};
  const auto x = ou_trace(d, 0.01, 200000, rng);
  double m = 0.0, m2 = 0.0, lag = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    m += x[k];
    m2 += x[k] * x[k];
    if (k >= 50) lag += x[k] * x[k - 50];
  }
  m /= x.size();
  m2 /= x.size();
  lag /= (x.size() - 50);
  EXPECT_NEAR(m, 0.0, 0.02);
  EXPECT_NEAR(std::sqrt(m2), 0.2, 0.02);
  EXPECT_NEAR(lag / m2, std::exp(-1.0), 0.1);
}

TEST(Trajectories, NoiselessLimit) {
  RydbergSpec s;
  s.n = 6;
  s.omega = 4.7;
  s.delta = 0.9;
  auto b = make_basis(6, Constraint::kBlockade);
  const std::vector<double> t{0.2, 0.9};
  NoiseModel nz;
  TrajectoryOptions opt;
  opt.keep_trajectories = true;
  const auto r = run_trajectories(s, b, nz, StateVector::zeros_state(b), t, 3, 9, opt);
  const auto ideal = evolve_exact(build_rydberg(s, b), StateVector::zeros_state(b), t);
  for (std::size_t i = 0; i < t.size(); ++i) {
    EXPECT_NEAR(r.fidelity[i], 1.0, 1e-10);
    EXPECT_LT((r.mean_probabilities[i] - ideal.states[i].amplitudes().cwiseAbs2()).cwiseAbs().maxCoeff(), 1e-10);
  }
  for (const auto& tr : r.trajectories) {
    EXPECT_LT((tr.final_state.amplitudes() - ideal.states.back().amplitudes()).norm(), 1e-9);
    EXPECT_TRUE(tr.jumps.empty());
  }
}

TEST(Trajectories, ExponentialDecay) {
  RydbergSpec s;
  s.n = 1;
  auto b = make_basis(1, Constraint::kFull);
  NoiseModel nz;
  nz.decay_rate = 0.8;
  const std::vector<double> t{0.25, 0.5, 1.0, 2.0};
  const auto r = run_trajectories(s, b, nz, StateVector::basis_state(b, Bitstring::parse("1")), t, 10000, 21);
  for (std::size_t i = 0; i < t.size(); ++i) {
    const double expect = std::exp(-0.8 * t[i]);
    EXPECT_NEAR(r.occupation[i][0], expect, 3.0 * r.occupation_stderr[i][0] + 1e-12) << t[i];
  }
}

// Dense Lindblad integration on two sites (RK4), the small-instance oracle.
CMatrix lindblad_oracle(const CMatrix& h, double gamma, int n, const CMatrix& rho0, double t_end) {
  std::vector<CMatrix> jumps;
  const Eigen::Matrix2cd lower{{0.0, 1.0}, {0.0, 0.0}};
  for (int s = 1; s <= n; ++s) jumps.push_back(std::sqrt(gamma) * kron_site(n, s, lower));
  auto rhs = [&](const CMatrix& r) {
    CMatrix d = -kI * kTwoPi * (h * r - r * h);
    for (const auto& l : jumps) {
      const CMatrix ll = l.adjoint() * l;
      d += l * r * l.adjoint() - 0.5 * (ll * r + r * ll);
    }
    return d;
  };
  CMatrix r = rho0;
  const int steps = 20000;
  const double dt = t_end / steps;
  for (int k = 0; k < steps; ++k) {
    const CMatrix k1 = rhs(r), k2 = rhs(r + 0.5 * dt * k1), k3 = rhs(r + 0.5 * dt * k2), k4 = rhs(r + dt * k3);
    r += dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
  return r;
}

TEST(Trajectories, MatchesLindbladOnTwoSites) {
  RydbergSpec s;
  s.n = 2;
  s.omega = 1.5;
  s.delta = 0.4;
  s.c6 = c6_for_vnnn(0.3, s.spacing) / 64.0;  // nearest-neighbour 0.3 * 64 / 64
  auto b = make_basis(2, Constraint::kFull);
  NoiseModel nz;
  nz.decay_rate = 1.0;
  const std::vector<double> t{1.0};
  TrajectoryOptions opt;
  opt.keep_trajectories = true;
  const auto psi0 = StateVector::zeros_state(b);
  const auto r = run_trajectories(s, b, nz, psi0, t, 100000, 5, opt);
  CMatrix rho = CMatrix::Zero(4, 4);
  for (const auto& tr : r.trajectories) rho += tr.final_state.amplitudes() * tr.final_state.amplitudes().adjoint();
  rho /= static_cast<double>(r.trajectories.size());
  const CMatrix h(build_rydberg(s, b).matrix);
  const CMatrix rho0 = psi0.amplitudes() * psi0.amplitudes().adjoint();
  const CMatrix exact = lindblad_oracle(h, nz.decay_rate, 2, rho0, 1.0);
  Eigen::SelfAdjointEigenSolver<CMatrix> es(rho - exact);
  const double trace_distance = 0.5 * es.eigenvalues().cwiseAbs().sum();
  EXPECT_LE(trace_distance, 0.01);
}

TEST(Trajectories, DeterministicAcrossThreads) {
  RydbergSpec s;
  s.n = 5;
  s.omega = 4.7;
  s.delta = 0.9;
  auto b = make_basis(5, Constraint::kBlockade);
  NoiseModel nz;
  nz.decay_rate = 0.3;
  nz.omega_drift = {0.1, 0.5};
  nz.delta_site_sigma = 0.05;
  const std::vector<double> t{0.5, 1.0};
  set_max_threads(1);
  const auto a = run_trajectories(s, b, nz, StateVector::zeros_state(b), t, 40, 3);
  set_max_threads(4);
  const auto c = run_trajectories(s, b, nz, StateVector::zeros_state(b), t, 40, 3);
  set_max_threads(0);
  for (std::size_t i = 0; i < t.size(); ++i) {
    EXPECT_EQ(a.fidelity[i], c.fidelity[i]);
    EXPECT_EQ(a.mean_probabilities[i], c.mean_probabilities[i]);
  }
  EXPECT_LT(a.fidelity.back(), 1.0);
}

TEST(NoisyCircuit, ZeroRateIsIdeal) {
  CircuitSpec c;
  c.n = 6;
  c.depth = 5;
  c.seed = 2;
  c = build_circuit(c);
  const auto r = run_noisy_circuit(c, 0.0, StateVector::zeros_state(make_basis(6, Constraint::kFull)), 4, 1);
  for (std::size_t d = 0; d < r.depths.size(); ++d) {
    EXPECT_NEAR(r.fidelity[d], 1.0, 1e-12);
    EXPECT_LT((r.mean_probabilities[d] - r.ideal_probabilities[d]).cwiseAbs().maxCoeff(), 1e-12);
  }
}

TEST(NoisyCircuit, OneQubitDepolarizing) {
  // gamma = 1 on one qubit: rho -> (X rho X + Y rho Y + Z rho Z) / 3, so p(1) = 2/3 from |0>.
  CircuitSpec c;
  c.n = 1;
  c.depth = 1;
  c = build_circuit(c);
  const int m = 10000;
  const auto r = run_noisy_circuit(c, 1.0, StateVector::zeros_state(make_basis(1, Constraint::kFull)), m, 4);
  const double sigma = std::sqrt((2.0 / 3.0) * (1.0 / 3.0) / m);
  EXPECT_NEAR(r.mean_probabilities[1][1], 2.0 / 3.0, 4.0 * sigma);
  EXPECT_NEAR(r.fidelity[1], 1.0 / 3.0, 4.0 * sigma);
}

TEST(NoisyCircuit, FidelityDecaysWithDepth) {
  CircuitSpec c;
  c.n = 6;
  c.depth = 8;
  c.seed = 5;
  c = build_circuit(c);
  const auto r = run_noisy_circuit(c, 0.02, StateVector::zeros_state(make_basis(6, Constraint::kFull)), 2000, 1);
  for (std::size_t d = 1; d < r.depths.size(); ++d) EXPECT_LT(r.fidelity[d], r.fidelity[d - 1] + 1e-12);
  // error-free runs alone contribute (1 - gamma)^(N d); some errors are harmless
  const double floor = std::pow(0.98, 6 * 8);
  EXPECT_GE(r.fidelity.back(), floor - 3.0 * r.fidelity_stderr.back());
  EXPECT_LT(r.fidelity.back(), 0.6);
}

}  // namespace
}  // namespace projens
