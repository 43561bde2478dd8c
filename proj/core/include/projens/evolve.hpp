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
#include <vector>

#include "projens/hilbert.hpp"
#include "projens/krylov.hpp"
#include "projens/models.hpp"
#include "projens/samples.hpp"

namespace projens {

struct Observables {
  double entropy = 0.0;           // bits, across the bipartition
  std::vector<double> occupation;  // <n_i>, site 1 first
  double blockade_weight = 1.0;   // probability on blockade-legal configurations
  double parity = 0.0;            // <Q>, site reversal
};

/// Reduced density matrix of subsystem A and the z_A configuration of each row.
struct ReducedState {
  CMatrix rho;
  std::vector<std::uint64_t> a_states;
};

ReducedState reduced_density_matrix(const StateVector& state, const Bipartition& bipartition);
/// Von Neumann entropy in bits from the Schmidt spectrum.
double entanglement_entropy(const StateVector& state, const Bipartition& bipartition);
Observables observables(const StateVector& state, const Bipartition& bipartition);
/// Half-chain cut; a single site has zero entropy.
Observables observables(const StateVector& state);
/// Same state expressed in the sector-free basis of its constraint.
StateVector to_sector_free(const StateVector& state);

struct EvolveOptions {
  bool keep_states = true;
  bool compute_observables = true;
  std::optional<Bipartition> bipartition;  // entropy cut; default is the half chain
  std::size_t dense_limit = 2000;          // eigendecomposition at or below this dimension
  KrylovOptions krylov;
};

struct EvolutionResult {
  std::vector<double> times;
  std::vector<StateVector> states;
  std::vector<Observables> observables;
  std::vector<double> energies;  // <H>
};

/// psi(t) = exp(-i 2 pi H t) psi0 at each time (increasing, t in the inverse units of H).
EvolutionResult evolve_exact(const Hamiltonian& h, const StateVector& psi0, std::span<const double> times,
                             const EvolveOptions& options = {});

/// Precomputed spectral propagator for repeated evolution under one Hamiltonian.
class Propagator {
 public:
  explicit Propagator(const Hamiltonian& h, std::size_t dense_limit = 2000, KrylovOptions krylov = {});
  /// exp(-i 2 pi H t) applied in place.
  void apply(CVector& v, double t) const;
  bool dense() const { return dense_; }

 private:
  const Hamiltonian* h_;
  bool dense_ = false;
  KrylovOptions krylov_;
  RVector values_;
  CMatrix vectors_;
  RMatrix real_vectors_;
  bool real_ = false;
};

// ---------------------------------------------------------------------------
// Circuits

void apply_one_qubit(CVector& amps, int n, int site, const Eigen::Matrix2cd& u);
/// Gate on (site, site + 1); site is the more significant qubit of the 4x4 matrix.
void apply_two_qubit(CVector& amps, int n, int site, const Eigen::Matrix4cd& u);
void apply_layer(CVector& amps, int n, const CircuitLayer& layer);

/// States after 0, 1, ..., depth layers (times hold the depth).
EvolutionResult apply_circuit(const CircuitSpec& circuit, const StateVector& psi0, const EvolveOptions& options = {});

// ---------------------------------------------------------------------------
// Noise

/// Stationary Ornstein-Uhlenbeck drift: standard deviation `amplitude` (MHz),
/// correlation time `correlation_time` (us).
struct DriftSpec {
  double amplitude = 0.0;
  double correlation_time = 1.0;
};

struct NoiseModel {
  DriftSpec omega_drift;
  DriftSpec delta_drift;
  double omega_site_sigma = 0.0;  // static per-site Rabi disorder, MHz
  double delta_site_sigma = 0.0;  // static per-site detuning disorder, MHz
  double position_sigma = 0.0;    // per-site displacement along the chain, um
  double decay_rate = 0.0;        // 1/us, jump |1> -> |0> per site
  SpamSpec spam;
  double pauli_rate = 0.0;  // per qubit per layer (circuits) or per unit time (Hamiltonians)
  double dt = 0.01;         // drift and splitting grid, us

  void validate() const;
  bool has_drift() const { return omega_drift.amplitude > 0.0 || delta_drift.amplitude > 0.0; }
  bool has_static_disorder() const {
    return omega_site_sigma > 0.0 || delta_site_sigma > 0.0 || position_sigma > 0.0;
  }
};

/// Drift trace on a grid of `steps` cells of width dt, first cell drawn from the stationary law.
std::vector<double> ou_trace(const DriftSpec& drift, double dt, std::size_t steps, Rng& rng);

struct Jump {
  double time = 0.0;
  int site = 0;
  char op = 'd';  // 'd' decay, 'x', 'y', 'z' Pauli
};

struct Trajectory {
  StateVector final_state;
  std::vector<Jump> jumps;
  std::uint64_t realization = 0;  // trajectory index; its RNG stream is (seed, index)
};

struct TrajectoryOptions {
  bool keep_trajectories = false;
  std::size_t dense_limit = 2000;
  KrylovOptions krylov;
};

struct TrajectoryResult {
  BasisPtr basis;
  std::vector<double> times;
  int n_traj = 0;
  std::vector<RVector> mean_probabilities;  // per time, indexed like the basis
  std::vector<double> fidelity;             // mean |<psi_ideal|psi_traj>|^2
  std::vector<double> fidelity_stderr;
  std::vector<std::vector<double>> occupation;  // per time, <n_i>
  std::vector<std::vector<double>> occupation_stderr;
  std::vector<StateVector> ideal_states;
  std::vector<Trajectory> trajectories;

  ProbTable table(std::size_t time_index) const;
  ProbTable ideal_table(std::size_t time_index) const;
};

/// Monte Carlo wavefunction unfolding of the Rydberg model: static disorder and
/// drift traces are redrawn per trajectory, decay acts as quantum jumps.
TrajectoryResult run_trajectories(const RydbergSpec& spec, BasisPtr basis, const NoiseModel& noise,
                                  const StateVector& psi0, std::span<const double> times, int n_traj,
                                  std::uint64_t seed, const TrajectoryOptions& options = {});

/// Fixed Hamiltonian with decay and random Pauli errors at `pauli_rate` per unit time.
TrajectoryResult run_trajectories(const Hamiltonian& h, const NoiseModel& noise, const StateVector& psi0,
                                  std::span<const double> times, int n_traj, std::uint64_t seed,
                                  const TrajectoryOptions& options = {});

struct NoisyCircuitResult {
  std::vector<int> depths;                  // 0..depth
  std::vector<RVector> mean_probabilities;  // noisy distribution per depth
  std::vector<RVector> ideal_probabilities;
  std::vector<double> fidelity;
  std::vector<double> fidelity_stderr;
  int n_traj = 0;
};

/// After every layer each qubit independently suffers a uniformly chosen
/// Pauli X, Y or Z with probability `gamma`.
NoisyCircuitResult run_noisy_circuit(const CircuitSpec& circuit, double gamma, const StateVector& psi0, int n_traj,
                                     std::uint64_t seed);

}  // namespace projens
