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
#include <string_view>
#include <vector>

#include "projens/hilbert.hpp"
#include "projens/rng.hpp"
#include "projens/types.hpp"

namespace projens {

// All Hamiltonian coefficients are ordinary frequencies (MHz, or 1/time in
// dimensionless models). Evolution multiplies by 2*pi, so a matrix H evolves
// as exp(-i 2 pi H t) with t in microseconds.

/// Sparse Hermitian matrix over a basis.
struct Hamiltonian {
  BasisPtr basis;
  SparseMatrix matrix;
  bool real_valued = true;

  std::size_t dim() const { return basis->dim(); }
};

struct Coupling {
  int i = 0;
  int j = 0;
  double strength = 0.0;  // MHz, multiplies n_i n_j
};

/// Driven two-level chain with van der Waals interactions:
/// H = sum_i Omega_i S^x_i - sum_i Delta_i n_i + sum_{i<j} C6 / R_ij^6 n_i n_j.
struct RydbergSpec {
  int n = 1;
  double omega = 0.0;           // MHz
  double delta = 0.0;           // MHz
  double c6 = 249.0e3;          // MHz um^6
  double spacing = 3.75;        // um
  std::vector<double> omega_offsets;  // per-site, MHz (empty = none)
  std::vector<double> delta_offsets;  // per-site, MHz
  std::vector<double> displacements;  // per-site position offsets along the chain, um
  std::vector<Coupling> couplings;    // explicit interaction graph; replaces the power law

  /// Interaction between sites i < j (1-based).
  double interaction(int i, int j) const;
  /// Next-nearest-neighbour interaction C6 / (2a)^6.
  double vnnn() const;
  void validate() const;
};

/// C6 such that C6 / (2a)^6 equals `vnnn`.
double c6_for_vnnn(double vnnn, double spacing);

/// Long-range ion chain: J [ sum_i hx S^x_i + hy S^y_i + sum_{i<j} S^x_i S^x_j / |i-j| ].
struct IonSpec {
  int n = 2;
  double j = 1.0;
  double hx = 0.4;
  double hy = 0.45;
};

/// Mixed-field Ising chain: sum_i hx S^x_i + hy S^y_i + jxx sum_i S^x_i S^x_{i+1}
/// + sum_i fields_i S^z_i.
struct QimfSpec {
  int n = 2;
  double hx = 0.22;
  double hy = 0.25;
  double jxx = 1.0;
  std::vector<double> fields;  // per-site S^z coefficients (empty = none)
};

/// Generic nearest-neighbour spin chain used for quench protocols.
struct QuenchSpec {
  int n = 2;
  std::vector<double> hx, hy, hz;  // per-site coefficients of S^x, S^y, S^z
  std::vector<double> jxx;         // bond i couples sites i+1 and i+2 (size n-1)

  static QuenchSpec uniform(int n, double hx, double hy, double hz, double jxx);
};

Hamiltonian build_rydberg(const RydbergSpec& spec, BasisPtr basis);
/// Full basis only; a constrained basis is rejected.
Hamiltonian build_ion(const IonSpec& spec, BasisPtr basis = nullptr);
Hamiltonian build_qimf(const QimfSpec& spec, BasisPtr basis = nullptr);
Hamiltonian build_quench(const QuenchSpec& spec, BasisPtr basis = nullptr);

/// Site fields drawn uniformly from [-0.5, 0.5] and shifted to sum to exactly zero.
std::vector<double> sample_qimf_fields(int n, Rng& rng);
/// Raw uniform draws before the mean shift (exposed for range checks).
std::vector<double> sample_qimf_fields_raw(int n, Rng& rng);

/// Sum of S^x_i and sum of n_i over a basis, for global drift terms.
SparseMatrix total_sx(const BasisMap& basis);
RVector total_number(const BasisMap& basis);

// ---------------------------------------------------------------------------
// Random circuits

enum class GateSet { kSu4, kFsimLike };

std::string_view to_string(GateSet g);
GateSet parse_gate_set(std::string_view s);

/// Representative of the fSim family used for the "fsim-like" gate set.
struct FsimParams {
  double theta = 1.5707963267948966;  // swap angle
  double phi = 0.5235987755982988;    // conditional phase
};

Eigen::Matrix4cd fsim_gate(const FsimParams& params);

/// Gate on sites (site, site + 1); the first site is the more significant qubit.
struct TwoQubitGate {
  int site = 1;
  Eigen::Matrix4cd u;
};

struct OneQubitGate {
  int site = 1;
  Eigen::Matrix2cd u;
};

struct CircuitLayer {
  std::vector<OneQubitGate> singles;  // applied before the pairs
  std::vector<TwoQubitGate> pairs;
};

struct CircuitSpec {
  int n = 2;
  GateSet gate_set = GateSet::kSu4;
  int depth = 0;
  bool odd_first = true;  // first layer pairs (1,2),(3,4),...; otherwise (2,3),(4,5),...
  std::uint64_t seed = 0;
  FsimParams fsim;
  std::vector<CircuitLayer> layers;  // filled by build_circuit
};

/// Haar-random 4x4 unitary with unit determinant.
Eigen::Matrix4cd sample_su4(Rng& rng);
/// Haar-random d x d unitary: QR of a complex Gaussian matrix with phase-fixed R diagonal.
CMatrix haar_unitary(int d, Rng& rng);
/// Haar-random unit vector in dimension d.
CVector haar_state(int d, Rng& rng);

/// Materializes the layers of `spec` from its seed (open boundary conditions).
CircuitSpec build_circuit(CircuitSpec spec);

// ---------------------------------------------------------------------------
// Lowest eigenpairs

struct EigenPairs {
  RVector values;            // ascending
  CMatrix vectors;           // columns
  std::vector<double> residuals;  // ||H v - lambda v||
};

/// Lowest `k` eigenpairs: dense solve below `dense_limit`, otherwise Lanczos
/// with full reorthogonalization. Throws NumericalError when the residual
/// target 1e-8 is not met.
EigenPairs ground_state(const Hamiltonian& h, int k, std::size_t dense_limit = 2000);

}  // namespace projens
