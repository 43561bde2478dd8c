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

#include "projens/models.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <string>

#include <Eigen/Eigenvalues>
#include <Eigen/QR>

namespace projens {
namespace {

struct PairTerm {
  int i;
  int j;
  double c;
};

// Coefficients of a generic spin-1/2 chain Hamiltonian. S = sigma / 2,
// n = |1><1|, sigma^z |0> = |0>.
struct SpinTerms {
  int n = 0;
  std::vector<double> x, y, z, number;
  std::vector<PairTerm> xx, nn;

  explicit SpinTerms(int sites) : n(sites), x(sites, 0.0), y(sites, 0.0), z(sites, 0.0), number(sites, 0.0) {}
};

using Triplet = Eigen::Triplet<cplx>;

SparseMatrix assemble(const SpinTerms& t, const BasisMap& basis) {
  const int n = t.n;
  const auto dim = static_cast<Eigen::Index>(basis.dim());
  std::vector<Triplet> entries;
  std::size_t per_row = 1;
  for (int s = 0; s < n; ++s) per_row += (t.x[s] != 0.0 || t.y[s] != 0.0) ? 1 : 0;
  entries.reserve(basis.dim() * (per_row + t.xx.size()));

  auto add = [&](std::uint64_t target, Eigen::Index col, cplx value) {
    if (!basis.admits(target)) return;
    const auto row = basis.find(target);
    if (row) entries.emplace_back(static_cast<Eigen::Index>(*row), col, value);
  };

  for (Eigen::Index col = 0; col < dim; ++col) {
    const std::uint64_t z = basis.state(static_cast<std::size_t>(col));
    double diag = 0.0;
    for (int s = 0; s < n; ++s) {
      const bool one = (z >> (n - 1 - s)) & 1ULL;
      diag += (one ? -0.5 : 0.5) * t.z[s];
      if (one) diag += t.number[s];
    }
    for (const auto& p : t.nn) {
      if (((z >> (n - p.i)) & 1ULL) && ((z >> (n - p.j)) & 1ULL)) diag += p.c;
    }
    if (diag != 0.0) entries.emplace_back(col, col, diag);

    for (int s = 0; s < n; ++s) {
      if (t.x[s] == 0.0 && t.y[s] == 0.0) continue;
      const std::uint64_t m = site_mask(n, s + 1);
      const bool one = z & m;
      // <1|S^y|0> = +i/2, <0|S^y|1> = -i/2
      const cplx v(0.5 * t.x[s], one ? -0.5 * t.y[s] : 0.5 * t.y[s]);
      add(z ^ m, col, v);
    }
    for (const auto& p : t.xx) {
      add(z ^ site_mask(n, p.i) ^ site_mask(n, p.j), col, 0.25 * p.c);
    }
  }
  SparseMatrix h(dim, dim);
  h.setFromTriplets(entries.begin(), entries.end());
  h.makeCompressed();
  return h;
}

bool has_imaginary(const SparseMatrix& h) {
  for (Eigen::Index k = 0; k < h.outerSize(); ++k) {
    for (SparseMatrix::InnerIterator it(h, k); it; ++it) {
      if (it.value().imag() != 0.0) return true;
    }
  }
  return false;
}

// Builds in the sector-free basis of the same constraint, then compresses
// onto the sector when one is requested.
Hamiltonian finish(const SpinTerms& t, BasisPtr basis) {
  Hamiltonian h;
  h.basis = basis;
  if (basis->sector() == Sector::kAll) {
    h.matrix = assemble(t, *basis);
  } else {
    const BasisMap parent(basis->num_sites(), basis->constraint(), Sector::kAll);
    const SparseMatrix full = assemble(t, parent);
    const SparseMatrix p = sector_isometry(*basis, parent);
    SparseMatrix compressed = SparseMatrix(p.adjoint()) * full * p;
    compressed.prune(cplx(0.0), 1e-15);
    h.matrix = std::move(compressed);
  }
  h.real_valued = !has_imaginary(h.matrix);
  return h;
}

void check_sites(BasisPtr& basis, int n, bool full_only, const char* what) {
  if (!basis) basis = make_basis(n, Constraint::kFull);
  if (basis->num_sites() != n) {
    throw ConfigError(std::string(what) + ": basis has " + std::to_string(basis->num_sites()) +
                      " sites, model has " + std::to_string(n));
  }
  if (full_only && basis->constraint() != Constraint::kFull) {
    throw ConfigError(std::string(what) + " requires the full basis");
  }
}

void check_site_vector(const std::vector<double>& v, int n, const char* what) {
  if (!v.empty() && static_cast<int>(v.size()) != n) {
    throw ConfigError(std::string(what) + " must have one entry per site");
  }
}

}  // namespace

double RydbergSpec::interaction(int i, int j) const {
  if (i > j) std::swap(i, j);
  if (!couplings.empty()) {
    double v = 0.0;
    for (const auto& c : couplings) {
      if (std::min(c.i, c.j) == i && std::max(c.i, c.j) == j) v += c.strength;
    }
    return v;
  }
  double r = spacing * (j - i);
  if (!displacements.empty()) r += displacements[j - 1] - displacements[i - 1];
  if (r <= 0.0) throw NumericalError("non-positive interatomic distance");
  return c6 / std::pow(r, 6);
}

double RydbergSpec::vnnn() const { return c6 / std::pow(2.0 * spacing, 6); }

void RydbergSpec::validate() const {
  if (n < 1) throw ConfigError("rydberg: n must be >= 1");
  if (!(spacing > 0.0)) throw ConfigError("rydberg: spacing must be positive");
  check_site_vector(omega_offsets, n, "rydberg: omega_offsets");
  check_site_vector(delta_offsets, n, "rydberg: delta_offsets");
  check_site_vector(displacements, n, "rydberg: displacements");
  for (const auto& c : couplings) {
    if (c.i < 1 || c.j < 1 || c.i > n || c.j > n || c.i == c.j) {
      throw ConfigError("rydberg: coupling sites out of range");
    }
  }
}

double c6_for_vnnn(double vnnn, double spacing) { return vnnn * std::pow(2.0 * spacing, 6); }

QuenchSpec QuenchSpec::uniform(int n, double hx, double hy, double hz, double jxx) {
  QuenchSpec q;
  q.n = n;
  q.hx.assign(n, hx);
  q.hy.assign(n, hy);
  q.hz.assign(n, hz);
  q.jxx.assign(std::max(n - 1, 0), jxx);
  return q;
}

Hamiltonian build_rydberg(const RydbergSpec& spec, BasisPtr basis) {
  spec.validate();
  if (!basis) throw ConfigError("rydberg: basis required");
  if (basis->num_sites() != spec.n) throw ConfigError("rydberg: basis size does not match spec");
  SpinTerms t(spec.n);
  for (int s = 0; s < spec.n; ++s) {
    t.x[s] = spec.omega + (spec.omega_offsets.empty() ? 0.0 : spec.omega_offsets[s]);
    t.number[s] = -(spec.delta + (spec.delta_offsets.empty() ? 0.0 : spec.delta_offsets[s]));
  }
  for (int i = 1; i <= spec.n; ++i) {
    for (int j = i + 1; j <= spec.n; ++j) {
      const double v = spec.interaction(i, j);
      if (v != 0.0) t.nn.push_back({i, j, v});
    }
  }
  return finish(t, std::move(basis));
}

Hamiltonian build_ion(const IonSpec& spec, BasisPtr basis) {
  if (spec.n < 2) throw ConfigError("ion: n must be >= 2");
  check_sites(basis, spec.n, true, "ion");
  SpinTerms t(spec.n);
  std::fill(t.x.begin(), t.x.end(), spec.j * spec.hx);
  std::fill(t.y.begin(), t.y.end(), spec.j * spec.hy);
  for (int i = 1; i <= spec.n; ++i) {
    for (int k = i + 1; k <= spec.n; ++k) t.xx.push_back({i, k, spec.j / (k - i)});
  }
  return finish(t, std::move(basis));
}

Hamiltonian build_qimf(const QimfSpec& spec, BasisPtr basis) {
  if (spec.n < 2) throw ConfigError("qimf: n must be >= 2");
  check_site_vector(spec.fields, spec.n, "qimf: fields");
  check_sites(basis, spec.n, true, "qimf");
  SpinTerms t(spec.n);
  std::fill(t.x.begin(), t.x.end(), spec.hx);
  std::fill(t.y.begin(), t.y.end(), spec.hy);
  if (!spec.fields.empty()) t.z = spec.fields;
  for (int i = 1; i < spec.n; ++i) t.xx.push_back({i, i + 1, spec.jxx});
  return finish(t, std::move(basis));
}

Hamiltonian build_quench(const QuenchSpec& spec, BasisPtr basis) {
  if (spec.n < 1) throw ConfigError("quench: n must be >= 1");
  check_site_vector(spec.hx, spec.n, "quench: hx");
  check_site_vector(spec.hy, spec.n, "quench: hy");
  check_site_vector(spec.hz, spec.n, "quench: hz");
  if (!spec.jxx.empty() && static_cast<int>(spec.jxx.size()) != spec.n - 1) {
    throw ConfigError("quench: jxx must have n-1 entries");
  }
  check_sites(basis, spec.n, false, "quench");
  SpinTerms t(spec.n);
  if (!spec.hx.empty()) t.x = spec.hx;
  if (!spec.hy.empty()) t.y = spec.hy;
  if (!spec.hz.empty()) t.z = spec.hz;
  for (std::size_t b = 0; b < spec.jxx.size(); ++b) {
    if (spec.jxx[b] != 0.0) t.xx.push_back({static_cast<int>(b) + 1, static_cast<int>(b) + 2, spec.jxx[b]});
  }
  return finish(t, std::move(basis));
}

std::vector<double> sample_qimf_fields_raw(int n, Rng& rng) {
  std::vector<double> j(n);
  for (auto& v : j) v = uniform01(rng) - 0.5;
  return j;
}

std::vector<double> sample_qimf_fields(int n, Rng& rng) {
  auto j = sample_qimf_fields_raw(n, rng);
  const double mean = std::accumulate(j.begin(), j.end(), 0.0) / n;
  // Snap to a dyadic grid so every partial sum is exact, then close the sum on site 1.
  constexpr double kGrid = 0x1.0p40;
  double rest = 0.0;
  for (int i = 1; i < n; ++i) {
    j[i] = std::round((j[i] - mean) * kGrid) / kGrid;
    rest += j[i];
  }
  j[0] = -rest;
  return j;
}

SparseMatrix total_sx(const BasisMap& basis) {
  SpinTerms t(basis.num_sites());
  std::fill(t.x.begin(), t.x.end(), 1.0);
  return finish(t, std::make_shared<const BasisMap>(basis)).matrix;
}

RVector total_number(const BasisMap& basis) {
  RVector v(static_cast<Eigen::Index>(basis.dim()));
  for (std::size_t i = 0; i < basis.dim(); ++i) v[static_cast<Eigen::Index>(i)] = std::popcount(basis.state(i));
  return v;
}

// ---------------------------------------------------------------------------
// Random circuits

std::string_view to_string(GateSet g) { return g == GateSet::kSu4 ? "su4" : "fsim-like"; }

GateSet parse_gate_set(std::string_view s) {
  if (s == "su4") return GateSet::kSu4;
  if (s == "fsim-like") return GateSet::kFsimLike;
  throw ConfigError("unknown gate set '" + std::string(s) + "'");
}

Eigen::Matrix4cd fsim_gate(const FsimParams& p) {
  const cplx i(0.0, 1.0);
  Eigen::Matrix4cd u = Eigen::Matrix4cd::Zero();
  u(0, 0) = 1.0;
  u(1, 1) = std::cos(p.theta);
  u(1, 2) = -i * std::sin(p.theta);
  u(2, 1) = -i * std::sin(p.theta);
  u(2, 2) = std::cos(p.theta);
  u(3, 3) = std::exp(-i * p.phi);
  return u;
}

CMatrix haar_unitary(int d, Rng& rng) {
  CMatrix g(d, d);
  for (int c = 0; c < d; ++c) {
    for (int r = 0; r < d; ++r) g(r, c) = cplx(gaussian(rng), gaussian(rng)) / std::sqrt(2.0);
  }
  Eigen::HouseholderQR<CMatrix> qr(g);
  CMatrix q = qr.householderQ() * CMatrix::Identity(d, d);
  const CMatrix& r = qr.matrixQR();
  for (int c = 0; c < d; ++c) {
    const double a = std::abs(r(c, c));
    if (a > 0.0) q.col(c) *= r(c, c) / a;
  }
  return q;
}

CVector haar_state(int d, Rng& rng) {
  CVector v(d);
  for (int r = 0; r < d; ++r) v[r] = cplx(gaussian(rng), gaussian(rng));
  return v / v.norm();
}

Eigen::Matrix4cd sample_su4(Rng& rng) {
  Eigen::Matrix4cd u = haar_unitary(4, rng);
  const cplx det = u.determinant();
  u /= std::pow(det, 0.25);
  return u;
}

CircuitSpec build_circuit(CircuitSpec spec) {
  if (spec.n < 1) throw ConfigError("circuit: n must be >= 1");
  if (spec.depth < 0) throw ConfigError("circuit: depth must be >= 0");
  Rng rng = make_rng(spec.seed, 0);
  const double h = 1.0 / std::sqrt(2.0);
  const cplx i(0.0, 1.0);
  const Eigen::Matrix2cd sx{{0.0, 1.0}, {1.0, 0.0}};
  const Eigen::Matrix2cd sy{{0.0, -i}, {i, 0.0}};
  const Eigen::Matrix2cd axes[3] = {sx, sy, (sx + sy) * h};
  const Eigen::Matrix4cd fsim = fsim_gate(spec.fsim);

  spec.layers.clear();
  for (int d = 0; d < spec.depth; ++d) {
    CircuitLayer layer;
    const bool odd_pairs = (d % 2 == 0) == spec.odd_first;
    if (spec.gate_set == GateSet::kFsimLike) {
      for (int s = 1; s <= spec.n; ++s) {
        const auto axis = static_cast<int>(rng() % 3);
        // pi/2 rotation exp(-i pi/4 sigma)
        layer.singles.push_back({s, Eigen::Matrix2cd::Identity() * h - i * h * axes[axis]});
      }
    }
    for (int s = odd_pairs ? 1 : 2; s + 1 <= spec.n; s += 2) {
      layer.pairs.push_back({s, spec.gate_set == GateSet::kSu4 ? sample_su4(rng) : fsim});
    }
    spec.layers.push_back(std::move(layer));
  }
  return spec;
}

// ---------------------------------------------------------------------------
// Lowest eigenpairs

namespace {

EigenPairs dense_lowest(const Hamiltonian& h, int k) {
  EigenPairs out;
  if (h.real_valued) {
    const RMatrix m = RMatrix(h.matrix.real());
    Eigen::SelfAdjointEigenSolver<RMatrix> es(m);
    if (es.info() != Eigen::Success) throw NumericalError("dense eigensolver failed");
    out.values = es.eigenvalues().head(k);
    out.vectors = es.eigenvectors().leftCols(k).cast<cplx>();
  } else {
    const CMatrix m = CMatrix(h.matrix);
    Eigen::SelfAdjointEigenSolver<CMatrix> es(m);
    if (es.info() != Eigen::Success) throw NumericalError("dense eigensolver failed");
    out.values = es.eigenvalues().head(k);
    out.vectors = es.eigenvectors().leftCols(k);
  }
  return out;
}

// Explicitly restarted Lanczos with full reorthogonalization.
EigenPairs lanczos_lowest(const Hamiltonian& h, int k) {
  const Eigen::Index dim = h.matrix.rows();
  const Eigen::Index m = std::min<Eigen::Index>(dim, std::max(80, 12 * k));
  Rng rng = make_rng(0x9d1c3f07u, static_cast<std::uint64_t>(dim));
  CVector start(dim);
  for (Eigen::Index r = 0; r < dim; ++r) start[r] = cplx(gaussian(rng), 0.0);
  start.normalize();

  EigenPairs out;
  for (int restart = 0; restart < 200; ++restart) {
    CMatrix v(dim, m);
    RMatrix t = RMatrix::Zero(m, m);
    v.col(0) = start;
    Eigen::Index used = m;
    for (Eigen::Index j = 0; j < m; ++j) {
      CVector w = h.matrix * v.col(j);
      for (int pass = 0; pass < 2; ++pass) {
        const CVector c = v.leftCols(j + 1).adjoint() * w;
        w -= v.leftCols(j + 1) * c;
        if (pass == 0) t(j, j) = c[j].real();
      }
      const double beta = w.norm();
      if (j + 1 == m) break;
      if (beta < 1e-12) {
        used = j + 1;
        break;
      }
      t(j, j + 1) = t(j + 1, j) = beta;
      v.col(j + 1) = w / beta;
    }
    Eigen::SelfAdjointEigenSolver<RMatrix> es(t.topLeftCorner(used, used));
    const int kk = static_cast<int>(std::min<Eigen::Index>(k, used));
    out.values = es.eigenvalues().head(kk);
    out.vectors = v.leftCols(used) * es.eigenvectors().leftCols(kk).cast<cplx>();
    for (int c = 0; c < kk; ++c) out.vectors.col(c).normalize();

    double worst = 0.0;
    for (int c = 0; c < kk; ++c) {
      worst = std::max(worst, (h.matrix * out.vectors.col(c) - out.values[c] * out.vectors.col(c)).norm());
    }
    if (worst <= 1e-9 && kk == k) return out;
    start = out.vectors.rowwise().sum();
    start.normalize();
  }
  return out;
}

}  // namespace

EigenPairs ground_state(const Hamiltonian& h, int k, std::size_t dense_limit) {
  if (k < 1 || static_cast<std::size_t>(k) > h.dim()) throw ConfigError("ground_state: k out of range");
  EigenPairs out = h.dim() <= dense_limit ? dense_lowest(h, k) : lanczos_lowest(h, k);
  out.residuals.resize(static_cast<std::size_t>(out.values.size()));
  double worst = 0.0;
  for (Eigen::Index c = 0; c < out.values.size(); ++c) {
    const double r = (h.matrix * out.vectors.col(c) - out.values[c] * out.vectors.col(c)).norm();
    out.residuals[static_cast<std::size_t>(c)] = r;
    worst = std::max(worst, r);
  }
  if (out.values.size() < k || worst > 1e-8) {
    throw NumericalError("ground_state: eigensolver did not converge (residual " + std::to_string(worst) + ")");
  }
  return out;
}

}  // namespace projens
