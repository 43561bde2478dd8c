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

#include <algorithm>
#include <cmath>
#include <string>

#include <Eigen/Eigenvalues>

#include "projens/types.hpp"

namespace projens {

struct KrylovOptions {
  int max_dim = 30;
  double tolerance = 1e-9;  // local error per unit of evolved phase 2*pi*||H||*dt
};

struct KrylovStats {
  int substeps = 0;
  int matvecs = 0;
  double max_error = 0.0;
};

/// v <- exp(-i 2 pi t H) v for Hermitian H given as `apply(in, out)` (out = H in).
///
/// Lanczos with full reorthogonalization; the step is split until the
/// a-posteriori estimate beta_m |e_m^T exp(-i 2 pi dt T) e_1| is below the
/// tolerance. The result is renormalized to the input norm.
template <typename MatVec>
void krylov_expm(MatVec&& apply, CVector& v, double t, const KrylovOptions& opt = {},
                 KrylovStats* stats = nullptr) {
  const Eigen::Index dim = v.size();
  const double norm0 = v.norm();
  if (t == 0.0 || norm0 == 0.0) return;
  const Eigen::Index mmax = std::min<Eigen::Index>(opt.max_dim, dim);
  CMatrix basis(dim, mmax + 1);
  CVector w(dim);
  double remaining = t;
  double dt_guess = t;
  int guard = 0;
  while (std::abs(remaining) > 0.0) {
    if (++guard > 1000000) throw NumericalError("krylov: step count exceeded");
    const double beta0 = v.norm();
    basis.col(0) = v / beta0;
    RVector alpha(mmax), beta(mmax);
    Eigen::Index m = 0;
    bool breakdown = false;
    for (Eigen::Index j = 0; j < mmax; ++j) {
      apply(basis.col(j), w);
      if (stats) ++stats->matvecs;
      for (int pass = 0; pass < 2; ++pass) {
        const CVector c = basis.leftCols(j + 1).adjoint() * w;
        w.noalias() -= basis.leftCols(j + 1) * c;
        if (pass == 0) alpha[j] = c[j].real();
        else alpha[j] += c[j].real();
      }
      beta[j] = w.norm();
      m = j + 1;
      if (beta[j] < 1e-13 * std::max(1.0, std::abs(alpha[j]))) {
        breakdown = true;
        break;
      }
      basis.col(j + 1) = w / beta[j];
    }
    RMatrix tri = RMatrix::Zero(m, m);
    for (Eigen::Index j = 0; j < m; ++j) {
      tri(j, j) = alpha[j];
      if (j + 1 < m) tri(j, j + 1) = tri(j + 1, j) = beta[j];
    }
    Eigen::SelfAdjointEigenSolver<RMatrix> es(tri);
    const RMatrix& q = es.eigenvectors();
    const RVector& lam = es.eigenvalues();
    auto coeffs = [&](double dt) {
      CVector phase(m);
      for (Eigen::Index k = 0; k < m; ++k) phase[k] = std::exp(cplx(0.0, -kTwoPi * dt * lam[k])) * q(0, k);
      return CVector(q.template cast<cplx>() * phase);
    };
    double dt = std::abs(remaining) < std::abs(dt_guess) ? remaining : std::copysign(std::abs(dt_guess), remaining);
    CVector c = coeffs(dt);
    double err = breakdown ? 0.0 : beta[m - 1] * std::abs(c[m - 1]);
    // tolerance scales with the fraction of the total step
    auto allowed = [&](double step) { return opt.tolerance * std::max(std::abs(step / t), 1e-3); };
    int shrink = 0;
    while (err > allowed(dt)) {
      dt *= 0.5;
      c = coeffs(dt);
      err = beta[m - 1] * std::abs(c[m - 1]);
      if (++shrink > 60) throw NumericalError("krylov: no convergence (error " + std::to_string(err) + ")");
    }
    v.noalias() = basis.leftCols(m) * c;
    v *= beta0;
    if (stats) {
      ++stats->substeps;
      stats->max_error = std::max(stats->max_error, err);
    }
    remaining -= dt;
    if (std::abs(remaining) < 1e-15 * std::abs(t)) remaining = 0.0;
    dt_guess = shrink == 0 ? 2.0 * dt : dt;
  }
  v *= norm0 / v.norm();
}

}  // namespace projens
