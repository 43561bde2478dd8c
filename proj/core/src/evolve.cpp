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

#include "projens/evolve.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <functional>
#include <numeric>
#include <optional>
#include <string>

#include "projens/parallel.hpp"

namespace projens {

// ---------------------------------------------------------------------------
// Observables

StateVector to_sector_free(const StateVector& state) {
  const BasisMap& b = state.basis();
  if (b.sector() == Sector::kAll) return state;
  auto parent = make_basis(b.num_sites(), b.constraint());
  CVector amps = sector_isometry(b, *parent) * state.amplitudes();
  return StateVector::normalized(parent, std::move(amps));
}

namespace {

// Coefficient matrix psi(z_A, z_B) of a sector-free state.
CMatrix coefficient_matrix(const StateVector& state, const Bipartition& p, std::vector<std::uint64_t>& a_states) {
  const BasisMap& b = state.basis();
  std::vector<std::uint64_t> b_states;
  a_states.clear();
  a_states.reserve(b.dim());
  b_states.reserve(b.dim());
  for (std::uint64_t z : b.states()) {
    const auto [za, zb] = p.split_bits(z);
    a_states.push_back(za);
    b_states.push_back(zb);
  }
  auto uniq = [](std::vector<std::uint64_t> v) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
    return v;
  };
  const auto ua = uniq(a_states);
  const auto ub = uniq(b_states);
  CMatrix m = CMatrix::Zero(static_cast<Eigen::Index>(ua.size()), static_cast<Eigen::Index>(ub.size()));
  for (std::size_t i = 0; i < b.dim(); ++i) {
    const auto r = std::lower_bound(ua.begin(), ua.end(), a_states[i]) - ua.begin();
    const auto c = std::lower_bound(ub.begin(), ub.end(), b_states[i]) - ub.begin();
    m(r, c) = state.amplitudes()(static_cast<Eigen::Index>(i));
  }
  a_states = ua;
  return m;
}

void check_cut(const StateVector& state, const Bipartition& p) {
  if (p.num_sites() != state.num_sites()) throw ConfigError("bipartition size does not match the state");
}

}  // namespace

ReducedState reduced_density_matrix(const StateVector& state, const Bipartition& bipartition) {
  check_cut(state, bipartition);
  const StateVector s = to_sector_free(state);
  ReducedState out;
  const CMatrix m = coefficient_matrix(s, bipartition, out.a_states);
  out.rho = m * m.adjoint();
  return out;
}

double entanglement_entropy(const StateVector& state, const Bipartition& bipartition) {
  check_cut(state, bipartition);
  const StateVector s = to_sector_free(state);
  std::vector<std::uint64_t> a_states;
  const CMatrix m = coefficient_matrix(s, bipartition, a_states);
  const CMatrix g = m.rows() <= m.cols() ? CMatrix(m * m.adjoint()) : CMatrix(m.adjoint() * m);
  Eigen::SelfAdjointEigenSolver<CMatrix> es(g, Eigen::EigenvaluesOnly);
  double h = 0.0;
  for (Eigen::Index k = 0; k < es.eigenvalues().size(); ++k) {
    const double l = es.eigenvalues()[k];
    if (l > 1e-16) h -= l * std::log2(l);
  }
  return h;
}

Observables observables(const StateVector& state, const Bipartition& bipartition) {
  check_cut(state, bipartition);
  const StateVector s = to_sector_free(state);
  const BasisMap& b = s.basis();
  const int n = b.num_sites();
  Observables o;
  o.entropy = entanglement_entropy(s, bipartition);
  o.occupation.assign(n, 0.0);
  o.blockade_weight = 0.0;
  cplx parity = 0.0;
  const CVector& a = s.amplitudes();
  for (std::size_t i = 0; i < b.dim(); ++i) {
    const std::uint64_t z = b.state(i);
    const double p = std::norm(a(static_cast<Eigen::Index>(i)));
    for (int site = 1; site <= n; ++site) {
      if (z & site_mask(n, site)) o.occupation[site - 1] += p;
    }
    if (blockade_legal(z)) o.blockade_weight += p;
    const auto j = b.find(reverse_sites(z, n));
    if (j) parity += std::conj(a(static_cast<Eigen::Index>(*j))) * a(static_cast<Eigen::Index>(i));
  }
  o.parity = parity.real();
  return o;
}

Observables observables(const StateVector& state) {
  if (state.num_sites() >= 2) return observables(state, Bipartition::half_chain(state.num_sites()));
  Observables o;
  const auto p = state.probabilities();
  o.occupation = {p.size() > 1 ? p[1] : 0.0};
  o.blockade_weight = 1.0;
  o.parity = 1.0;
  return o;
}

// ---------------------------------------------------------------------------
// Exact evolution

Propagator::Propagator(const Hamiltonian& h, std::size_t dense_limit, KrylovOptions krylov)
    : h_(&h), dense_(h.dim() <= dense_limit), krylov_(krylov) {
  if (!dense_) return;
  if (h.real_valued) {
    Eigen::SelfAdjointEigenSolver<RMatrix> es(RMatrix(h.matrix.real()));
    if (es.info() != Eigen::Success) throw NumericalError("propagator: eigendecomposition failed");
    values_ = es.eigenvalues();
    real_vectors_ = es.eigenvectors();
    real_ = true;
  } else {
    Eigen::SelfAdjointEigenSolver<CMatrix> es{CMatrix(h.matrix)};
    if (es.info() != Eigen::Success) throw NumericalError("propagator: eigendecomposition failed");
    values_ = es.eigenvalues();
    vectors_ = es.eigenvectors();
  }
}

void Propagator::apply(CVector& v, double t) const {
  if (t == 0.0) return;
  if (dense_) {
    CVector c = real_ ? CVector(real_vectors_.transpose().cast<cplx>() * v) : CVector(vectors_.adjoint() * v);
    for (Eigen::Index k = 0; k < c.size(); ++k) c[k] *= std::exp(cplx(0.0, -kTwoPi * t * values_[k]));
    v = real_ ? CVector(real_vectors_.cast<cplx>() * c) : CVector(vectors_ * c);
    return;
  }
  const SparseMatrix& m = h_->matrix;
  krylov_expm([&m](const Eigen::Ref<const CVector>& in, CVector& out) { out.noalias() = m * in; }, v, t, krylov_);
}

namespace {

void check_times(std::span<const double> times) {
  if (times.empty()) throw ConfigError("at least one time is required");
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (!std::isfinite(times[i])) throw ConfigError("times must be finite");
    if (i > 0 && !(times[i] > times[i - 1])) throw ConfigError("times must be strictly increasing");
  }
}

double energy(const SparseMatrix& h, const CVector& v) { return v.dot(h * v).real(); }

}  // namespace

EvolutionResult evolve_exact(const Hamiltonian& h, const StateVector& psi0, std::span<const double> times,
                             const EvolveOptions& options) {
  check_times(times);
  if (!(*h.basis == psi0.basis())) throw ConfigError("state and Hamiltonian live on different bases");
  auto obs = [&](const StateVector& st) {
    return options.bipartition ? observables(st, *options.bipartition) : observables(st);
  };
  const Propagator prop(h, options.dense_limit, options.krylov);
  EvolutionResult out;
  out.times.assign(times.begin(), times.end());
  CVector v = psi0.amplitudes();
  double t_prev = 0.0;
  for (double t : times) {
    if (prop.dense()) {
      v = psi0.amplitudes();
      prop.apply(v, t);
    } else {
      prop.apply(v, t - t_prev);
    }
    t_prev = t;
    StateVector s(h.basis, v);
    out.energies.push_back(energy(h.matrix, v));
    if (options.compute_observables) out.observables.push_back(obs(s));
    if (options.keep_states) out.states.push_back(std::move(s));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Circuits

void apply_one_qubit(CVector& amps, int n, int site, const Eigen::Matrix2cd& u) {
  const auto m = static_cast<Eigen::Index>(site_mask(n, site));
  const Eigen::Index dim = amps.size();
  for (Eigen::Index i = 0; i < dim; ++i) {
    if (i & m) continue;
    const cplx a0 = amps[i];
    const cplx a1 = amps[i | m];
    amps[i] = u(0, 0) * a0 + u(0, 1) * a1;
    amps[i | m] = u(1, 0) * a0 + u(1, 1) * a1;
  }
}

void apply_two_qubit(CVector& amps, int n, int site, const Eigen::Matrix4cd& u) {
  const auto hi = static_cast<Eigen::Index>(site_mask(n, site));
  const auto lo = static_cast<Eigen::Index>(site_mask(n, site + 1));
  const Eigen::Index dim = amps.size();
  for (Eigen::Index i = 0; i < dim; ++i) {
    if (i & (hi | lo)) continue;
    const Eigen::Index idx[4] = {i, i | lo, i | hi, i | hi | lo};
    cplx a[4];
    for (int k = 0; k < 4; ++k) a[k] = amps[idx[k]];
    for (int r = 0; r < 4; ++r) {
      amps[idx[r]] = u(r, 0) * a[0] + u(r, 1) * a[1] + u(r, 2) * a[2] + u(r, 3) * a[3];
    }
  }
}

void apply_layer(CVector& amps, int n, const CircuitLayer& layer) {
  for (const auto& g : layer.singles) apply_one_qubit(amps, n, g.site, g.u);
  for (const auto& g : layer.pairs) apply_two_qubit(amps, n, g.site, g.u);
}

namespace {

void check_circuit_state(const CircuitSpec& circuit, const StateVector& psi0) {
  const BasisMap& b = psi0.basis();
  if (b.constraint() != Constraint::kFull || b.sector() != Sector::kAll) {
    throw ConfigError("circuits act on the full basis");
  }
  if (b.num_sites() != circuit.n) throw ConfigError("circuit size does not match the state");
  if (static_cast<int>(circuit.layers.size()) != circuit.depth) {
    throw ConfigError("circuit layers not materialized (call build_circuit)");
  }
}

}  // namespace

EvolutionResult apply_circuit(const CircuitSpec& circuit, const StateVector& psi0, const EvolveOptions& options) {
  check_circuit_state(circuit, psi0);
  EvolutionResult out;
  CVector v = psi0.amplitudes();
  for (int d = 0; d <= circuit.depth; ++d) {
    if (d > 0) apply_layer(v, circuit.n, circuit.layers[static_cast<std::size_t>(d - 1)]);
    v.normalize();
    StateVector s(psi0.basis_ptr(), v);
    out.times.push_back(d);
    if (options.compute_observables) {
      out.observables.push_back(options.bipartition ? observables(s, *options.bipartition) : observables(s));
    }
    if (options.keep_states) out.states.push_back(std::move(s));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Noise

void NoiseModel::validate() const {
  for (double v : {omega_drift.amplitude, delta_drift.amplitude, omega_site_sigma, delta_site_sigma,
                   position_sigma, decay_rate, pauli_rate}) {
    if (!(v >= 0.0) || !std::isfinite(v)) throw ConfigError("noise rates and amplitudes must be >= 0");
  }
  if (!(omega_drift.correlation_time > 0.0) || !(delta_drift.correlation_time > 0.0)) {
    throw ConfigError("drift correlation times must be positive");
  }
  if (!(dt > 0.0)) throw ConfigError("noise grid step must be positive");
  spam.validate();
}

std::vector<double> ou_trace(const DriftSpec& drift, double dt, std::size_t steps, Rng& rng) {
  std::vector<double> x(steps, 0.0);
  if (drift.amplitude <= 0.0 || steps == 0) return x;
  const double decay = std::exp(-dt / drift.correlation_time);
  const double kick = drift.amplitude * std::sqrt(1.0 - decay * decay);
  x[0] = drift.amplitude * gaussian(rng);
  for (std::size_t k = 1; k < steps; ++k) x[k] = decay * x[k - 1] + kick * gaussian(rng);
  return x;
}

namespace {

const Eigen::Matrix2cd& pauli(int which) {
  static const Eigen::Matrix2cd ops[3] = {
      Eigen::Matrix2cd{{0.0, 1.0}, {1.0, 0.0}},
      Eigen::Matrix2cd{{0.0, cplx(0.0, -1.0)}, {cplx(0.0, 1.0), 0.0}},
      Eigen::Matrix2cd{{1.0, 0.0}, {0.0, -1.0}},
  };
  return ops[which];
}

// Running sums over trajectories; merged strictly in trajectory order.
struct Accumulator {
  std::vector<RVector> prob;
  std::vector<double> fid, fid2;
  std::vector<std::vector<double>> occ, occ2;

  Accumulator(std::size_t n_times, Eigen::Index dim, int n_sites)
      : prob(n_times, RVector::Zero(dim)),
        fid(n_times, 0.0),
        fid2(n_times, 0.0),
        occ(n_times, std::vector<double>(n_sites, 0.0)),
        occ2(n_times, std::vector<double>(n_sites, 0.0)) {}
};

// Per-trajectory record at each output time.
struct Sample {
  std::vector<RVector> prob;
  std::vector<double> fid;
  std::vector<std::vector<double>> occ;
  std::optional<Trajectory> kept;
};

void merge(Accumulator& acc, const Sample& s) {
  for (std::size_t t = 0; t < s.prob.size(); ++t) {
    acc.prob[t] += s.prob[t];
    acc.fid[t] += s.fid[t];
    acc.fid2[t] += s.fid[t] * s.fid[t];
    if (!s.occ.empty()) {
      for (std::size_t i = 0; i < s.occ[t].size(); ++i) {
        acc.occ[t][i] += s.occ[t][i];
        acc.occ2[t][i] += s.occ[t][i] * s.occ[t][i];
      }
    }
  }
}

double stderr_of(double sum, double sum2, int n) {
  if (n < 2) return 0.0;
  const double mean = sum / n;
  const double var = std::max(0.0, (sum2 - n * mean * mean) / (n - 1));
  return std::sqrt(var / n);
}

template <typename Body>
void run_chunked(int n_traj, Accumulator& acc, std::vector<Trajectory>* kept, Body&& body) {
  const std::size_t chunk = std::max<std::size_t>(1, 4 * static_cast<std::size_t>(max_threads()));
  std::vector<Sample> slots(chunk);
  for (std::size_t start = 0; start < static_cast<std::size_t>(n_traj); start += chunk) {
    const std::size_t count = std::min(chunk, static_cast<std::size_t>(n_traj) - start);
    parallel_for(count, [&](std::size_t j) { slots[j] = body(start + j); });
    for (std::size_t j = 0; j < count; ++j) {
      merge(acc, slots[j]);
      if (kept && slots[j].kept) kept->push_back(std::move(*slots[j].kept));
      slots[j] = Sample{};
    }
  }
}

std::vector<double> occupation_of(const BasisMap& b, const CVector& v) {
  const int n = b.num_sites();
  std::vector<double> occ(n, 0.0);
  for (std::size_t i = 0; i < b.dim(); ++i) {
    const double p = std::norm(v(static_cast<Eigen::Index>(i)));
    if (p == 0.0) continue;
    const std::uint64_t z = b.state(i);
    for (int s = 1; s <= n; ++s) {
      if (z & site_mask(n, s)) occ[s - 1] += p;
    }
  }
  return occ;
}

// Everything one trajectory needs beyond its RNG.
struct Engine {
  BasisPtr basis;
  const NoiseModel* noise = nullptr;
  const std::vector<StateVector>* ideal = nullptr;
  std::span<const double> times;
  SparseMatrix sx;      // total S^x (drift)
  RVector number;       // total n (drift, decay)
  const Hamiltonian* shared = nullptr;
  std::function<Hamiltonian(Rng&)> realize;  // per-trajectory Hamiltonian when disorder is present
  TrajectoryOptions options;
  bool keep = false;
};

Sample run_one(const Engine& e, const StateVector& psi0, std::uint64_t seed, std::size_t index) {
  const NoiseModel& nz = *e.noise;
  Rng rng = make_rng(seed, index);
  const BasisMap& b = *e.basis;
  const int n = b.num_sites();

  Hamiltonian own;
  const Hamiltonian* h = e.shared;
  if (e.realize) {
    own = e.realize(rng);
    h = &own;
  }
  const double t_end = e.times.back();
  const bool drift = nz.has_drift();
  const bool gridded = drift || nz.decay_rate > 0.0 || nz.pauli_rate > 0.0;
  const std::size_t cells = gridded ? static_cast<std::size_t>(std::ceil(t_end / nz.dt - 1e-9)) + 1 : 0;
  const auto d_omega = drift ? ou_trace(nz.omega_drift, nz.dt, cells, rng) : std::vector<double>{};
  const auto d_delta = drift ? ou_trace(nz.delta_drift, nz.dt, cells, rng) : std::vector<double>{};

  // Shared propagator only when the Hamiltonian is fixed and time independent.
  std::optional<Propagator> prop;
  if (!drift) prop.emplace(*h, e.realize ? std::min<std::size_t>(e.options.dense_limit, 256) : e.options.dense_limit,
                           e.options.krylov);

  Sample out;
  out.prob.reserve(e.times.size());
  std::vector<Jump> jumps;
  CVector v = psi0.amplitudes();
  double threshold = nz.decay_rate > 0.0 ? uniform01(rng) : 0.0;
  double t = 0.0;
  std::size_t next_out = 0;

  auto record = [&] {
    CVector u = v / v.norm();
    RVector p = u.cwiseAbs2();
    out.fid.push_back(std::norm((*e.ideal)[next_out].amplitudes().dot(u)));
    out.occ.push_back(occupation_of(b, u));
    out.prob.push_back(std::move(p));
    ++next_out;
  };

  while (next_out < e.times.size()) {
    const double target = e.times[next_out];
    double stop = target;
    std::size_t cell = 0;
    if (gridded) {
      cell = static_cast<std::size_t>(std::floor(t / nz.dt + 1e-9));
      stop = std::min(target, (cell + 1) * nz.dt);
    }
    const double h_step = stop - t;
    if (h_step > 0.0) {
      // Strang splitting: half damping, Hermitian step, half damping.
      auto damp = [&] {
        if (nz.decay_rate <= 0.0) return;
        for (Eigen::Index i = 0; i < v.size(); ++i) v[i] *= std::exp(-0.25 * nz.decay_rate * h_step * e.number[i]);
      };
      damp();
      if (drift) {
        const double dw = d_omega[std::min(cell, cells - 1)];
        const double dd = d_delta[std::min(cell, cells - 1)];
        const SparseMatrix& m = h->matrix;
        const SparseMatrix& sx = e.sx;
        const RVector& num = e.number;
        krylov_expm(
            [&](const Eigen::Ref<const CVector>& in, CVector& o) {
              o.noalias() = m * in;
              if (dw != 0.0) o.noalias() += dw * (sx * in);
              if (dd != 0.0) o -= dd * num.cwiseProduct(in).eval();
            },
            v, h_step, e.options.krylov);
      } else {
        prop->apply(v, h_step);
      }
      damp();
      if (nz.decay_rate > 0.0) {
        if (v.squaredNorm() < threshold) {
          // quantum jump: lower one excited site, chosen by its occupation
          const auto occ = occupation_of(b, v / v.norm());
          const double total = std::accumulate(occ.begin(), occ.end(), 0.0);
          double u = uniform01(rng) * total;
          int site = n;
          for (int s = 1; s <= n; ++s) {
            u -= occ[s - 1];
            if (u < 0.0) {
              site = s;
              break;
            }
          }
          const std::uint64_t mask = site_mask(n, site);
          CVector w = CVector::Zero(v.size());
          for (std::size_t i = 0; i < b.dim(); ++i) {
            const std::uint64_t z = b.state(i);
            if (z & mask) w[static_cast<Eigen::Index>(*b.find(z ^ mask))] += v[static_cast<Eigen::Index>(i)];
          }
          v = w / w.norm();
          jumps.push_back({stop, site, 'd'});
          threshold = uniform01(rng);
        }
      }
      if (nz.pauli_rate > 0.0) {
        const double prob = 1.0 - std::exp(-nz.pauli_rate * h_step);
        for (int s = 1; s <= n; ++s) {
          if (uniform01(rng) < prob) {
            const int which = static_cast<int>(rng() % 3);
            apply_one_qubit(v, n, s, pauli(which));
            jumps.push_back({stop, s, "xyz"[which]});
          }
        }
      }
    }
    t = stop;
    if (t >= target) record();
  }
  if (e.keep) {
    out.kept = Trajectory{StateVector::normalized(e.basis, v), std::move(jumps), index};
  }
  return out;
}

TrajectoryResult run_engine(Engine& e, const StateVector& psi0, int n_traj, std::uint64_t seed) {
  if (n_traj < 1) throw ConfigError("n_traj must be >= 1");
  if (e.times.front() < 0.0) throw ConfigError("trajectory times must be >= 0");
  const BasisMap& b = *e.basis;
  if (e.noise->pauli_rate > 0.0 && (b.constraint() != Constraint::kFull || b.sector() != Sector::kAll)) {
    throw ConfigError("Pauli errors need the full sector-free basis");
  }
  if ((e.noise->decay_rate > 0.0 || e.noise->has_drift()) && b.sector() != Sector::kAll) {
    throw ConfigError("decay and drifts need a sector-free basis");
  }
  e.number = total_number(b);
  if (e.noise->has_drift()) e.sx = total_sx(b);

  TrajectoryResult r;
  r.basis = e.basis;
  r.times.assign(e.times.begin(), e.times.end());
  r.n_traj = n_traj;
  Accumulator acc(e.times.size(), static_cast<Eigen::Index>(b.dim()), b.num_sites());
  run_chunked(n_traj, acc, e.keep ? &r.trajectories : nullptr,
              [&](std::size_t k) { return run_one(e, psi0, seed, k); });
  for (std::size_t t = 0; t < e.times.size(); ++t) {
    r.mean_probabilities.push_back(acc.prob[t] / n_traj);
    r.fidelity.push_back(acc.fid[t] / n_traj);
    r.fidelity_stderr.push_back(stderr_of(acc.fid[t], acc.fid2[t], n_traj));
    std::vector<double> occ(b.num_sites()), err(b.num_sites());
    for (int i = 0; i < b.num_sites(); ++i) {
      occ[i] = acc.occ[t][i] / n_traj;
      err[i] = stderr_of(acc.occ[t][i], acc.occ2[t][i], n_traj);
    }
    r.occupation.push_back(std::move(occ));
    r.occupation_stderr.push_back(std::move(err));
  }
  r.ideal_states = *e.ideal;
  return r;
}

ProbTable table_from_vector(const BasisMap& b, const RVector& p) {
  if (b.sector() == Sector::kAll) return ProbTable::from_basis(b, std::span<const double>(p.data(), p.size()));
  // unfold sector weights onto both members of each mirror pair
  std::vector<std::uint64_t> keys;
  std::vector<double> probs;
  for (std::size_t i = 0; i < b.dim(); ++i) {
    const std::uint64_t z = b.state(i);
    const std::uint64_t m = reverse_sites(z, b.num_sites());
    const double w = p[static_cast<Eigen::Index>(i)];
    if (m == z) {
      keys.push_back(z);
      probs.push_back(w);
    } else {
      keys.insert(keys.end(), {z, m});
      probs.insert(probs.end(), {0.5 * w, 0.5 * w});
    }
  }
  return ProbTable(b.num_sites(), std::move(keys), std::move(probs));
}

}  // namespace

ProbTable TrajectoryResult::table(std::size_t i) const { return table_from_vector(*basis, mean_probabilities.at(i)); }

ProbTable TrajectoryResult::ideal_table(std::size_t i) const { return ProbTable::from_state(ideal_states.at(i)); }

TrajectoryResult run_trajectories(const RydbergSpec& spec, BasisPtr basis, const NoiseModel& noise,
                                  const StateVector& psi0, std::span<const double> times, int n_traj,
                                  std::uint64_t seed, const TrajectoryOptions& options) {
  noise.validate();
  check_times(times);
  if (!(*basis == psi0.basis())) throw ConfigError("state and model live on different bases");
  const Hamiltonian ideal_h = build_rydberg(spec, basis);
  EvolveOptions eo;
  eo.compute_observables = false;
  eo.dense_limit = options.dense_limit;
  eo.krylov = options.krylov;
  const auto ideal = evolve_exact(ideal_h, psi0, times, eo);

  Engine e;
  e.basis = basis;
  e.noise = &noise;
  e.ideal = &ideal.states;
  e.times = times;
  e.shared = &ideal_h;
  e.options = options;
  e.keep = options.keep_trajectories;
  if (noise.has_static_disorder()) {
    e.realize = [&spec, &noise, basis](Rng& rng) {
      RydbergSpec s = spec;
      const int n = s.n;
      auto perturb = [&](std::vector<double>& v, double sigma) {
        if (sigma <= 0.0) return;
        if (v.empty()) v.assign(n, 0.0);
        for (auto& x : v) x += sigma * gaussian(rng);
      };
      perturb(s.omega_offsets, noise.omega_site_sigma);
      perturb(s.delta_offsets, noise.delta_site_sigma);
      perturb(s.displacements, noise.position_sigma);
      return build_rydberg(s, basis);
    };
  }
  return run_engine(e, psi0, n_traj, seed);
}

TrajectoryResult run_trajectories(const Hamiltonian& h, const NoiseModel& noise, const StateVector& psi0,
                                  std::span<const double> times, int n_traj, std::uint64_t seed,
                                  const TrajectoryOptions& options) {
  noise.validate();
  check_times(times);
  if (noise.has_drift() || noise.has_static_disorder()) {
    throw ConfigError("drifts and static disorder need a parametric Rydberg model");
  }
  if (!(*h.basis == psi0.basis())) throw ConfigError("state and Hamiltonian live on different bases");
  EvolveOptions eo;
  eo.compute_observables = false;
  eo.dense_limit = options.dense_limit;
  eo.krylov = options.krylov;
  const auto ideal = evolve_exact(h, psi0, times, eo);
  Engine e;
  e.basis = h.basis;
  e.noise = &noise;
  e.ideal = &ideal.states;
  e.times = times;
  e.shared = &h;
  e.options = options;
  e.keep = options.keep_trajectories;
  return run_engine(e, psi0, n_traj, seed);
}

NoisyCircuitResult run_noisy_circuit(const CircuitSpec& circuit, double gamma, const StateVector& psi0, int n_traj,
                                     std::uint64_t seed) {
  if (!(gamma >= 0.0 && gamma <= 1.0)) throw ConfigError("gamma_err must lie in [0, 1]");
  if (n_traj < 1) throw ConfigError("n_traj must be >= 1");
  check_circuit_state(circuit, psi0);
  EvolveOptions eo;
  eo.compute_observables = false;
  const auto ideal = apply_circuit(circuit, psi0, eo);
  const int n = circuit.n;
  const std::size_t n_out = static_cast<std::size_t>(circuit.depth) + 1;
  const auto dim = static_cast<Eigen::Index>(psi0.dim());

  Accumulator acc(n_out, dim, 0);
  run_chunked(n_traj, acc, nullptr, [&](std::size_t k) {
    Rng rng = make_rng(seed, k);
    Sample s;
    CVector v = psi0.amplitudes();
    for (std::size_t d = 0; d < n_out; ++d) {
      if (d > 0) {
        apply_layer(v, n, circuit.layers[d - 1]);
        for (int q = 1; q <= n; ++q) {
          if (gamma > 0.0 && uniform01(rng) < gamma) apply_one_qubit(v, n, q, pauli(static_cast<int>(rng() % 3)));
        }
      }
      s.prob.push_back(v.cwiseAbs2());
      s.fid.push_back(std::norm(ideal.states[d].amplitudes().dot(v)));
    }
    return s;
  });

  NoisyCircuitResult r;
  r.n_traj = n_traj;
  for (std::size_t d = 0; d < n_out; ++d) {
    r.depths.push_back(static_cast<int>(d));
    r.mean_probabilities.push_back(acc.prob[d] / n_traj);
    r.ideal_probabilities.push_back(ideal.states[d].amplitudes().cwiseAbs2());
    r.fidelity.push_back(acc.fid[d] / n_traj);
    r.fidelity_stderr.push_back(stderr_of(acc.fid[d], acc.fid2[d], n_traj));
  }
  return r;
}

}  // namespace projens
