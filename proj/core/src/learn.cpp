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

#include "projens/learn.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <numeric>
#include <set>

#include "nelder_mead.hpp"
#include "projens/bench.hpp"
#include "projens/parallel.hpp"

namespace projens {

std::string_view to_string(ScanParameter p) {
  switch (p) {
    case ScanParameter::kOmega: return "omega";
    case ScanParameter::kDelta: return "delta";
    case ScanParameter::kVnnn: return "vnnn";
  }
  return "omega";
}

ScanParameter parse_scan_parameter(std::string_view s) {
  if (s == "omega") return ScanParameter::kOmega;
  if (s == "delta") return ScanParameter::kDelta;
  if (s == "vnnn") return ScanParameter::kVnnn;
  throw ConfigError("unknown scan parameter '" + std::string(s) + "' (expected omega, delta or vnnn)");
}

RydbergSpec with_parameter(const RydbergSpec& spec, ScanParameter p, double value) {
  RydbergSpec s = spec;
  switch (p) {
    case ScanParameter::kOmega: s.omega = value; break;
    case ScanParameter::kDelta: s.delta = value; break;
    case ScanParameter::kVnnn: s.c6 = c6_for_vnnn(value, s.spacing); break;
  }
  return s;
}

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::vector<double> data_times(std::span<const TimedSamples> data, int n) {
  if (data.size() < 3) throw ConfigError("scans need at least 3 time points");
  std::vector<double> t;
  for (const auto& d : data) {
    if (d.samples.n_sites != n) throw InputDataError("sample width does not match the model");
    if (d.samples.shots.empty()) throw InputDataError("empty sample set at t = " + std::to_string(d.time));
    if (!t.empty() && !(d.time > t.back())) throw ConfigError("sample times must be strictly increasing");
    t.push_back(d.time);
  }
  if (t.front() < 0.0) throw ConfigError("sample times must be non-negative");
  return t;
}

EvolutionResult simulate(const RydbergSpec& spec, Constraint constraint, std::span<const double> times,
                         bool observables) {
  auto basis = make_basis(spec.n, constraint);
  const auto h = build_rydberg(spec, basis);
  EvolveOptions opt;
  opt.compute_observables = observables;
  return evolve_exact(h, StateVector::zeros_state(basis), times, opt);
}

// First index of the integration window.
std::size_t window_index(const RydbergSpec& base, std::span<const double> times, const ScanOptions& opt,
                         bool& from_saturation) {
  from_saturation = !opt.window_start.has_value();
  double start = 0.0;
  if (opt.window_start) {
    start = *opt.window_start;
  } else {
    const auto r = simulate(base, opt.constraint, times, true);
    double smax = 0.0;
    for (const auto& o : r.observables) smax = std::max(smax, o.entropy);
    for (std::size_t i = 0; i < times.size(); ++i) {
      if (r.observables[i].entropy >= 0.9 * smax) {
        start = times[i];
        break;
      }
    }
  }
  std::size_t i0 = 0;
  while (i0 < times.size() && times[i0] < start) ++i0;
  if (i0 == times.size()) throw ConfigError("integration window contains no data time");
  return i0;
}

// Trapezoidal time average of f over times[i0..].
double time_average(std::span<const double> times, const std::vector<double>& f, std::size_t i0) {
  if (i0 + 1 == times.size()) return f[i0];
  double s = 0.0;
  for (std::size_t i = i0 + 1; i < times.size(); ++i) s += 0.5 * (f[i] + f[i - 1]) * (times[i] - times[i - 1]);
  return s / (times.back() - times[i0]);
}

void finish_scan(ScanResult& r) {
  double hi = -std::numeric_limits<double>::infinity(), lo = std::numeric_limits<double>::infinity();
  std::size_t arg = 0;
  for (std::size_t i = 0; i < r.grid.size(); ++i) {
    if (r.failed[i]) continue;
    if (r.integrated[i] > hi) {
      hi = r.integrated[i];
      arg = i;
    }
    lo = std::min(lo, r.integrated[i]);
  }
  if (!std::isfinite(hi)) throw NumericalError("every grid point failed to simulate");
  r.peak = r.grid[arg];
  r.peak_at_edge = arg == 0 || arg + 1 == r.grid.size();
  if (hi - lo <= 1e-12 * std::max(1.0, std::abs(hi))) r.degenerate = true;
  const double scale = hi > 0.0 ? hi : 1.0;
  if (!(hi > 0.0)) r.degenerate = true;
  r.normalized.resize(r.grid.size());
  for (std::size_t i = 0; i < r.grid.size(); ++i) r.normalized[i] = r.failed[i] ? kNaN : r.integrated[i] / scale;
  r.normalized[arg] = 1.0;
  if (r.degenerate) return;

  const double level = 0.5 * (1.0 + lo / scale);
  auto crossing = [&](int dir) -> std::optional<double> {
    for (auto i = static_cast<long>(arg); i + dir >= 0 && i + dir < static_cast<long>(r.grid.size()); i += dir) {
      const auto j = static_cast<std::size_t>(i + dir);
      const auto k = static_cast<std::size_t>(i);
      if (r.failed[j]) return std::nullopt;
      if (r.normalized[j] < level) {
        const double f = (r.normalized[k] - level) / (r.normalized[k] - r.normalized[j]);
        return r.grid[k] + f * (r.grid[j] - r.grid[k]);
      }
    }
    return std::nullopt;
  };
  const auto left = crossing(-1), right = crossing(+1);
  if (left && right) r.fwhm = std::abs(*right - *left);
}

void check_grid(std::span<const double> grid) {
  if (grid.size() < 5) throw ConfigError("scan grids need at least 5 points");
  for (double g : grid) {
    if (!std::isfinite(g)) throw ConfigError("scan grid values must be finite");
  }
}

}  // namespace

ScanResult scan_parameter(const RydbergSpec& base, std::span<const TimedSamples> data, ScanParameter parameter,
                          std::span<const double> grid, const ScanOptions& options) {
  check_grid(grid);
  const auto times = data_times(data, base.n);
  std::vector<ProbTable> measured;
  std::set<std::uint64_t> distinct;
  for (const auto& d : data) {
    measured.push_back(ProbTable::from_samples(d.samples));
    for (std::size_t i = 0; i < d.samples.shots.size() && distinct.size() < 2; ++i) distinct.insert(d.samples.shots[i]);
  }

  ScanResult r;
  r.parameter = parameter;
  r.grid.assign(grid.begin(), grid.end());
  const std::size_t i0 = window_index(base, times, options, r.window_from_saturation);
  r.window_start = times[i0];
  r.window_end = times.back();
  r.integrated.assign(grid.size(), kNaN);
  std::vector<char> failed(grid.size(), 0);
  parallel_for(grid.size(), [&](std::size_t g) {
    try {
      const auto sim = simulate(with_parameter(base, parameter, grid[g]), options.constraint, times, false);
      std::vector<double> fc(times.size());
      for (std::size_t t = 0; t < times.size(); ++t) fc[t] = fc_exact(ProbTable::from_state(sim.states[t]), measured[t]);
      r.integrated[g] = time_average(times, fc, i0);
    } catch (const ConfigError&) {
      failed[g] = 1;
    } catch (const NumericalError&) {
      failed[g] = 1;
    }
  });
  r.failed.assign(failed.begin(), failed.end());
  finish_scan(r);
  if (distinct.size() < 2) r.degenerate = true;
  return r;
}

std::vector<double> local_sz(const SampleSet& samples) {
  if (samples.shots.empty()) throw InputDataError("no shots");
  std::vector<double> sz(static_cast<std::size_t>(samples.n_sites), 0.0);
  for (std::uint64_t z : samples.shots) {
    for (int s = 1; s <= samples.n_sites; ++s) {
      if (z & site_mask(samples.n_sites, s)) sz[static_cast<std::size_t>(s - 1)] += 1.0;
    }
  }
  for (double& v : sz) v = 0.5 - v / static_cast<double>(samples.shots.size());
  return sz;
}

std::vector<double> local_sz(const StateVector& state) {
  auto o = observables(state);
  for (double& v : o.occupation) v = 0.5 - v;
  return o.occupation;
}

ScanResult rss_comparator(const RydbergSpec& base, const MagnetizationTrace& reference, ScanParameter parameter,
                          std::span<const double> grid, const ScanOptions& options) {
  check_grid(grid);
  const auto& times = reference.times;
  if (times.size() < 3 || reference.sz.size() != times.size()) {
    throw ConfigError("magnetization reference needs >= 3 times with one row each");
  }
  for (std::size_t t = 0; t < times.size(); ++t) {
    if (reference.sz[t].size() != static_cast<std::size_t>(base.n)) throw InputDataError("magnetization row width");
    if (t > 0 && !(times[t] > times[t - 1])) throw ConfigError("reference times must be strictly increasing");
  }
  ScanResult r;
  r.parameter = parameter;
  r.grid.assign(grid.begin(), grid.end());
  const std::size_t i0 = window_index(base, times, options, r.window_from_saturation);
  r.window_start = times[i0];
  r.window_end = times.back();
  r.integrated.assign(grid.size(), kNaN);
  std::vector<char> failed(grid.size(), 0);
  parallel_for(grid.size(), [&](std::size_t g) {
    try {
      const auto sim = simulate(with_parameter(base, parameter, grid[g]), options.constraint, times, true);
      std::vector<double> rss(times.size(), 0.0);
      for (std::size_t t = 0; t < times.size(); ++t) {
        for (int i = 0; i < base.n; ++i) {
          const double d = (0.5 - sim.observables[t].occupation[static_cast<std::size_t>(i)]) -
                           reference.sz[t][static_cast<std::size_t>(i)];
          rss[t] += d * d;
        }
      }
      r.integrated[g] = 1.0 - time_average(times, rss, i0);
    } catch (const ConfigError&) {
      failed[g] = 1;
    } catch (const NumericalError&) {
      failed[g] = 1;
    }
  });
  r.failed.assign(failed.begin(), failed.end());
  finish_scan(r);
  return r;
}

LocalLearnResult learn_local_fields(const RydbergSpec& base, std::span<const TimedSamples> data,
                                    const LocalLearnOptions& options) {
  if (options.restarts < 2) throw ConfigError("local learning needs at least 2 restarts");
  if (!(options.box > 0.0) || !(options.step > 0.0)) throw ConfigError("box and step must be positive");
  const auto times = data_times(data, base.n);
  std::vector<ProbTable> measured;
  for (const auto& d : data) measured.push_back(ProbTable::from_samples(d.samples));
  bool from_sat = false;
  const std::size_t i0 = window_index(base, times, options.scan, from_sat);
  auto basis = make_basis(base.n, options.scan.constraint);
  const auto psi0 = StateVector::zeros_state(basis);

  // score over the first `count` data times, averaged from index `from`
  auto score = [&](const std::vector<ProbTable>& measured, const Eigen::VectorXd& x, std::size_t count,
                   std::size_t from) {
    RydbergSpec s = base;
    s.delta_offsets.assign(x.data(), x.data() + x.size());
    EvolveOptions eo;
    eo.compute_observables = false;
    const auto span = std::span(times).first(count);
    const auto sim = evolve_exact(build_rydberg(s, basis), psi0, span, eo);
    std::vector<double> fc(count);
    for (std::size_t t = 0; t < count; ++t) fc[t] = fc_exact(ProbTable::from_state(sim.states[t]), measured[t]);
    return time_average(span, fc, from);
  };

  // Continuation in time: the late-time landscape is rugged on a scale ~1/t, so
  // each restart first climbs on short prefixes of the data and then refines on
  // the full window.
  // Stage k uses the data up to t = 2^k / (4 box), where a detuning error of
  // one box width still dephases by well under a cycle.
  std::vector<std::size_t> stages;
  for (double horizon = 0.25 / options.box;; horizon *= 2.0) {
    const auto c = static_cast<std::size_t>(std::upper_bound(times.begin(), times.end(), horizon) - times.begin());
    if (c >= times.size()) break;
    if (c >= 3 && (stages.empty() || c > stages.back())) stages.push_back(c);
  }
  stages.push_back(times.size());

  const auto n = static_cast<std::size_t>(base.n);
  LocalLearnResult out;
  out.restarts = options.restarts;
  out.window_start = times[i0];
  out.per_restart.assign(static_cast<std::size_t>(options.restarts), {});
  out.objective.assign(static_cast<std::size_t>(options.restarts), 0.0);
  std::vector<char> stagnated(static_cast<std::size_t>(options.restarts), 0);
  parallel_for(out.per_restart.size(), [&](std::size_t r) {
    Rng rng = make_rng(options.seed, 0x1EA7 + r);
    Eigen::VectorXd x(base.n);
    for (auto& v : x) v = options.box * (2.0 * uniform01(rng) - 1.0);
    std::vector<ProbTable> tables = measured;
    if (options.bootstrap) {
      for (std::size_t t = 0; t < tables.size(); ++t) {
        tables[t] = ProbTable::from_samples(sample_bitstrings(measured[t], data[t].samples.size(), rng()));
      }
    }
    detail::SimplexResult res;
    double step = options.step;
    for (std::size_t c : stages) {
      const std::size_t from = c == times.size() ? i0 : 0;
      res = detail::nelder_mead([&](const Eigen::VectorXd& y) { return -score(tables, y, c, from); }, x, step,
                                options.max_evaluations, 1e-10, 1e-5);
      x = res.x;
      step = std::max(0.5 * step, 0.02);
    }
    out.per_restart[r].assign(res.x.data(), res.x.data() + res.x.size());
    out.objective[r] = -res.value;
    stagnated[r] = res.converged ? 0 : 1;
  });
  out.stagnated.assign(stagnated.begin(), stagnated.end());
  out.mean.assign(n, 0.0);
  out.stddev.assign(n, 0.0);
  const double k = options.restarts;
  for (const auto& x : out.per_restart) {
    for (std::size_t i = 0; i < n; ++i) out.mean[i] += x[i] / k;
  }
  for (const auto& x : out.per_restart) {
    for (std::size_t i = 0; i < n; ++i) out.stddev[i] += (x[i] - out.mean[i]) * (x[i] - out.mean[i]) / (k - 1.0);
  }
  for (double& s : out.stddev) s = std::sqrt(s);
  return out;
}

// ---------------------------------------------------------------------------

namespace {

RVector probabilities(const StateVector& s) { return s.amplitudes().cwiseAbs2(); }

}  // namespace

TargetBenchmarkResult target_state_benchmark(const StateVector& target, const Mixture& prepared,
                                             const Hamiltonian& quench, std::span<const double> times,
                                             const TargetBenchmarkOptions& options) {
  const BasisMap& b = *quench.basis;
  if (b.sector() != Sector::kAll) throw ConfigError("target benchmarking needs a sector-free basis");
  if (prepared.weights.size() != prepared.states.size() || prepared.states.empty()) {
    throw ConfigError("prepared mixture needs one weight per state");
  }
  double wsum = 0.0;
  for (double w : prepared.weights) {
    if (w < 0.0) throw ConfigError("mixture weights must be non-negative");
    wsum += w;
  }
  if (std::abs(wsum - 1.0) > 1e-9) throw ConfigError("mixture weights must sum to 1");
  auto same = [&](const StateVector& s) { return s.basis().dim() == b.dim() && s.basis().constraint() == b.constraint() &&
                                                 s.basis().num_sites() == b.num_sites() &&
                                                 s.basis().sector() == Sector::kAll; };
  if (!same(target)) throw ConfigError("target state is not in the quench basis");
  for (const auto& s : prepared.states) {
    if (!same(s)) throw ConfigError("prepared state is not in the quench basis");
  }

  TargetBenchmarkResult r;
  r.times.assign(times.begin(), times.end());
  for (std::size_t j = 0; j < prepared.states.size(); ++j) {
    r.fidelity += prepared.weights[j] * std::norm(target.amplitudes().dot(prepared.states[j].amplitudes()));
  }

  EvolveOptions eo;
  eo.compute_observables = false;
  const auto ideal = evolve_exact(quench, target, times, eo);
  std::vector<RVector> mixed(times.size(), RVector::Zero(static_cast<Eigen::Index>(b.dim())));
  for (std::size_t j = 0; j < prepared.states.size(); ++j) {
    const auto ev = evolve_exact(quench, prepared.states[j], times, eo);
    for (std::size_t t = 0; t < times.size(); ++t) mixed[t] += prepared.weights[j] * probabilities(ev.states[t]);
  }
  for (std::size_t t = 0; t < times.size(); ++t) {
    const auto p0 = ProbTable::from_state(ideal.states[t]);
    const RVector& pm = mixed[t];
    const auto table = ProbTable::from_basis(b, std::span<const double>(pm.data(), static_cast<std::size_t>(pm.size())));
    if (options.shots) {
      const auto s = sample_bitstrings(table, *options.shots, options.seed + t);
      r.fc.push_back(fc_empirical(p0, s, 0, 0).value);
    } else {
      r.fc.push_back(fc_exact(p0, table));
    }
  }

  // infinite-temperature check on the ideal trajectory, averaged over the last third of the times
  const int n = b.num_sites();
  const Bipartition sub =
      options.check_subsystem.value_or(Bipartition(n, {(n + 1) / 2}, b.constraint() == Constraint::kBlockade));
  const auto a_states = subsystem_states(sub, b.constraint());
  std::vector<double> marginal(a_states.size(), 0.0);
  const std::size_t first = times.size() - std::max<std::size_t>(1, times.size() / 3);
  for (std::size_t t = first; t < times.size(); ++t) {
    const RVector p = probabilities(ideal.states[t]);
    std::vector<double> m(a_states.size(), 0.0);
    double total = 0.0;
    for (std::size_t i = 0; i < b.dim(); ++i) {
      const std::uint64_t z = b.state(i);
      if (!sub.admissible(z)) continue;
      const auto za = sub.split_bits(z).first;
      const auto it = std::lower_bound(a_states.begin(), a_states.end(), za);
      if (it == a_states.end() || *it != za) continue;
      m[static_cast<std::size_t>(it - a_states.begin())] += p[static_cast<Eigen::Index>(i)];
      total += p[static_cast<Eigen::Index>(i)];
    }
    for (std::size_t a = 0; a < m.size(); ++a) marginal[a] += m[a] / total / static_cast<double>(times.size() - first);
  }
  for (double m : marginal) {
    r.marginal_deviation = std::max(r.marginal_deviation, std::abs(m - 1.0 / static_cast<double>(a_states.size())));
  }
  r.infinite_temperature = r.marginal_deviation <= options.check_tolerance;
  if (!r.infinite_temperature) {
    r.warning = "quench fails the infinite-temperature check: late-time marginal deviates from 1/D_A by " +
                std::to_string(r.marginal_deviation);
  }
  return r;
}

StateVector cluster_state(int n) {
  auto b = make_basis(n, Constraint::kFull);
  CVector v(static_cast<Eigen::Index>(b->dim()));
  const double amp = std::pow(2.0, -0.5 * n);
  for (std::size_t i = 0; i < b->dim(); ++i) {
    const std::uint64_t z = b->state(i);
    const int pairs = std::popcount(z & (z >> 1));
    v[static_cast<Eigen::Index>(i)] = pairs % 2 ? -amp : amp;
  }
  return StateVector(b, v);
}

}  // namespace projens
