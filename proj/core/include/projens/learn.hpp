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
#include <string>
#include <string_view>
#include <vector>

#include "projens/evolve.hpp"
#include "projens/models.hpp"
#include "projens/samples.hpp"

namespace projens {

/// Measured bitstrings at one evolution time (us).
struct TimedSamples {
  double time = 0.0;
  SampleSet samples;
};

enum class ScanParameter { kOmega, kDelta, kVnnn };

std::string_view to_string(ScanParameter p);
ScanParameter parse_scan_parameter(std::string_view s);

/// Copy of `spec` with one global parameter replaced (V_nnn through C6).
RydbergSpec with_parameter(const RydbergSpec& spec, ScanParameter p, double value);

struct ScanOptions {
  Constraint constraint = Constraint::kBlockade;
  /// Start of the time-integration window. When unset it is the first data
  /// time at which the half-chain entropy of the reference model reaches 90%
  /// of its maximum over the data times.
  std::optional<double> window_start;
};

struct ScanResult {
  ScanParameter parameter = ScanParameter::kOmega;
  std::vector<double> grid;
  std::vector<double> integrated;   // time-averaged score per grid point (NaN if flagged)
  std::vector<double> normalized;   // integrated / max
  std::vector<bool> failed;         // simulation failure at this grid point
  double peak = 0.0;
  std::optional<double> fwhm;       // full width at half (1 + min) of the normalized curve
  bool degenerate = false;          // no information: flat curve or a single observed bitstring
  bool peak_at_edge = false;
  double window_start = 0.0;
  double window_end = 0.0;
  bool window_from_saturation = false;
};

/// Time-integrated empirical F_c against the model as one global parameter is
/// scanned. Evolution starts from |0...0>.
ScanResult scan_parameter(const RydbergSpec& base, std::span<const TimedSamples> data, ScanParameter parameter,
                          std::span<const double> grid, const ScanOptions& options = {});

/// <S^z_i> = 1/2 - <n_i> per site.
std::vector<double> local_sz(const SampleSet& samples);
std::vector<double> local_sz(const StateVector& state);

/// Reference magnetization trace: sz[t][i] at times[t].
struct MagnetizationTrace {
  std::vector<double> times;
  std::vector<std::vector<double>> sz;
};

/// 1 - time-averaged sum_i (<S^z_i>_model - <S^z_i>_ref)^2 over the same window rule.
ScanResult rss_comparator(const RydbergSpec& base, const MagnetizationTrace& reference, ScanParameter parameter,
                          std::span<const double> grid, const ScanOptions& options = {});

struct LocalLearnOptions {
  int restarts = 30;
  double box = 1.0;           // initial detunings uniform in [-box, box] MHz
  int max_evaluations = 4000;
  double step = 0.25;         // initial simplex edge, MHz
  std::uint64_t seed = 0;
  /// Each restart fits a bootstrap resample of the shots, so the restart
  /// spread includes shot noise.
  bool bootstrap = true;
  ScanOptions scan;
};

struct LocalLearnResult {
  std::vector<double> mean;                     // per site, MHz
  std::vector<double> stddev;                   // over restarts
  std::vector<std::vector<double>> per_restart;
  std::vector<double> objective;                // time-integrated F_c per restart
  std::vector<bool> stagnated;                  // hit the evaluation cap
  int restarts = 0;
  double window_start = 0.0;
};

/// Site detuning offsets maximizing time-integrated F_c, by Nelder-Mead from
/// random starts. Each start is refined on growing prefixes of the data times
/// before the full window. The base spec's own offsets are replaced.
LocalLearnResult learn_local_fields(const RydbergSpec& base, std::span<const TimedSamples> data,
                                    const LocalLearnOptions& options = {});

// ---------------------------------------------------------------------------
// Target-state benchmarking

/// Mixed state as a convex combination of pure states.
struct Mixture {
  std::vector<double> weights;
  std::vector<StateVector> states;
};

struct TargetBenchmarkOptions {
  std::optional<std::size_t> shots;   // sample the prepared distribution instead of using it exactly
  std::uint64_t seed = 0;
  /// Subsystem for the infinite-temperature check; default is the central site,
  /// with the boundary rule on constrained bases.
  std::optional<Bipartition> check_subsystem;
  double check_tolerance = 0.05;
};

struct TargetBenchmarkResult {
  double fidelity = 0.0;
  std::vector<double> times;
  std::vector<double> fc;
  double marginal_deviation = 0.0;    // late-time max |p(z_A) - 1/D_A|
  bool infinite_temperature = false;
  std::string warning;
};

TargetBenchmarkResult target_state_benchmark(const StateVector& target, const Mixture& prepared,
                                             const Hamiltonian& quench, std::span<const double> times,
                                             const TargetBenchmarkOptions& options = {});

/// |+>^N followed by CZ on every neighbouring pair.
StateVector cluster_state(int n);

}  // namespace projens
