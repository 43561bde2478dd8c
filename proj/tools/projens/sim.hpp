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

#include <optional>
#include <vector>

#include "specs.hpp"
#include "projens/samples.hpp"

namespace projens::cli {

/// Ideal evolution of the configured model plus, when a noise block is
/// present, the trajectory-averaged distribution with SPAM applied.
struct Simulation {
  BasisPtr basis;
  std::vector<double> times;  // depths for circuits
  std::vector<StateVector> ideal;
  std::vector<Observables> observables;
  std::vector<double> energies;
  std::optional<NoiseModel> noise;
  int trajectories = 0;
  std::vector<ProbTable> noisy;
  std::vector<double> fidelity;
  std::vector<double> fidelity_stderr;

  ProbTable ideal_table(std::size_t i) const { return ProbTable::from_state(ideal.at(i)); }
  /// Noisy table when a noise model is configured, else the ideal one.
  ProbTable data_table(std::size_t i) const { return noise ? noisy.at(i) : ideal_table(i); }
};

/// Reads `initial`, `times` (Hamiltonians only) and `noise` from the root object.
Simulation simulate(Node& root, const ModelConfig& model, const Context& ctx, bool with_observables,
                    const std::optional<Bipartition>& bipartition);

/// The configured model with a different number of sites (uniform specs only).
ModelConfig resized(const ModelConfig& model, int n);

}  // namespace projens::cli
