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
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "config.hpp"
#include "projens/evolve.hpp"
#include "projens/hilbert.hpp"
#include "projens/models.hpp"

namespace projens::cli {

/// Run-wide state shared by every command.
struct Context {
  std::optional<std::uint64_t> seed;
  std::filesystem::path out;
  std::filesystem::path config_dir;

  std::uint64_t require_seed(const std::string& reason) const;
  std::filesystem::path input(const std::string& relative) const;
};

struct ModelConfig {
  std::string type;  // rydberg, ion, qimf, quench, circuit
  int n = 0;
  Constraint constraint = Constraint::kFull;
  Sector sector = Sector::kAll;
  RydbergSpec rydberg;
  IonSpec ion;
  QimfSpec qimf;
  QuenchSpec quench;
  CircuitSpec circuit;

  bool is_circuit() const { return type == "circuit"; }
  BasisPtr basis() const;
  Hamiltonian hamiltonian(BasisPtr basis) const;
};

ModelConfig read_model(Node node, const Context& ctx);
NoiseModel read_noise(Node& node);
/// Array of times or {start, stop, count}.
std::vector<double> read_times(Node& parent, std::string_view key);
/// {sites, boundary_rule} or {first, length, boundary_rule}; absent means the half chain.
Bipartition read_bipartition(Node& parent, std::string_view key, int n);
/// "zeros" or a bitstring, placed in `basis` (projected onto its parity sector).
StateVector read_initial(Node& parent, std::string_view key, const BasisPtr& basis);

}  // namespace projens::cli
