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

#include "sim.hpp"

#include <algorithm>

namespace projens::cli {

Simulation simulate(Node& root, const ModelConfig& model, const Context& ctx, bool with_observables,
                    const std::optional<Bipartition>& bipartition) {
  Simulation s;
  s.basis = model.is_circuit() ? make_basis(model.n, Constraint::kFull) : model.basis();
  const auto psi0 = read_initial(root, "initial", s.basis);
  if (auto node = root.maybe_object("noise")) {
    s.noise = read_noise(*node);
    s.trajectories = node->req<int>("trajectories");
    if (s.trajectories < 1) throw ConfigError(node->field("trajectories") + ": must be >= 1");
    node->done();
  }
  EvolveOptions eo;
  eo.compute_observables = with_observables;
  eo.bipartition = bipartition;
  EvolutionResult ev;
  CircuitSpec circuit;
  if (model.is_circuit()) {
    circuit = build_circuit(model.circuit);
    ev = apply_circuit(circuit, psi0, eo);
  } else {
    const auto times = read_times(root, "times");
    ev = evolve_exact(model.hamiltonian(s.basis), psi0, times, eo);
  }
  s.times = ev.times;
  s.ideal = std::move(ev.states);
  s.observables = std::move(ev.observables);
  s.energies = std::move(ev.energies);
  if (!s.noise) return s;

  const std::uint64_t seed = derive_seed(ctx.require_seed("a noise model"), 0x7A1);
  auto finish = [&](ProbTable t) { return s.noise->spam.trivial() ? t : apply_spam(t, s.noise->spam); };
  if (model.is_circuit()) {
    const auto r = run_noisy_circuit(circuit, s.noise->pauli_rate, psi0, s.trajectories, seed);
    for (const auto& p : r.mean_probabilities) {
      s.noisy.push_back(
          finish(ProbTable::from_basis(*s.basis, std::span<const double>(p.data(), static_cast<std::size_t>(p.size())))));
    }
    s.fidelity = r.fidelity;
    s.fidelity_stderr = r.fidelity_stderr;
  } else {
    const auto r = model.type == "rydberg"
                       ? run_trajectories(model.rydberg, s.basis, *s.noise, psi0, s.times, s.trajectories, seed)
                       : run_trajectories(model.hamiltonian(s.basis), *s.noise, psi0, s.times, s.trajectories, seed);
    for (std::size_t i = 0; i < s.times.size(); ++i) s.noisy.push_back(finish(r.table(i)));
    s.fidelity = r.fidelity;
    s.fidelity_stderr = r.fidelity_stderr;
  }
  return s;
}

ModelConfig resized(const ModelConfig& model, int n) {
  ModelConfig m = model;
  m.n = n;
  if (model.type == "rydberg") {
    if (!model.rydberg.omega_offsets.empty() || !model.rydberg.delta_offsets.empty() ||
        !model.rydberg.displacements.empty()) {
      throw ConfigError("config.model: size sweeps need a model without per-site values");
    }
    m.rydberg.n = n;
  } else if (model.type == "ion") {
    m.ion.n = n;
  } else if (model.type == "qimf") {
    if (!model.qimf.fields.empty()) throw ConfigError("config.model: size sweeps need a qimf model without fields");
    m.qimf.n = n;
  } else if (model.type == "quench") {
    const auto& q = model.quench;
    auto uniform = [](const std::vector<double>& v) {
      return std::all_of(v.begin(), v.end(), [&](double x) { return x == v.front(); });
    };
    if (!uniform(q.hx) || !uniform(q.hy) || !uniform(q.hz) || !uniform(q.jxx)) {
      throw ConfigError("config.model: size sweeps need a uniform quench model");
    }
    m.quench = QuenchSpec::uniform(n, q.hx.front(), q.hy.front(), q.hz.front(), q.jxx.empty() ? 0.0 : q.jxx.front());
  } else {
    m.circuit.n = n;
  }
  return m;
}

}  // namespace projens::cli
