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

#include <benchmark/benchmark.h>

#include "projens/bench.hpp"
#include "projens/ensemble.hpp"
#include "projens/evolve.hpp"
#include "projens/krylov.hpp"

namespace projens {
namespace {

Hamiltonian rydberg_chain(int n) {
  RydbergSpec s;
  s.n = n;
  s.omega = 4.7;
  s.delta = 0.9;
  return build_rydberg(s, make_basis(n, Constraint::kBlockade));
}

void BM_KrylovStep(benchmark::State& state) {
  const auto h = rydberg_chain(static_cast<int>(state.range(0)));
  const CVector psi0 = StateVector::zeros_state(h.basis).amplitudes();
  for (auto _ : state) {
    CVector v = psi0;
    krylov_expm([&](const auto& in, CVector& out) { out.noalias() = h.matrix * in; }, v, 0.1);
    benchmark::DoNotOptimize(v.data());
  }
  state.counters["dim"] = static_cast<double>(h.dim());
}
BENCHMARK(BM_KrylovStep)->Arg(12)->Arg(16)->Arg(20)->Unit(benchmark::kMillisecond);

void BM_Su4Layer(benchmark::State& state) {
  CircuitSpec c;
  c.n = static_cast<int>(state.range(0));
  c.depth = 1;
  c.seed = 7;
  c = build_circuit(c);
  CVector v = StateVector::zeros_state(make_basis(c.n, Constraint::kFull)).amplitudes();
  for (auto _ : state) {
    apply_layer(v, c.n, c.layers[0]);
    benchmark::DoNotOptimize(v.data());
  }
}
BENCHMARK(BM_Su4Layer)->Arg(12)->Arg(16)->Arg(20)->Unit(benchmark::kMillisecond);

void BM_DesignDistance(benchmark::State& state) {
  const auto h = rydberg_chain(14);
  const std::vector<double> t{2.0};
  const auto psi = evolve_exact(h, StateVector::zeros_state(h.basis), t).states.back();
  const auto ens = project(psi, Bipartition(14, {7}, true));
  const int k = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(design_distance(ens, k));
}
BENCHMARK(BM_DesignDistance)->DenseRange(1, 4)->Unit(benchmark::kMicrosecond);

void BM_FcExact(benchmark::State& state) {
  const auto h = rydberg_chain(static_cast<int>(state.range(0)));
  const std::vector<double> t{1.0, 1.1};
  const auto ev = evolve_exact(h, StateVector::zeros_state(h.basis), t);
  const auto p0 = ProbTable::from_state(ev.states[0]), p = ProbTable::from_state(ev.states[1]);
  for (auto _ : state) benchmark::DoNotOptimize(fc_exact(p0, p));
}
BENCHMARK(BM_FcExact)->Arg(12)->Arg(18)->Unit(benchmark::kMicrosecond);

}  // namespace
}  // namespace projens

BENCHMARK_MAIN();
