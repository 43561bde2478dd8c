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

#include <algorithm>
#include <limits>

#include "commands.hpp"
#include "io.hpp"
#include "projens/ensemble.hpp"
#include "sim.hpp"

namespace projens::cli {

json cmd_ensemble(Node& root, const Context& ctx) {
  const auto model = read_model(root.object("model"), ctx);
  const Bipartition bip = read_bipartition(root, "bipartition", model.n);
  const auto scheme = parse_enum(root, "weighting", "p", parse_weighting);
  const int power = root.get<int>("power", 1);
  const int k_max = root.get<int>("k_max", 4);
  if (k_max < 1 || k_max > 4) throw ConfigError(root.field("k_max") + ": must lie in [1, 4]");
  const int bins = root.get<int>("bins", 30);
  const auto reference = root.get<std::string>("reference", "haar");
  if (reference != "haar" && reference != "scrooge") {
    throw ConfigError(root.field("reference") + ": expected haar or scrooge");
  }
  std::optional<std::uint64_t> z_a = read_z_a(root, "z_a", bip);
  if (reference == "scrooge" && !z_a) throw ConfigError(root.field("z_a") + ": required by the scrooge reference");

  std::vector<SampleSet> shots;
  int resamples = 200;
  int min_shots = kMinShotsPerOutcome;
  if (auto node = root.maybe_object("samples")) {
    for (const auto& f : node->req<std::vector<std::string>>("files")) shots.push_back(read_samples(ctx.input(f)));
    resamples = node->get<int>("resamples", resamples);
    min_shots = node->get<int>("min_shots", min_shots);
    node->done();
  }
  auto sim = simulate(root, model, ctx, false, bip);
  if (!shots.empty() && shots.size() != sim.times.size()) {
    throw ConfigError("config.samples.files: expected one sample file per time (" + std::to_string(sim.times.size()) +
                      ")");
  }
  const auto constraint = model.is_circuit() ? Constraint::kFull : model.constraint;

  std::vector<std::string> header{"time", "outcomes"};
  for (int k = 1; k <= k_max; ++k) header.push_back("distance_k" + std::to_string(k));
  for (int k = 1; k <= k_max; ++k) header.push_back("moment_k" + std::to_string(k));
  header.push_back("chi_square_p");
  CsvWriter csv(ctx.out / "ensemble.csv", header);
  json rows = json::array();
  json files = json::array({"ensemble.csv"});
  int d_a = 0;
  for (std::size_t i = 0; i < sim.times.size(); ++i) {
    const auto ens = project(sim.ideal[i], bip, scheme, power);
    d_a = ens.dim_a();
    json row{{"time", sim.times[i]}, {"outcomes", ens.entries.size()}};
    std::vector<double> cells{sim.times[i], static_cast<double>(ens.entries.size())};
    json dist = json::array(), mom = json::array();
    for (int k = 1; k <= k_max; ++k) {
      double v = std::numeric_limits<double>::quiet_NaN();
      try {
        v = design_distance(ens, k);
      } catch (const ConfigError&) {
        // beyond the memory guard for this D_A; reported as null
      }
      dist.push_back(v);
      cells.push_back(v);
    }
    for (int k = 1; k <= k_max; ++k) {
      const auto m = moment_scalar(ens, k);
      mom.push_back({{"k", k}, {"raw", m.raw}, {"rescaled", m.rescaled}});
      cells.push_back(m.rescaled);
    }
    row["design_distance"] = dist;
    row["moments"] = mom;
    if (d_a == 4 && bip.sites_a().size() == 2) row["correlator_fluctuation"] = correlator_fluctuation(ens);

    const auto h = conditional_histogram(ens, z_a, bins);
    MassFunction mass = haar_mass(d_a);
    if (reference == "scrooge") {
      if (d_a != 2) throw ConfigError("config.reference: the scrooge reference needs a single-qubit subsystem");
      const CMatrix rho = ensemble_moment(ens, 1);
      const auto at = std::find(ens.a_states.begin(), ens.a_states.end(), *z_a);
      if (at == ens.a_states.end()) throw ConfigError(root.field("z_a") + ": not an admissible configuration of A");
      const auto j = at - ens.a_states.begin();
      const auto params = scrooge_params(rho(j, j).real());
      mass = scrooge_mass(params.a, params.b);
      row["scrooge"] = {{"a", params.a}, {"b", params.b}};
    }
    const auto chi = chi_square_test(h, mass);
    row["chi_square"] = {{"statistic", chi.statistic}, {"dof", chi.dof}, {"p_value", chi.p_value}};
    cells.push_back(chi.p_value);
    const auto name = "histograms/" + time_label(i) + ".csv";
    write_histogram(ctx.out / name, h, d_a);
    files.push_back(name);
    row["histogram"] = name;

    if (!shots.empty()) {
      const std::uint64_t seed = ctx.require_seed("sample-moment bootstrap");
      json est = json::array();
      for (int k = 1; k <= k_max; ++k) {
        const auto m = moment_scalar(shots[i], bip, constraint, k, derive_seed(seed, 0x3000 + 16 * i + k), resamples,
                                     min_shots);
        est.push_back({{"k", k}, {"rescaled", m.rescaled}, {"rescaled_error", m.rescaled_error}});
      }
      row["sample_moments"] = est;
    }
    rows.push_back(row);
    csv.row(cells);
  }
  csv.close();
  return {{"model", model.type},
          {"n_sites", model.n},
          {"d_a", d_a},
          {"weighting", to_string(scheme)},
          {"reference", reference},
          {"times", rows},
          {"files", files}};
}

}  // namespace projens::cli
