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

#include <cstdio>

#include "commands.hpp"
#include "io.hpp"
#include "projens/ensemble.hpp"
#include "sim.hpp"

namespace projens::cli {

std::string time_label(std::size_t i) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "t%03zu", i);
  return buf;
}

std::optional<std::uint64_t> read_z_a(Node& node, std::string_view key, const Bipartition& bipartition) {
  const auto text = node.opt<std::string>(key);
  if (!text) return std::nullopt;
  Bitstring z;
  try {
    z = Bitstring::parse(*text);
  } catch (const InputDataError& e) {
    throw ConfigError(node.field(key) + ": " + e.what());
  }
  if (z.size() != static_cast<int>(bipartition.sites_a().size())) {
    throw ConfigError(node.field(key) + ": needs one bit per site of A");
  }
  return z.bits();
}

json histogram_json(const Histogram& h) {
  return {{"edges", h.edges}, {"weight", h.weight}, {"density", h.density}, {"effective_count", h.effective_count}};
}

void write_histogram(const std::filesystem::path& path, const Histogram& h, int d_a) {
  CsvWriter csv(path, {"p_lo", "p_hi", "weight", "density", "haar_density"});
  for (std::size_t i = 0; i < h.bins(); ++i) {
    csv.row({h.edges[i], h.edges[i + 1], h.weight[i], h.density[i], haar_density(d_a, h.center(i))});
  }
  csv.close();
}

json cmd_evolve(Node& root, const Context& ctx) {
  const auto model = read_model(root.object("model"), ctx);
  std::optional<Bipartition> bip;
  if (root.has("bipartition")) bip = read_bipartition(root, "bipartition", model.n);
  const int n = model.n;
  const bool probabilities = root.get<bool>("probabilities", false);
  std::optional<std::uint64_t> shots;
  std::string created;
  if (auto node = root.maybe_object("samples")) {
    shots = node->get<std::uint64_t>("shots", default_shot_budget(n));
    created = node->get<std::string>("created", "projens evolve");
    node->done();
    if (*shots == 0) throw ConfigError(node->field("shots") + ": must be positive");
  }
  struct HistogramConfig {
    int bins = 30;
    std::optional<std::uint64_t> z_a;
    Weighting scheme = Weighting::kProbability;
    int power = 1;
  };
  std::optional<HistogramConfig> hist_config;
  if (auto node = root.maybe_object("histograms")) {
    if (!bip) bip = Bipartition::half_chain(n);
    hist_config = HistogramConfig{node->get<int>("bins", 30), read_z_a(*node, "z_a", *bip),
                                  parse_enum(*node, "weighting", "p", parse_weighting), node->get<int>("power", 1)};
    node->done();
  }
  auto sim = simulate(root, model, ctx, true, bip);

  json result;
  result["model"] = model.type;
  result["n_sites"] = n;
  result["dim"] = sim.basis->dim();
  result["times"] = sim.times;
  json obs = json::array();
  std::vector<std::string> header{"time", "entropy", "blockade_weight", "parity"};
  if (!sim.energies.empty()) header.push_back("energy");
  for (int s = 1; s <= n; ++s) header.push_back("n_" + std::to_string(s));
  if (sim.noise) {
    header.push_back("fidelity");
    header.push_back("fidelity_stderr");
  }
  CsvWriter csv(ctx.out / "observables.csv", header);
  for (std::size_t i = 0; i < sim.times.size(); ++i) {
    const auto& o = sim.observables[i];
    json row{{"time", sim.times[i]},
             {"entropy", o.entropy},
             {"blockade_weight", o.blockade_weight},
             {"parity", o.parity},
             {"occupation", o.occupation}};
    std::vector<double> cells{sim.times[i], o.entropy, o.blockade_weight, o.parity};
    if (!sim.energies.empty()) {
      row["energy"] = sim.energies[i];
      cells.push_back(sim.energies[i]);
    }
    cells.insert(cells.end(), o.occupation.begin(), o.occupation.end());
    if (sim.noise) {
      row["fidelity"] = sim.fidelity[i];
      row["fidelity_stderr"] = sim.fidelity_stderr[i];
      cells.push_back(sim.fidelity[i]);
      cells.push_back(sim.fidelity_stderr[i]);
    }
    obs.push_back(row);
    csv.row(cells);
  }
  csv.close();
  result["observables"] = obs;
  json files = json::array({"observables.csv"});

  if (probabilities) {
    for (std::size_t i = 0; i < sim.times.size(); ++i) {
      const auto name = "probabilities/" + time_label(i) + ".csv";
      write_prob_table(ctx.out / name, sim.data_table(i));
      files.push_back(name);
    }
  }

  if (shots) {
    const std::uint64_t seed = ctx.require_seed("sampling");
    const bool spam = sim.noise && !sim.noise->spam.trivial();
    for (std::size_t i = 0; i < sim.times.size(); ++i) {
      auto s = sample_bitstrings(sim.data_table(i), *shots, derive_seed(seed, 0x5A3D0000 + i));
      s.basis = spam || model.is_circuit() ? "full" : std::string(to_string(model.constraint));
      s.created = created;
      const auto stem = "samples/" + time_label(i);
      write_samples(ctx.out / stem, s);
      files.push_back(stem + ".txt");
    }
  }

  if (hist_config) {
    json hist = json::array();
    for (std::size_t i = 0; i < sim.times.size(); ++i) {
      const auto ens = project(sim.ideal[i], *bip, hist_config->scheme, hist_config->power);
      const auto h = conditional_histogram(ens, hist_config->z_a, hist_config->bins);
      const auto chi = chi_square_test(h, haar_mass(ens.dim_a()));
      const auto name = "histograms/" + time_label(i) + ".csv";
      write_histogram(ctx.out / name, h, ens.dim_a());
      files.push_back(name);
      hist.push_back({{"time", sim.times[i]},
                      {"file", name},
                      {"d_a", ens.dim_a()},
                      {"outcomes", ens.entries.size()},
                      {"chi_square", {{"statistic", chi.statistic}, {"dof", chi.dof}, {"p_value", chi.p_value}}}});
    }
    result["histograms"] = hist;
  }
  result["files"] = files;
  return result;
}

}  // namespace projens::cli
