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

#include <cmath>

#include "commands.hpp"
#include "io.hpp"
#include "projens/bench.hpp"
#include "sim.hpp"

namespace projens::cli {

namespace {

double reference_dim(const ModelConfig& model) {
  if (model.is_circuit()) return std::ldexp(1.0, model.n);
  return static_cast<double>(make_basis(model.n, model.constraint)->dim());
}

json report_json(const FcReport& r) {
  json j{{"fc", r.value}, {"estimator", to_string(r.variant)}, {"sigma", r.sigma}, {"shots", r.shots},
         {"out_of_basis", r.out_of_basis}};
  if (r.b) j["b"] = *r.b;
  if (r.b0) j["b0"] = *r.b0;
  return j;
}

json trace(Node& root, const ModelConfig& model, const Context& ctx) {
  std::vector<SampleSet> files;
  std::optional<std::uint64_t> shots;
  std::string created = "projens benchmark";
  const bool has_samples = root.has("samples");
  if (auto node = root.maybe_object("samples")) {
    if (node->has("files") == node->has("shots")) {
      throw ConfigError(node->path() + ": give exactly one of files or shots");
    }
    if (node->has("files")) {
      for (const auto& f : node->req<std::vector<std::string>>("files")) files.push_back(read_samples(ctx.input(f)));
    } else {
      shots = node->req<std::uint64_t>("shots");
      if (*shots == 0) throw ConfigError(node->field("shots") + ": must be positive");
      created = node->get<std::string>("created", created);
    }
    node->done();
  }
  const auto variant = parse_enum(root, "estimator", has_samples ? "empirical" : "exact", parse_fc_variant);
  if (variant == FcVariant::kExact && has_samples) {
    throw ConfigError("config.estimator: the exact estimator compares distributions; drop samples or use empirical");
  }
  if (variant != FcVariant::kExact && !has_samples) {
    throw ConfigError("config.samples: shot estimators need sample files or a shot count");
  }
  const int resamples = root.get<int>("bootstrap", kDefaultBootstrap);
  const auto b0 = root.opt<double>("b0");
  const auto b = root.opt<double>("b");
  if ((b0 || b) && variant != FcVariant::kBlockadeParity) {
    throw ConfigError("config.b0: blockade weights apply to the blockade-parity estimator only");
  }

  const auto sim = simulate(root, model, ctx, false, std::nullopt);
  if (!files.empty() && files.size() != sim.times.size()) {
    throw ConfigError("config.samples.files: expected one sample file per time (" + std::to_string(sim.times.size()) +
                      ")");
  }
  for (const auto& f : files) {
    if (f.n_sites != model.n) {
      throw InputDataError("sample file has " + std::to_string(f.n_sites) + " sites, model has " +
                           std::to_string(model.n));
    }
  }
  const std::uint64_t seed = has_samples ? ctx.require_seed("shot estimation") : 0;
  const double d = reference_dim(model);

  std::vector<std::string> header{"time", "fc", "sigma", "shots", "out_of_basis", "fxeb"};
  if (sim.noise) {
    header.push_back("fidelity");
    header.push_back("fidelity_stderr");
  }
  CsvWriter csv(ctx.out / "fc.csv", header);
  json rows = json::array();
  for (std::size_t i = 0; i < sim.times.size(); ++i) {
    const auto p0 = sim.ideal_table(i);
    SampleSet s;
    if (!files.empty()) {
      s = files[i];
    } else if (shots) {
      s = sample_bitstrings(sim.data_table(i), *shots, derive_seed(seed, 0x5A3D0000 + i));
      s.created = created;
    }
    const std::uint64_t boot = derive_seed(seed, 0xB0070000 + i);
    FcReport r;
    ProbTable data;
    switch (variant) {
      case FcVariant::kExact:
        data = sim.data_table(i);
        r.value = fc_exact(p0, data);
        break;
      case FcVariant::kEmpirical:
        data = ProbTable::from_samples(s);
        r = fc_empirical(p0, s, boot, resamples);
        break;
      case FcVariant::kBlockadeParity:
        data = ProbTable::from_samples(s);
        r = fc_rydberg(p0, s, boot, b0, b, resamples);
        break;
    }
    json row = report_json(r);
    row["time"] = sim.times[i];
    const double xeb = fxeb(p0, data, d);
    row["fxeb"] = xeb;
    std::vector<double> cells{sim.times[i], r.value, r.sigma, static_cast<double>(r.shots),
                              static_cast<double>(r.out_of_basis), xeb};
    if (sim.noise) {
      row["fidelity"] = sim.fidelity[i];
      row["fidelity_stderr"] = sim.fidelity_stderr[i];
      cells.push_back(sim.fidelity[i]);
      cells.push_back(sim.fidelity_stderr[i]);
    }
    if (!files.empty()) row["created"] = s.created;
    rows.push_back(row);
    csv.row(cells);
  }
  csv.close();
  return {{"mode", "trace"}, {"model", model.type}, {"n_sites", model.n}, {"series", rows}, {"files", json::array({"fc.csv"})}};
}

json sweep(Node& root, const ModelConfig& model, const Context& ctx) {
  auto node = root.object("sweep");
  const auto sizes = node.req<std::vector<int>>("sizes");
  const auto shots = node.req<std::vector<int>>("shots");
  const int repeats = node.get<int>("repeats", 100);
  node.done();
  if (repeats < 2) throw ConfigError(node.field("repeats") + ": must be >= 2");
  for (int m : shots) {
    if (m < 1) throw ConfigError(node.field("shots") + ": shot counts must be positive");
  }
  const std::uint64_t seed = ctx.require_seed("a sample-complexity sweep");
  std::vector<SpreadPoint> points;
  CsvWriter csv(ctx.out / "spread.csv", {"n", "m", "sigma", "sigma_sqrt_m"});
  json rows = json::array();
  for (std::size_t a = 0; a < sizes.size(); ++a) {
    const auto m = resized(model, sizes[a]);
    const auto sim = simulate(root, m, ctx, false, std::nullopt);
    const std::size_t last = sim.times.size() - 1;
    const auto p0 = sim.ideal_table(last), p = sim.data_table(last);
    for (std::size_t b = 0; b < shots.size(); ++b) {
      const auto count = static_cast<std::size_t>(shots[b]);
      const double sigma = fc_spread(p0, p, count, repeats, derive_seed(seed, 0x5E000000 + 1024 * a + b));
      points.push_back({sizes[a], count, sigma});
      const double scaled = sigma * std::sqrt(static_cast<double>(count));
      csv.row({static_cast<double>(sizes[a]), static_cast<double>(count), sigma, scaled});
      rows.push_back({{"n", sizes[a]}, {"m", count}, {"sigma", sigma}, {"sigma_sqrt_m", scaled}});
    }
  }
  csv.close();
  const auto fit = sample_complexity(points);
  return {{"mode", "sample_complexity"},
          {"model", model.type},
          {"points", rows},
          {"fit", {{"a", fit.a}, {"a_error", fit.a_error}, {"points", fit.points}}},
          {"files", json::array({"spread.csv"})}};
}

json single_error(Node& root, const ModelConfig& model, const Context& ctx) {
  if (model.is_circuit()) throw ConfigError("config.model: the single-error experiment needs a Hamiltonian model");
  auto node = root.object("single_error");
  SingleErrorSpec e;
  e.site = node.req<int>("site");
  e.t_err = node.req<double>("t_err");
  e.angle = node.req<double>("angle");
  e.axis = parse_enum(node, "axis", "z", parse_error_axis);
  const auto taus = read_times(node, "taus");
  node.done();
  const auto basis = model.basis();
  const auto psi0 = read_initial(root, "initial", basis);
  const auto points = single_error_experiment(model.hamiltonian(basis), psi0, e, taus);
  CsvWriter csv(ctx.out / "single_error.csv", {"tau", "fidelity", "fc"});
  json rows = json::array();
  for (const auto& p : points) {
    csv.row({p.tau, p.fidelity, p.fc});
    rows.push_back({{"tau", p.tau}, {"fidelity", p.fidelity}, {"fc", p.fc}});
  }
  csv.close();
  return {{"mode", "single_error"}, {"model", model.type}, {"points", rows}, {"files", json::array({"single_error.csv"})}};
}

}  // namespace

json cmd_benchmark(Node& root, const Context& ctx) {
  const auto model = read_model(root.object("model"), ctx);
  const auto mode = root.get<std::string>("mode", "trace");
  if (mode == "trace") return trace(root, model, ctx);
  if (mode == "sample_complexity") return sweep(root, model, ctx);
  if (mode == "single_error") return single_error(root, model, ctx);
  throw ConfigError(root.field("mode") + ": expected trace, sample_complexity or single_error");
}

}  // namespace projens::cli
