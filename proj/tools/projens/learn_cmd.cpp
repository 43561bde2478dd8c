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

#include <bit>
#include <cmath>

#include "commands.hpp"
#include "io.hpp"
#include "projens/learn.hpp"
#include "sim.hpp"

namespace projens::cli {

namespace {

/// Sample data per time: files, or synthetic shots drawn from the configured model.
std::vector<TimedSamples> read_data(Node& root, const ModelConfig& model, const Context& ctx, json& meta) {
  auto node = root.object("samples");
  if (node.has("files") == node.has("shots")) throw ConfigError(node.path() + ": give exactly one of files or shots");
  std::vector<TimedSamples> data;
  if (node.has("files")) {
    const auto files = node.req<std::vector<std::string>>("files");
    node.done();
    const auto times = read_times(root, "times");
    if (files.size() != times.size()) {
      throw ConfigError(node.field("files") + ": expected one sample file per time (" + std::to_string(times.size()) +
                        ")");
    }
    for (std::size_t i = 0; i < files.size(); ++i) data.push_back({times[i], read_samples(ctx.input(files[i]))});
    meta["source"] = "files";
    return data;
  }
  const auto shots = node.req<std::uint64_t>("shots");
  node.done();
  if (shots == 0) throw ConfigError(node.field("shots") + ": must be positive");
  const std::uint64_t seed = ctx.require_seed("synthetic sampling");
  const auto sim = simulate(root, model, ctx, false, std::nullopt);
  for (std::size_t i = 0; i < sim.times.size(); ++i) {
    auto s = sample_bitstrings(sim.data_table(i), shots, derive_seed(seed, 0x5A3D0000 + i));
    data.push_back({sim.times[i], std::move(s)});
  }
  meta["source"] = "synthetic";
  return data;
}

json scan_json(const ScanResult& r, const std::filesystem::path& csv_path) {
  CsvWriter csv(csv_path, {"value", "integrated", "normalized", "failed"});
  for (std::size_t i = 0; i < r.grid.size(); ++i) {
    csv.row({r.grid[i], r.integrated[i], r.normalized[i], r.failed[i] ? 1.0 : 0.0});
  }
  csv.close();
  json j{{"parameter", to_string(r.parameter)},
         {"grid", r.grid},
         {"integrated", r.integrated},
         {"normalized", r.normalized},
         {"failed", r.failed},
         {"peak", r.peak},
         {"peak_at_edge", r.peak_at_edge},
         {"degenerate", r.degenerate},
         {"window_start", r.window_start},
         {"window_end", r.window_end},
         {"window_from_saturation", r.window_from_saturation}};
  j["fwhm"] = r.fwhm ? json(*r.fwhm) : json(nullptr);
  return j;
}

ScanOptions read_scan_options(Node& node, const ModelConfig& model) {
  ScanOptions o;
  o.constraint = model.constraint;
  o.window_start = node.opt<double>("window_start");
  return o;
}

json scan(Node& root, const ModelConfig& model, const Context& ctx, bool rss) {
  auto node = root.object(rss ? "rss" : "scan");
  const auto parameter = parse_enum(node, "parameter", "omega", parse_scan_parameter);
  const auto grid = read_times(node, "grid");
  const auto options = read_scan_options(node, model);
  node.done();
  json meta;
  const auto data = read_data(root, model, ctx, meta);
  ScanResult r;
  if (rss) {
    MagnetizationTrace ref;
    for (const auto& d : data) {
      ref.times.push_back(d.time);
      ref.sz.push_back(local_sz(d.samples));
    }
    r = rss_comparator(model.rydberg, ref, parameter, grid, options);
  } else {
    r = scan_parameter(model.rydberg, data, parameter, grid, options);
  }
  json j = scan_json(r, ctx.out / "scan.csv");
  j["mode"] = rss ? "rss" : "scan";
  j["data"] = meta;
  j["files"] = json::array({"scan.csv"});
  return j;
}

json local(Node& root, const ModelConfig& model, const Context& ctx) {
  auto node = root.object("local");
  LocalLearnOptions o;
  o.restarts = node.get<int>("restarts", o.restarts);
  o.box = node.get<double>("box", o.box);
  o.max_evaluations = node.get<int>("max_evaluations", o.max_evaluations);
  o.step = node.get<double>("step", o.step);
  o.bootstrap = node.get<bool>("bootstrap", o.bootstrap);
  o.scan = read_scan_options(node, model);
  node.done();
  o.seed = derive_seed(ctx.require_seed("local-field learning"), 0x1EA);
  json meta;
  const auto data = read_data(root, model, ctx, meta);
  const auto r = learn_local_fields(model.rydberg, data, o);
  CsvWriter csv(ctx.out / "local_fields.csv", {"site", "mean", "stddev"});
  for (std::size_t i = 0; i < r.mean.size(); ++i) csv.row({static_cast<double>(i + 1), r.mean[i], r.stddev[i]});
  csv.close();
  json j{{"mode", "local"},
         {"data", meta},
         {"mean", r.mean},
         {"stddev", r.stddev},
         {"per_restart", r.per_restart},
         {"objective", r.objective},
         {"stagnated", r.stagnated},
         {"restarts", r.restarts},
         {"window_start", r.window_start},
         {"files", json::array({"local_fields.csv"})}};
  if (meta["source"] == "synthetic" && !model.rydberg.delta_offsets.empty()) j["generating"] = model.rydberg.delta_offsets;
  return j;
}

json target(Node& root, const ModelConfig& model, const Context& ctx) {
  if (model.is_circuit()) throw ConfigError("config.model: target benchmarking needs a quench Hamiltonian");
  auto node = root.object("target");
  const auto state = node.get<std::string>("state", "cluster");
  if (state != "cluster") throw ConfigError(node.field("state") + ": only the cluster target is supported");
  if (node.has("fidelity") && node.has("z_rotation")) {
    throw ConfigError(node.path() + ": give either fidelity or z_rotation, not both");
  }
  const int n = model.n;
  double theta = node.get<double>("z_rotation", 0.0);
  if (node.has("fidelity")) {
    const double f = node.req<double>("fidelity");
    if (!(f > 0.0 && f <= 1.0)) throw ConfigError(node.field("fidelity") + ": must lie in (0, 1]");
    theta = 2.0 * std::acos(std::pow(f, 1.0 / (2.0 * n)));
  }
  TargetBenchmarkOptions o;
  o.shots = node.opt<std::uint64_t>("shots");
  o.check_tolerance = node.get<double>("check_tolerance", o.check_tolerance);
  node.done();
  if (o.shots) o.seed = derive_seed(ctx.require_seed("target benchmarking with shots"), 0x7A6);
  const auto times = read_times(root, "times");
  if (model.constraint != Constraint::kFull && model.type == "rydberg") {
    throw ConfigError("config.model.constraint: target benchmarking needs the full basis");
  }
  const auto psi = cluster_state(n);
  const auto& b = psi.basis();
  CVector v = psi.amplitudes();
  for (std::size_t i = 0; i < b.dim(); ++i) {
    const int k = std::popcount(b.state(i));
    v[static_cast<Eigen::Index>(i)] *= std::exp(cplx(0.0, theta * (k - 0.5 * n)));
  }
  const StateVector prepared(psi.basis_ptr(), v);
  const auto r = target_state_benchmark(psi, {{1.0}, {prepared}}, model.hamiltonian(psi.basis_ptr()), times, o);
  CsvWriter csv(ctx.out / "target.csv", {"time", "fc"});
  for (std::size_t i = 0; i < r.times.size(); ++i) csv.row({r.times[i], r.fc[i]});
  csv.close();
  json j{{"mode", "target"},
         {"fidelity", r.fidelity},
         {"times", r.times},
         {"fc", r.fc},
         {"marginal_deviation", r.marginal_deviation},
         {"infinite_temperature", r.infinite_temperature},
         {"files", json::array({"target.csv"})}};
  if (!r.warning.empty()) j["warning"] = r.warning;
  return j;
}

}  // namespace

json cmd_learn(Node& root, const Context& ctx) {
  const auto model = read_model(root.object("model"), ctx);
  const auto mode = root.req<std::string>("mode");
  if (mode == "target") return target(root, model, ctx);
  if (model.type != "rydberg") throw ConfigError("config.model.type: parameter learning needs a rydberg model");
  if (mode == "scan") return scan(root, model, ctx, false);
  if (mode == "rss") return scan(root, model, ctx, true);
  if (mode == "local") return local(root, model, ctx);
  throw ConfigError(root.field("mode") + ": expected scan, rss, local or target");
}

}  // namespace projens::cli
