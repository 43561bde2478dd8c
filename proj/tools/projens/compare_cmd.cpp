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

#include "commands.hpp"
#include "io.hpp"
#include "projens/analysis.hpp"

namespace projens::cli {

namespace {

LinearFit read_line(Node node) {
  LinearFit f;
  f.intercept = node.req<double>("intercept");
  f.slope = node.req<double>("slope");
  f.intercept_error = node.get<double>("intercept_error", 0.0);
  f.slope_error = node.get<double>("slope_error", 0.0);
  node.done();
  if (f.intercept_error < 0.0 || f.slope_error < 0.0) throw ConfigError(node.path() + ": errors must be >= 0");
  f.covariance(0, 0) = f.intercept_error * f.intercept_error;
  f.covariance(1, 1) = f.slope_error * f.slope_error;
  return f;
}

json line_json(const LinearFit& f) {
  return {{"intercept", f.intercept},
          {"slope", f.slope},
          {"intercept_error", f.intercept_error},
          {"slope_error", f.slope_error}};
}

std::vector<GrowthTrace> read_traces(Node& root, std::string_view key) {
  std::vector<GrowthTrace> traces;
  for (auto& node : root.objects(key)) {
    GrowthTrace t;
    t.n = node.req<int>("n");
    t.times = node.req<std::vector<double>>("times");
    t.values = node.req<std::vector<double>>("values");
    node.done();
    if (t.times.size() != t.values.size()) throw ConfigError(node.path() + ": times and values differ in length");
    traces.push_back(std::move(t));
  }
  return traces;
}

void exclusive(Node& root, std::string_view a, std::string_view b) {
  if (root.has(a) == root.has(b)) {
    throw ConfigError(root.path() + ": give exactly one of " + std::string(a) + " or " + std::string(b));
  }
}

}  // namespace

json cmd_compare(Node& root, const Context& ctx) {
  json fits;
  LinearFit entropy;
  exclusive(root, "rydberg_entropy", "saturation");
  if (root.has("saturation")) {
    std::vector<double> n, s;
    for (auto& node : root.objects("saturation")) {
      n.push_back(node.req<int>("n"));
      s.push_back(node.req<double>("value"));
      node.done();
    }
    entropy = fit_line(n, s);
  } else {
    entropy = read_line(root.object("rydberg_entropy"));
  }
  fits["rydberg_entropy"] = line_json(entropy);

  LinearFit t_ent;
  exclusive(root, "t_ent", "entanglement_traces");
  if (root.has("entanglement_traces")) {
    const double c = root.get<double>("c", kRydbergEntanglementC);
    const auto fit = fit_entanglement_time(read_traces(root, "entanglement_traces"), c);
    t_ent = fit.t_ent_fit;
    fits["entanglement"] = {{"m1", fit.m1}, {"m1_error", fit.m1_error}, {"n", fit.n}, {"tc", fit.tc},
                            {"tc_error", fit.tc_error}, {"t_ent", fit.t_ent}, {"m2", fit.m2}, {"rss", fit.rss}};
  } else {
    t_ent = read_line(root.object("t_ent"));
  }
  fits["t_ent"] = line_json(t_ent);

  LinearFit gamma;
  exclusive(root, "gamma", "fidelity_traces");
  if (root.has("fidelity_traces")) {
    const auto fit = fit_fidelity_decay(read_traces(root, "fidelity_traces"));
    gamma = fit.gamma_fit;
    fits["decay"] = {{"n", fit.n}, {"gamma", fit.gamma}, {"gamma_error", fit.gamma_error},
                     {"log_intercept", fit.log_intercept}};
  } else {
    gamma = read_line(root.object("gamma"));
  }
  fits["gamma"] = line_json(gamma);

  const LinearFit d_ent = read_line(root.object("d_ent"));
  fits["d_ent"] = line_json(d_ent);
  const auto sizes = root.req<std::vector<int>>("sizes");
  if (sizes.empty()) throw ConfigError(root.field("sizes") + ": no sizes given");

  const LinearFit page = page_equivalence(entropy);
  CsvWriter csv(ctx.out / "compare.csv", {"n", "n_ruc", "d_ent", "f_cycle", "f_cycle_error", "log_evolution_fidelity"});
  json rows = json::array();
  for (int n : sizes) {
    const auto c = cycle_fidelity(gamma, t_ent, d_ent, entropy, n);
    csv.row({static_cast<double>(n), c.n_ruc, c.d_ent, c.value, c.error, c.log_evolution_fidelity});
    rows.push_back({{"n", n}, {"n_ruc", c.n_ruc}, {"d_ent", c.d_ent}, {"f_cycle", c.value}, {"f_cycle_error", c.error},
                    {"log_evolution_fidelity", c.log_evolution_fidelity}});
  }
  csv.close();
  return {{"page_equivalence", line_json(page)},
          {"page_eta0", page_eta0()},
          {"page_eta1", kPageEta1},
          {"fits", fits},
          {"cycle_fidelity", rows},
          {"files", json::array({"compare.csv"})}};
}

}  // namespace projens::cli
