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

#include <cstdint>
#include <filesystem>
#include <functional>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <string>

#include <CLI11.hpp>

#include "commands.hpp"
#include "io.hpp"
#include "projens/parallel.hpp"

namespace {

using namespace projens;
using namespace projens::cli;

using Command = std::function<json(Node&, const Context&)>;

struct CommandInfo {
  Command run;
  std::set<std::string> fields;
};

const std::set<std::string> kCommon{"command", "seed", "output", "description"};

const std::map<std::string, CommandInfo>& commands() {
  static const std::map<std::string, CommandInfo> table{
      {"evolve",
       {cmd_evolve,
        {"model", "initial", "times", "bipartition", "noise", "samples", "histograms", "probabilities"}}},
      {"ensemble",
       {cmd_ensemble,
        {"model", "initial", "times", "bipartition", "noise", "weighting", "power", "k_max", "bins", "reference", "z_a",
         "samples"}}},
      {"benchmark",
       {cmd_benchmark,
        {"model", "initial", "times", "noise", "mode", "samples", "estimator", "bootstrap", "b0", "b", "sweep",
         "single_error"}}},
      {"learn", {cmd_learn, {"model", "initial", "times", "noise", "mode", "samples", "scan", "rss", "local", "target"}}},
      {"compare",
       {cmd_compare,
        {"rydberg_entropy", "saturation", "t_ent", "entanglement_traces", "c", "gamma", "fidelity_traces", "d_ent",
         "sizes"}}},
  };
  return table;
}

struct Args {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<unsigned> threads;
  std::optional<std::string> out;
};

int run(const std::string& name, const Args& args) {
  const auto& info = commands().at(name);
  const json config = load_json(args.config);
  if (!config.is_object()) throw ConfigError("config: expected a JSON object");
  for (const auto& [key, value] : config.items()) {
    if (!kCommon.contains(key) && !info.fields.contains(key)) {
      throw ConfigError("config." + key + ": unknown field for command '" + name + "'");
    }
  }
  json resolved;
  Node root(&config, &resolved, "config");
  const auto command = root.get<std::string>("command", name);
  if (command != name) throw ConfigError("config.command: config is for '" + command + "', not '" + name + "'");
  root.opt<std::string>("description");
  Context ctx;
  ctx.seed = args.seed ? args.seed : root.opt<std::uint64_t>("seed");
  if (ctx.seed) resolved["seed"] = *ctx.seed;
  const auto output = root.opt<std::string>("output");
  resolved.erase("output");
  if (!args.out && !output) throw ConfigError("config.output: no output directory (field 'output' or --out)");
  ctx.config_dir = std::filesystem::absolute(args.config).parent_path();
  ctx.out = args.out ? std::filesystem::path(*args.out) : ctx.input(*output);
  if (args.threads) set_max_threads(*args.threads);

  std::filesystem::create_directories(ctx.out);
  json result = info.run(root, ctx);
  root.done();
  result["command"] = name;
  write_json(ctx.out / "config.resolved.json", resolved);
  write_json(ctx.out / "result.json", result);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Projected-ensemble simulation and benchmarking"};
  app.require_subcommand(1);
  Args args;
  std::string selected;
  for (const auto& [name, info] : commands()) {
    auto* sub = app.add_subcommand(name, "run the " + name + " workflow");
    sub->add_option("--config", args.config, "JSON run configuration")->required()->check(CLI::ExistingFile);
    sub->add_option("--seed", args.seed, "master seed (overrides the config)");
    sub->add_option("--threads", args.threads, "worker thread cap (0 = all cores)");
    sub->add_option("--out", args.out, "output directory (overrides the config)");
    sub->callback([&selected, n = name] { selected = n; });
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }
  try {
    return run(selected, args);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 3;
  } catch (const InputDataError& e) {
    std::cerr << "input data error: " << e.what() << "\n";
    return 4;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "input data error: " << e.what() << "\n";
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 3;
  }
}
