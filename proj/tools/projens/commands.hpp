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

#include "config.hpp"
#include "projens/ensemble.hpp"
#include "specs.hpp"

namespace projens::cli {

// Each command reads its fields from `root`, writes sidecar files under
// ctx.out and returns the result document.
json cmd_evolve(Node& root, const Context& ctx);
json cmd_ensemble(Node& root, const Context& ctx);
json cmd_benchmark(Node& root, const Context& ctx);
json cmd_learn(Node& root, const Context& ctx);
json cmd_compare(Node& root, const Context& ctx);

/// Helpers shared by the commands.
std::string time_label(std::size_t i);
std::optional<std::uint64_t> read_z_a(Node& node, std::string_view key, const Bipartition& bipartition);
json histogram_json(const Histogram& h);
void write_histogram(const std::filesystem::path& path, const Histogram& h, int d_a);

}  // namespace projens::cli
