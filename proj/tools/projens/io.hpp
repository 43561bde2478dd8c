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

#include <filesystem>
#include <initializer_list>
#include <string>
#include <vector>

#include <json.hpp>

#include "projens/samples.hpp"

namespace projens::cli {

namespace fs = std::filesystem;

/// Bitstrings one per line; metadata from the sidecar `<stem>.json` when present.
SampleSet read_samples(const fs::path& path);
/// Writes `<stem>.txt` and its `<stem>.json` sidecar.
void write_samples(const fs::path& stem, const SampleSet& samples);

/// `bitstring,probability` rows, header optional.
ProbTable read_prob_table(const fs::path& path);
void write_prob_table(const fs::path& path, const ProbTable& table);

void write_json(const fs::path& path, const nlohmann::json& j);

/// Deterministic number formatting shared by every CSV.
std::string format_number(double v);

class CsvWriter {
 public:
  CsvWriter(const fs::path& path, const std::vector<std::string>& header);
  void row(const std::vector<double>& values);
  void row(const std::vector<std::string>& cells);
  void close();

 private:
  fs::path path_;
  std::string text_;
};

}  // namespace projens::cli
