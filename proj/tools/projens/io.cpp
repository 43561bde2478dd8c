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

#include "io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "config.hpp"

namespace projens::cli {

namespace {

std::string where(const fs::path& path, std::size_t line) { return path.string() + ":" + std::to_string(line); }

std::string trim(std::string s) {
  while (!s.empty() && (s.back() == '\r' || s.back() == ' ' || s.back() == '\t')) s.pop_back();
  std::size_t i = 0;
  while (i < s.size() && (s[i] == ' ' || s[i] == '\t')) ++i;
  return s.substr(i);
}

std::uint64_t parse_bits(const std::string& s, const fs::path& path, std::size_t line) {
  if (s.empty() || s.size() > 63) throw InputDataError(where(path, line) + ": bitstring must have 1 to 63 sites");
  std::uint64_t z = 0;
  for (char c : s) {
    if (c != '0' && c != '1') {
      throw InputDataError(where(path, line) + ": invalid character '" + std::string(1, c) + "' in bitstring");
    }
    z = (z << 1) | static_cast<std::uint64_t>(c == '1');
  }
  return z;
}

std::string bits_text(std::uint64_t z, int n) {
  std::string s(static_cast<std::size_t>(n), '0');
  for (int i = 0; i < n; ++i) {
    if (z & site_mask(n, i + 1)) s[static_cast<std::size_t>(i)] = '1';
  }
  return s;
}

void write_text(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw InputDataError("cannot write '" + path.string() + "'");
  out << text;
  if (!out) throw InputDataError("write failed for '" + path.string() + "'");
}

}  // namespace

SampleSet read_samples(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputDataError("cannot open sample file '" + path.string() + "'");
  SampleSet s;
  std::string raw;
  std::size_t line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const std::string text = trim(raw);
    if (text.empty()) throw InputDataError(where(path, line) + ": empty line");
    const int width = static_cast<int>(text.size());
    if (s.n_sites == 0) s.n_sites = width;
    if (width != s.n_sites) {
      throw InputDataError(where(path, line) + ": bitstring has " + std::to_string(width) + " sites, expected " +
                           std::to_string(s.n_sites));
    }
    s.shots.push_back(parse_bits(text, path, line));
  }
  if (s.shots.empty()) throw InputDataError("sample file '" + path.string() + "' has no shots");

  fs::path meta = path;
  meta.replace_extension(".json");
  if (fs::exists(meta)) {
    nlohmann::json j;
    try {
      std::ifstream m(meta);
      j = nlohmann::json::parse(m);
    } catch (const nlohmann::json::parse_error& e) {
      throw InputDataError(meta.string() + ": invalid JSON: " + e.what());
    }
    nlohmann::json resolved;
    try {
      Node node(&j, &resolved, meta.filename().string());
      const int n = node.req<int>("n_sites");
      s.basis = node.req<std::string>("basis");
      const auto shots = node.req<std::uint64_t>("shots");
      s.created = node.get<std::string>("created", "unspecified");
      node.done();
      if (n != s.n_sites) {
        throw InputDataError(meta.string() + ": n_sites " + std::to_string(n) + " does not match the bitstring width " +
                             std::to_string(s.n_sites));
      }
      if (shots != s.shots.size()) {
        throw InputDataError(meta.string() + ": shots " + std::to_string(shots) + " but the file has " +
                             std::to_string(s.shots.size()) + " lines");
      }
      parse_constraint(s.basis);
    } catch (const ConfigError& e) {
      throw InputDataError(std::string("sample metadata: ") + e.what());
    }
    if (s.basis == "blockade") {
      for (std::size_t i = 0; i < s.shots.size(); ++i) {
        if (!blockade_legal(s.shots[i])) {
          throw InputDataError(where(path, i + 1) + ": bitstring violates the blockade declared in the sidecar");
        }
      }
    }
  }
  return s;
}

void write_samples(const fs::path& stem, const SampleSet& samples) {
  std::string text;
  text.reserve(samples.shots.size() * static_cast<std::size_t>(samples.n_sites + 1));
  for (std::uint64_t z : samples.shots) {
    text += bits_text(z, samples.n_sites);
    text += '\n';
  }
  fs::path txt = stem, meta = stem;
  txt += ".txt";
  meta += ".json";
  write_text(txt, text);
  nlohmann::json j;
  j["n_sites"] = samples.n_sites;
  j["basis"] = samples.basis;
  j["shots"] = samples.shots.size();
  j["created"] = samples.created;
  write_json(meta, j);
}

ProbTable read_prob_table(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputDataError("cannot open probability table '" + path.string() + "'");
  std::vector<std::uint64_t> keys;
  std::vector<double> probs;
  int n = 0;
  std::string raw;
  std::size_t line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const std::string text = trim(raw);
    if (line == 1 && text == "bitstring,probability") continue;
    const auto comma = text.find(',');
    if (comma == std::string::npos) throw InputDataError(where(path, line) + ": expected 'bitstring,probability'");
    const std::string bits = trim(text.substr(0, comma)), value = trim(text.substr(comma + 1));
    const int width = static_cast<int>(bits.size());
    if (n == 0) n = width;
    if (width != n) throw InputDataError(where(path, line) + ": inconsistent bitstring width");
    keys.push_back(parse_bits(bits, path, line));
    double p = 0.0;
    const auto [end, ec] = std::from_chars(value.data(), value.data() + value.size(), p);
    if (ec != std::errc() || end != value.data() + value.size() || !std::isfinite(p) || p < 0.0) {
      throw InputDataError(where(path, line) + ": invalid probability '" + value + "'");
    }
    probs.push_back(p);
  }
  if (keys.empty()) throw InputDataError("probability table '" + path.string() + "' is empty");
  return ProbTable(n, std::move(keys), std::move(probs));
}

void write_prob_table(const fs::path& path, const ProbTable& table) {
  CsvWriter csv(path, {"bitstring", "probability"});
  for (std::size_t i = 0; i < table.size(); ++i) {
    csv.row(std::vector<std::string>{bits_text(table.keys()[i], table.num_sites()), format_number(table.probs()[i])});
  }
  csv.close();
}

void write_json(const fs::path& path, const nlohmann::json& j) { write_text(path, j.dump(2) + "\n"); }

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (v == 0.0) v = 0.0;
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

CsvWriter::CsvWriter(const fs::path& path, const std::vector<std::string>& header) : path_(path) {
  row(header);
}

void CsvWriter::row(const std::vector<double>& values) {
  std::vector<std::string> cells;
  cells.reserve(values.size());
  for (double v : values) cells.push_back(format_number(v));
  row(cells);
}

void CsvWriter::row(const std::vector<std::string>& cells) {
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) text_ += ',';
    text_ += cells[i];
  }
  text_ += '\n';
}

void CsvWriter::close() { write_text(path_, text_); }

}  // namespace projens::cli
