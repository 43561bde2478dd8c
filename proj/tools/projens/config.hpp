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

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "projens/types.hpp"

namespace projens::cli {

using nlohmann::json;

/// Strict reader over one JSON object. Every field read is copied into the
/// resolved config (defaults included); `done()` rejects fields never read.
class Node {
 public:
  Node(const json* in, json* out, std::string path);

  const std::string& path() const { return path_; }
  bool has(std::string_view key) const;
  std::string field(std::string_view key) const { return path_ + "." + std::string(key); }

  template <typename T>
  T req(std::string_view key);
  template <typename T>
  T get(std::string_view key, T fallback);
  template <typename T>
  std::optional<T> opt(std::string_view key);

  /// Raw value (marked as read and copied verbatim); null when absent.
  const json& raw(std::string_view key);
  Node object(std::string_view key);
  std::optional<Node> maybe_object(std::string_view key);
  std::vector<Node> objects(std::string_view key);

  void done() const;

 private:
  const json& at(std::string_view key);

  const json* in_;
  json* out_;
  std::string path_;
  std::set<std::string, std::less<>> used_;
};

template <typename T>
T convert(const json& j, const std::string& path);

template <typename T>
T Node::req(std::string_view key) {
  if (!has(key)) throw ConfigError(field(key) + ": required field missing");
  T v = convert<T>(at(key), field(key));
  (*out_)[std::string(key)] = v;
  return v;
}

template <typename T>
T Node::get(std::string_view key, T fallback) {
  if (!has(key)) {
    used_.emplace(key);
    (*out_)[std::string(key)] = fallback;
    return fallback;
  }
  return req<T>(key);
}

template <typename T>
std::optional<T> Node::opt(std::string_view key) {
  if (!has(key)) return std::nullopt;
  return req<T>(key);
}

/// String field mapped through a core parser; parser errors gain the field path.
template <typename Parse>
auto parse_enum(Node& node, std::string_view key, std::string fallback, Parse parse) {
  const auto s = node.get<std::string>(key, std::move(fallback));
  try {
    return parse(s);
  } catch (const ConfigError& e) {
    throw ConfigError(node.field(key) + ": " + e.what());
  }
}

json load_json(const std::string& path);

}  // namespace projens::cli
