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

#include "config.hpp"

#include <cmath>
#include <fstream>
#include <limits>

namespace projens::cli {

namespace {

std::string kind(const json& j) {
  if (j.is_null()) return "null";
  if (j.is_boolean()) return "boolean";
  if (j.is_number_integer()) return "integer";
  if (j.is_number()) return "number";
  if (j.is_string()) return "string";
  if (j.is_array()) return "array";
  return "object";
}

[[noreturn]] void wrong(const json& j, const std::string& path, std::string_view expected) {
  throw ConfigError(path + ": expected " + std::string(expected) + ", got " + kind(j));
}

}  // namespace

template <>
double convert<double>(const json& j, const std::string& path) {
  if (!j.is_number()) wrong(j, path, "number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) throw ConfigError(path + ": must be finite");
  return v;
}

template <>
int convert<int>(const json& j, const std::string& path) {
  if (!j.is_number_integer()) wrong(j, path, "integer");
  const auto v = j.get<std::int64_t>();
  if (v < std::numeric_limits<int>::min() || v > std::numeric_limits<int>::max()) {
    throw ConfigError(path + ": integer out of range");
  }
  return static_cast<int>(v);
}

template <>
std::uint64_t convert<std::uint64_t>(const json& j, const std::string& path) {
  if (j.is_number_unsigned()) return j.get<std::uint64_t>();
  if (j.is_number_integer()) throw ConfigError(path + ": must be non-negative");
  wrong(j, path, "unsigned integer");
}

template <>
bool convert<bool>(const json& j, const std::string& path) {
  if (!j.is_boolean()) wrong(j, path, "boolean");
  return j.get<bool>();
}

template <>
std::string convert<std::string>(const json& j, const std::string& path) {
  if (!j.is_string()) wrong(j, path, "string");
  return j.get<std::string>();
}

template <>
std::vector<double> convert<std::vector<double>>(const json& j, const std::string& path) {
  if (!j.is_array()) wrong(j, path, "array of numbers");
  std::vector<double> v;
  for (std::size_t i = 0; i < j.size(); ++i) v.push_back(convert<double>(j[i], path + "[" + std::to_string(i) + "]"));
  return v;
}

template <>
std::vector<int> convert<std::vector<int>>(const json& j, const std::string& path) {
  if (!j.is_array()) wrong(j, path, "array of integers");
  std::vector<int> v;
  for (std::size_t i = 0; i < j.size(); ++i) v.push_back(convert<int>(j[i], path + "[" + std::to_string(i) + "]"));
  return v;
}

template <>
std::vector<std::string> convert<std::vector<std::string>>(const json& j, const std::string& path) {
  if (!j.is_array()) wrong(j, path, "array of strings");
  std::vector<std::string> v;
  for (std::size_t i = 0; i < j.size(); ++i) {
    v.push_back(convert<std::string>(j[i], path + "[" + std::to_string(i) + "]"));
  }
  return v;
}

Node::Node(const json* in, json* out, std::string path) : in_(in), out_(out), path_(std::move(path)) {
  if (!in_->is_object()) wrong(*in_, path_, "object");
  if (!out_->is_object()) *out_ = json::object();
}

bool Node::has(std::string_view key) const {
  const auto it = in_->find(key);
  return it != in_->end() && !it->is_null();
}

const json& Node::at(std::string_view key) {
  used_.emplace(key);
  return in_->find(key).value();
}

const json& Node::raw(std::string_view key) {
  static const json null;
  used_.emplace(key);
  if (!has(key)) return null;
  const json& v = in_->find(key).value();
  (*out_)[std::string(key)] = v;
  return v;
}

Node Node::object(std::string_view key) {
  if (!has(key)) throw ConfigError(field(key) + ": required field missing");
  return Node(&at(key), &(*out_)[std::string(key)], field(key));
}

std::optional<Node> Node::maybe_object(std::string_view key) {
  used_.emplace(key);
  if (!has(key)) return std::nullopt;
  return object(key);
}

std::vector<Node> Node::objects(std::string_view key) {
  if (!has(key)) throw ConfigError(field(key) + ": required field missing");
  const json& arr = at(key);
  if (!arr.is_array()) wrong(arr, field(key), "array of objects");
  json& out = (*out_)[std::string(key)];
  out = json::array();
  for (std::size_t i = 0; i < arr.size(); ++i) out.push_back(json::object());
  std::vector<Node> nodes;
  for (std::size_t i = 0; i < arr.size(); ++i) {
    nodes.emplace_back(&arr[i], &out[i], field(key) + "[" + std::to_string(i) + "]");
  }
  return nodes;
}

void Node::done() const {
  for (const auto& [key, value] : in_->items()) {
    if (!used_.contains(key)) throw ConfigError(field(key) + ": unknown field");
  }
}

json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("config file '" + path + "' is not valid JSON: " + e.what());
  }
}

}  // namespace projens::cli
