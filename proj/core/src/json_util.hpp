// Copyright 2026 The clipart Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

// Internal helpers around nlohmann::json that turn every malformed document
// into a clipart::Error(kParseError) carrying a source and field path.

#include <cstdint>
#include <filesystem>
#include <string>

#include "json.hpp"

#include "clipart/error.hpp"

namespace clipart::json_detail {

using Json = nlohmann::json;

std::string read_text_file(const std::filesystem::path& path);
// Writes via a temporary sibling and rename.
void write_text_file(const std::filesystem::path& path, const std::string& text);

// Parses `text`; syntax errors report "source:line:column".
Json parse_document(const std::string& text, const std::string& source);

// Canonical serialization: sorted keys, two-space indent, trailing newline.
// Doubles use the shortest representation that round-trips exactly.
std::string dump_document(const Json& doc);

// Typed, path-tracking view into a parsed document.
class Node {
 public:
  Node(const Json& value, std::string source, std::string path)
      : value_(&value), source_(std::move(source)), path_(std::move(path)) {}

  const Json& raw() const { return *value_; }
  const std::string& path() const { return path_; }

  bool has(const std::string& key) const;
  Node at(const std::string& key) const;
  Node at(std::size_t index) const;
  std::size_t array_size() const;
  // Asserts the node is an array of exactly n elements.
  void expect_size(std::size_t n) const;
  bool is_null() const { return value_->is_null(); }

  double as_double() const;
  std::int64_t as_int() const;
  std::uint64_t as_uint() const;
  std::string as_string() const;
  bool as_bool() const;

  [[noreturn]] void error(const std::string& message) const;
  [[noreturn]] void invalid(const std::string& message) const;

 private:
  const Json* value_;
  std::string source_;
  std::string path_;
};

inline Node root(const Json& doc, const std::string& source) { return Node(doc, source, "$"); }

}  // namespace clipart::json_detail
