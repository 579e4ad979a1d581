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

#include "json_util.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

namespace clipart::json_detail {

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::kIoError, "cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) fail(ErrorCode::kIoError, "cannot open " + tmp.string() + " for writing");
    out.write(text.data(), std::streamsize(text.size()));
    if (!out) fail(ErrorCode::kIoError, "failed writing " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) fail(ErrorCode::kIoError, "cannot rename " + tmp.string() + ": " + ec.message());
}

Json parse_document(const std::string& text, const std::string& source) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    std::size_t line = 1;
    std::size_t column = 1;
    const std::size_t limit = std::min<std::size_t>(e.byte, text.size());
    for (std::size_t i = 0; i + 1 < limit; ++i) {
      if (text[i] == '\n') {
        ++line;
        column = 1;
      } else {
        ++column;
      }
    }
    std::ostringstream msg;
    msg << source << ":" << line << ":" << column << ": malformed document";
    fail(ErrorCode::kParseError, msg.str());
  } catch (const Json::exception& e) {
    // Number overflow and similar lexer-level failures.
    fail(ErrorCode::kParseError, source + ": unreadable document: " + e.what());
  }
}

std::string dump_document(const Json& doc) { return doc.dump(2) + "\n"; }

bool Node::has(const std::string& key) const {
  return value_->is_object() && value_->contains(key);
}

Node Node::at(const std::string& key) const {
  if (!value_->is_object()) error("expected an object");
  const auto it = value_->find(key);
  if (it == value_->end()) error("missing required field '" + key + "'");
  return Node(*it, source_, path_ + "." + key);
}

Node Node::at(std::size_t index) const {
  if (!value_->is_array()) error("expected an array");
  if (index >= value_->size()) error("index " + std::to_string(index) + " out of range");
  return Node((*value_)[index], source_, path_ + "[" + std::to_string(index) + "]");
}

std::size_t Node::array_size() const {
  if (!value_->is_array()) error("expected an array");
  return value_->size();
}

void Node::expect_size(std::size_t n) const {
  if (array_size() != n) {
    error("expected " + std::to_string(n) + " elements, found " + std::to_string(value_->size()));
  }
}

double Node::as_double() const {
  if (!value_->is_number()) error("expected a number");
  const double v = value_->get<double>();
  if (!std::isfinite(v)) error("expected a finite number");
  return v;
}

std::int64_t Node::as_int() const {
  if (value_->is_number_integer()) return value_->get<std::int64_t>();
  if (value_->is_number_unsigned()) {
    const auto u = value_->get<std::uint64_t>();
    if (u > std::uint64_t(std::numeric_limits<std::int64_t>::max())) error("integer out of range");
    return std::int64_t(u);
  }
  error("expected an integer");
}

std::uint64_t Node::as_uint() const {
  if (value_->is_number_unsigned()) return value_->get<std::uint64_t>();
  if (value_->is_number_integer()) {
    const auto v = value_->get<std::int64_t>();
    if (v < 0) error("expected a non-negative integer");
    return std::uint64_t(v);
  }
  error("expected a non-negative integer");
}

std::string Node::as_string() const {
  if (!value_->is_string()) error("expected a string");
  return value_->get<std::string>();
}

bool Node::as_bool() const {
  if (!value_->is_boolean()) error("expected a boolean");
  return value_->get<bool>();
}

void Node::error(const std::string& message) const {
  fail(ErrorCode::kParseError, source_ + ": " + path_ + ": " + message);
}

void Node::invalid(const std::string& message) const {
  fail(ErrorCode::kValidationError, source_ + ": " + path_ + ": " + message);
}

}  // namespace clipart::json_detail
