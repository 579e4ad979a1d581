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

#include "clipart/image_io.hpp"

#include <bit>
#include <cctype>
#include <cstring>
#include <fstream>
#include <sstream>
#include <string>

#include "clipart/error.hpp"

namespace clipart {
namespace {

std::string read_token(std::istream& in) {
  std::string token;
  char c;
  while (in.get(c)) {
    if (c == '#') {
      std::string skip;
      std::getline(in, skip);
      continue;
    }
    if (std::isspace(static_cast<unsigned char>(c))) {
      if (!token.empty()) break;
      continue;
    }
    token.push_back(c);
  }
  return token;
}

int parse_dimension(const std::string& token, const std::filesystem::path& path) {
  try {
    std::size_t used = 0;
    const long v = std::stol(token, &used);
    if (used != token.size() || v <= 0 || v > (1 << 16)) throw std::out_of_range("dim");
    return int(v);
  } catch (const std::exception&) {
    fail(ErrorCode::kParseError, path.string() + ": bad image header field '" + token + "'");
  }
}

}  // namespace

void write_ppm(const Image& image, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorCode::kIoError, "cannot open " + path.string() + " for writing");
  out << "P6\n" << image.width() << " " << image.height() << "\n255\n";
  out.write(reinterpret_cast<const char*>(image.data().data()), std::streamsize(image.data().size()));
  if (!out) fail(ErrorCode::kIoError, "failed writing " + path.string());
}

Image read_ppm(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::kIoError, "cannot open " + path.string());
  if (read_token(in) != "P6") fail(ErrorCode::kParseError, path.string() + ": not a binary PPM");
  const int w = parse_dimension(read_token(in), path);
  const int h = parse_dimension(read_token(in), path);
  if (read_token(in) != "255") fail(ErrorCode::kParseError, path.string() + ": maxval must be 255");
  Image image(w, h);
  in.read(reinterpret_cast<char*>(image.data().data()), std::streamsize(image.data().size()));
  if (in.gcount() != std::streamsize(image.data().size())) {
    fail(ErrorCode::kParseError, path.string() + ": truncated pixel data");
  }
  return image;
}

void write_pfm(const DepthMap& depth, const std::filesystem::path& path) {
  static_assert(std::endian::native == std::endian::little, "PFM writer assumes little-endian");
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorCode::kIoError, "cannot open " + path.string() + " for writing");
  out << "Pf\n" << depth.width() << " " << depth.height() << "\n-1.0\n";
  std::vector<float> row(std::size_t(depth.width()));
  for (int y = depth.height() - 1; y >= 0; --y) {
    for (int x = 0; x < depth.width(); ++x) row[std::size_t(x)] = static_cast<float>(depth.at(x, y));
    out.write(reinterpret_cast<const char*>(row.data()), std::streamsize(row.size() * sizeof(float)));
  }
  if (!out) fail(ErrorCode::kIoError, "failed writing " + path.string());
}

DepthMap read_pfm(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::kIoError, "cannot open " + path.string());
  if (read_token(in) != "Pf") fail(ErrorCode::kParseError, path.string() + ": not a grayscale PFM");
  const int w = parse_dimension(read_token(in), path);
  const int h = parse_dimension(read_token(in), path);
  const std::string scale = read_token(in);
  if (scale.empty() || scale[0] != '-') {
    fail(ErrorCode::kParseError, path.string() + ": only little-endian PFM is supported");
  }
  DepthMap depth(w, h);
  std::vector<float> row(static_cast<std::size_t>(w));
  for (int y = h - 1; y >= 0; --y) {
    in.read(reinterpret_cast<char*>(row.data()), std::streamsize(row.size() * sizeof(float)));
    if (in.gcount() != std::streamsize(row.size() * sizeof(float))) {
      fail(ErrorCode::kParseError, path.string() + ": truncated depth data");
    }
    for (int x = 0; x < w; ++x) depth.set(x, y, row[std::size_t(x)]);
  }
  return depth;
}

}  // namespace clipart
