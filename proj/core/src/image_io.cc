/*
 * Copyright 2026 The RLE Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include <png.h>

#include <array>
#include <cctype>
#include <cstring>
#include <fstream>
#include <iterator>

#include "rle/errors.hpp"
#include "rle/image.hpp"

namespace rle {
namespace {

std::vector<std::uint8_t> slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::kIoError, "cannot open " + path);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

ImageBuffer decode_png(const std::vector<std::uint8_t>& bytes, const std::string& path) {
  png_image img;
  std::memset(&img, 0, sizeof(img));
  img.version = PNG_IMAGE_VERSION;
  if (!png_image_begin_read_from_memory(&img, bytes.data(), bytes.size())) {
    fail(ErrorCode::kParseError, path + ": " + img.message);
  }
  img.format = PNG_FORMAT_RGB;
  std::vector<std::uint8_t> pixels(PNG_IMAGE_SIZE(img));
  // Flatten any alpha against black.
  png_color background{0, 0, 0};
  if (!png_image_finish_read(&img, &background, pixels.data(), 0, nullptr)) {
    std::string msg = img.message;
    png_image_free(&img);
    fail(ErrorCode::kParseError, path + ": " + msg);
  }
  return ImageBuffer(img.width, img.height, std::move(pixels));
}

// Reads one whitespace-delimited header token, skipping '#' comments.
std::size_t read_ppm_number(const std::vector<std::uint8_t>& b, std::size_t& pos,
                            const std::string& path) {
  for (;;) {
    while (pos < b.size() && std::isspace(b[pos])) ++pos;
    if (pos < b.size() && b[pos] == '#') {
      while (pos < b.size() && b[pos] != '\n') ++pos;
      continue;
    }
    break;
  }
  if (pos >= b.size() || !std::isdigit(b[pos])) fail(ErrorCode::kParseError, path + ": bad PPM header");
  std::size_t v = 0;
  while (pos < b.size() && std::isdigit(b[pos])) {
    v = v * 10 + static_cast<std::size_t>(b[pos] - '0');
    if (v > (1u << 24)) fail(ErrorCode::kParseError, path + ": PPM dimension too large");
    ++pos;
  }
  return v;
}

ImageBuffer decode_ppm(const std::vector<std::uint8_t>& b, const std::string& path) {
  std::size_t pos = 2;
  const std::size_t w = read_ppm_number(b, pos, path);
  const std::size_t h = read_ppm_number(b, pos, path);
  const std::size_t maxval = read_ppm_number(b, pos, path);
  if (maxval != 255) fail(ErrorCode::kParseError, path + ": only maxval 255 PPM is supported");
  if (pos >= b.size() || !std::isspace(b[pos])) fail(ErrorCode::kParseError, path + ": bad PPM header");
  ++pos;
  const std::size_t need = w * h * 3;
  if (b.size() - pos < need) fail(ErrorCode::kParseError, path + ": truncated PPM data");
  return ImageBuffer(w, h, std::vector<std::uint8_t>(b.begin() + pos, b.begin() + pos + need));
}

bool ends_with_ci(const std::string& s, std::string_view suffix) {
  if (s.size() < suffix.size()) return false;
  for (std::size_t i = 0; i < suffix.size(); ++i) {
    if (std::tolower(static_cast<unsigned char>(s[s.size() - suffix.size() + i])) != suffix[i]) {
      return false;
    }
  }
  return true;
}

}  // namespace

ImageBuffer read_image(const std::string& path) {
  const auto bytes = slurp(path);
  static constexpr std::array<std::uint8_t, 8> kPngSig = {0x89, 'P', 'N', 'G', '\r', '\n', 0x1a, '\n'};
  if (bytes.size() >= 8 && std::equal(kPngSig.begin(), kPngSig.end(), bytes.begin())) {
    return decode_png(bytes, path);
  }
  if (bytes.size() >= 2 && bytes[0] == 'P' && bytes[1] == '6') return decode_ppm(bytes, path);
  fail(ErrorCode::kParseError, path + ": not a PNG or binary PPM (P6) file");
}

void write_png(const ImageBuffer& image, const std::string& path) {
  png_image img;
  std::memset(&img, 0, sizeof(img));
  img.version = PNG_IMAGE_VERSION;
  img.width = static_cast<png_uint_32>(image.width());
  img.height = static_cast<png_uint_32>(image.height());
  img.format = PNG_FORMAT_RGB;
  if (!png_image_write_to_file(&img, path.c_str(), 0, image.pixels().data(), 0, nullptr)) {
    fail(ErrorCode::kIoError, path + ": " + img.message);
  }
}

void write_ppm(const ImageBuffer& image, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorCode::kIoError, "cannot write " + path);
  out << "P6\n" << image.width() << ' ' << image.height() << "\n255\n";
  const auto px = image.pixels();
  out.write(reinterpret_cast<const char*>(px.data()), static_cast<std::streamsize>(px.size()));
  if (!out) fail(ErrorCode::kIoError, "short write to " + path);
}

void write_image(const ImageBuffer& image, const std::string& path) {
  if (ends_with_ci(path, ".ppm")) {
    write_ppm(image, path);
  } else {
    write_png(image, path);
  }
}

}  // namespace rle
