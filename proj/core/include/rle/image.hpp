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

#ifndef RLE_IMAGE_HPP_
#define RLE_IMAGE_HPP_

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace rle {

struct Rgb {
  std::uint8_t r = 0;
  std::uint8_t g = 0;
  std::uint8_t b = 0;

  friend bool operator==(const Rgb&, const Rgb&) = default;
};

// Row-major interleaved RGB8 image. Dimensions are validated on construction
// and never change afterwards.
class ImageBuffer {
 public:
  static constexpr std::size_t kChannels = 3;

  ImageBuffer(std::size_t width, std::size_t height);
  ImageBuffer(std::size_t width, std::size_t height, std::vector<std::uint8_t> pixels);

  std::size_t width() const noexcept { return width_; }
  std::size_t height() const noexcept { return height_; }
  std::size_t channels() const noexcept { return kChannels; }
  std::size_t pixel_count() const noexcept { return width_ * height_; }

  std::span<const std::uint8_t> pixels() const noexcept { return pixels_; }
  std::span<std::uint8_t> mutable_pixels() noexcept { return pixels_; }

  Rgb at(std::size_t x, std::size_t y) const noexcept {
    const std::size_t o = (y * width_ + x) * kChannels;
    return {pixels_[o], pixels_[o + 1], pixels_[o + 2]};
  }
  void set(std::size_t x, std::size_t y, Rgb c) noexcept {
    const std::size_t o = (y * width_ + x) * kChannels;
    pixels_[o] = c.r;
    pixels_[o + 1] = c.g;
    pixels_[o + 2] = c.b;
  }

  friend bool operator==(const ImageBuffer&, const ImageBuffer&) = default;

 private:
  std::size_t width_;
  std::size_t height_;
  std::vector<std::uint8_t> pixels_;
};

// Per-channel mean color, rounded to nearest.
Rgb mean_color(const ImageBuffer& image);

// PNG (8/16-bit gray, gray+alpha, RGB, RGBA, palette) or binary PPM (P6,
// maxval 255). Alpha is dropped; format is detected from the file contents.
ImageBuffer read_image(const std::string& path);
void write_png(const ImageBuffer& image, const std::string& path);
void write_ppm(const ImageBuffer& image, const std::string& path);
// Chooses PPM for ".ppm" extensions, PNG otherwise.
void write_image(const ImageBuffer& image, const std::string& path);

}  // namespace rle

#endif  // RLE_IMAGE_HPP_
