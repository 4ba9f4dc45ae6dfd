// Copyright 2026 The misp Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

namespace misp {

/// Where an RGB buffer sits along the rendering chain.
enum class ColorState {
  mosaic_normalized,
  camera_raw,
  linear_srgb,
  pre_gamma,
  display,
};

std::string_view to_string(ColorState state);

/// Single-channel float buffer, row-major.
class ImagePlane {
 public:
  ImagePlane() = default;
  ImagePlane(int width, int height, float fill = 0.0f);

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  std::size_t size() const noexcept { return data_.size(); }
  bool empty() const noexcept { return data_.empty(); }

  float& at(int x, int y) { return data_[index(x, y)]; }
  float at(int x, int y) const { return data_[index(x, y)]; }

  std::span<float> row(int y) { return {data_.data() + index(0, y), static_cast<std::size_t>(width_)}; }
  std::span<const float> row(int y) const {
    return {data_.data() + index(0, y), static_cast<std::size_t>(width_)};
  }

  std::span<float> data() noexcept { return data_; }
  std::span<const float> data() const noexcept { return data_; }

  bool same_dims(const ImagePlane& other) const noexcept {
    return width_ == other.width_ && height_ == other.height_;
  }

  friend bool operator==(const ImagePlane&, const ImagePlane&) = default;

 private:
  std::size_t index(int x, int y) const noexcept {
    return static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) + static_cast<std::size_t>(x);
  }

  int width_ = 0;
  int height_ = 0;
  std::vector<float> data_;
};

/// Three-channel float image, interleaved RGB. Values live in [0,1] at stage
/// boundaries; the state tag records which color space they are in.
class RgbImage {
 public:
  RgbImage() = default;
  RgbImage(int width, int height, ColorState state = ColorState::linear_srgb, float fill = 0.0f);

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  std::size_t pixel_count() const noexcept { return static_cast<std::size_t>(width_) * height_; }
  bool empty() const noexcept { return data_.empty(); }

  ColorState state() const noexcept { return state_; }
  void set_state(ColorState state) noexcept { state_ = state; }

  float* pixel(int x, int y) noexcept { return data_.data() + 3 * index(x, y); }
  const float* pixel(int x, int y) const noexcept { return data_.data() + 3 * index(x, y); }

  std::span<float> row(int y) { return {pixel(0, y), 3 * static_cast<std::size_t>(width_)}; }
  std::span<const float> row(int y) const { return {pixel(0, y), 3 * static_cast<std::size_t>(width_)}; }

  std::span<float> data() noexcept { return data_; }
  std::span<const float> data() const noexcept { return data_; }

  ImagePlane channel(int c) const;
  void set_channel(int c, const ImagePlane& plane);

  bool same_dims(const RgbImage& other) const noexcept {
    return width_ == other.width_ && height_ == other.height_;
  }

  /// Clamp every sample to [0,1]; NaN becomes 0.
  void clamp01();

  friend bool operator==(const RgbImage&, const RgbImage&) = default;

 private:
  std::size_t index(int x, int y) const noexcept {
    return static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) + static_cast<std::size_t>(x);
  }

  int width_ = 0;
  int height_ = 0;
  ColorState state_ = ColorState::linear_srgb;
  std::vector<float> data_;
};

inline float clamp01(float v) noexcept {
  // NaN fails both comparisons and maps to 0.
  return v > 0.0f ? (v < 1.0f ? v : 1.0f) : 0.0f;
}

/// Mirror index without repeating the edge sample (…2 1 | 0 1 2 … n-1 | n-2 …).
inline int reflect_index(int i, int n) noexcept {
  if (n == 1) return 0;
  const int period = 2 * (n - 1);
  i %= period;
  if (i < 0) i += period;
  return i < n ? i : period - i;
}

void require_same_dims(const RgbImage& a, const RgbImage& b, std::string_view what);
void require_same_dims(const ImagePlane& a, const ImagePlane& b, std::string_view what);
void require_state(const RgbImage& img, ColorState expected, std::string_view what);

}  // namespace misp
