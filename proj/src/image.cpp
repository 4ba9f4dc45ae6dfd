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

#include "misp/image.hpp"

#include <string>

#include "misp/error.hpp"

namespace misp {

std::string_view to_string(ColorState state) {
  switch (state) {
    case ColorState::mosaic_normalized: return "mosaic-normalized";
    case ColorState::camera_raw: return "camera-raw";
    case ColorState::linear_srgb: return "linear-srgb";
    case ColorState::pre_gamma: return "pre-gamma";
    case ColorState::display: return "display";
  }
  return "unknown";
}

ImagePlane::ImagePlane(int width, int height, float fill) : width_(width), height_(height) {
  if (width <= 0 || height <= 0) {
    throw ConfigError("image plane dimensions must be positive, got " + std::to_string(width) + "x" +
                      std::to_string(height));
  }
  data_.assign(static_cast<std::size_t>(width) * height, fill);
}

RgbImage::RgbImage(int width, int height, ColorState state, float fill)
    : width_(width), height_(height), state_(state) {
  if (width <= 0 || height <= 0) {
    throw ConfigError("image dimensions must be positive, got " + std::to_string(width) + "x" +
                      std::to_string(height));
  }
  data_.assign(static_cast<std::size_t>(width) * height * 3, fill);
}

ImagePlane RgbImage::channel(int c) const {
  ImagePlane out(width_, height_);
  auto dst = out.data();
  for (std::size_t i = 0; i < dst.size(); ++i) dst[i] = data_[3 * i + c];
  return out;
}

void RgbImage::set_channel(int c, const ImagePlane& plane) {
  if (plane.width() != width_ || plane.height() != height_) {
    throw ConfigError("set_channel: plane dimensions do not match image");
  }
  auto src = plane.data();
  for (std::size_t i = 0; i < src.size(); ++i) data_[3 * i + c] = src[i];
}

void RgbImage::clamp01() {
  for (float& v : data_) v = misp::clamp01(v);
}

void require_same_dims(const RgbImage& a, const RgbImage& b, std::string_view what) {
  if (!a.same_dims(b)) {
    throw ConfigError(std::string(what) + ": dimension mismatch (" + std::to_string(a.width()) + "x" +
                      std::to_string(a.height()) + " vs " + std::to_string(b.width()) + "x" +
                      std::to_string(b.height()) + ")");
  }
}

void require_same_dims(const ImagePlane& a, const ImagePlane& b, std::string_view what) {
  if (!a.same_dims(b)) {
    throw ConfigError(std::string(what) + ": dimension mismatch (" + std::to_string(a.width()) + "x" +
                      std::to_string(a.height()) + " vs " + std::to_string(b.width()) + "x" +
                      std::to_string(b.height()) + ")");
  }
}

void require_state(const RgbImage& img, ColorState expected, std::string_view what) {
  if (img.state() != expected) {
    throw ConfigError(std::string(what) + ": expected " + std::string(to_string(expected)) + " input, got " +
                      std::string(to_string(img.state())));
  }
}

}  // namespace misp
