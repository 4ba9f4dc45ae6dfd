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

#include "misp/color.hpp"

#include <algorithm>
#include <cmath>

#include "misp/parallel.hpp"
#include "misp/simd.hpp"

namespace misp {
namespace {

constexpr float kCbScale = 1.8556f;
constexpr float kCrScale = 1.5748f;

constexpr double kDelta = 6.0 / 29.0;
constexpr double kWhite[3] = {0.95047, 1.0, 1.08883};
constexpr double kSrgbToXyz[9] = {0.4124564, 0.3575761, 0.1804375, 0.2126729, 0.7151522,
                                  0.0721750, 0.0193339, 0.1191920, 0.9503041};

template <class Fn>
RgbImage map_pixels(const RgbImage& img, Fn fn) {
  RgbImage out(img.width(), img.height(), img.state());
  parallel_rows(img.height(), [&](int y) {
    const float* src = img.pixel(0, y);
    float* dst = out.pixel(0, y);
    for (int x = 0; x < img.width(); ++x) {
      const auto v = fn(src[3 * x], src[3 * x + 1], src[3 * x + 2]);
      dst[3 * x] = v[0];
      dst[3 * x + 1] = v[1];
      dst[3 * x + 2] = v[2];
    }
  });
  return out;
}

ImagePlane weighted_plane(const RgbImage& img, const float w[3]) {
  ImagePlane out(img.width(), img.height());
  const auto& k = simd::kernels();
  parallel_rows(img.height(), [&](int y) {
    k.weighted_sum3(img.pixel(0, y), out.row(y).data(), static_cast<std::size_t>(img.width()), w[0], w[1], w[2]);
  });
  return out;
}

}  // namespace

std::array<float, 3> rgb_to_ycbcr(float r, float g, float b) noexcept {
  const float y = kLuma709[0] * r + kLuma709[1] * g + kLuma709[2] * b;
  return {y, (b - y) / kCbScale, (r - y) / kCrScale};
}

std::array<float, 3> ycbcr_to_rgb(float y, float cb, float cr) noexcept {
  const float r = y + kCrScale * cr;
  const float b = y + kCbScale * cb;
  const float g = (y - kLuma709[0] * r - kLuma709[2] * b) / kLuma709[1];
  return {r, g, b};
}

std::array<float, 3> rgb_to_hsv(float r, float g, float b) noexcept {
  const float mx = std::max({r, g, b});
  const float mn = std::min({r, g, b});
  const float d = mx - mn;
  float h = 0.0f;
  if (d > 0.0f) {
    if (mx == r)
      h = (g - b) / d;
    else if (mx == g)
      h = 2.0f + (b - r) / d;
    else
      h = 4.0f + (r - g) / d;
    h /= 6.0f;
    if (h < 0.0f) h += 1.0f;
    if (h >= 1.0f) h -= 1.0f;
  }
  const float s = mx > 0.0f ? d / mx : 0.0f;
  return {h, s, mx};
}

std::array<float, 3> hsv_to_rgb(float h, float s, float v) noexcept {
  if (s <= 0.0f) return {v, v, v};
  float hh = (h - std::floor(h)) * 6.0f;
  int sector = static_cast<int>(hh);
  if (sector > 5) sector = 5;
  const float f = hh - static_cast<float>(sector);
  const float p = v * (1.0f - s);
  const float q = v * (1.0f - s * f);
  const float t = v * (1.0f - s * (1.0f - f));
  switch (sector) {
    case 0: return {v, t, p};
    case 1: return {q, v, p};
    case 2: return {p, v, t};
    case 3: return {p, q, v};
    case 4: return {t, p, v};
    default: return {v, p, q};
  }
}

RgbImage rgb_ycbcr_convert(const RgbImage& img, Direction dir) {
  if (dir == Direction::forward) return map_pixels(img, rgb_to_ycbcr);
  return map_pixels(img, ycbcr_to_rgb);
}

RgbImage rgb_hsv_convert(const RgbImage& img, Direction dir) {
  if (dir == Direction::forward) return map_pixels(img, rgb_to_hsv);
  return map_pixels(img, hsv_to_rgb);
}

ImagePlane luminance(const RgbImage& img) { return weighted_plane(img, kLumaSolver); }

ImagePlane luma709(const RgbImage& img) { return weighted_plane(img, kLuma709); }

double lab_f_exact(double t) noexcept {
  constexpr double d3 = kDelta * kDelta * kDelta;
  if (t > d3) return std::cbrt(t);
  return t / (3.0 * kDelta * kDelta) + 4.0 / 29.0;
}

double lab_f_soft(double t, double sharpness) noexcept {
  constexpr double d3 = kDelta * kDelta * kDelta;
  const double s = 1.0 / (1.0 + std::exp(-sharpness * (t - d3)));
  return s * std::cbrt(t) + (1.0 - s) * (t / (3.0 * kDelta * kDelta) + 4.0 / 29.0);
}

std::array<double, 3> linear_srgb_to_lab(double r, double g, double b, LabMode mode) noexcept {
  double f[3];
  for (int i = 0; i < 3; ++i) {
    const double v = kSrgbToXyz[3 * i] * r + kSrgbToXyz[3 * i + 1] * g + kSrgbToXyz[3 * i + 2] * b;
    const double t = v / kWhite[i];
    f[i] = mode == LabMode::soft ? lab_f_soft(t) : lab_f_exact(t);
  }
  return {116.0 * f[1] - 16.0, 500.0 * (f[0] - f[1]), 200.0 * (f[1] - f[2])};
}

LabPlanes linear_srgb_to_lab(const RgbImage& img, LabMode mode) {
  LabPlanes out{ImagePlane(img.width(), img.height()), ImagePlane(img.width(), img.height()),
                ImagePlane(img.width(), img.height())};
  parallel_rows(img.height(), [&](int y) {
    for (int x = 0; x < img.width(); ++x) {
      const float* p = img.pixel(x, y);
      const auto lab = linear_srgb_to_lab(p[0], p[1], p[2], mode);
      out.L.at(x, y) = static_cast<float>(lab[0]);
      out.a.at(x, y) = static_cast<float>(lab[1]);
      out.b.at(x, y) = static_cast<float>(lab[2]);
    }
  });
  return out;
}

LabPlanes linear_srgb_to_soft_lab(const RgbImage& img) { return linear_srgb_to_lab(img, LabMode::soft); }

}  // namespace misp
