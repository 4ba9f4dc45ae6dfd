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

#include "misp/editops.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "misp/color.hpp"
#include "misp/error.hpp"
#include "misp/filter.hpp"
#include "misp/parallel.hpp"
#include "misp/refine.hpp"
#include "misp/resample.hpp"
#include "misp/simd.hpp"

namespace misp {
namespace {

void check_range(double v, double lo, double hi, const char* field) {
  if (!std::isfinite(v) || v < lo || v > hi)
    throw SchemaError(field, "value " + std::to_string(v) + " outside [" + std::to_string(lo) + ", " +
                                 std::to_string(hi) + "]");
}

// Applies fn to the luma plane and rebuilds RGB with the original chroma.
template <class Fn>
RgbImage edit_luma(const RgbImage& img, Fn fn) {
  RgbImage out(img.width(), img.height(), img.state());
  parallel_rows(img.height(), [&](int y) {
    for (int x = 0; x < img.width(); ++x) {
      const float* p = img.pixel(x, y);
      const auto ycc = rgb_to_ycbcr(p[0], p[1], p[2]);
      const auto rgb = ycbcr_to_rgb(fn(ycc[0], x, y), ycc[1], ycc[2]);
      float* o = out.pixel(x, y);
      for (int c = 0; c < 3; ++c) o[c] = clamp01(rgb[c]);
    }
  });
  return out;
}

std::vector<double> luma_histogram(const std::vector<float>& lum, double scale) {
  std::vector<double> h(kAeBins, 0.0);
  for (float v : lum) {
    const double s = v * scale;
    int bin = static_cast<int>(std::floor(s * kAeBins));
    bin = std::clamp(bin, 0, kAeBins - 1);
    h[bin] += 1.0;
  }
  const double n = static_cast<double>(lum.size());
  for (double& v : h) v /= n;
  return h;
}

}  // namespace

void EditSettings::validate() const {
  check_range(ev, -10.0, 10.0, "ev");
  check_range(contrast, -1.0, 1.0, "contrast");
  check_range(highlights, -1.0, 1.0, "highlights");
  check_range(shadows, -1.0, 1.0, "shadows");
  check_range(saturation, -1.0, 1.0, "saturation");
  check_range(vibrance, -1.0, 1.0, "vibrance");
  check_range(sharpen, 0.0, 10.0, "sharpen");
  check_range(denoise_strength, 0.0, 1.0, "denoise_strength");
  check_range(luma_denoise, 0.0, 1.0, "luma_denoise");
  check_range(chroma_denoise, 0.0, 1.0, "chroma_denoise");
}

double auto_exposure(const RgbImage& linear) {
  if (linear.empty()) throw ConfigError("auto_exposure: empty image");
  const RgbImage pooled = resize(linear, kAePoolSize, kAePoolSize, ResampleMode::area);
  const ImagePlane lum = luma709(pooled);
  std::vector<float> y(lum.data().begin(), lum.data().end());
  if (std::all_of(y.begin(), y.end(), [](float v) { return !(v > 0.0f); })) return kAeRange;

  std::vector<double> target(kAeBins);
  double total = 0.0;
  for (int i = 0; i < kAeBins; ++i) {
    const double b = (i + 0.5) / kAeBins;
    const double z = (b - kAeTargetMean) / kAeTargetSigma;
    target[i] = std::exp(-0.5 * z * z);
    total += target[i];
  }
  for (double& v : target) v /= total;

  const int steps = static_cast<int>(std::lround(kAeRange / kAeStep));
  double best = 0.0;
  double best_dist = std::numeric_limits<double>::infinity();
  for (int k = -steps; k <= steps; ++k) {
    const double delta = k * kAeStep;
    const auto h = luma_histogram(y, std::exp2(delta));
    double d = 0.0;
    for (int i = 0; i < kAeBins; ++i) d += (h[i] - target[i]) * (h[i] - target[i]);
    const bool better = d < best_dist - 1e-15 || (std::abs(d - best_dist) <= 1e-15 && std::abs(delta) < std::abs(best));
    if (better) {
      best_dist = d;
      best = delta;
    }
  }
  return best;
}

RgbImage apply_ev(const RgbImage& img, double ev) {
  if (!std::isfinite(ev)) throw ConfigError("apply_ev: non-finite ev");
  if (ev == 0.0) return img;
  RgbImage out(img.width(), img.height(), img.state());
  simd::kernels().scale_clamp(img.data().data(), out.data().data(), img.data().size(),
                              static_cast<float>(std::exp2(ev)));
  return out;
}

float adjust_contrast(float y, double alpha) noexcept {
  return clamp01(static_cast<float>((y - 0.5) * (1.0 + 0.5 * alpha) + 0.5));
}

ImagePlane adjust_contrast(const ImagePlane& y, double alpha) {
  if (alpha == 0.0) return y;
  ImagePlane out(y.width(), y.height());
  for (std::size_t i = 0; i < y.size(); ++i) out.data()[i] = adjust_contrast(y.data()[i], alpha);
  return out;
}

float smooth_ramp(float x, float e0, float e1) noexcept {
  const float t = std::clamp((x - e0) / (e1 - e0), 0.0f, 1.0f);
  return t * t;
}

float adjust_highlights_shadows(float y, double alpha_high, double alpha_shad) noexcept {
  const float m_high = smooth_ramp(y, 0.7f, 0.8f);
  const float m_shad = 1.0f - smooth_ramp(y, 0.3f, 0.4f);
  // Soft indicator of the [0.1, 0.9] working range; the 0.05 ramps keep the
  // edit monotone in y for |alpha| <= 1.
  const float ind = std::clamp((y - 0.1f) / 0.05f, 0.0f, 1.0f) * std::clamp((0.9f - y) / 0.05f, 0.0f, 1.0f);
  const double delta = (alpha_high / 20.0) * y * m_high + (alpha_shad / 20.0) * (1.0 - y) * m_shad;
  return clamp01(static_cast<float>(y + delta * ind));
}

ImagePlane adjust_highlights_shadows(const ImagePlane& y, double alpha_high, double alpha_shad) {
  if (alpha_high == 0.0 && alpha_shad == 0.0) return y;
  ImagePlane out(y.width(), y.height());
  for (std::size_t i = 0; i < y.size(); ++i)
    out.data()[i] = adjust_highlights_shadows(y.data()[i], alpha_high, alpha_shad);
  return out;
}

RgbImage apply_luma_edits(const RgbImage& img, double contrast, double alpha_high, double alpha_shad) {
  if (contrast == 0.0 && alpha_high == 0.0 && alpha_shad == 0.0) return img;
  return edit_luma(img, [&](float y, int, int) {
    if (contrast != 0.0) y = adjust_contrast(y, contrast);
    if (alpha_high != 0.0 || alpha_shad != 0.0) y = adjust_highlights_shadows(y, alpha_high, alpha_shad);
    return y;
  });
}

RgbImage adjust_sat_vib(const RgbImage& img, double alpha_sat, double alpha_vib) {
  if (alpha_sat == 0.0 && alpha_vib == 0.0) return img;
  RgbImage out(img.width(), img.height(), img.state());
  parallel_rows(img.height(), [&](int y) {
    for (int x = 0; x < img.width(); ++x) {
      const float* p = img.pixel(x, y);
      auto hsv = rgb_to_hsv(p[0], p[1], p[2]);
      double s = hsv[1];
      s = std::clamp(s * (1.0 + alpha_sat), 0.0, 1.0);
      s = std::clamp(s * (1.0 + alpha_vib * (1.0 - s)), 0.0, 1.0);
      const auto rgb = hsv_to_rgb(hsv[0], static_cast<float>(s), hsv[2]);
      float* o = out.pixel(x, y);
      for (int c = 0; c < 3; ++c) o[c] = clamp01(rgb[c]);
    }
  });
  return out;
}

ImagePlane sharpen_mask(const RgbImage& img) {
  const int w = img.width();
  const int h = img.height();
  ImagePlane mag(w, h);
  parallel_rows(h, [&](int y) {
    for (int x = 0; x < w; ++x) {
      const float* l = img.pixel(reflect_index(x - 1, w), y);
      const float* r = img.pixel(reflect_index(x + 1, w), y);
      const float* u = img.pixel(x, reflect_index(y - 1, h));
      const float* d = img.pixel(x, reflect_index(y + 1, h));
      float s = 0.0f;
      for (int c = 0; c < 3; ++c) {
        const float gx = r[c] - l[c];
        const float gy = d[c] - u[c];
        s += std::sqrt(gx * gx + gy * gy);
      }
      mag.at(x, y) = s / 3.0f;
    }
  });
  float peak = 0.0f;
  for (float v : mag.data()) peak = std::max(peak, v);
  if (peak > 0.0f)
    for (float& v : mag.data()) v /= peak;
  return mag;
}

RgbImage sharpen(const RgbImage& img, double alpha) {
  if (!(alpha >= 0.0) || !std::isfinite(alpha)) throw ConfigError("sharpen: alpha must be non-negative");
  if (alpha == 0.0) return img;
  const ImagePlane mask = sharpen_mask(img);
  const auto taps = gaussian_taps(1.0, 1);
  RgbImage out(img.width(), img.height(), img.state());
  for (int c = 0; c < 3; ++c) {
    const ImagePlane ch = img.channel(c);
    const ImagePlane base = convolve_separable(ch, taps);
    ImagePlane res(img.width(), img.height());
    for (std::size_t i = 0; i < ch.size(); ++i) {
      const float v = ch.data()[i];
      res.data()[i] = clamp01(v + static_cast<float>(alpha) * (v - base.data()[i]) * mask.data()[i]);
    }
    out.set_channel(c, res);
  }
  return out;
}

RgbImage luma_denoise(const RgbImage& img, double lambda) {
  if (!(lambda >= 0.0 && lambda <= 1.0)) throw ConfigError("luma_denoise: strength must lie in [0, 1]");
  if (lambda == 0.0) return img;
  const RgbImage ycc = rgb_ycbcr_convert(img, Direction::forward);
  const ImagePlane y = ycc.channel(0);
  const int r = static_cast<int>(std::lround(2.0 + 10.0 * lambda));
  const double eps = std::pow(0.001 + 0.03 * lambda, 2.0);
  const ImagePlane filtered = guided_filter(y, y, r, eps);
  const float l = static_cast<float>(lambda);
  return edit_luma(img, [&](float yv, int x, int yy) { return (1.0f - l) * yv + l * filtered.at(x, yy); });
}

double chroma_denoise_sigma(double lambda, int height) noexcept {
  return (3.0 + 12.0 * lambda) * std::pow(height / 3000.0, 0.9);
}

RgbImage chroma_denoise(const RgbImage& img, double lambda) {
  if (!(lambda >= 0.0 && lambda <= 1.0)) throw ConfigError("chroma_denoise: strength must lie in [0, 1]");
  if (lambda == 0.0) return img;
  const RgbImage ycc = rgb_ycbcr_convert(img, Direction::forward);
  const double sigma = chroma_denoise_sigma(lambda, img.height());
  const float mix = static_cast<float>(std::pow(lambda, 1.5));
  ImagePlane blurred[2];
  for (int k = 0; k < 2; ++k) {
    ImagePlane ch = ycc.channel(k + 1);
    ImagePlane b = gaussian_blur(ch, sigma);
    if (lambda > 0.4) b = gaussian_blur(b, sigma);
    auto dst = b.data();
    auto src = ch.data();
    for (std::size_t i = 0; i < dst.size(); ++i) dst[i] = (1.0f - mix) * src[i] + mix * dst[i];
    blurred[k] = std::move(b);
  }
  RgbImage out(img.width(), img.height(), img.state());
  parallel_rows(img.height(), [&](int y) {
    for (int x = 0; x < img.width(); ++x) {
      const auto rgb = ycbcr_to_rgb(ycc.pixel(x, y)[0], blurred[0].at(x, y), blurred[1].at(x, y));
      float* o = out.pixel(x, y);
      for (int c = 0; c < 3; ++c) o[c] = clamp01(rgb[c]);
    }
  });
  return out;
}

RgbImage blend_strength(const RgbImage& before, const RgbImage& after, double s) {
  require_same_dims(before, after, "blend_strength");
  if (!(s >= 0.0 && s <= 1.0)) throw ConfigError("blend_strength: s must lie in [0, 1]");
  if (s == 0.0) return before;
  if (s == 1.0) return after;
  RgbImage out(before.width(), before.height(), after.state());
  simd::kernels().lerp(before.data().data(), after.data().data(), out.data().data(), before.data().size(),
                       static_cast<float>(s));
  return out;
}

}  // namespace misp
