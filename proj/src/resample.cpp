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

#include "misp/resample.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "misp/error.hpp"
#include "misp/parallel.hpp"

namespace misp {
namespace {

struct Taps {
  int start = 0;
  std::vector<float> w;
};

std::vector<Taps> axis_weights(int in, int out, ResampleMode mode) {
  std::vector<Taps> taps(static_cast<std::size_t>(out));
  const double scale = static_cast<double>(in) / out;
  for (int i = 0; i < out; ++i) {
    Taps& t = taps[static_cast<std::size_t>(i)];
    if (mode == ResampleMode::bilinear) {
      double s = (i + 0.5) * scale - 0.5;
      s = std::clamp(s, 0.0, static_cast<double>(in - 1));
      const int i0 = static_cast<int>(std::floor(s));
      const double f = s - i0;
      t.start = i0;
      if (f > 0.0 && i0 + 1 < in)
        t.w = {static_cast<float>(1.0 - f), static_cast<float>(f)};
      else
        t.w = {1.0f};
    } else {
      const double lo = i * scale;
      const double hi = (i + 1) * scale;
      const int j0 = static_cast<int>(std::floor(lo));
      const int j1 = std::min(in, static_cast<int>(std::ceil(hi)));
      t.start = j0;
      double total = 0.0;
      std::vector<double> w;
      for (int j = j0; j < j1; ++j) {
        const double ov = std::min<double>(hi, j + 1) - std::max<double>(lo, j);
        w.push_back(std::max(0.0, ov));
        total += w.back();
      }
      for (double v : w) t.w.push_back(static_cast<float>(v / total));
    }
  }
  return taps;
}

// Separable resize of an interleaved buffer with `ch` channels.
std::vector<float> resize_buffer(const float* src, int w, int h, int ch, int ow, int oh, ResampleMode mode) {
  const auto tx = axis_weights(w, ow, mode);
  const auto ty = axis_weights(h, oh, mode);
  std::vector<float> tmp(static_cast<std::size_t>(h) * ow * ch);
  parallel_rows(h, [&](int y) {
    const float* row = src + static_cast<std::size_t>(y) * w * ch;
    float* dst = tmp.data() + static_cast<std::size_t>(y) * ow * ch;
    for (int x = 0; x < ow; ++x) {
      const Taps& t = tx[static_cast<std::size_t>(x)];
      for (int c = 0; c < ch; ++c) {
        float s = 0.0f;
        for (std::size_t k = 0; k < t.w.size(); ++k) s += t.w[k] * row[(t.start + static_cast<int>(k)) * ch + c];
        dst[x * ch + c] = s;
      }
    }
  });
  std::vector<float> out(static_cast<std::size_t>(oh) * ow * ch, 0.0f);
  const std::size_t stride = static_cast<std::size_t>(ow) * ch;
  parallel_rows(oh, [&](int y) {
    const Taps& t = ty[static_cast<std::size_t>(y)];
    float* dst = out.data() + static_cast<std::size_t>(y) * stride;
    for (std::size_t k = 0; k < t.w.size(); ++k) {
      const float wk = t.w[k];
      const float* row = tmp.data() + static_cast<std::size_t>(t.start + static_cast<int>(k)) * stride;
      for (std::size_t i = 0; i < stride; ++i) dst[i] += wk * row[i];
    }
  });
  return out;
}

void check_dims(int w, int h) {
  if (w < 1 || h < 1) throw ConfigError("resample: degenerate output size");
}

}  // namespace

int scaled_size(int n, double factor) {
  if (!(factor > 0.0) || !std::isfinite(factor)) throw ConfigError("resample: factor must be positive");
  return std::max(1, static_cast<int>(std::lround(n * factor)));
}

RgbImage resize(const RgbImage& img, int width, int height, ResampleMode mode) {
  check_dims(width, height);
  if (img.empty()) throw ConfigError("resample: empty input");
  if (width == img.width() && height == img.height()) return img;
  const auto buf = resize_buffer(img.data().data(), img.width(), img.height(), 3, width, height, mode);
  RgbImage out(width, height, img.state());
  std::copy(buf.begin(), buf.end(), out.data().begin());
  return out;
}

ImagePlane resize(const ImagePlane& img, int width, int height, ResampleMode mode) {
  check_dims(width, height);
  if (img.empty()) throw ConfigError("resample: empty input");
  if (width == img.width() && height == img.height()) return img;
  const auto buf = resize_buffer(img.data().data(), img.width(), img.height(), 1, width, height, mode);
  ImagePlane out(width, height);
  std::copy(buf.begin(), buf.end(), out.data().begin());
  return out;
}

RgbImage resample(const RgbImage& img, double factor, ResampleMode mode) {
  return resize(img, scaled_size(img.width(), factor), scaled_size(img.height(), factor), mode);
}

ImagePlane resample(const ImagePlane& img, double factor, ResampleMode mode) {
  return resize(img, scaled_size(img.width(), factor), scaled_size(img.height(), factor), mode);
}

}  // namespace misp
