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

#include "misp/metrics.hpp"

#include <cmath>
#include <limits>
#include <vector>

#include "misp/error.hpp"
#include "misp/parallel.hpp"

namespace misp {
namespace {

// Valid-region separable correlation with the SSIM window, in double.
std::vector<double> window_filter(const std::vector<double>& src, int w, int h, const std::vector<double>& taps) {
  const int k = static_cast<int>(taps.size());
  const int ow = w - k + 1;
  const int oh = h - k + 1;
  std::vector<double> tmp(static_cast<std::size_t>(h) * ow);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < ow; ++x) {
      double s = 0.0;
      for (int i = 0; i < k; ++i) s += taps[i] * src[static_cast<std::size_t>(y) * w + x + i];
      tmp[static_cast<std::size_t>(y) * ow + x] = s;
    }
  std::vector<double> out(static_cast<std::size_t>(oh) * ow);
  for (int y = 0; y < oh; ++y)
    for (int x = 0; x < ow; ++x) {
      double s = 0.0;
      for (int i = 0; i < k; ++i) s += taps[i] * tmp[static_cast<std::size_t>(y + i) * ow + x];
      out[static_cast<std::size_t>(y) * ow + x] = s;
    }
  return out;
}

}  // namespace

double psnr(const RgbImage& a, const RgbImage& b) {
  require_same_dims(a, b, "psnr");
  const auto da = a.data();
  const auto db = b.data();
  double sse = 0.0;
  for (std::size_t i = 0; i < da.size(); ++i) {
    const double d = static_cast<double>(da[i]) - db[i];
    sse += d * d;
  }
  if (sse == 0.0) return std::numeric_limits<double>::infinity();
  return 10.0 * std::log10(1.0 / (sse / static_cast<double>(da.size())));
}

double ssim(const ImagePlane& a, const ImagePlane& b) {
  require_same_dims(a, b, "ssim");
  const int w = a.width();
  const int h = a.height();
  if (w < kSsimWindow || h < kSsimWindow) throw ConfigError("ssim: image smaller than the 11x11 window");
  const int r = kSsimWindow / 2;
  std::vector<double> taps(kSsimWindow);
  double tsum = 0.0;
  for (int i = -r; i <= r; ++i) tsum += taps[i + r] = std::exp(-0.5 * i * i / (kSsimSigma * kSsimSigma));
  for (double& t : taps) t /= tsum;
  const std::size_t n = a.size();
  std::vector<double> x(n), y(n), xx(n), yy(n), xy(n);
  for (std::size_t i = 0; i < n; ++i) {
    x[i] = a.data()[i];
    y[i] = b.data()[i];
    xx[i] = x[i] * x[i];
    yy[i] = y[i] * y[i];
    xy[i] = x[i] * y[i];
  }
  const auto mx = window_filter(x, w, h, taps);
  const auto my = window_filter(y, w, h, taps);
  const auto sxx = window_filter(xx, w, h, taps);
  const auto syy = window_filter(yy, w, h, taps);
  const auto sxy = window_filter(xy, w, h, taps);
  double total = 0.0;
  for (std::size_t i = 0; i < mx.size(); ++i) {
    const double vx = sxx[i] - mx[i] * mx[i];
    const double vy = syy[i] - my[i] * my[i];
    const double cxy = sxy[i] - mx[i] * my[i];
    total += ((2.0 * mx[i] * my[i] + kSsimC1) * (2.0 * cxy + kSsimC2)) /
             ((mx[i] * mx[i] + my[i] * my[i] + kSsimC1) * (vx + vy + kSsimC2));
  }
  return total / static_cast<double>(mx.size());
}

double ssim(const RgbImage& a, const RgbImage& b) {
  require_same_dims(a, b, "ssim");
  double s = 0.0;
  for (int c = 0; c < 3; ++c) s += ssim(a.channel(c), b.channel(c));
  return s / 3.0;
}

double delta_e76(const RgbImage& a, const RgbImage& b, LabMode mode) {
  require_same_dims(a, b, "delta_e76");
  std::vector<double> rows(static_cast<std::size_t>(a.height()), 0.0);
  parallel_rows(a.height(), [&](int y) {
    double s = 0.0;
    for (int x = 0; x < a.width(); ++x) {
      const float* p = a.pixel(x, y);
      const float* q = b.pixel(x, y);
      const auto la = linear_srgb_to_lab(p[0], p[1], p[2], mode);
      const auto lb = linear_srgb_to_lab(q[0], q[1], q[2], mode);
      s += std::sqrt((la[0] - lb[0]) * (la[0] - lb[0]) + (la[1] - lb[1]) * (la[1] - lb[1]) +
                     (la[2] - lb[2]) * (la[2] - lb[2]));
    }
    rows[static_cast<std::size_t>(y)] = s;
  });
  double total = 0.0;
  for (double v : rows) total += v;
  return total / static_cast<double>(a.pixel_count());
}

double tv_smoothness(const ImagePlane& p) {
  if (p.empty()) return 0.0;
  double gh = 0.0, gw = 0.0;
  for (int y = 0; y < p.height(); ++y)
    for (int x = 0; x < p.width(); ++x) {
      if (y + 1 < p.height()) gh += std::abs(static_cast<double>(p.at(x, y + 1)) - p.at(x, y));
      if (x + 1 < p.width()) gw += std::abs(static_cast<double>(p.at(x + 1, y)) - p.at(x, y));
    }
  return 0.5 * (gh + gw) / static_cast<double>(p.size());
}

MetricReport compare(const RgbImage& a, const RgbImage& b) {
  MetricReport r;
  r.psnr = psnr(a, b);
  r.psnr_infinite = std::isinf(r.psnr);
  r.ssim = ssim(a, b);
  r.delta_e76 = delta_e76(a, b);
  for (int c = 0; c < 3; ++c) {
    r.tv_a += tv_smoothness(a.channel(c)) / 3.0;
    r.tv_b += tv_smoothness(b.channel(c)) / 3.0;
  }
  return r;
}

}  // namespace misp
