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

#include "misp/filter.hpp"

#include <cmath>

#include "misp/error.hpp"
#include "misp/parallel.hpp"

namespace misp {

std::vector<float> gaussian_taps(double sigma, int radius) {
  if (!(sigma > 0.0)) throw ConfigError("gaussian: sigma must be positive");
  std::vector<double> w(static_cast<std::size_t>(2 * radius + 1));
  double total = 0.0;
  for (int i = -radius; i <= radius; ++i) {
    w[static_cast<std::size_t>(i + radius)] = std::exp(-0.5 * i * i / (sigma * sigma));
    total += w[static_cast<std::size_t>(i + radius)];
  }
  std::vector<float> out;
  out.reserve(w.size());
  for (double v : w) out.push_back(static_cast<float>(v / total));
  return out;
}

ImagePlane convolve_separable(const ImagePlane& p, const std::vector<float>& taps) {
  const int w = p.width();
  const int h = p.height();
  const int r = static_cast<int>(taps.size() / 2);
  ImagePlane tmp(w, h);
  parallel_rows(h, [&](int y) {
    const auto src = p.row(y);
    auto dst = tmp.row(y);
    for (int x = 0; x < w; ++x) {
      float s = 0.0f;
      for (int k = -r; k <= r; ++k) s += taps[static_cast<std::size_t>(k + r)] * src[reflect_index(x + k, w)];
      dst[x] = s;
    }
  });
  ImagePlane out(w, h);
  parallel_rows(h, [&](int y) {
    auto dst = out.row(y);
    for (int k = -r; k <= r; ++k) {
      const float wk = taps[static_cast<std::size_t>(k + r)];
      const auto src = tmp.row(reflect_index(y + k, h));
      for (int x = 0; x < w; ++x) dst[x] += wk * src[x];
    }
  });
  return out;
}

ImagePlane box_mean_reflect(const ImagePlane& p, int radius) {
  std::vector<float> taps(static_cast<std::size_t>(2 * radius + 1), 1.0f / static_cast<float>(2 * radius + 1));
  return convolve_separable(p, taps);
}

ImagePlane gaussian_blur(const ImagePlane& p, double sigma, int radius) {
  if (radius < 0) radius = static_cast<int>(std::ceil(3.0 * sigma));
  return convolve_separable(p, gaussian_taps(sigma, radius));
}

}  // namespace misp
