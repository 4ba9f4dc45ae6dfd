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

#include "misp/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "misp/error.hpp"
#include "misp/parallel.hpp"

namespace misp {

RgbImage synth_scene(int width, int height, std::uint64_t seed) {
  if (width < 1 || height < 1) throw ConfigError("synth_scene: empty size");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double base[3], gx[3], gy[3];
  for (int c = 0; c < 3; ++c) {
    base[c] = 0.15 + 0.25 * u(rng);
    gx[c] = 0.3 * (u(rng) - 0.5);
    gy[c] = 0.3 * (u(rng) - 0.5);
  }
  struct Blob {
    double x, y, r, amp[3];
  };
  std::vector<Blob> blobs(4);
  for (auto& b : blobs) {
    b.x = u(rng);
    b.y = u(rng);
    b.r = 0.08 + 0.2 * u(rng);
    for (double& a : b.amp) a = 0.35 * (u(rng) - 0.3);
  }
  RgbImage img(width, height, ColorState::linear_srgb);
  parallel_rows(height, [&](int y) {
    const double ny = (y + 0.5) / height;
    for (int x = 0; x < width; ++x) {
      const double nx = (x + 0.5) / width;
      float* p = img.pixel(x, y);
      for (int c = 0; c < 3; ++c) {
        double v = base[c] + gx[c] * (nx - 0.5) + gy[c] * (ny - 0.5);
        for (const auto& b : blobs) {
          const double d2 = (nx - b.x) * (nx - b.x) + (ny - b.y) * (ny - b.y);
          v += b.amp[c] * std::exp(-d2 / (2.0 * b.r * b.r));
        }
        p[c] = static_cast<float>(std::clamp(v, 0.02, 0.85));
      }
    }
  });
  return img;
}

CameraMetadata synth_metadata(Cfa cfa) {
  CameraMetadata m;
  m.black_level = 512.0;
  m.white_level = 16383.0;
  m.cfa = cfa;
  m.wb_gains = {2.0, 1.6};
  m.iso = 200.0;
  CcmCalibration a, d;
  a.cct = 2856.0;
  a.matrix.m = {1.90, -0.70, -0.20, -0.25, 1.55, -0.30, 0.10, -0.85, 1.75};
  d.cct = 6504.0;
  d.matrix.m = {1.60, -0.45, -0.15, -0.20, 1.45, -0.25, 0.05, -0.50, 1.45};
  m.ccm_calibrations = {a, d};
  return m;
}

RawBundle synth_bundle(const RgbImage& scene, const CameraMetadata& meta) {
  meta.validate();
  const int w = scene.width();
  const int h = scene.height();
  if (w % 2 || h % 2) throw ConfigError("synth_bundle: dimensions must be even");
  const Mat3 fwd = as_shot_ccm(meta) * Mat3::diag(meta.wb_gains.r, 1.0, meta.wb_gains.b);
  const Mat3 inv = fwd.inverse();
  RawBundle b;
  b.meta = meta;
  b.mosaic = ImagePlane(w, h);
  const double range = meta.white_level - meta.black_level;
  parallel_rows(h, [&](int y) {
    for (int x = 0; x < w; ++x) {
      const float* p = scene.pixel(x, y);
      const int c = cfa_channel(meta.cfa, x, y);
      const double cam = inv(c, 0) * p[0] + inv(c, 1) * p[1] + inv(c, 2) * p[2];
      const double counts = meta.black_level + std::clamp(cam, 0.0, 1.0) * range;
      b.mosaic.at(x, y) = static_cast<float>(std::lround(counts));
    }
  });
  return b;
}

}  // namespace misp
