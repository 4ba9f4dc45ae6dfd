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

#include <algorithm>
#include <cmath>

#include "misp/bundleio.hpp"
#include "misp/error.hpp"

namespace misp {
namespace {

constexpr int kPresetNg = 8;
constexpr int kPresetNc = 8;
constexpr int kPresetNh = 24;

struct LtmShape {
  float a_shadow, a_high;  // a at the darkest and brightest guidance slice
  float g_shadow, g_high;  // local gain
  float w_shadow, w_high;  // pre-sigmoid blend weight
};

LtmGrid make_ltm(const LtmShape& s) {
  LtmGrid g = LtmGrid::constant(kPresetNg, kPresetNc, 1.0f, 1.0f, 1.0f, 1.0f, -20.0f);
  for (int gy = 0; gy < kPresetNg; ++gy)
    for (int gx = 0; gx < kPresetNg; ++gx)
      for (int z = 0; z < kPresetNc; ++z) {
        const float t = static_cast<float>(z) / (kPresetNc - 1);
        g.at(gx, gy, z, kSlotA) = s.a_shadow + t * (s.a_high - s.a_shadow);
        g.at(gx, gy, z, kSlotB) = 1.0f;
        g.at(gx, gy, z, kSlotC) = 1.0f;
        g.at(gx, gy, z, kSlotG) = s.g_shadow + t * (s.g_high - s.g_shadow);
        g.at(gx, gy, z, kSlotW) = s.w_shadow + t * (s.w_high - s.w_shadow);
      }
  return g;
}

/// Target = saturation * (cb, cr) + shift, kept inside the lattice range.
ChromaLut make_chroma(float saturation, float cb_shift, float cr_shift) {
  ChromaLut lut = ChromaLut::identity(kPresetNh);
  for (int i = 0; i < kPresetNh; ++i)
    for (int j = 0; j < kPresetNh; ++j) {
      const float cb = ChromaLut::center(i, kPresetNh);
      const float cr = ChromaLut::center(j, kPresetNh);
      const std::size_t k = (static_cast<std::size_t>(i) * kPresetNh + j) * 2;
      lut.values[k] = std::clamp(saturation * cb + cb_shift, -0.5f, 0.5f);
      lut.values[k + 1] = std::clamp(saturation * cr + cr_shift, -0.5f, 0.5f);
    }
  return lut;
}

/// Split toning: shadows pulled toward `shadow_tint`, highlights toward
/// `high_tint`, black point lifted by `lift`.
RgbLut3d make_lut3d(const float shadow_tint[3], const float high_tint[3], float amount, float lift) {
  RgbLut3d lut = RgbLut3d::identity();
  const int n = RgbLut3d::kSize;
  for (int r = 0; r < n; ++r)
    for (int g = 0; g < n; ++g)
      for (int b = 0; b < n; ++b) {
        const float rgb[3] = {r / float(n - 1), g / float(n - 1), b / float(n - 1)};
        const float y = 0.2126f * rgb[0] + 0.7152f * rgb[1] + 0.0722f * rgb[2];
        const float ws = amount * (1.0f - y) * (1.0f - y);
        const float wh = amount * y * y;
        const std::size_t k = RgbLut3d::index(r, g, b);
        for (int c = 0; c < 3; ++c) {
          float v = rgb[c] + ws * (shadow_tint[c] - rgb[c]) * 0.5f + wh * (high_tint[c] - rgb[c]) * 0.5f;
          v = lift + (1.0f - lift) * v;
          lut.values[k + c] = std::clamp(v, 0.0f, 1.0f);
        }
      }
  return lut;
}

}  // namespace

std::vector<std::string> builtin_style_names() {
  return {"identity", "default", "warm", "moody", "cinematic", "greenish", "retro"};
}

StyleParams make_builtin_style(const std::string& name) {
  StyleParams s;
  s.name = name;
  if (name == "identity") return s;
  if (name == "default") {
    s.d_g = 1.1;
    s.gtm = {1.1, 1.0, 0.9};
    s.ltm = make_ltm({1.0f, 1.05f, 1.15f, 1.0f, -1.0f, -2.5f});
    s.chroma = make_chroma(1.1f, 0.0f, 0.0f);
    s.gamma = 2.2;
  } else if (name == "warm") {
    s.d_g = 1.15;
    s.gtm = {1.05, 1.0, 0.85};
    s.ltm = make_ltm({1.0f, 1.1f, 1.2f, 1.0f, -0.8f, -2.0f});
    s.chroma = make_chroma(1.08f, -0.03f, 0.035f);
    s.gamma = 2.2;
  } else if (name == "moody") {
    s.d_g = 0.9;
    s.gtm = {1.35, 1.1, 1.1};
    s.ltm = make_ltm({1.2f, 1.3f, 0.95f, 1.0f, -0.5f, -1.5f});
    s.chroma = make_chroma(0.8f, 0.01f, -0.005f);
    s.gamma = 2.4;
  } else if (name == "cinematic") {
    s.d_g = 1.0;
    s.gtm = {1.25, 1.05, 1.0};
    s.ltm = make_ltm({1.1f, 1.2f, 1.1f, 1.0f, -0.6f, -1.8f});
    s.chroma = make_chroma(0.95f, 0.0f, 0.0f);
    const float teal[3] = {0.1f, 0.45f, 0.5f};
    const float orange[3] = {1.0f, 0.7f, 0.45f};
    s.lut3d = make_lut3d(teal, orange, 0.6f, 0.0f);
    s.gamma = 2.3;
  } else if (name == "greenish") {
    s.d_g = 1.05;
    s.gtm = {1.1, 1.0, 0.95};
    s.ltm = make_ltm({1.0f, 1.05f, 1.1f, 1.0f, -1.0f, -2.5f});
    s.chroma = make_chroma(1.0f, -0.015f, -0.03f);
    s.gamma = 2.2;
  } else if (name == "retro") {
    s.d_g = 1.05;
    s.gtm = {0.9, 1.0, 1.0};
    s.ltm = make_ltm({1.0f, 0.95f, 1.05f, 1.0f, -1.5f, -2.0f});
    s.chroma = make_chroma(0.85f, -0.02f, 0.02f);
    const float shadow[3] = {0.25f, 0.2f, 0.3f};
    const float high[3] = {1.0f, 0.9f, 0.7f};
    s.lut3d = make_lut3d(shadow, high, 0.4f, 0.06f);
    s.gamma = 2.0;
  } else {
    throw ConfigError("unknown style: " + name);
  }
  return s;
}

}  // namespace misp
