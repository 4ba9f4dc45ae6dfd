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

#include "misp/raw.hpp"

#include <algorithm>
#include <cmath>

#include "misp/error.hpp"
#include "misp/parallel.hpp"

namespace misp {
namespace {

// Offsets of the red site within the 2x2 cell for each layout.
struct RedSite {
  int x, y;
};

RedSite red_site(Cfa cfa) {
  switch (cfa) {
    case Cfa::RGGB: return {0, 0};
    case Cfa::BGGR: return {1, 1};
    case Cfa::GRBG: return {1, 0};
    case Cfa::GBRG: return {0, 1};
  }
  return {0, 0};
}

// Bilinear demosaic of rows [y0, y1) and columns [x0, x1) of `src` (w x h),
// writing into `dst` at the same coordinates. Border taps reflect within src.
void demosaic_rows(const float* src, int w, int h, Cfa cfa, int x0, int x1, int y0, int y1, float* dst) {
  const RedSite rs = red_site(cfa);
  auto at = [&](int x, int y) { return src[static_cast<std::size_t>(reflect_index(y, h)) * w + reflect_index(x, w)]; };
  for (int y = y0; y < y1; ++y) {
    for (int x = x0; x < x1; ++x) {
      const bool xr = ((x - rs.x) & 1) == 0;
      const bool yr = ((y - rs.y) & 1) == 0;
      const float c = at(x, y);
      const float horiz = 0.5f * (at(x - 1, y) + at(x + 1, y));
      const float vert = 0.5f * (at(x, y - 1) + at(x, y + 1));
      const float cross = 0.25f * (at(x - 1, y) + at(x + 1, y) + at(x, y - 1) + at(x, y + 1));
      const float diag = 0.25f * (at(x - 1, y - 1) + at(x + 1, y - 1) + at(x - 1, y + 1) + at(x + 1, y + 1));
      float r, g, b;
      if (xr && yr) {  // red site
        r = c;
        g = cross;
        b = diag;
      } else if (!xr && !yr) {  // blue site
        r = diag;
        g = cross;
        b = c;
      } else if (yr) {  // green on a red row
        r = horiz;
        g = c;
        b = vert;
      } else {  // green on a blue row
        r = vert;
        g = c;
        b = horiz;
      }
      float* p = dst + 3 * (static_cast<std::size_t>(y) * w + x);
      p[0] = r;
      p[1] = g;
      p[2] = b;
    }
  }
}

void check_even(const ImagePlane& mosaic) {
  if (mosaic.empty()) throw ConfigError("demosaic: empty mosaic");
  if (mosaic.width() % 2 != 0 || mosaic.height() % 2 != 0)
    throw ConfigError("demosaic: mosaic dimensions must be even, got " + std::to_string(mosaic.width()) + "x" +
                      std::to_string(mosaic.height()));
}

}  // namespace

std::string_view to_string(Cfa cfa) {
  switch (cfa) {
    case Cfa::RGGB: return "RGGB";
    case Cfa::BGGR: return "BGGR";
    case Cfa::GRBG: return "GRBG";
    case Cfa::GBRG: return "GBRG";
  }
  return "RGGB";
}

Cfa parse_cfa(std::string_view name) {
  for (Cfa c : {Cfa::RGGB, Cfa::BGGR, Cfa::GRBG, Cfa::GBRG})
    if (to_string(c) == name) return c;
  throw SchemaError("cfa", "unknown CFA layout '" + std::string(name) + "'");
}

int cfa_channel(Cfa cfa, int x, int y) noexcept {
  const RedSite rs = red_site(cfa);
  const bool xr = ((x - rs.x) & 1) == 0;
  const bool yr = ((y - rs.y) & 1) == 0;
  if (xr && yr) return 0;
  if (!xr && !yr) return 2;
  return 1;
}

void CameraMetadata::validate() const {
  if (!std::isfinite(black_level) || black_level < 0.0) throw SchemaError("black_level", "must be finite and >= 0");
  if (!std::isfinite(white_level) || white_level <= black_level)
    throw SchemaError("white_level", "must exceed black_level");
  if (!(wb_gains.r > 0.0) || !(wb_gains.b > 0.0) || !std::isfinite(wb_gains.r) || !std::isfinite(wb_gains.b))
    throw SchemaError("wb_gains", "gains must be positive and finite");
  if (ccm_calibrations.empty()) throw SchemaError("ccm_calibrations", "at least one calibration is required");
  for (const auto& c : ccm_calibrations) {
    if (!(c.cct > 0.0) || !std::isfinite(c.cct)) throw SchemaError("ccm_calibrations", "cct must be positive");
    if (!c.matrix.finite()) throw SchemaError("ccm_calibrations", "matrix entries must be finite");
  }
  if (!(iso > 0.0) || !std::isfinite(iso)) throw SchemaError("iso", "must be positive");
}

ImagePlane normalize_black_level(const ImagePlane& mosaic, const CameraMetadata& meta) {
  if (!(meta.white_level > meta.black_level)) throw ConfigError("white_level must exceed black_level");
  const float black = static_cast<float>(meta.black_level);
  const float inv = static_cast<float>(1.0 / (meta.white_level - meta.black_level));
  ImagePlane out(mosaic.width(), mosaic.height());
  parallel_rows(mosaic.height(), [&](int y) {
    const auto src = mosaic.row(y);
    auto dst = out.row(y);
    for (int x = 0; x < mosaic.width(); ++x) dst[x] = clamp01((src[x] - black) * inv);
  });
  return out;
}

ImagePlane normalize_black_level(const RawBundle& bundle) { return normalize_black_level(bundle.mosaic, bundle.meta); }

ImagePlane denormalize_black_level(const ImagePlane& normalized, const CameraMetadata& meta) {
  if (!(meta.white_level > meta.black_level)) throw ConfigError("white_level must exceed black_level");
  const float black = static_cast<float>(meta.black_level);
  const float range = static_cast<float>(meta.white_level - meta.black_level);
  ImagePlane out(normalized.width(), normalized.height());
  auto src = normalized.data();
  auto dst = out.data();
  for (std::size_t i = 0; i < src.size(); ++i) dst[i] = src[i] * range + black;
  return out;
}

RgbImage demosaic(const ImagePlane& mosaic, Cfa cfa) {
  check_even(mosaic);
  const int w = mosaic.width();
  const int h = mosaic.height();
  RgbImage out(w, h, ColorState::camera_raw);
  parallel_rows(h, [&](int y) { demosaic_rows(mosaic.data().data(), w, h, cfa, 0, w, y, y + 1, out.data().data()); });
  return out;
}

RgbImage demosaic_tiled(const ImagePlane& mosaic, Cfa cfa, TileConfig cfg) {
  check_even(mosaic);
  if (cfg.tile <= 0 || cfg.tile % 2 != 0 || cfg.overlap < 2 || cfg.overlap % 2 != 0)
    throw ConfigError("demosaic_tiled: tile and overlap must be even, overlap >= 2");
  const int w = mosaic.width();
  const int h = mosaic.height();
  const int tx = (w + cfg.tile - 1) / cfg.tile;
  const int ty = (h + cfg.tile - 1) / cfg.tile;
  RgbImage out(w, h, ColorState::camera_raw);
  parallel_rows(
      tx * ty,
      [&](int t) {
        const int cx0 = (t % tx) * cfg.tile;
        const int cy0 = (t / tx) * cfg.tile;
        const int cx1 = std::min(w, cx0 + cfg.tile);
        const int cy1 = std::min(h, cy0 + cfg.tile);
        // Window origin stays even so the local CFA phase matches the global one.
        const int wx0 = std::max(0, cx0 - cfg.overlap);
        const int wy0 = std::max(0, cy0 - cfg.overlap);
        const int wx1 = std::min(w, cx1 + cfg.overlap);
        const int wy1 = std::min(h, cy1 + cfg.overlap);
        const int ww = wx1 - wx0;
        const int wh = wy1 - wy0;
        std::vector<float> local(static_cast<std::size_t>(ww) * wh);
        for (int y = 0; y < wh; ++y) {
          const auto src = mosaic.row(wy0 + y);
          std::copy(src.begin() + wx0, src.begin() + wx1, local.begin() + static_cast<std::ptrdiff_t>(y) * ww);
        }
        std::vector<float> rgb(local.size() * 3);
        demosaic_rows(local.data(), ww, wh, cfa, cx0 - wx0, cx1 - wx0, cy0 - wy0, cy1 - wy0, rgb.data());
        for (int y = cy0; y < cy1; ++y) {
          const float* src = rgb.data() + 3 * (static_cast<std::size_t>(y - wy0) * ww + (cx0 - wx0));
          std::copy(src, src + 3 * (cx1 - cx0), out.pixel(cx0, y));
        }
      },
      1);
  return out;
}

RgbImage apply_wb_ccm(const RgbImage& img, const WbGains& gains, const Mat3& ccm) {
  require_state(img, ColorState::camera_raw, "apply_wb_ccm");
  if (!ccm.finite() || !std::isfinite(gains.r) || !std::isfinite(gains.b))
    throw NumericError("apply_wb_ccm: non-finite matrix or gains");
  float m[9];
  for (int r = 0; r < 3; ++r) {
    m[3 * r + 0] = static_cast<float>(ccm(r, 0) * gains.r);
    m[3 * r + 1] = static_cast<float>(ccm(r, 1));
    m[3 * r + 2] = static_cast<float>(ccm(r, 2) * gains.b);
  }
  RgbImage out(img.width(), img.height(), ColorState::linear_srgb);
  parallel_rows(img.height(), [&](int y) {
    const float* s = img.pixel(0, y);
    float* d = out.pixel(0, y);
    for (int x = 0; x < img.width(); ++x, s += 3, d += 3) {
      for (int r = 0; r < 3; ++r) d[r] = clamp01(m[3 * r] * s[0] + m[3 * r + 1] * s[1] + m[3 * r + 2] * s[2]);
    }
  });
  return out;
}

Mat3 as_shot_ccm(const CameraMetadata& meta) {
  if (meta.ccm_calibrations.empty()) throw ConfigError("as_shot_ccm: no calibrations");
  if (meta.ccm_calibrations.size() == 1) return meta.ccm_calibrations.front().matrix;
  return interpolate_ccm(meta, cct_tint_from_gains(meta, meta.wb_gains).cct);
}

RgbImage apply_wb_ccm(const RgbImage& img, const CameraMetadata& meta) {
  return apply_wb_ccm(img, meta.wb_gains, as_shot_ccm(meta));
}

Mat3 interpolate_ccm(const CameraMetadata& meta, double target_cct) {
  if (meta.ccm_calibrations.empty()) throw ConfigError("interpolate_ccm: no calibrations");
  auto cals = meta.ccm_calibrations;
  std::sort(cals.begin(), cals.end(), [](const auto& a, const auto& b) { return a.cct < b.cct; });
  if (cals.size() == 1 || target_cct <= cals.front().cct) return cals.front().matrix;
  if (target_cct >= cals.back().cct) return cals.back().matrix;
  std::size_t hi = 1;
  while (cals[hi].cct < target_cct) ++hi;
  const auto& lo_cal = cals[hi - 1];
  const auto& hi_cal = cals[hi];
  if (target_cct == hi_cal.cct) return hi_cal.matrix;
  const double w = (1.0 / target_cct - 1.0 / hi_cal.cct) / (1.0 / lo_cal.cct - 1.0 / hi_cal.cct);
  return lo_cal.matrix * w + hi_cal.matrix * (1.0 - w);
}

}  // namespace misp
