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

#include "misp/photofinish.hpp"

#include <algorithm>
#include <cmath>

#include "misp/color.hpp"
#include "misp/error.hpp"
#include "misp/filter.hpp"
#include "misp/parallel.hpp"
#include "misp/refine.hpp"
#include "misp/resample.hpp"
#include "misp/simd.hpp"

namespace misp {
namespace {

template <class Fn>
RgbImage map_channels(const RgbImage& img, ColorState state, Fn fn) {
  RgbImage out(img.width(), img.height(), state);
  parallel_rows(img.height(), [&](int y) {
    const auto src = img.row(y);
    auto dst = out.row(y);
    for (std::size_t i = 0; i < src.size(); ++i) dst[i] = fn(src[i]);
  });
  return out;
}

float lerpf(float a, float b, float t) noexcept { return a + t * (b - a); }

void check_finite_range(double v, double lo, double hi, const char* field) {
  if (!std::isfinite(v) || v < lo || v > hi)
    throw SchemaError(field, "value " + std::to_string(v) + " outside [" + std::to_string(lo) + ", " +
                                 std::to_string(hi) + "]");
}

}  // namespace

float tm_curve(float x, float a, float b, float c) noexcept {
  if (!(x > 0.0f)) return 0.0f;
  if (x >= 1.0f) return 1.0f;
  if (a == 1.0f && b == 1.0f && c == 1.0f) return x;
  const float xa = std::pow(x, a);
  const float d = xa + std::pow(c * (1.0f - x), b);
  return d > 0.0f ? xa / d : 1.0f;
}

LtmGrid LtmGrid::constant(int n_g, int n_c, float a, float b, float c, float g, float w_pre) {
  LtmGrid grid;
  grid.n_g = n_g;
  grid.n_c = n_c;
  grid.values.resize(static_cast<std::size_t>(n_g) * n_g * n_c * kLtmSlots);
  for (std::size_t i = 0; i < grid.values.size(); i += kLtmSlots) {
    grid.values[i + kSlotA] = a;
    grid.values[i + kSlotB] = b;
    grid.values[i + kSlotC] = c;
    grid.values[i + kSlotG] = g;
    grid.values[i + kSlotW] = w_pre;
  }
  return grid;
}

ChromaLut ChromaLut::identity(int n_h) {
  ChromaLut lut;
  lut.n_h = n_h;
  lut.values.resize(static_cast<std::size_t>(n_h) * n_h * 2);
  for (int i = 0; i < n_h; ++i)
    for (int j = 0; j < n_h; ++j) {
      lut.values[(static_cast<std::size_t>(i) * n_h + j) * 2] = center(i, n_h);
      lut.values[(static_cast<std::size_t>(i) * n_h + j) * 2 + 1] = center(j, n_h);
    }
  return lut;
}

RgbLut3d RgbLut3d::identity() {
  RgbLut3d lut;
  lut.values.resize(static_cast<std::size_t>(kSize) * kSize * kSize * 3);
  for (int r = 0; r < kSize; ++r)
    for (int g = 0; g < kSize; ++g)
      for (int b = 0; b < kSize; ++b) {
        const std::size_t i = index(r, g, b);
        lut.values[i] = static_cast<float>(r) / (kSize - 1);
        lut.values[i + 1] = static_cast<float>(g) / (kSize - 1);
        lut.values[i + 2] = static_cast<float>(b) / (kSize - 1);
      }
  return lut;
}

void StyleParams::validate() const {
  check_finite_range(d_g, kMinGain, kMaxGain, "d_g");
  check_finite_range(gamma, kMinGamma, kMaxGamma, "gamma");
  for (double v : {gtm.a, gtm.b, gtm.c})
    if (!(v > 0.0) || !std::isfinite(v)) throw SchemaError("gtm", "a, b, c must be positive");
  if (ltm.n_g < 1 || ltm.n_c < 2) throw SchemaError("ltm", "n_g must be >= 1 and n_c >= 2");
  if (ltm.values.size() != static_cast<std::size_t>(ltm.n_g) * ltm.n_g * ltm.n_c * kLtmSlots)
    throw SchemaError("ltm.values", "length does not match n_g * n_g * n_c * 5");
  for (std::size_t i = 0; i < ltm.values.size(); ++i) {
    const float v = ltm.values[i];
    if (!std::isfinite(v)) throw SchemaError("ltm.values", "non-finite entry");
    if (i % kLtmSlots != kSlotW && v < 0.0f) throw SchemaError("ltm.values", "A, B, C, G must be non-negative");
  }
  if (chroma.n_h < 2) throw SchemaError("chroma", "n_h must be >= 2");
  if (chroma.values.size() != static_cast<std::size_t>(chroma.n_h) * chroma.n_h * 2)
    throw SchemaError("chroma.values", "length does not match n_h * n_h * 2");
  for (float v : chroma.values)
    if (!std::isfinite(v)) throw SchemaError("chroma.values", "non-finite entry");
  if (lut3d) {
    if (lut3d->values.size() != static_cast<std::size_t>(RgbLut3d::kSize) * RgbLut3d::kSize * RgbLut3d::kSize * 3)
      throw SchemaError("lut3d.values", "length does not match 11 * 11 * 11 * 3");
    for (float v : lut3d->values)
      if (!(v >= 0.0f && v <= 1.0f)) throw SchemaError("lut3d.values", "entries must lie in [0, 1]");
  }
}

RgbImage apply_gain(const RgbImage& img, double d_g) {
  if (!std::isfinite(d_g) || d_g < kMinGain || d_g > kMaxGain)
    throw ConfigError("apply_gain: d_g outside [0.25, 4]");
  RgbImage out(img.width(), img.height(), img.state());
  const auto& k = simd::kernels();
  k.scale_clamp(img.data().data(), out.data().data(), img.data().size(), static_cast<float>(d_g));
  return out;
}

RgbImage apply_gtm(const RgbImage& img, const GtmParams& p) {
  const float a = static_cast<float>(p.a), b = static_cast<float>(p.b), c = static_cast<float>(p.c);
  return map_channels(img, ColorState::pre_gamma, [=](float v) { return tm_curve(v, a, b, c); });
}

ImagePlane guidance_map(const RgbImage& gain_img) {
  ImagePlane smooth = box_mean_reflect(luma709(gain_img), 2);
  for (float& v : smooth.data()) v = std::clamp(2.0f * v - 1.0f, -1.0f, 1.0f);
  return smooth;
}

LtmPlanes slice_ltm_grid(const LtmGrid& grid, const ImagePlane& guidance) {
  const int w = guidance.width();
  const int h = guidance.height();
  LtmPlanes out{ImagePlane(w, h), ImagePlane(w, h), ImagePlane(w, h), ImagePlane(w, h), ImagePlane(w, h)};
  ImagePlane* planes[kLtmSlots] = {&out.A, &out.B, &out.C, &out.G, &out.W};
  const float ng = static_cast<float>(grid.n_g);
  const float zmax = static_cast<float>(grid.n_c - 1);
  parallel_rows(h, [&](int y) {
    const float fy = std::clamp((y + 0.5f) / h * ng - 0.5f, 0.0f, ng - 1.0f);
    const int y0 = static_cast<int>(fy);
    const int y1 = std::min(y0 + 1, grid.n_g - 1);
    const float ty = fy - y0;
    for (int x = 0; x < w; ++x) {
      const float fx = std::clamp((x + 0.5f) / w * ng - 0.5f, 0.0f, ng - 1.0f);
      const int x0 = static_cast<int>(fx);
      const int x1 = std::min(x0 + 1, grid.n_g - 1);
      const float tx = fx - x0;
      const float fz = std::clamp((guidance.at(x, y) + 1.0f) * 0.5f * zmax, 0.0f, zmax);
      const int z0 = std::min(static_cast<int>(fz), grid.n_c - 2);
      const float tz = fz - z0;
      for (int s = 0; s < kLtmSlots; ++s) {
        auto corner = [&](int gx, int gy) {
          return lerpf(grid.at(gx, gy, z0, s), grid.at(gx, gy, z0 + 1, s), tz);
        };
        const float top = lerpf(corner(x0, y0), corner(x1, y0), tx);
        const float bot = lerpf(corner(x0, y1), corner(x1, y1), tx);
        float v = lerpf(top, bot, ty);
        if (s == kSlotW) v = sigmoid(v);
        planes[s]->at(x, y) = v;
      }
    }
  });
  return out;
}

RgbImage apply_ltm(const RgbImage& gain_img, const RgbImage& gtm_img, const LtmPlanes& q) {
  require_same_dims(gain_img, gtm_img, "apply_ltm");
  for (const ImagePlane* p : {&q.A, &q.B, &q.C, &q.G, &q.W})
    if (p->width() != gain_img.width() || p->height() != gain_img.height())
      throw ConfigError("apply_ltm: coefficient planes do not match the image size");
  RgbImage out(gain_img.width(), gain_img.height(), ColorState::pre_gamma);
  parallel_rows(gain_img.height(), [&](int y) {
    for (int x = 0; x < gain_img.width(); ++x) {
      const float a = q.A.at(x, y), b = q.B.at(x, y), c = q.C.at(x, y), g = q.G.at(x, y), w = q.W.at(x, y);
      const float* gi = gain_img.pixel(x, y);
      const float* gt = gtm_img.pixel(x, y);
      float* o = out.pixel(x, y);
      for (int ch = 0; ch < 3; ++ch) {
        const float local = tm_curve(clamp01(gi[ch] * g), a, b, c);
        o[ch] = clamp01((1.0f - w) * gt[ch] + w * local);
      }
    }
  });
  return out;
}

RgbImage apply_chroma_lut(const RgbImage& img, const ChromaLut& lut) {
  const int n = lut.n_h;
  if (n < 2 || lut.values.size() != static_cast<std::size_t>(n) * n * 2)
    throw ConfigError("apply_chroma_lut: malformed table");
  const float fmax = static_cast<float>(n - 1);
  RgbImage out(img.width(), img.height(), ColorState::pre_gamma);
  parallel_rows(img.height(), [&](int y) {
    for (int x = 0; x < img.width(); ++x) {
      const float* p = img.pixel(x, y);
      const auto ycc = rgb_to_ycbcr(p[0], p[1], p[2]);
      const float fi = std::clamp((ycc[1] + 0.5f) * fmax, 0.0f, fmax);
      const float fj = std::clamp((ycc[2] + 0.5f) * fmax, 0.0f, fmax);
      const int i0 = std::min(static_cast<int>(fi), n - 2);
      const int j0 = std::min(static_cast<int>(fj), n - 2);
      const float ti = fi - i0, tj = fj - j0;
      float res[2];
      for (int k = 0; k < 2; ++k) {
        auto v = [&](int i, int j) { return lut.values[(static_cast<std::size_t>(i) * n + j) * 2 + k]; };
        const float lo = lerpf(v(i0, j0), v(i0, j0 + 1), tj);
        const float hi = lerpf(v(i0 + 1, j0), v(i0 + 1, j0 + 1), tj);
        res[k] = std::clamp(lerpf(lo, hi, ti), -0.5f, 0.5f);
      }
      const auto rgb = ycbcr_to_rgb(ycc[0], res[0], res[1]);
      float* o = out.pixel(x, y);
      for (int c = 0; c < 3; ++c) o[c] = clamp01(rgb[c]);
    }
  });
  return out;
}

RgbImage apply_3d_lut(const RgbImage& img, const RgbLut3d& lut) {
  constexpr int n = RgbLut3d::kSize;
  if (lut.values.size() != static_cast<std::size_t>(n) * n * n * 3) throw ConfigError("apply_3d_lut: malformed table");
  constexpr float fmax = static_cast<float>(n - 1);
  RgbImage out(img.width(), img.height(), ColorState::pre_gamma);
  parallel_rows(img.height(), [&](int y) {
    for (int x = 0; x < img.width(); ++x) {
      const float* p = img.pixel(x, y);
      int i0[3];
      float t[3];
      for (int c = 0; c < 3; ++c) {
        const float f = std::clamp(p[c] * fmax, 0.0f, fmax);
        i0[c] = std::min(static_cast<int>(f), n - 2);
        t[c] = f - i0[c];
      }
      float* o = out.pixel(x, y);
      for (int c = 0; c < 3; ++c) {
        auto v = [&](int dr, int dg, int db) { return lut.values[RgbLut3d::index(i0[0] + dr, i0[1] + dg, i0[2] + db) + c]; };
        const float c00 = lerpf(v(0, 0, 0), v(0, 0, 1), t[2]);
        const float c01 = lerpf(v(0, 1, 0), v(0, 1, 1), t[2]);
        const float c10 = lerpf(v(1, 0, 0), v(1, 0, 1), t[2]);
        const float c11 = lerpf(v(1, 1, 0), v(1, 1, 1), t[2]);
        const float c0 = lerpf(c00, c01, t[1]);
        const float c1 = lerpf(c10, c11, t[1]);
        o[c] = clamp01(lerpf(c0, c1, t[0]));
      }
    }
  });
  return out;
}

RgbImage apply_gamma(const RgbImage& img, double gamma) {
  if (!(gamma > 0.0) || !std::isfinite(gamma)) throw ConfigError("apply_gamma: gamma must be positive");
  if (gamma == 1.0) return map_channels(img, ColorState::display, [](float v) { return clamp01(v); });
  const float inv = static_cast<float>(1.0 / gamma);
  return map_channels(img, ColorState::display, [=](float v) { return clamp01(std::pow(clamp01(v), inv)); });
}

std::vector<double> soft_chroma_histogram(const RgbImage& img, const HistogramConfig& cfg) {
  if (img.empty()) throw ConfigError("soft_chroma_histogram: empty image");
  if (cfg.n_h < 2 || !(cfg.sigma > 0.0)) throw ConfigError("soft_chroma_histogram: bad configuration");
  const int n = cfg.n_h;
  std::vector<double> centers(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) centers[i] = cfg.v_min + static_cast<double>(i) / (n - 1) * (cfg.v_max - cfg.v_min);
  const double k = -1.0 / (2.0 * cfg.sigma * cfg.sigma);
  // Rows accumulate into their own slot so the final sum is order independent.
  std::vector<std::vector<double>> rows(static_cast<std::size_t>(img.height()));
  parallel_rows(img.height(), [&](int y) {
    std::vector<double> acc(static_cast<std::size_t>(n) * n, 0.0);
    std::vector<double> wb(static_cast<std::size_t>(n)), wr(static_cast<std::size_t>(n));
    for (int x = 0; x < img.width(); ++x) {
      const float* p = img.pixel(x, y);
      const auto ycc = rgb_to_ycbcr(p[0], p[1], p[2]);
      for (int i = 0; i < n; ++i) {
        const double db = ycc[1] - centers[i];
        const double dr = ycc[2] - centers[i];
        wb[i] = std::exp(k * db * db);
        wr[i] = std::exp(k * dr * dr);
      }
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) acc[static_cast<std::size_t>(i) * n + j] += wb[i] * wr[j];
    }
    rows[static_cast<std::size_t>(y)] = std::move(acc);
  });
  std::vector<double> hist(static_cast<std::size_t>(n) * n, 0.0);
  for (const auto& r : rows)
    for (std::size_t i = 0; i < hist.size(); ++i) hist[i] += r[i];
  double total = 0.0;
  for (double v : hist) total += v;
  for (double& v : hist) v = std::sqrt(v / (total + cfg.eps));
  return hist;
}

LtmGrid resample_grid(const LtmGrid& g, int n_g, int n_c) {
  if (g.n_g == n_g && g.n_c == n_c) return g;
  if (n_g < 1 || n_c < 2) throw ConfigError("resample_grid: n_g must be >= 1 and n_c >= 2");
  LtmGrid out = LtmGrid::constant(n_g, n_c, 0, 0, 0, 0, 0);
  auto axis = [](int i, int n_out, int n_in, int& i0, int& i1, float& t) {
    const float f = std::clamp((i + 0.5f) / n_out * n_in - 0.5f, 0.0f, static_cast<float>(n_in - 1));
    i0 = static_cast<int>(f);
    i1 = std::min(i0 + 1, n_in - 1);
    t = f - i0;
  };
  for (int gy = 0; gy < n_g; ++gy)
    for (int gx = 0; gx < n_g; ++gx) {
      int x0, x1, y0, y1;
      float tx, ty;
      axis(gx, n_g, g.n_g, x0, x1, tx);
      axis(gy, n_g, g.n_g, y0, y1, ty);
      for (int z = 0; z < n_c; ++z) {
        const float fz = static_cast<float>(z) / (n_c - 1) * (g.n_c - 1);
        const int z0 = std::min(static_cast<int>(fz), g.n_c - 2);
        const float tz = fz - z0;
        for (int s = 0; s < kLtmSlots; ++s) {
          auto c = [&](int x, int y) { return lerpf(g.at(x, y, z0, s), g.at(x, y, z0 + 1, s), tz); };
          out.at(gx, gy, z, s) = lerpf(lerpf(c(x0, y0), c(x1, y0), tx), lerpf(c(x0, y1), c(x1, y1), tx), ty);
        }
      }
    }
  return out;
}

ChromaLut resample_lut(const ChromaLut& lut, int n_h) {
  if (lut.n_h == n_h) return lut;
  if (n_h < 2) throw ConfigError("resample_lut: n_h must be >= 2");
  ChromaLut out;
  out.n_h = n_h;
  out.values.resize(static_cast<std::size_t>(n_h) * n_h * 2);
  const int n = lut.n_h;
  for (int i = 0; i < n_h; ++i)
    for (int j = 0; j < n_h; ++j) {
      const float fi = static_cast<float>(i) / (n_h - 1) * (n - 1);
      const float fj = static_cast<float>(j) / (n_h - 1) * (n - 1);
      const int i0 = std::min(static_cast<int>(fi), n - 2), j0 = std::min(static_cast<int>(fj), n - 2);
      const float ti = fi - i0, tj = fj - j0;
      for (int k = 0; k < 2; ++k) {
        auto v = [&](int a, int b) { return lut.values[(static_cast<std::size_t>(a) * n + b) * 2 + k]; };
        out.values[(static_cast<std::size_t>(i) * n_h + j) * 2 + k] =
            lerpf(lerpf(v(i0, j0), v(i0, j0 + 1), tj), lerpf(v(i0 + 1, j0), v(i0 + 1, j0 + 1), tj), ti);
      }
    }
  return out;
}

StyleParams mix_styles(const std::vector<StyleParams>& styles, const std::vector<double>& weights) {
  if (styles.empty()) throw ConfigError("mix_styles: no styles");
  if (styles.size() != weights.size()) throw ConfigError("mix_styles: weights and styles differ in length");
  double sum = 0.0;
  for (double w : weights) {
    if (!(w >= 0.0) || !std::isfinite(w)) throw ConfigError("mix_styles: weights must be non-negative");
    sum += w;
  }
  if (std::abs(sum - 1.0) > 1e-6) throw ConfigError("mix_styles: weights must sum to 1");
  int n_g = 1, n_c = 2, n_h = 2;
  bool any_lut = false;
  for (const auto& s : styles) {
    s.validate();
    n_g = std::max(n_g, s.ltm.n_g);
    n_c = std::max(n_c, s.ltm.n_c);
    n_h = std::max(n_h, s.chroma.n_h);
    any_lut = any_lut || s.lut3d.has_value();
  }
  std::vector<LtmGrid> grids;
  std::vector<ChromaLut> luts;
  for (const auto& s : styles) {
    grids.push_back(resample_grid(s.ltm, n_g, n_c));
    luts.push_back(resample_lut(s.chroma, n_h));
  }
  const StyleParams& first = styles.front();

  StyleParams out;
  out.d_g = out.gamma = 0.0;
  out.gtm = {0.0, 0.0, 0.0};
  out.ltm.n_g = n_g;
  out.ltm.n_c = n_c;
  out.ltm.values.assign(grids.front().values.size(), 0.0f);
  out.chroma.n_h = n_h;
  out.chroma.values.assign(luts.front().values.size(), 0.0f);
  if (any_lut) out.lut3d = RgbLut3d{std::vector<float>(RgbLut3d::identity().values.size(), 0.0f)};
  const RgbLut3d ident = any_lut ? RgbLut3d::identity() : RgbLut3d{};

  std::string name;
  for (std::size_t k = 0; k < styles.size(); ++k) {
    const StyleParams& s = styles[k];
    const double w = weights[k];
    const float wf = static_cast<float>(w);
    out.d_g += w * s.d_g;
    out.gamma += w * s.gamma;
    out.gtm.a += w * s.gtm.a;
    out.gtm.b += w * s.gtm.b;
    out.gtm.c += w * s.gtm.c;
    for (std::size_t i = 0; i < out.ltm.values.size(); ++i) out.ltm.values[i] += wf * grids[k].values[i];
    for (std::size_t i = 0; i < out.chroma.values.size(); ++i) out.chroma.values[i] += wf * luts[k].values[i];
    if (any_lut) {
      const auto& src = s.lut3d ? s.lut3d->values : ident.values;
      for (std::size_t i = 0; i < src.size(); ++i) out.lut3d->values[i] += wf * src[i];
    }
    if (w > 0.0) name += (name.empty() ? "" : "+") + s.name;
  }
  out.name = name.empty() ? first.name : name;
  return out;
}

const RgbImage* PhotofinishResult::stage(const std::string& name) const {
  for (const auto& [n, img] : stages)
    if (n == name) return &img;
  return nullptr;
}

PhotofinishResult run_photofinish(const RgbImage& linear, const StyleParams& style, const PhotofinishOptions& opts) {
  style.validate();
  PhotofinishResult res;
  RgbImage down = resample(linear, opts.downsample, ResampleMode::area);
  down.set_state(ColorState::linear_srgb);
  res.stages.emplace_back("input", down);

  RgbImage gain = apply_gain(down, style.d_g);
  res.stages.emplace_back("gain", gain);
  RgbImage gtm = apply_gtm(gain, style.gtm);
  res.stages.emplace_back("gtm", gtm);

  LtmPlanes planes;
  if (opts.multiscale || opts.refine) {
    const std::vector<double> scales = opts.multiscale ? opts.scales : std::vector<double>{1.0};
    planes = multiscale_ltm(gain, style.ltm, scales, opts.refine);
  } else {
    planes = slice_ltm_grid(style.ltm, guidance_map(gain));
  }
  RgbImage cur = apply_ltm(gain, gtm, planes);
  if (opts.post_ltm) cur = opts.post_ltm(cur);
  res.stages.emplace_back("ltm", cur);

  if (opts.lut3d && style.lut3d) {
    cur = apply_3d_lut(cur, *style.lut3d);
    res.stages.emplace_back("lut3d", cur);
  }
  cur = apply_chroma_lut(cur, style.chroma);
  res.stages.emplace_back("chroma", cur);
  cur = apply_gamma(cur, style.gamma);
  res.stages.emplace_back("gamma", cur);
  if (opts.post_gamma) cur = opts.post_gamma(cur);
  res.output = std::move(cur);
  return res;
}

}  // namespace misp
