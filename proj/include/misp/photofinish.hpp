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

#pragma once

// Parametric photofinishing: digital gain, global and local tone mapping,
// optional 3D LuT, chroma LuT and gamma, plus style parameters and mixing.

#include <cmath>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "misp/image.hpp"

namespace misp {

struct GtmParams {
  double a = 1.0;  // midtone contrast exponent
  double b = 1.0;  // shadow slope exponent
  double c = 1.0;  // highlight roll-off
  friend bool operator==(const GtmParams&, const GtmParams&) = default;
};

/// x^a / (x^a + (c(1-x))^b), with f(0) = 0 and f(1) = 1. x is clamped to [0,1].
float tm_curve(float x, float a, float b, float c) noexcept;
inline float tm_curve(float x, const GtmParams& p) noexcept {
  return tm_curve(x, static_cast<float>(p.a), static_cast<float>(p.b), static_cast<float>(p.c));
}

enum LtmSlot : int { kSlotA = 0, kSlotB = 1, kSlotC = 2, kSlotG = 3, kSlotW = 4, kLtmSlots = 5 };

/// N_g x N_g spatial cells by N_c guidance slices, five coefficients each.
/// Slot W holds the pre-sigmoid blend weight.
struct LtmGrid {
  int n_g = 64;
  int n_c = 18;
  std::vector<float> values;

  std::size_t index(int gx, int gy, int z, int slot) const noexcept {
    return ((static_cast<std::size_t>(gy) * n_g + gx) * n_c + z) * kLtmSlots + slot;
  }
  float& at(int gx, int gy, int z, int slot) { return values[index(gx, gy, z, slot)]; }
  float at(int gx, int gy, int z, int slot) const { return values[index(gx, gy, z, slot)]; }

  static LtmGrid constant(int n_g, int n_c, float a, float b, float c, float g, float w_pre);
  friend bool operator==(const LtmGrid&, const LtmGrid&) = default;
};

/// Absolute (Cb, Cr) targets on an N_h x N_h lattice spanning [-0.5, 0.5]^2.
/// Entry (i, j) corresponds to Cb center i and Cr center j.
struct ChromaLut {
  int n_h = 24;
  std::vector<float> values;  // (i * n_h + j) * 2 + {0: Cb, 1: Cr}

  static float center(int i, int n_h) noexcept { return -0.5f + static_cast<float>(i) / static_cast<float>(n_h - 1); }
  static ChromaLut identity(int n_h = 24);
  friend bool operator==(const ChromaLut&, const ChromaLut&) = default;
};

/// 11^3 RGB lattice over [0,1]^3.
struct RgbLut3d {
  static constexpr int kSize = 11;
  std::vector<float> values;  // ((r * 11 + g) * 11 + b) * 3 + channel

  static std::size_t index(int r, int g, int b) noexcept {
    return ((static_cast<std::size_t>(r) * kSize + g) * kSize + b) * 3;
  }
  static RgbLut3d identity();
  friend bool operator==(const RgbLut3d&, const RgbLut3d&) = default;
};

inline constexpr double kMinGain = 0.25;
inline constexpr double kMaxGain = 4.0;
inline constexpr double kMinGamma = 1.0;
inline constexpr double kMaxGamma = 3.0;

struct StyleParams {
  std::string name = "identity";
  double d_g = 1.0;
  GtmParams gtm;
  LtmGrid ltm = LtmGrid::constant(1, 2, 1.0f, 1.0f, 1.0f, 1.0f, -20.0f);
  ChromaLut chroma = ChromaLut::identity();
  std::optional<RgbLut3d> lut3d;
  double gamma = 1.0;

  /// Throws SchemaError naming the offending field.
  void validate() const;
  friend bool operator==(const StyleParams&, const StyleParams&) = default;
};

/// d_g * img, clamped. Rejects gains outside [0.25, 4].
RgbImage apply_gain(const RgbImage& img, double d_g);
RgbImage apply_gtm(const RgbImage& img, const GtmParams& p);

/// 2 * box5(luma709(img)) - 1 with reflection padding, in [-1, 1].
ImagePlane guidance_map(const RgbImage& gain_img);

struct LtmPlanes {
  ImagePlane A, B, C, G, W;  // W after the sigmoid
};

/// Trilinear lookup of the grid at every guidance pixel.
LtmPlanes slice_ltm_grid(const LtmGrid& grid, const ImagePlane& guidance);

/// (1 - W) * gtm + W * tm(clamp(gain * G); A, B, C) per channel.
RgbImage apply_ltm(const RgbImage& gain_img, const RgbImage& gtm_img, const LtmPlanes& coeffs);

RgbImage apply_chroma_lut(const RgbImage& img, const ChromaLut& lut);
RgbImage apply_3d_lut(const RgbImage& img, const RgbLut3d& lut);
/// img^(1/gamma).
RgbImage apply_gamma(const RgbImage& img, double gamma);

struct HistogramConfig {
  int n_h = 24;
  double sigma = 0.075;
  double v_min = -0.5;
  double v_max = 0.5;
  double eps = 1e-10;
};

/// Soft 2-D CbCr histogram, unit-sum normalized then square-rooted.
/// Entry (i, j) at i * n_h + j with i along Cb.
std::vector<double> soft_chroma_histogram(const RgbImage& img, const HistogramConfig& cfg = {});

/// Grid resampled to n_g x n_g x n_c with the slicing coordinate convention
/// (cell centers spatially, end-aligned along guidance).
LtmGrid resample_grid(const LtmGrid& grid, int n_g, int n_c);
/// End-aligned bilinear resampling of the lattice.
ChromaLut resample_lut(const ChromaLut& lut, int n_h);

/// Convex combination of all parameters. Grids and chroma lattices of
/// different sizes are first resampled to the largest one. A style without a
/// 3D LuT contributes the identity lattice when any other style has one.
StyleParams mix_styles(const std::vector<StyleParams>& styles, const std::vector<double>& weights);

struct PhotofinishOptions {
  double downsample = 0.25;
  bool lut3d = true;
  bool multiscale = false;
  bool refine = false;
  std::vector<double> scales{1.0, 0.5, 0.25, 0.125, 0.0625};
  /// Applied to the LTM output (luminance edits) and after gamma (HSV edits).
  std::function<RgbImage(const RgbImage&)> post_ltm;
  std::function<RgbImage(const RgbImage&)> post_gamma;
};

struct PhotofinishResult {
  RgbImage output;
  std::vector<std::pair<std::string, RgbImage>> stages;  // input, gain, gtm, ltm, [lut3d], chroma, gamma

  const RgbImage* stage(const std::string& name) const;
};

/// Downsample, then gain, GTM, LTM, optional 3D LuT, chroma LuT and gamma.
PhotofinishResult run_photofinish(const RgbImage& linear, const StyleParams& style,
                                  const PhotofinishOptions& opts = {});

inline float sigmoid(float x) noexcept {
  return 1.0f / (1.0f + std::exp(-x));
}

}  // namespace misp
