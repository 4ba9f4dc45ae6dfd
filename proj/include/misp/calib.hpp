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

// Calibration numerics: illuminant and CCM estimation for pseudo ground truth,
// polynomial color mapping, and the heteroscedastic sensor noise model.

#include <array>
#include <cstdint>
#include <vector>

#include "misp/image.hpp"
#include "misp/linalg.hpp"
#include "misp/raw.hpp"

namespace misp {

using Rgb = std::array<double, 3>;

/// Per-channel mean of the image.
Rgb gray_world_illuminant(const RgbImage& raw_rgb);

/// Least-squares CCM with every row non-negative and summing to one, so that
/// srgb ~= C * raw. Solved exactly per row by enumerating active sets.
/// Needs at least 9 pairs and a full-rank input.
Mat3 fit_ccm_constrained(const std::vector<Rgb>& wb_raw, const std::vector<Rgb>& srgb_lin);

inline constexpr double kSaturationThreshold = 0.99;

/// Polynomial map from RGB to RGB without a constant term.
struct ColorMapping {
  int degree = 2;
  std::vector<double> coeffs;  // 3 x basis_size, row-major (one row per output channel)

  static int basis_size(int degree);
  static void basis(int degree, const Rgb& p, double* out);
  Rgb apply(const Rgb& p) const;
};

/// Fits src -> dst after dropping pairs with any channel >= 0.99 on either side.
ColorMapping fit_color_mapping(const std::vector<Rgb>& src, const std::vector<Rgb>& dst, int degree = 2);

struct PatchStat {
  double mean = 0.0;
  double variance = 0.0;
  double iso = 100.0;
  int channel = -1;  // 0..2 for R, G, B; -1 applies to every channel
};

struct NoiseEntry {
  double iso = 100.0;
  int channel = -1;
  double beta1 = 0.0;  // shot noise slope
  double beta2 = 0.0;  // read noise intercept
};

/// Entries are sorted by (channel, iso).
struct NoiseModel {
  std::vector<NoiseEntry> entries;
};

/// Ordinary least squares variance = beta1 * mean + beta2 per (iso, channel).
NoiseModel fit_noise_model(const std::vector<PatchStat>& stats);

struct NoiseParams {
  double beta1 = 0.0;
  double beta2 = 0.0;
};

/// Piecewise-linear beta1 and natural cubic spline beta2 over ISO, clamped to
/// the calibrated range. Falls back to channel -1 when the channel is absent.
NoiseParams interpolate_noise_params(const NoiseModel& model, double iso, int channel = -1);

/// Gaussian noise with variance beta1 * x + beta2 per pixel, clamped to [0,1].
/// Deterministic for a given seed; each row draws from its own stream.
ImagePlane synthesize_noise(const ImagePlane& clean, const NoiseParams& params, std::uint64_t seed);
/// Channel of each sample follows the CFA layout.
ImagePlane synthesize_noise(const ImagePlane& clean_mosaic, Cfa cfa, double iso, const NoiseModel& model,
                            std::uint64_t seed);

/// Inverse 2.2 gamma.
RgbImage make_pseudo_linear(const RgbImage& srgb);

}  // namespace misp
