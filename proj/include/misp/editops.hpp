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

// User edit operators. Each one is a bit-exact identity at its neutral setting.

#include "misp/image.hpp"

namespace misp {

struct EditSettings {
  double ev = 0.0;
  bool auto_exposure = false;
  double contrast = 0.0;    // [-1, 1]
  double highlights = 0.0;  // [-1, 1]
  double shadows = 0.0;     // [-1, 1]
  double saturation = 0.0;  // [-1, 1]
  double vibrance = 0.0;    // [-1, 1]
  double sharpen = 0.0;     // >= 0
  double denoise_strength = 1.0;  // [0, 1]
  double luma_denoise = 0.0;      // [0, 1]
  double chroma_denoise = 0.0;    // [0, 1]

  /// Throws SchemaError naming the offending field.
  void validate() const;
  friend bool operator==(const EditSettings&, const EditSettings&) = default;
};

inline constexpr double kAeRange = 1.8;
inline constexpr double kAeStep = 0.1;
inline constexpr int kAeBins = 96;
inline constexpr int kAePoolSize = 128;
inline constexpr double kAeTargetMean = 0.08;
inline constexpr double kAeTargetSigma = 0.05;

/// Exposure shift (stops) whose scaled luma histogram is closest in L2 to a
/// Gaussian target around 0.08. Candidates step 0.1 EV over [-1.8, 1.8];
/// ties go to the smaller |shift|. An all-black image returns +1.8.
double auto_exposure(const RgbImage& linear);

/// 2^ev * img, clamped.
RgbImage apply_ev(const RgbImage& img, double ev);

float adjust_contrast(float y, double alpha) noexcept;
ImagePlane adjust_contrast(const ImagePlane& y, double alpha);

/// Quadratic ramp ((x - e0) / (e1 - e0))^2 with the ratio clamped to [0, 1].
float smooth_ramp(float x, float e0, float e1) noexcept;
float adjust_highlights_shadows(float y, double alpha_high, double alpha_shad) noexcept;
ImagePlane adjust_highlights_shadows(const ImagePlane& y, double alpha_high, double alpha_shad);

/// Contrast then highlights/shadows on the BT.709 luma of an RGB image,
/// chroma kept, result clamped.
RgbImage apply_luma_edits(const RgbImage& img, double contrast, double alpha_high, double alpha_shad);

/// HSV saturation scaling followed by vibrance.
RgbImage adjust_sat_vib(const RgbImage& img, double alpha_sat, double alpha_vib);

/// Edge-masked unsharp masking with a 3x3 Gaussian (sigma 1) base layer.
RgbImage sharpen(const RgbImage& img, double alpha);
/// Normalized edge mask used by sharpen, in [0,1].
ImagePlane sharpen_mask(const RgbImage& img);

/// Guided-filter smoothing of luma; r = 2 + 10 lambda, eps = (0.001 + 0.03 lambda)^2.
RgbImage luma_denoise(const RgbImage& img, double lambda);
/// Gaussian smoothing of Cb/Cr with sigma = (3 + 12 lambda)(H / 3000)^0.9,
/// a second pass above 0.4, mixed in with weight lambda^1.5.
RgbImage chroma_denoise(const RgbImage& img, double lambda);
double chroma_denoise_sigma(double lambda, int height) noexcept;

/// (1 - s) before + s after.
RgbImage blend_strength(const RgbImage& before, const RgbImage& after, double s);

}  // namespace misp
