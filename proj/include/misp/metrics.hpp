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

#include "misp/color.hpp"
#include "misp/image.hpp"

namespace misp {

/// 10 log10(1 / MSE) over all samples; +infinity for identical images.
double psnr(const RgbImage& a, const RgbImage& b);

inline constexpr int kSsimWindow = 11;
inline constexpr double kSsimSigma = 1.0;
inline constexpr double kSsimC1 = 0.01 * 0.01;
inline constexpr double kSsimC2 = 0.03 * 0.03;

/// Mean SSIM over the valid (unpadded) region with an 11x11 Gaussian window,
/// computed per channel and averaged.
double ssim(const RgbImage& a, const RgbImage& b);
double ssim(const ImagePlane& a, const ImagePlane& b);

/// Mean CIE76 distance. The soft mode uses the smooth cube-root blend.
double delta_e76(const RgbImage& a, const RgbImage& b, LabMode mode = LabMode::soft);

/// 0.5 (sum |grad_h| + sum |grad_w|) / (H W).
double tv_smoothness(const ImagePlane& p);

struct MetricReport {
  double psnr = 0.0;
  bool psnr_infinite = false;
  double ssim = 0.0;
  double delta_e76 = 0.0;
  double tv_a = 0.0;  // mean of the per-channel TV of the first image
  double tv_b = 0.0;
};

MetricReport compare(const RgbImage& a, const RgbImage& b);

}  // namespace misp
