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

// Color-space conversions. YCbCr is BT.709 full range with Cb, Cr centered at
// zero; HSV stores hue in [0,1).

#include <array>

#include "misp/image.hpp"

namespace misp {

enum class Direction { forward, inverse };

inline constexpr float kLuma709[3] = {0.2126f, 0.7152f, 0.0722f};
inline constexpr float kLumaSolver[3] = {0.2989f, 0.5870f, 0.1140f};

std::array<float, 3> rgb_to_ycbcr(float r, float g, float b) noexcept;
std::array<float, 3> ycbcr_to_rgb(float y, float cb, float cr) noexcept;
std::array<float, 3> rgb_to_hsv(float r, float g, float b) noexcept;
std::array<float, 3> hsv_to_rgb(float h, float s, float v) noexcept;

/// Channel-wise YCbCr image (Y, Cb, Cr in place of R, G, B). Not clamped.
RgbImage rgb_ycbcr_convert(const RgbImage& img, Direction dir);
RgbImage rgb_hsv_convert(const RgbImage& img, Direction dir);

/// 0.2989 R + 0.5870 G + 0.1140 B.
ImagePlane luminance(const RgbImage& img);
/// BT.709 luma.
ImagePlane luma709(const RgbImage& img);

enum class LabMode { soft, exact };

struct LabPlanes {
  ImagePlane L, a, b;
};

inline constexpr double kLabSharpness = 150.0;

/// Exact CIE cube-root companding.
double lab_f_exact(double t) noexcept;
/// Sigmoid blend of the cube-root and linear branches.
double lab_f_soft(double t, double sharpness = kLabSharpness) noexcept;

/// Linear sRGB (D65) to CIE Lab.
std::array<double, 3> linear_srgb_to_lab(double r, double g, double b, LabMode mode) noexcept;
LabPlanes linear_srgb_to_soft_lab(const RgbImage& img);
LabPlanes linear_srgb_to_lab(const RgbImage& img, LabMode mode);

}  // namespace misp
