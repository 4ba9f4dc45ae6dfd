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

#include "misp/image.hpp"

namespace misp {

enum class ResampleMode { bilinear, area };

/// Output size for a scale factor: round(n * factor), at least 1.
int scaled_size(int n, double factor);

/// Bilinear uses half-pixel centers with edge clamping; area integrates the
/// exact box overlap of each output pixel.
RgbImage resample(const RgbImage& img, double factor, ResampleMode mode);
ImagePlane resample(const ImagePlane& img, double factor, ResampleMode mode);

RgbImage resize(const RgbImage& img, int width, int height, ResampleMode mode);
ImagePlane resize(const ImagePlane& img, int width, int height, ResampleMode mode);

}  // namespace misp
