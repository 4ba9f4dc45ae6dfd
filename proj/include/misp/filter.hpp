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

// Separable smoothing filters with reflection padding.

#include <vector>

#include "misp/image.hpp"

namespace misp {

/// Mean over a (2r+1)x(2r+1) window.
ImagePlane box_mean_reflect(const ImagePlane& p, int radius);

/// Normalized 1-D Gaussian taps of length 2*radius+1.
std::vector<float> gaussian_taps(double sigma, int radius);

ImagePlane convolve_separable(const ImagePlane& p, const std::vector<float>& taps);

/// Radius defaults to ceil(3 sigma).
ImagePlane gaussian_blur(const ImagePlane& p, double sigma, int radius = -1);

}  // namespace misp
