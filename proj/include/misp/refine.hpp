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

// Edge-aware refinement: an image-space iterative bilateral solver, multi-scale
// aggregation of the LTM coefficient planes, and the guided filter.

#include <vector>

#include "misp/image.hpp"
#include "misp/photofinish.hpp"

namespace misp {

struct SolverConfig {
  int k = 7;
  double sigma_s = 3.0;
  double sigma_r = 0.01;
  double lambda = 1e-3;
  int n_iter = 80;
  double omega = 1.6;

  /// Throws ConfigError.
  void validate() const;
};

/// Normalized k x k bilateral affinities, stored offset-major:
/// w[o * N + p] weighs neighbor offset o (row-major over the window) of pixel p.
struct BilateralWeights {
  int width = 0;
  int height = 0;
  int k = 0;
  std::vector<float> w;

  float at(int offset, int x, int y) const noexcept {
    return w[static_cast<std::size_t>(offset) * width * height + static_cast<std::size_t>(y) * width + x];
  }
};

/// exp(-|dp|^2 / 2 sigma_s^2 - dZ^2 / 2 sigma_r^2), reflect padded, each
/// pixel's weights normalized to sum to one.
BilateralWeights bilateral_weights(const ImagePlane& guide, const SolverConfig& cfg);

/// n_iter Jacobi-style over-relaxed sweeps starting from M:
/// Y <- Y + omega((lambda M + sum_q W_pq Y_q) / (lambda + 1) - Y),
/// evaluated through neighbor differences so constant inputs stay exact.
ImagePlane bilateral_solve(const ImagePlane& m, const BilateralWeights& weights, const SolverConfig& cfg);
ImagePlane bilateral_solve(const ImagePlane& m, const ImagePlane& guide, const SolverConfig& cfg);
/// Same weights shared by every plane.
std::vector<ImagePlane> bilateral_solve(const std::vector<ImagePlane>& m, const ImagePlane& guide,
                                        const SolverConfig& cfg);

/// lambda sum (Y - M)^2 + sum_p sum_q W_pq (Y_p - Y_q)^2 with the normalized weights.
double bilateral_objective(const ImagePlane& y, const ImagePlane& m, const BilateralWeights& weights, double lambda);

/// Per-scale slicing of the LTM grid, upsampled to full size and averaged.
/// With refine, the averaged planes go through bilateral_solve guided by the
/// luminance of the gain image.
LtmPlanes multiscale_ltm(const RgbImage& gain_img, const LtmGrid& grid, const std::vector<double>& scales,
                         bool refine = false, const SolverConfig& cfg = {});

/// He et al. guided filter with (2r+1)^2 box windows clipped at the borders.
ImagePlane guided_filter(const ImagePlane& p, const ImagePlane& guide, int radius, double eps);

/// Mean over the clipped (2r+1)^2 window, via a double-precision integral image.
ImagePlane box_mean_clipped(const ImagePlane& p, int radius);

}  // namespace misp
