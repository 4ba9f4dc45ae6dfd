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

// Bilateral guided upsampling with per-channel gated regularization. Affine
// color models are fitted per bilateral-grid cell on a low-resolution pair and
// sliced with a full-resolution guide.

#include <array>
#include <vector>

#include "misp/image.hpp"

namespace misp {

inline constexpr int kBguCellSize = 64;
inline constexpr int kBguDepth = 16;
inline constexpr double kBguDefaultLambda = 1e-3;

struct BguCell {
  std::array<double, 16> S{};  // sum of [x;1][x;1]^T, row-major 4x4
  std::array<double, 12> T{};  // sum of y [x;1]^T, row-major 3x4
  double count = 0.0;
};

struct BguGrid {
  int gx = 0;
  int gy = 0;
  int gz = kBguDepth;
  std::vector<BguCell> cells;  // index (z * gy + y) * gx + x

  std::size_t index(int x, int y, int z) const noexcept {
    return (static_cast<std::size_t>(z) * gy + y) * gx + x;
  }
  const BguCell& cell(int x, int y, int z) const { return cells[index(x, y, z)]; }
};

/// Per-cell 3x4 affine models, row-major, same layout as BguGrid::cells.
struct BguAffines {
  int gx = 0;
  int gy = 0;
  int gz = kBguDepth;
  std::vector<std::array<double, 12>> a;
  std::array<double, 3> global_gain{1.0, 1.0, 1.0};

  std::size_t index(int x, int y, int z) const noexcept {
    return (static_cast<std::size_t>(z) * gy + y) * gx + x;
  }
};

/// Grid with ceil(hi/64) spatial cells and 16 BT.709 luma bins. Each low-res
/// sample lands in the cell under its full-resolution position.
BguGrid bgu_fit(const RgbImage& low_in, const RgbImage& low_out, int hi_width, int hi_height);

/// Solves A (S + l I) = T + l R per cell with l = lambda (c + 1) and
/// R = [diag(r) | 0]; r is the per-channel ratio gain of the cell, or the
/// global gain when the cell is empty.
BguAffines bgu_solve(const BguGrid& grid, double lambda = kBguDefaultLambda);

/// Trilinear interpolation of the affine models at cell-centered coordinates,
/// applied to [rgb; 1] of the guide and clamped to [0,1].
RgbImage bgu_slice(const BguAffines& affines, const RgbImage& hi_guide);

RgbImage bgu_upsample(const RgbImage& low_in, const RgbImage& low_out, const RgbImage& hi_guide,
                      double lambda = kBguDefaultLambda);

}  // namespace misp
