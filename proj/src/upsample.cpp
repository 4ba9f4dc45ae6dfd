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

#include "misp/upsample.hpp"

#include <algorithm>
#include <cmath>

#include "misp/color.hpp"
#include "misp/error.hpp"
#include "misp/linalg.hpp"
#include "misp/parallel.hpp"

namespace misp {
namespace {

int cells_for(int n) { return (n + kBguCellSize - 1) / kBguCellSize; }

int cell_of(int i, int lo, int hi) {
  const double pos = (i + 0.5) * hi / lo;
  return std::min(static_cast<int>(pos) / kBguCellSize, cells_for(hi) - 1);
}

}  // namespace

BguGrid bgu_fit(const RgbImage& low_in, const RgbImage& low_out, int hi_width, int hi_height) {
  require_same_dims(low_in, low_out, "bgu_fit");
  if (low_in.empty() || hi_width < 1 || hi_height < 1) throw ConfigError("bgu_fit: empty input");
  BguGrid grid;
  grid.gx = cells_for(hi_width);
  grid.gy = cells_for(hi_height);
  grid.cells.assign(static_cast<std::size_t>(grid.gx) * grid.gy * grid.gz, BguCell{});
  const int lw = low_in.width();
  const int lh = low_in.height();
  const ImagePlane lum = luma709(low_in);

  std::vector<int> cx(static_cast<std::size_t>(lw));
  for (int x = 0; x < lw; ++x) cx[x] = cell_of(x, lw, hi_width);
  std::vector<std::vector<int>> rows_of(static_cast<std::size_t>(grid.gy));
  for (int y = 0; y < lh; ++y) rows_of[static_cast<std::size_t>(cell_of(y, lh, hi_height))].push_back(y);

  // Each task owns one row of cells, so accumulation needs no atomics and the
  // summation order is fixed.
  parallel_rows(
      grid.gy,
      [&](int gy) {
        for (int y : rows_of[static_cast<std::size_t>(gy)]) {
          for (int x = 0; x < lw; ++x) {
            const float* in = low_in.pixel(x, y);
            const float* out = low_out.pixel(x, y);
            const int z = std::clamp(static_cast<int>(std::floor(lum.at(x, y) * kBguDepth)), 0, kBguDepth - 1);
            BguCell& c = grid.cells[grid.index(cx[x], gy, z)];
            const double v[4] = {in[0], in[1], in[2], 1.0};
            for (int i = 0; i < 4; ++i)
              for (int j = 0; j < 4; ++j) c.S[4 * i + j] += v[i] * v[j];
            for (int i = 0; i < 3; ++i)
              for (int j = 0; j < 4; ++j) c.T[4 * i + j] += static_cast<double>(out[i]) * v[j];
            c.count += 1.0;
          }
        }
      },
      1);
  return grid;
}

BguAffines bgu_solve(const BguGrid& grid, double lambda) {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) throw ConfigError("bgu_solve: lambda must be positive");
  BguAffines out;
  out.gx = grid.gx;
  out.gy = grid.gy;
  out.gz = grid.gz;
  out.a.resize(grid.cells.size());

  double sum_t[3] = {0, 0, 0}, sum_s[3] = {0, 0, 0}, sum_c = 0.0;
  for (const BguCell& c : grid.cells) {
    for (int ch = 0; ch < 3; ++ch) {
      sum_t[ch] += c.T[4 * ch + 3];
      sum_s[ch] += c.S[4 * ch + 3];
    }
    sum_c += c.count;
  }
  const double lambda_glob = lambda * (sum_c + 1.0);
  for (int ch = 0; ch < 3; ++ch) out.global_gain[ch] = sum_t[ch] / (sum_s[ch] + lambda_glob);

  std::vector<int> failures(grid.cells.size(), 0);
  parallel_rows(
      static_cast<int>(grid.cells.size()),
      [&](int m) {
        const BguCell& c = grid.cells[static_cast<std::size_t>(m)];
        const double lm = lambda * (c.count + 1.0);
        std::array<double, 16> lhs = c.S;
        for (int i = 0; i < 4; ++i) lhs[5 * i] += lm;
        auto& a = out.a[static_cast<std::size_t>(m)];
        for (int ch = 0; ch < 3; ++ch) {
          const double r = c.count > 0.0 ? c.T[4 * ch + 3] / (c.S[4 * ch + 3] + lm) : out.global_gain[ch];
          std::array<double, 4> rhs{c.T[4 * ch], c.T[4 * ch + 1], c.T[4 * ch + 2], c.T[4 * ch + 3]};
          rhs[ch] += lm * r;
          if (!cholesky_solve4(lhs, rhs)) failures[static_cast<std::size_t>(m)] = 1;
          for (int j = 0; j < 4; ++j) a[4 * ch + j] = rhs[j];
        }
      },
      64);
  if (std::any_of(failures.begin(), failures.end(), [](int f) { return f != 0; }))
    throw NumericError("bgu_solve: cell system is not positive definite");
  return out;
}

RgbImage bgu_slice(const BguAffines& aff, const RgbImage& guide) {
  if (aff.a.size() != static_cast<std::size_t>(aff.gx) * aff.gy * aff.gz || aff.a.empty())
    throw ConfigError("bgu_slice: malformed affine grid");
  std::vector<float> coef(aff.a.size() * 12);
  for (std::size_t m = 0; m < aff.a.size(); ++m)
    for (int k = 0; k < 12; ++k) coef[12 * m + k] = static_cast<float>(aff.a[m][k]);
  const ImagePlane lum = luma709(guide);
  const int w = guide.width();
  RgbImage out(w, guide.height(), ColorState::display);
  const float zmax = static_cast<float>(aff.gz - 1);
  parallel_rows(guide.height(), [&](int y) {
    const float fy = std::clamp((y + 0.5f) / kBguCellSize - 0.5f, 0.0f, static_cast<float>(aff.gy - 1));
    const int y0 = static_cast<int>(fy);
    const int y1 = std::min(y0 + 1, aff.gy - 1);
    const float ty = fy - y0;
    for (int x = 0; x < w; ++x) {
      const float fx = std::clamp((x + 0.5f) / kBguCellSize - 0.5f, 0.0f, static_cast<float>(aff.gx - 1));
      const int x0 = static_cast<int>(fx);
      const int x1 = std::min(x0 + 1, aff.gx - 1);
      const float tx = fx - x0;
      const float fz = std::clamp(lum.at(x, y) * kBguDepth - 0.5f, 0.0f, zmax);
      const int z0 = static_cast<int>(fz);
      const int z1 = std::min(z0 + 1, aff.gz - 1);
      const float tz = fz - z0;
      float c[12] = {};
      const int xs[2] = {x0, x1}, ys[2] = {y0, y1}, zs[2] = {z0, z1};
      const float wx[2] = {1.0f - tx, tx}, wy[2] = {1.0f - ty, ty}, wz[2] = {1.0f - tz, tz};
      for (int k = 0; k < 2; ++k)
        for (int j = 0; j < 2; ++j)
          for (int i = 0; i < 2; ++i) {
            const float wt = wz[k] * wy[j] * wx[i];
            if (wt == 0.0f) continue;
            const float* src = coef.data() + 12 * aff.index(xs[i], ys[j], zs[k]);
            for (int q = 0; q < 12; ++q) c[q] += wt * src[q];
          }
      const float* g = guide.pixel(x, y);
      float* o = out.pixel(x, y);
      for (int ch = 0; ch < 3; ++ch)
        o[ch] = clamp01(c[4 * ch] * g[0] + c[4 * ch + 1] * g[1] + c[4 * ch + 2] * g[2] + c[4 * ch + 3]);
    }
  });
  return out;
}

RgbImage bgu_upsample(const RgbImage& low_in, const RgbImage& low_out, const RgbImage& hi_guide, double lambda) {
  RgbImage out = bgu_slice(bgu_solve(bgu_fit(low_in, low_out, hi_guide.width(), hi_guide.height()), lambda), hi_guide);
  out.set_state(low_out.state());
  return out;
}

}  // namespace misp
