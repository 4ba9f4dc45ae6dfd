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

#include "misp/refine.hpp"

#include <algorithm>
#include <cmath>

#include "misp/color.hpp"
#include "misp/error.hpp"
#include "misp/parallel.hpp"
#include "misp/resample.hpp"
#include "misp/simd.hpp"

namespace misp {
namespace {

// Weighted neighbor differences sum_o w_o (y_q - y_p) over the k x k window
// for one row. Differences (not plain sums) keep constant inputs exact.
void window_residual_row(const BilateralWeights& bw, const ImagePlane& y, int row, float* acc, float* diff) {
  const int w = bw.width;
  const int h = bw.height;
  const int r = bw.k / 2;
  const std::size_t n = static_cast<std::size_t>(w) * h;
  const auto& kern = simd::kernels();
  const float* center = y.row(row).data();
  std::fill(acc, acc + w, 0.0f);
  int o = 0;
  for (int dy = -r; dy <= r; ++dy) {
    const float* src = y.row(reflect_index(row + dy, h)).data();
    for (int dx = -r; dx <= r; ++dx, ++o) {
      const float* wt = bw.w.data() + o * n + static_cast<std::size_t>(row) * w;
      for (int x = 0; x < w; ++x) diff[x] = src[reflect_index(x + dx, w)] - center[x];
      kern.multiply_accumulate(acc, wt, diff, static_cast<std::size_t>(w));
    }
  }
}

}  // namespace

void SolverConfig::validate() const {
  if (k < 3 || k % 2 == 0) throw ConfigError("solver: k must be odd and >= 3");
  if (!(sigma_s > 0.0) || !(sigma_r > 0.0) || !(lambda > 0.0)) throw ConfigError("solver: sigmas and lambda must be positive");
  if (n_iter < 0) throw ConfigError("solver: n_iter must be non-negative");
  if (!(omega >= 1.0 && omega < 2.0)) throw ConfigError("solver: omega must lie in [1, 2)");
}

BilateralWeights bilateral_weights(const ImagePlane& guide, const SolverConfig& cfg) {
  cfg.validate();
  if (guide.empty()) throw ConfigError("bilateral_weights: empty guide");
  BilateralWeights bw;
  bw.width = guide.width();
  bw.height = guide.height();
  bw.k = cfg.k;
  const int w = bw.width;
  const int h = bw.height;
  const int r = cfg.k / 2;
  const std::size_t n = static_cast<std::size_t>(w) * h;
  const int taps = cfg.k * cfg.k;
  bw.w.resize(n * taps);
  const double ks = 1.0 / (2.0 * cfg.sigma_s * cfg.sigma_s);
  const double kr = 1.0 / (2.0 * cfg.sigma_r * cfg.sigma_r);
  parallel_rows(h, [&](int y) {
    std::vector<double> tmp(static_cast<std::size_t>(taps));
    for (int x = 0; x < w; ++x) {
      const double zp = guide.at(x, y);
      double sum = 0.0;
      int o = 0;
      for (int dy = -r; dy <= r; ++dy)
        for (int dx = -r; dx <= r; ++dx, ++o) {
          const double dz = zp - guide.at(reflect_index(x + dx, w), reflect_index(y + dy, h));
          tmp[o] = std::exp(-(dx * dx + dy * dy) * ks - dz * dz * kr);
          sum += tmp[o];
        }
      const std::size_t p = static_cast<std::size_t>(y) * w + x;
      for (o = 0; o < taps; ++o) bw.w[static_cast<std::size_t>(o) * n + p] = static_cast<float>(tmp[o] / sum);
    }
  });
  return bw;
}

ImagePlane bilateral_solve(const ImagePlane& m, const BilateralWeights& bw, const SolverConfig& cfg) {
  cfg.validate();
  if (m.width() != bw.width || m.height() != bw.height) throw ConfigError("bilateral_solve: size mismatch");
  const auto& kern = simd::kernels();
  const float lambda = static_cast<float>(cfg.lambda);
  const float omega = static_cast<float>(cfg.omega);
  ImagePlane cur = m;
  ImagePlane next(m.width(), m.height());
  for (int it = 0; it < cfg.n_iter; ++it) {
    parallel_rows(m.height(), [&](int y) {
      std::vector<float> resid(static_cast<std::size_t>(m.width())), diff(resid.size());
      window_residual_row(bw, cur, y, resid.data(), diff.data());
      kern.sor_relax(cur.row(y).data(), m.row(y).data(), resid.data(), next.row(y).data(),
                     static_cast<std::size_t>(m.width()), lambda, omega);
    });
    std::swap(cur, next);
  }
  return cur;
}

ImagePlane bilateral_solve(const ImagePlane& m, const ImagePlane& guide, const SolverConfig& cfg) {
  require_same_dims(m, guide, "bilateral_solve");
  return bilateral_solve(m, bilateral_weights(guide, cfg), cfg);
}

std::vector<ImagePlane> bilateral_solve(const std::vector<ImagePlane>& m, const ImagePlane& guide,
                                        const SolverConfig& cfg) {
  const BilateralWeights bw = bilateral_weights(guide, cfg);
  std::vector<ImagePlane> out;
  out.reserve(m.size());
  for (const auto& plane : m) out.push_back(bilateral_solve(plane, bw, cfg));
  return out;
}

double bilateral_objective(const ImagePlane& y, const ImagePlane& m, const BilateralWeights& bw, double lambda) {
  require_same_dims(y, m, "bilateral_objective");
  const int w = bw.width;
  const int h = bw.height;
  const int r = bw.k / 2;
  std::vector<double> rows(static_cast<std::size_t>(h), 0.0);
  parallel_rows(h, [&](int py) {
    double e = 0.0;
    for (int px = 0; px < w; ++px) {
      const double yp = y.at(px, py);
      const double d = yp - m.at(px, py);
      e += lambda * d * d;
      int o = 0;
      for (int dy = -r; dy <= r; ++dy)
        for (int dx = -r; dx <= r; ++dx, ++o) {
          const double dq = yp - y.at(reflect_index(px + dx, w), reflect_index(py + dy, h));
          e += bw.at(o, px, py) * dq * dq;
        }
    }
    rows[static_cast<std::size_t>(py)] = e;
  });
  double total = 0.0;
  for (double v : rows) total += v;
  return total;
}

LtmPlanes multiscale_ltm(const RgbImage& gain_img, const LtmGrid& grid, const std::vector<double>& scales, bool refine,
                         const SolverConfig& cfg) {
  if (scales.empty()) throw ConfigError("multiscale_ltm: no scales");
  for (double s : scales)
    if (!(s > 0.0 && s <= 1.0)) throw ConfigError("multiscale_ltm: scales must lie in (0, 1]");
  const int w = gain_img.width();
  const int h = gain_img.height();
  std::vector<ImagePlane> sum;
  for (double s : scales) {
    const RgbImage small = resample(gain_img, s, ResampleMode::bilinear);
    const LtmPlanes p = slice_ltm_grid(grid, guidance_map(small));
    const ImagePlane* src[kLtmSlots] = {&p.A, &p.B, &p.C, &p.G, &p.W};
    if (sum.empty()) sum.assign(kLtmSlots, ImagePlane(w, h));
    for (int k = 0; k < kLtmSlots; ++k) {
      const ImagePlane up = resize(*src[k], w, h, ResampleMode::bilinear);
      auto dst = sum[k].data();
      auto in = up.data();
      for (std::size_t i = 0; i < dst.size(); ++i) dst[i] += in[i];
    }
  }
  if (scales.size() > 1) {
    const float inv = 1.0f / static_cast<float>(scales.size());
    for (auto& plane : sum)
      for (float& v : plane.data()) v *= inv;
  }
  if (refine) sum = bilateral_solve(sum, luminance(gain_img), cfg);
  return {std::move(sum[0]), std::move(sum[1]), std::move(sum[2]), std::move(sum[3]), std::move(sum[4])};
}

namespace {

// Clipped-window box mean in double precision.
template <class T>
std::vector<double> box_mean_d(const T* src, int w, int h, int radius) {
  const std::size_t stride = static_cast<std::size_t>(w) + 1;
  std::vector<double> integral(stride * (static_cast<std::size_t>(h) + 1), 0.0);
  for (int y = 0; y < h; ++y) {
    double run = 0.0;
    for (int x = 0; x < w; ++x) {
      run += src[static_cast<std::size_t>(y) * w + x];
      integral[(y + 1) * stride + x + 1] = integral[y * stride + x + 1] + run;
    }
  }
  std::vector<double> out(static_cast<std::size_t>(w) * h);
  parallel_rows(h, [&](int y) {
    const int y0 = std::max(0, y - radius), y1 = std::min(h, y + radius + 1);
    for (int x = 0; x < w; ++x) {
      const int x0 = std::max(0, x - radius), x1 = std::min(w, x + radius + 1);
      const double s = integral[y1 * stride + x1] - integral[y0 * stride + x1] - integral[y1 * stride + x0] +
                       integral[y0 * stride + x0];
      out[static_cast<std::size_t>(y) * w + x] = s / ((x1 - x0) * (y1 - y0));
    }
  });
  return out;
}

}  // namespace

ImagePlane box_mean_clipped(const ImagePlane& p, int radius) {
  const auto mean = box_mean_d(p.data().data(), p.width(), p.height(), radius);
  ImagePlane out(p.width(), p.height());
  for (std::size_t i = 0; i < mean.size(); ++i) out.data()[i] = static_cast<float>(mean[i]);
  return out;
}

ImagePlane guided_filter(const ImagePlane& p, const ImagePlane& guide, int radius, double eps) {
  require_same_dims(p, guide, "guided_filter");
  if (radius < 0 || !(eps >= 0.0)) throw ConfigError("guided_filter: radius and eps must be non-negative");
  const int w = p.width();
  const int h = p.height();
  const std::size_t n = p.size();
  const float* g = guide.data().data();
  const float* v = p.data().data();
  std::vector<double> ii(n), ip(n);
  for (std::size_t i = 0; i < n; ++i) {
    ii[i] = static_cast<double>(g[i]) * g[i];
    ip[i] = static_cast<double>(g[i]) * v[i];
  }
  const auto mean_i = box_mean_d(g, w, h, radius);
  const auto mean_p = box_mean_d(v, w, h, radius);
  const auto corr_ii = box_mean_d(ii.data(), w, h, radius);
  const auto corr_ip = box_mean_d(ip.data(), w, h, radius);
  std::vector<double> a(n), b(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double var = std::max(0.0, corr_ii[i] - mean_i[i] * mean_i[i]);
    const double cov = corr_ip[i] - mean_i[i] * mean_p[i];
    const double den = var + eps;
    a[i] = den > 0.0 ? cov / den : 0.0;
    b[i] = mean_p[i] - a[i] * mean_i[i];
  }
  const auto mean_a = box_mean_d(a.data(), w, h, radius);
  const auto mean_b = box_mean_d(b.data(), w, h, radius);
  ImagePlane q(w, h);
  for (std::size_t i = 0; i < n; ++i) q.data()[i] = static_cast<float>(mean_a[i] * g[i] + mean_b[i]);
  return q;
}

}  // namespace misp
