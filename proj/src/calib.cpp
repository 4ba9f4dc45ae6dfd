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

#include "misp/calib.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <utility>

#include "misp/error.hpp"
#include "misp/parallel.hpp"

namespace misp {
namespace {

// Natural cubic spline through (x, y); evaluates at t inside [x0, xn].
double natural_spline(const std::vector<double>& x, const std::vector<double>& y, double t) {
  const std::size_t n = x.size();
  if (n == 1) return y[0];
  if (n == 2) return y[0] + (y[1] - y[0]) * (t - x[0]) / (x[1] - x[0]);
  // Second derivatives from the tridiagonal system (Thomas algorithm).
  std::vector<double> m(n, 0.0), c(n, 0.0), d(n, 0.0);
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const double h0 = x[i] - x[i - 1];
    const double h1 = x[i + 1] - x[i];
    const double a = h0, b = 2.0 * (h0 + h1), cc = h1;
    const double r = 6.0 * ((y[i + 1] - y[i]) / h1 - (y[i] - y[i - 1]) / h0);
    const double denom = b - a * c[i - 1];
    c[i] = cc / denom;
    d[i] = (r - a * d[i - 1]) / denom;
  }
  for (std::size_t i = n - 2; i >= 1; --i) {
    m[i] = d[i] - c[i] * m[i + 1];
    if (i == 1) break;
  }
  std::size_t k = 0;
  while (k + 2 < n && t > x[k + 1]) ++k;
  const double h = x[k + 1] - x[k];
  const double a = (x[k + 1] - t) / h;
  const double b = (t - x[k]) / h;
  return a * y[k] + b * y[k + 1] + ((a * a * a - a) * m[k] + (b * b * b - b) * m[k + 1]) * h * h / 6.0;
}

}  // namespace

Rgb gray_world_illuminant(const RgbImage& img) {
  if (img.empty()) throw ConfigError("gray_world_illuminant: empty image");
  Rgb sum{0.0, 0.0, 0.0};
  for (int y = 0; y < img.height(); ++y) {
    const auto row = img.row(y);
    for (std::size_t i = 0; i < row.size(); i += 3)
      for (int c = 0; c < 3; ++c) sum[c] += row[i + c];
  }
  const double n = static_cast<double>(img.pixel_count());
  return {sum[0] / n, sum[1] / n, sum[2] / n};
}

Mat3 fit_ccm_constrained(const std::vector<Rgb>& raw, const std::vector<Rgb>& srgb) {
  if (raw.size() != srgb.size()) throw ConfigError("fit_ccm_constrained: input sizes differ");
  if (raw.size() < 9) throw ConfigError("fit_ccm_constrained: at least 9 pixel pairs are required");
  double g[9] = {};
  double scale = 0.0;
  for (const Rgb& p : raw)
    for (int i = 0; i < 3; ++i) {
      scale = std::max(scale, std::abs(p[i]));
      for (int j = 0; j < 3; ++j) g[3 * i + j] += p[i] * p[j];
    }
  Mat3 gram{{g[0], g[1], g[2], g[3], g[4], g[5], g[6], g[7], g[8]}};
  const double tr = g[0] + g[4] + g[8];
  if (!(tr > 0.0) || std::abs(gram.determinant()) <= 1e-12 * tr * tr * tr)
    throw NumericError("fit_ccm_constrained: raw pixels are rank deficient");

  Mat3 out;
  for (int row = 0; row < 3; ++row) {
    double h[3] = {};
    for (std::size_t k = 0; k < raw.size(); ++k)
      for (int i = 0; i < 3; ++i) h[i] += raw[k][i] * srgb[k][row];
    double best_obj = INFINITY;
    std::array<double, 3> best{};
    // Convex QP: the optimum is the equality-constrained minimizer on its own
    // support, so checking all seven supports finds it exactly.
    for (int mask = 1; mask < 8; ++mask) {
      std::vector<int> idx;
      for (int i = 0; i < 3; ++i)
        if (mask & (1 << i)) idx.push_back(i);
      const std::size_t s = idx.size();
      const std::size_t n = s + 1;
      std::vector<double> a(n * n, 0.0), b(n, 0.0);
      for (std::size_t i = 0; i < s; ++i) {
        for (std::size_t j = 0; j < s; ++j) a[i * n + j] = g[3 * idx[i] + idx[j]];
        a[i * n + s] = 1.0;
        a[s * n + i] = 1.0;
        b[i] = h[idx[i]];
      }
      b[s] = 1.0;
      if (!solve_dense(a, b, n)) continue;
      std::array<double, 3> c{0.0, 0.0, 0.0};
      bool feasible = true;
      for (std::size_t i = 0; i < s; ++i) {
        if (b[i] < -1e-12) feasible = false;
        c[idx[i]] = std::max(0.0, b[i]);
      }
      if (!feasible) continue;
      // Objective up to a constant: c^T G c - 2 h^T c.
      double obj = 0.0;
      for (int i = 0; i < 3; ++i) {
        obj -= 2.0 * h[i] * c[i];
        for (int j = 0; j < 3; ++j) obj += c[i] * g[3 * i + j] * c[j];
      }
      if (obj < best_obj) {
        best_obj = obj;
        best = c;
      }
    }
    const double sum = best[0] + best[1] + best[2];
    for (int i = 0; i < 3; ++i) out(row, i) = best[i] / sum;
  }
  return out;
}

int ColorMapping::basis_size(int degree) {
  // Monomials of total degree 1..d in three variables.
  int n = 0;
  for (int d = 1; d <= degree; ++d) n += (d + 1) * (d + 2) / 2;
  return n;
}

void ColorMapping::basis(int degree, const Rgb& p, double* out) {
  int k = 0;
  out[k++] = p[0];
  out[k++] = p[1];
  out[k++] = p[2];
  if (degree >= 2) {
    out[k++] = p[0] * p[0];
    out[k++] = p[1] * p[1];
    out[k++] = p[2] * p[2];
    out[k++] = p[0] * p[1];
    out[k++] = p[0] * p[2];
    out[k++] = p[1] * p[2];
  }
  for (int d = 3; d <= degree; ++d)
    for (int i = d; i >= 0; --i)
      for (int j = d - i; j >= 0; --j) {
        const int l = d - i - j;
        out[k++] = std::pow(p[0], i) * std::pow(p[1], j) * std::pow(p[2], l);
      }
}

Rgb ColorMapping::apply(const Rgb& p) const {
  const int n = basis_size(degree);
  std::vector<double> phi(static_cast<std::size_t>(n));
  basis(degree, p, phi.data());
  Rgb out{0.0, 0.0, 0.0};
  for (int c = 0; c < 3; ++c)
    for (int k = 0; k < n; ++k) out[c] += coeffs[static_cast<std::size_t>(c) * n + k] * phi[k];
  return out;
}

ColorMapping fit_color_mapping(const std::vector<Rgb>& src, const std::vector<Rgb>& dst, int degree) {
  if (src.size() != dst.size()) throw ConfigError("fit_color_mapping: input sizes differ");
  if (degree < 1 || degree > 4) throw ConfigError("fit_color_mapping: degree must lie in [1, 4]");
  const int n = ColorMapping::basis_size(degree);
  std::vector<double> a, b;
  std::size_t m = 0;
  std::vector<double> phi(static_cast<std::size_t>(n));
  for (std::size_t i = 0; i < src.size(); ++i) {
    const auto saturated = [](const Rgb& p) {
      return p[0] >= kSaturationThreshold || p[1] >= kSaturationThreshold || p[2] >= kSaturationThreshold;
    };
    if (saturated(src[i]) || saturated(dst[i])) continue;
    ColorMapping::basis(degree, src[i], phi.data());
    a.insert(a.end(), phi.begin(), phi.end());
    b.insert(b.end(), dst[i].begin(), dst[i].end());
    ++m;
  }
  if (m < static_cast<std::size_t>(n)) throw NumericError("fit_color_mapping: underdetermined system");
  const auto x = least_squares(std::move(a), m, static_cast<std::size_t>(n), std::move(b), 3);
  ColorMapping cm;
  cm.degree = degree;
  cm.coeffs.resize(static_cast<std::size_t>(3) * n);
  for (int k = 0; k < n; ++k)
    for (int c = 0; c < 3; ++c) cm.coeffs[static_cast<std::size_t>(c) * n + k] = x[static_cast<std::size_t>(k) * 3 + c];
  return cm;
}

NoiseModel fit_noise_model(const std::vector<PatchStat>& stats) {
  std::map<std::pair<int, double>, std::vector<const PatchStat*>> groups;
  for (const auto& s : stats) {
    if (!std::isfinite(s.mean) || !std::isfinite(s.variance) || !(s.iso > 0.0))
      throw SchemaError("stats", "non-finite mean/variance or non-positive iso");
    if (s.channel < -1 || s.channel > 2) throw SchemaError("channel", "must be -1, 0, 1 or 2");
    groups[{s.channel, s.iso}].push_back(&s);
  }
  if (groups.empty()) throw ConfigError("fit_noise_model: no statistics");
  NoiseModel model;
  for (const auto& [key, pts] : groups) {
    double mx = 0.0, my = 0.0;
    for (const auto* p : pts) {
      mx += p->mean;
      my += p->variance;
    }
    mx /= static_cast<double>(pts.size());
    my /= static_cast<double>(pts.size());
    double sxx = 0.0, sxy = 0.0;
    for (const auto* p : pts) {
      sxx += (p->mean - mx) * (p->mean - mx);
      sxy += (p->mean - mx) * (p->variance - my);
    }
    if (pts.size() < 2 || !(sxx > 1e-30))
      throw NumericError("fit_noise_model: need at least two distinct means at iso " + std::to_string(key.second));
    const double beta1 = sxy / sxx;
    model.entries.push_back({key.second, key.first, beta1, my - beta1 * mx});
  }
  return model;
}

NoiseParams interpolate_noise_params(const NoiseModel& model, double iso, int channel) {
  std::vector<double> x, b1, b2;
  for (int ch : {channel, -1}) {
    for (const auto& e : model.entries)
      if (e.channel == ch) {
        x.push_back(e.iso);
        b1.push_back(e.beta1);
        b2.push_back(e.beta2);
      }
    if (!x.empty()) break;
  }
  if (x.empty()) throw ConfigError("interpolate_noise_params: no entries for channel " + std::to_string(channel));
  const double t = std::clamp(iso, x.front(), x.back());
  std::size_t k = 0;
  while (k + 2 < x.size() && t > x[k + 1]) ++k;
  double beta1 = b1[k];
  if (x.size() > 1) {
    const double f = (t - x[k]) / (x[k + 1] - x[k]);
    beta1 = b1[k] + f * (b1[k + 1] - b1[k]);
  }
  return {beta1, natural_spline(x, b2, t)};
}

ImagePlane synthesize_noise(const ImagePlane& clean, const NoiseParams& params, std::uint64_t seed) {
  ImagePlane out(clean.width(), clean.height());
  parallel_rows(clean.height(), [&](int y) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(y)};
    std::mt19937_64 rng(seq);
    std::normal_distribution<double> normal(0.0, 1.0);
    const auto src = clean.row(y);
    auto dst = out.row(y);
    for (int x = 0; x < clean.width(); ++x) {
      const double var = std::max(0.0, params.beta1 * src[x] + params.beta2);
      const double n = var > 0.0 ? std::sqrt(var) * normal(rng) : 0.0;
      dst[x] = clamp01(static_cast<float>(src[x] + n));
    }
  });
  return out;
}

ImagePlane synthesize_noise(const ImagePlane& clean, Cfa cfa, double iso, const NoiseModel& model,
                            std::uint64_t seed) {
  const NoiseParams p[3] = {interpolate_noise_params(model, iso, 0), interpolate_noise_params(model, iso, 1),
                            interpolate_noise_params(model, iso, 2)};
  ImagePlane out(clean.width(), clean.height());
  parallel_rows(clean.height(), [&](int y) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(y)};
    std::mt19937_64 rng(seq);
    std::normal_distribution<double> normal(0.0, 1.0);
    const auto src = clean.row(y);
    auto dst = out.row(y);
    for (int x = 0; x < clean.width(); ++x) {
      const NoiseParams& q = p[cfa_channel(cfa, x, y)];
      const double var = std::max(0.0, q.beta1 * src[x] + q.beta2);
      const double n = var > 0.0 ? std::sqrt(var) * normal(rng) : 0.0;
      dst[x] = clamp01(static_cast<float>(src[x] + n));
    }
  });
  return out;
}

RgbImage make_pseudo_linear(const RgbImage& srgb) {
  RgbImage out(srgb.width(), srgb.height(), ColorState::linear_srgb);
  auto src = srgb.data();
  auto dst = out.data();
  for (std::size_t i = 0; i < src.size(); ++i) dst[i] = std::pow(clamp01(src[i]), 2.2f);
  return out;
}

}  // namespace misp
