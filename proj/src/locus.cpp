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

#include <algorithm>
#include <cmath>
#include <vector>

#include "misp/error.hpp"
#include "misp/raw.hpp"

namespace misp {
namespace {

constexpr double kStep = 100.0;
// Isotherms of distant table entries cross far from the locus; beyond this
// offset a crossing is not a valid inverse.
constexpr double kMaxTint = 0.1;

// Linear sRGB (D65) <-> XYZ.
const Mat3& srgb_to_xyz() {
  static const Mat3 m{{0.4124564, 0.3575761, 0.1804375, 0.2126729, 0.7151522, 0.0721750, 0.0193339, 0.1191920,
                       0.9503041}};
  return m;
}

const Mat3& xyz_to_srgb() {
  static const Mat3 m = srgb_to_xyz().inverse();
  return m;
}

struct LocusTable {
  std::vector<double> cct, u, v;
};

const LocusTable& table() {
  static const LocusTable t = [] {
    LocusTable r;
    for (double k = kLocusMinCct; k <= kLocusMaxCct + 0.5; k += kStep) {
      const auto uv = planck_uv(k);
      r.cct.push_back(k);
      r.u.push_back(uv[0]);
      r.v.push_back(uv[1]);
    }
    return r;
  }();
  return t;
}

std::size_t segment_of(double cct) {
  const auto& t = table();
  const auto n = t.cct.size();
  std::size_t i = static_cast<std::size_t>(std::floor((cct - kLocusMinCct) / kStep));
  return std::min(i, n - 2);
}

void check_cct(double cct) {
  if (!std::isfinite(cct) || cct < kLocusMinCct - 1e-9 || cct > kLocusMaxCct + 1e-9)
    throw ConfigError("cct " + std::to_string(cct) + " K outside the locus table range [2000, 12000] K");
}

std::array<double, 2> segment_normal(std::size_t i) {
  const auto& t = table();
  const double du = t.u[i + 1] - t.u[i];
  const double dv = t.v[i + 1] - t.v[i];
  const double len = std::hypot(du, dv);
  return {-dv / len, du / len};
}

// Isotherm direction at table entry i: mean of the adjacent segment normals.
std::array<double, 2> vertex_normal(std::size_t i) {
  const std::size_t last = table().cct.size() - 1;
  if (i == 0) return segment_normal(0);
  if (i == last) return segment_normal(last - 1);
  const auto a = segment_normal(i - 1), b = segment_normal(i);
  const double len = std::hypot(a[0] + b[0], a[1] + b[1]);
  return {(a[0] + b[0]) / len, (a[1] + b[1]) / len};
}

// Isotherm direction inside segment i at fraction f, blended between the
// vertex normals so neighbouring isotherms never jump.
std::array<double, 2> isotherm(std::size_t i, double f) {
  const auto a = vertex_normal(i), b = vertex_normal(i + 1);
  const double nu = (1.0 - f) * a[0] + f * b[0];
  const double nv = (1.0 - f) * a[1] + f * b[1];
  const double len = std::hypot(nu, nv);
  return {nu / len, nv / len};
}

double cross(double au, double av, double bu, double bv) { return au * bv - av * bu; }

}  // namespace

std::array<double, 2> planck_uv(double t) {
  const double u = (0.860117757 + 1.54118254e-4 * t + 1.28641212e-7 * t * t) /
                   (1.0 + 8.42420235e-4 * t + 7.08145163e-7 * t * t);
  const double v = (0.317398726 + 4.22806245e-5 * t + 4.20481691e-8 * t * t) /
                   (1.0 - 2.89741816e-5 * t + 1.61456053e-7 * t * t);
  return {u, v};
}

std::array<double, 2> locus_normal(double cct) {
  check_cct(cct);
  const std::size_t i = segment_of(cct);
  return isotherm(i, (cct - table().cct[i]) / kStep);
}

std::array<double, 2> cct_tint_to_uv(const CctTint& ct) {
  check_cct(ct.cct);
  const auto& t = table();
  const std::size_t i = segment_of(ct.cct);
  const double f = (ct.cct - t.cct[i]) / kStep;
  const auto n = isotherm(i, f);
  const double u = t.u[i] + f * (t.u[i + 1] - t.u[i]);
  const double v = t.v[i] + f * (t.v[i + 1] - t.v[i]);
  return {u + ct.tint * n[0], v + ct.tint * n[1]};
}

CctTint uv_to_cct_tint(double u, double v) {
  // Find the isotherm through (u, v): on segment i, (d - f e) x (n0 + f dn) = 0
  // with d = uv - P_i and e = P_{i+1} - P_i is quadratic in f.
  const auto& t = table();
  double best_abs = INFINITY;
  CctTint best;
  for (std::size_t i = 0; i + 1 < t.cct.size(); ++i) {
    const double du = u - t.u[i], dv = v - t.v[i];
    const double eu = t.u[i + 1] - t.u[i], ev = t.v[i + 1] - t.v[i];
    const auto n0 = vertex_normal(i), n1 = vertex_normal(i + 1);
    const double mu = n1[0] - n0[0], mv = n1[1] - n0[1];
    const double c0 = cross(du, dv, n0[0], n0[1]);
    const double c1 = cross(du, dv, mu, mv) - cross(eu, ev, n0[0], n0[1]);
    const double c2 = -cross(eu, ev, mu, mv);
    double roots[2];
    int nroots = 0;
    if (std::abs(c2) < 1e-14 * std::abs(c1)) {
      roots[nroots++] = -c0 / c1;
    } else {
      const double disc = c1 * c1 - 4.0 * c2 * c0;
      if (disc < 0.0) continue;
      // Numerically stable pair.
      const double q = -0.5 * (c1 + std::copysign(std::sqrt(disc), c1));
      roots[nroots++] = q / c2;
      if (q != 0.0) roots[nroots++] = c0 / q;
    }
    for (int r = 0; r < nroots; ++r) {
      const double f = roots[r];
      if (!(f >= -1e-12 && f <= 1.0 + 1e-12)) continue;
      const double fc = std::clamp(f, 0.0, 1.0);
      const auto n = isotherm(i, fc);
      const double tint = (du - fc * eu) * n[0] + (dv - fc * ev) * n[1];
      if (std::abs(tint) <= kMaxTint && std::abs(tint) < best_abs) {
        best_abs = std::abs(tint);
        best = {t.cct[i] + fc * kStep, tint};
      }
    }
  }
  if (!std::isfinite(best_abs)) throw ConfigError("chromaticity projects outside the locus table range [2000, 12000] K");
  return best;
}

std::array<double, 3> uv_to_xyz(double u, double v) {
  const double den = 2.0 * u - 8.0 * v + 4.0;
  const double x = 3.0 * u / den;
  const double y = 2.0 * v / den;
  return {x / y, 1.0, (1.0 - x - y) / y};
}

std::array<double, 2> xyz_to_uv(const std::array<double, 3>& xyz) {
  const double den = xyz[0] + 15.0 * xyz[1] + 3.0 * xyz[2];
  if (!(std::abs(den) > 0.0)) throw NumericError("xyz_to_uv: degenerate tristimulus");
  return {4.0 * xyz[0] / den, 6.0 * xyz[1] / den};
}

WbGains gains_from_cct_tint(const CameraMetadata& meta, const CctTint& ct) {
  const auto uv = cct_tint_to_uv(ct);
  const auto xyz = uv_to_xyz(uv[0], uv[1]);
  const Vec3 srgb = xyz_to_srgb() * Vec3{xyz[0], xyz[1], xyz[2]};
  const Vec3 cam = interpolate_ccm(meta, ct.cct).inverse() * srgb;
  if (!(cam[0] > 0.0) || !(cam[2] > 0.0) || !(cam[1] > 0.0))
    throw NumericError("gains_from_cct_tint: illuminant maps outside the camera gamut");
  return {cam[1] / cam[0], cam[1] / cam[2]};
}

CctTint cct_tint_from_gains(const CameraMetadata& meta, const WbGains& gains) {
  if (!(gains.r > 0.0) || !(gains.b > 0.0)) throw ConfigError("cct_tint_from_gains: gains must be positive");
  const Vec3 cam{1.0 / gains.r, 1.0, 1.0 / gains.b};
  CctTint ct{6504.0, 0.0};
  for (int it = 0; it < 50; ++it) {
    const Vec3 xyz = srgb_to_xyz() * (interpolate_ccm(meta, ct.cct) * cam);
    const auto uv = xyz_to_uv({xyz[0], xyz[1], xyz[2]});
    CctTint next;
    try {
      next = uv_to_cct_tint(uv[0], uv[1]);
    } catch (const ConfigError&) {
      // Off the end of the table: pin to the nearer endpoint.
      const auto lo = planck_uv(kLocusMinCct);
      const auto hi = planck_uv(kLocusMaxCct);
      const bool near_lo = std::hypot(uv[0] - lo[0], uv[1] - lo[1]) < std::hypot(uv[0] - hi[0], uv[1] - hi[1]);
      next.cct = near_lo ? kLocusMinCct : kLocusMaxCct;
      const auto n = locus_normal(next.cct);
      const auto p = cct_tint_to_uv({next.cct, 0.0});
      next.tint = (uv[0] - p[0]) * n[0] + (uv[1] - p[1]) * n[1];
    }
    const bool done = std::abs(next.cct - ct.cct) < 1e-6 && std::abs(next.tint - ct.tint) < 1e-12;
    ct = next;
    if (done) break;
  }
  return ct;
}

}  // namespace misp
