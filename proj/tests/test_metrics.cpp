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

#include <doctest.h>

#include <cmath>

#include "misp/color.hpp"
#include "misp/error.hpp"
#include "misp/metrics.hpp"
#include "test_util.hpp"

using namespace misp;
using misp::test::random_image;
using misp::test::random_plane;

namespace {

// Direct SSIM: Gaussian-weighted statistics at every valid window position.
double ssim_oracle(const ImagePlane& a, const ImagePlane& b) {
  const int r = 5;
  double wsum = 0.0;
  double wt[11][11];
  for (int j = -r; j <= r; ++j)
    for (int i = -r; i <= r; ++i) wsum += wt[j + r][i + r] = std::exp(-0.5 * (i * i + j * j));
  double total = 0.0;
  int n = 0;
  for (int y = r; y < a.height() - r; ++y)
    for (int x = r; x < a.width() - r; ++x) {
      double mx = 0, my = 0, xx = 0, yy = 0, xy = 0;
      for (int j = -r; j <= r; ++j)
        for (int i = -r; i <= r; ++i) {
          const double w = wt[j + r][i + r] / wsum;
          const double p = a.at(x + i, y + j), q = b.at(x + i, y + j);
          mx += w * p;
          my += w * q;
          xx += w * p * p;
          yy += w * q * q;
          xy += w * p * q;
        }
      const double vx = xx - mx * mx, vy = yy - my * my, cxy = xy - mx * my;
      total += ((2 * mx * my + 1e-4) * (2 * cxy + 9e-4)) / ((mx * mx + my * my + 1e-4) * (vx + vy + 9e-4));
      ++n;
    }
  return total / n;
}

}  // namespace

TEST_CASE("metric constants") {
  CHECK(kSsimWindow == 11);
  CHECK(kSsimSigma == 1.0);
  CHECK(kSsimC1 == doctest::Approx(1e-4));
  CHECK(kSsimC2 == doctest::Approx(9e-4));
}

TEST_CASE("self comparisons are perfect") {
  const RgbImage x = random_image(40, 30, 3);
  CHECK(ssim(x, x) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(delta_e76(x, x) == 0.0);
  CHECK(delta_e76(x, x, LabMode::exact) == 0.0);
  CHECK(std::isinf(psnr(x, x)));
  const MetricReport r = compare(x, x);
  CHECK(r.psnr_infinite);
  CHECK(r.tv_a == r.tv_b);
}

TEST_CASE("psnr of a constant offset") {
  RgbImage a(10, 10), b(10, 10);
  for (float& v : a.data()) v = 0.5f;
  for (float& v : b.data()) v = 0.6f;
  CHECK(psnr(a, b) == doctest::Approx(20.0).epsilon(1e-5));
  CHECK_THROWS_AS(psnr(a, RgbImage(5, 5)), ConfigError);
}

TEST_CASE("ssim matches the direct windowed oracle") {
  const ImagePlane a = random_plane(24, 19, 1);
  ImagePlane b = a;
  const ImagePlane noise = random_plane(24, 19, 2, -0.1f, 0.1f);
  for (std::size_t i = 0; i < b.size(); ++i) b.data()[i] += noise.data()[i];
  CHECK(ssim(a, b) == doctest::Approx(ssim_oracle(a, b)).epsilon(1e-9));
  CHECK(ssim(a, b) < 1.0);
  CHECK_THROWS_AS(ssim(ImagePlane(8, 8), ImagePlane(8, 8)), ConfigError);
}

TEST_CASE("delta E76 in exact mode matches a hand conversion") {
  RgbImage white(1, 1), gray(1, 1);
  for (float& v : white.data()) v = 1.0f;
  for (float& v : gray.data()) v = 0.18f;
  // L* of 18% gray is 116 * cbrt(0.18) - 16; a* = b* = 0 for neutrals.
  const double want = 100.0 - (116.0 * std::cbrt(0.18) - 16.0);
  CHECK(delta_e76(white, gray, LabMode::exact) == doctest::Approx(want).epsilon(1e-4));
}

TEST_CASE("soft Lab differs from the exact cube root only near the knee") {
  // Frozen measurement of max |f_soft - f_exact| on a dense grid over [0, 1].
  double worst = 0.0, arg = 0.0;
  for (int i = 0; i <= 1000000; ++i) {
    const double t = i / 1000000.0;
    const double d = std::abs(lab_f_soft(t) - lab_f_exact(t));
    if (d > worst) {
      worst = d;
      arg = t;
    }
  }
  MESSAGE("max soft/exact deviation " << worst << " at t = " << arg);
  CHECK(worst == doctest::Approx(0.028884542).epsilon(1e-6));
  CHECK(std::abs(lab_f_soft(0.5) - lab_f_exact(0.5)) < 1e-12);
  // The maximum sits at t = 0, where the cube root is 0 and the linear branch
  // is 4/29, weighted by the sigmoid at -150 * delta^3.
  const double d3 = std::pow(6.0 / 29.0, 3);
  CHECK(arg == 0.0);
  CHECK(worst == doctest::Approx(4.0 / 29.0 / (1.0 + std::exp(150.0 * d3))).epsilon(1e-12));
}

TEST_CASE("total variation follows its definition") {
  ImagePlane p(3, 2);
  const float v[6] = {0, 1, 3, 2, 2, 2};
  for (int i = 0; i < 6; ++i) p.data()[i] = v[i];
  // horizontal |1-0| + |3-1| + 0 + 0 = 3; vertical |2-0| + |2-1| + |2-3| = 4
  CHECK(tv_smoothness(p) == doctest::Approx(0.5 * 7.0 / 6.0));
  CHECK(tv_smoothness(ImagePlane()) == 0.0);
}
