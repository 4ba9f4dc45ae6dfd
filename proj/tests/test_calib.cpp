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
#include <random>

#include "misp/calib.hpp"
#include "misp/error.hpp"
#include "oracles.hpp"
#include "test_util.hpp"

using namespace misp;
using misp::test::random_image;

using oracle::noisy_patch;

TEST_CASE("noise model recovers shot and read parameters within 5 percent") {
  const NoiseParams truth100{2.0e-4, 4.0e-6};
  const NoiseParams truth800{1.6e-3, 3.0e-5};
  std::vector<PatchStat> stats;
  std::uint64_t seed = 1;
  for (double mean = 0.02; mean <= 0.8; mean += 0.02) {
    stats.push_back(noisy_patch(mean, truth100, 100, 1, seed++));
    stats.push_back(noisy_patch(mean, truth800, 800, 1, seed++));
  }
  const NoiseModel model = fit_noise_model(stats);
  REQUIRE(model.entries.size() == 2);
  CHECK(model.entries[0].iso == 100);
  CHECK(model.entries[1].iso == 800);
  const auto& e100 = model.entries[0];
  const auto& e800 = model.entries[1];
  MESSAGE("beta1 " << e100.beta1 << " / " << e800.beta1 << ", beta2 " << e100.beta2 << " / " << e800.beta2);
  CHECK(std::abs(e100.beta1 / truth100.beta1 - 1.0) < 0.05);
  CHECK(std::abs(e800.beta1 / truth800.beta1 - 1.0) < 0.05);
  CHECK(std::abs(e100.beta2 / truth100.beta2 - 1.0) < 0.05);
  CHECK(std::abs(e800.beta2 / truth800.beta2 - 1.0) < 0.05);
}

TEST_CASE("noise fit is exact on noiseless statistics") {
  std::vector<PatchStat> stats;
  for (double m : {0.1, 0.3, 0.5, 0.7}) stats.push_back({m, 3e-4 * m + 2e-6, 400, -1});
  const NoiseModel model = fit_noise_model(stats);
  REQUIRE(model.entries.size() == 1);
  CHECK(model.entries[0].beta1 == doctest::Approx(3e-4).epsilon(1e-9));
  CHECK(model.entries[0].beta2 == doctest::Approx(2e-6).epsilon(1e-6));
  CHECK_THROWS_AS(fit_noise_model({{0.1, 1e-4, 100, 0}}), NumericError);
  CHECK_THROWS_AS(fit_noise_model({{0.1, 1e-4, 100, 5}}), SchemaError);
  CHECK_THROWS_AS(fit_noise_model({}), ConfigError);
}

TEST_CASE("noise parameters interpolate over ISO and fall back to channel -1") {
  NoiseModel model;
  model.entries = {{100, -1, 1e-4, 1e-6}, {400, -1, 4e-4, 4e-6}, {1600, -1, 1.6e-3, 2e-5}, {100, 1, 9e-5, 9e-7},
                   {1600, 1, 1e-3, 1e-5}};
  const NoiseParams mid = interpolate_noise_params(model, 250, 2);
  CHECK(mid.beta1 == doctest::Approx(2.5e-4));
  CHECK(mid.beta2 > 1e-6);
  CHECK(mid.beta2 < 4e-6);
  CHECK(interpolate_noise_params(model, 400, -1).beta2 == doctest::Approx(4e-6));
  CHECK(interpolate_noise_params(model, 50, -1).beta1 == doctest::Approx(1e-4));
  CHECK(interpolate_noise_params(model, 6400, -1).beta1 == doctest::Approx(1.6e-3));
  CHECK(interpolate_noise_params(model, 100, 1).beta1 == doctest::Approx(9e-5));
}

TEST_CASE("noise synthesis is deterministic and heteroscedastic") {
  ImagePlane clean(64, 64);
  for (int y = 0; y < 64; ++y)
    for (int x = 0; x < 64; ++x) clean.at(x, y) = x < 32 ? 0.1f : 0.7f;
  const NoiseParams p{1e-3, 1e-5};
  const ImagePlane a = synthesize_noise(clean, p, 42);
  const ImagePlane b = synthesize_noise(clean, p, 42);
  CHECK(std::equal(a.data().begin(), a.data().end(), b.data().begin()));
  double v_dark = 0.0, v_bright = 0.0;
  for (int y = 0; y < 64; ++y)
    for (int x = 0; x < 64; ++x) {
      const double d = a.at(x, y) - clean.at(x, y);
      (x < 32 ? v_dark : v_bright) += d * d;
    }
  v_dark /= 2048;
  v_bright /= 2048;
  CHECK(v_dark == doctest::Approx(1e-3 * 0.1 + 1e-5).epsilon(0.1));
  CHECK(v_bright == doctest::Approx(1e-3 * 0.7 + 1e-5).epsilon(0.1));
}

TEST_CASE("constrained CCM recovers a row-stochastic generator") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 5; ++trial) {
    Mat3 truth;
    for (int r = 0; r < 3; ++r) {
      double s = 0.0;
      for (int c = 0; c < 3; ++c) s += truth(r, c) = u(rng) + (r == c ? 2.0 : 0.0);
      for (int c = 0; c < 3; ++c) truth(r, c) /= s;
    }
    std::vector<Rgb> raw, srgb;
    for (int i = 0; i < 200; ++i) {
      const Rgb p{u(rng), u(rng), u(rng)};
      const Vec3 q = truth * Vec3{p[0], p[1], p[2]};
      raw.push_back(p);
      srgb.push_back({q[0], q[1], q[2]});
    }
    const Mat3 fit = fit_ccm_constrained(raw, srgb);
    for (int r = 0; r < 3; ++r) {
      double rs = 0.0;
      for (int c = 0; c < 3; ++c) {
        CHECK(std::abs(fit(r, c) - truth(r, c)) < 1e-4);
        CHECK(fit(r, c) >= 0.0);
        rs += fit(r, c);
      }
      CHECK(std::abs(rs - 1.0) < 1e-9);
    }
  }
}

TEST_CASE("constrained CCM honors the constraints on noisy data") {
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::normal_distribution<double> n(0.0, 0.02);
  std::vector<Rgb> raw, srgb;
  for (int i = 0; i < 300; ++i) {
    const Rgb p{u(rng), u(rng), u(rng)};
    // A generator with a negative entry; the fit must stay non-negative.
    raw.push_back(p);
    srgb.push_back({1.2 * p[0] - 0.2 * p[1] + n(rng), p[1] + n(rng), 0.1 * p[0] + 0.9 * p[2] + n(rng)});
  }
  const Mat3 fit = fit_ccm_constrained(raw, srgb);
  for (int r = 0; r < 3; ++r) {
    double rs = 0.0;
    for (int c = 0; c < 3; ++c) {
      CHECK(fit(r, c) >= 0.0);
      rs += fit(r, c);
    }
    CHECK(std::abs(rs - 1.0) < 1e-9);
  }
  CHECK_THROWS_AS(fit_ccm_constrained(std::vector<Rgb>(3), std::vector<Rgb>(3)), ConfigError);
  CHECK_THROWS_AS(fit_ccm_constrained(std::vector<Rgb>(20, {0.5, 0.5, 0.5}), std::vector<Rgb>(20, {0.5, 0.5, 0.5})),
                  NumericError);
}

TEST_CASE("constrained CCM matches a brute-force simplex search") {
  // Coarse independent check: no row on a fine simplex grid beats the fit.
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<Rgb> raw, srgb;
  for (int i = 0; i < 60; ++i) {
    const Rgb p{u(rng), u(rng), u(rng)};
    raw.push_back(p);
    srgb.push_back({0.9 * p[0] + 0.3 * p[1] - 0.1 * p[2], 0.5 * p[1] + 0.5 * p[2], -0.1 * p[0] + 1.1 * p[2]});
  }
  const Mat3 fit = fit_ccm_constrained(raw, srgb);
  for (int r = 0; r < 3; ++r) {
    auto cost = [&](double a, double b, double c) {
      double e = 0.0;
      for (std::size_t i = 0; i < raw.size(); ++i) {
        const double d = a * raw[i][0] + b * raw[i][1] + c * raw[i][2] - srgb[i][r];
        e += d * d;
      }
      return e;
    };
    const double best_fit = cost(fit(r, 0), fit(r, 1), fit(r, 2));
    double best_grid = INFINITY;
    for (int i = 0; i <= 200; ++i)
      for (int j = 0; i + j <= 200; ++j) best_grid = std::min(best_grid, cost(i / 200.0, j / 200.0, (200 - i - j) / 200.0));
    CHECK(best_fit <= best_grid + 1e-12);
  }
}

TEST_CASE("polynomial color mapping recovers linear generators") {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(0.0, 0.95);
  const double M[3][3] = {{0.8, 0.1, 0.05}, {0.05, 0.9, 0.02}, {0.1, 0.0, 0.85}};
  std::vector<Rgb> src, dst;
  for (int i = 0; i < 400; ++i) {
    const Rgb p{u(rng), u(rng), u(rng)};
    src.push_back(p);
    dst.push_back({M[0][0] * p[0] + M[0][1] * p[1] + M[0][2] * p[2], M[1][0] * p[0] + M[1][1] * p[1] + M[1][2] * p[2],
                   M[2][0] * p[0] + M[2][1] * p[1] + M[2][2] * p[2]});
  }
  const ColorMapping cm = fit_color_mapping(src, dst, 2);
  CHECK(ColorMapping::basis_size(2) == 9);
  CHECK(cm.coeffs.size() == 27u);
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    const Rgb p{u(rng), u(rng), u(rng)};
    const Rgb q = cm.apply(p);
    for (int c = 0; c < 3; ++c) worst = std::max(worst, std::abs(q[c] - (M[c][0] * p[0] + M[c][1] * p[1] + M[c][2] * p[2])));
  }
  CHECK(worst < 1e-6);
}

TEST_CASE("color mapping drops saturated pairs and validates degree") {
  std::vector<Rgb> src, dst;
  std::mt19937_64 rng(10);
  std::uniform_real_distribution<double> u(0.0, 0.9);
  for (int i = 0; i < 50; ++i) {
    const Rgb p{u(rng), u(rng), u(rng)};
    src.push_back(p);
    dst.push_back({0.5 * p[0], 0.5 * p[1], 0.5 * p[2]});
  }
  // Outliers that would wreck the fit if they were kept.
  for (int i = 0; i < 5; ++i) {
    src.push_back({0.995, 0.2, 0.2});
    dst.push_back({0.0, 0.9, 0.9});
  }
  const ColorMapping cm = fit_color_mapping(src, dst, 1);
  const Rgb q = cm.apply({0.4, 0.2, 0.6});
  CHECK(q[0] == doctest::Approx(0.2).epsilon(1e-9));
  CHECK(q[2] == doctest::Approx(0.3).epsilon(1e-9));
  CHECK_THROWS_AS(fit_color_mapping(src, dst, 0), ConfigError);
  CHECK_THROWS_AS(fit_color_mapping(src, dst, 5), ConfigError);
}

TEST_CASE("gray world and pseudo-linear helpers") {
  RgbImage img(4, 2, ColorState::camera_raw);
  for (int y = 0; y < 2; ++y)
    for (int x = 0; x < 4; ++x) {
      img.pixel(x, y)[0] = 0.1f * x;
      img.pixel(x, y)[1] = 0.5f;
      img.pixel(x, y)[2] = 0.2f;
    }
  const Rgb g = gray_world_illuminant(img);
  CHECK(g[0] == doctest::Approx(0.15));
  CHECK(g[1] == doctest::Approx(0.5));
  CHECK(g[2] == doctest::Approx(0.2));
  RgbImage srgb = random_image(3, 3, 1, 0.0f, 1.0f, ColorState::display);
  const RgbImage lin = make_pseudo_linear(srgb);
  for (std::size_t i = 0; i < lin.data().size(); ++i)
    CHECK(lin.data()[i] == doctest::Approx(std::pow(srgb.data()[i], 2.2)).epsilon(1e-5));
}
