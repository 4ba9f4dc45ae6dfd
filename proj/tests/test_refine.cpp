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

#include <Eigen/Dense>
#include <chrono>
#include <cmath>

#include "misp/error.hpp"
#include "misp/refine.hpp"
#include "oracles.hpp"
#include "test_util.hpp"

using namespace misp;
using misp::test::max_abs_diff;
using misp::test::random_image;
using misp::test::random_plane;

namespace {

// Guide with a vertical step edge plus a mild ramp.
ImagePlane edge_guide(int w, int h) {
  ImagePlane g(w, h);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) g.at(x, y) = (x < w / 2 ? 0.2f : 0.6f) + 0.002f * y;
  return g;
}

}  // namespace

TEST_CASE("solver defaults") {
  const SolverConfig cfg;
  CHECK(cfg.k == 7);
  CHECK(cfg.sigma_s == 3.0);
  CHECK(cfg.sigma_r == 0.01);
  CHECK(cfg.lambda == 1e-3);
  CHECK(cfg.n_iter == 80);
  CHECK(cfg.omega == 1.6);
  SolverConfig bad;
  bad.k = 4;
  CHECK_THROWS_AS(bad.validate(), ConfigError);
  bad = SolverConfig{};
  bad.omega = 2.0;
  CHECK_THROWS_AS(bad.validate(), ConfigError);
}

TEST_CASE("bilateral weights are normalized and follow the kernel") {
  SolverConfig cfg;
  cfg.k = 5;
  cfg.sigma_r = 0.1;
  const ImagePlane g = random_plane(9, 7, 3);
  const BilateralWeights bw = bilateral_weights(g, cfg);
  CHECK(bw.w.size() == 25u * 63u);
  for (int y = 0; y < 7; ++y)
    for (int x = 0; x < 9; ++x) {
      double sum = 0.0, raw_sum = 0.0;
      std::vector<double> raw;
      for (int dy = -2; dy <= 2; ++dy)
        for (int dx = -2; dx <= 2; ++dx) {
          const double dz = g.at(x, y) - g.at(reflect_index(x + dx, 9), reflect_index(y + dy, 7));
          raw.push_back(std::exp(-(dx * dx + dy * dy) / 18.0 - dz * dz / 0.02));
          raw_sum += raw.back();
        }
      for (int o = 0; o < 25; ++o) {
        sum += bw.at(o, x, y);
        REQUIRE(bw.at(o, x, y) == doctest::Approx(raw[o] / raw_sum).epsilon(1e-5));
      }
      CHECK(sum == doctest::Approx(1.0).epsilon(1e-6));
    }
}

TEST_CASE("constant input is an exact fixed point") {
  ImagePlane m(20, 14);
  for (float& v : m.data()) v = 0.37f;
  const ImagePlane y = bilateral_solve(m, random_plane(20, 14, 5), SolverConfig{});
  for (float v : y.data()) REQUIRE(v == 0.37f);
}

TEST_CASE("a huge data weight returns the input") {
  SolverConfig cfg;
  cfg.lambda = 1e6;
  const ImagePlane m = random_plane(24, 18, 6);
  const ImagePlane y = bilateral_solve(m, edge_guide(24, 18), cfg);
  CHECK(max_abs_diff(y, m) <= 1e-4);
}

TEST_CASE("SOR reaches the direct-solve objective within 1 percent") {
  const auto t0 = std::chrono::steady_clock::now();
  const SolverConfig cfg;
  const ImagePlane m = random_plane(12, 12, 9);
  const ImagePlane g = edge_guide(12, 12);
  const BilateralWeights bw = bilateral_weights(g, cfg);
  const ImagePlane y = bilateral_solve(m, bw, cfg);
  const ImagePlane ystar = oracle::bilateral_minimizer(m, bw, cfg.lambda);
  const double e_sor = bilateral_objective(y, m, bw, cfg.lambda);
  const double e_opt = bilateral_objective(ystar, m, bw, cfg.lambda);
  const double e_in = bilateral_objective(m, m, bw, cfg.lambda);
  MESSAGE("objective: input " << e_in << ", SOR " << e_sor << ", direct " << e_opt);
  CHECK(e_opt <= e_sor * (1 + 1e-9));
  CHECK(e_sor <= e_opt * 1.01);
  CHECK(e_sor < e_in);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  CHECK(secs < 2.0);
}

TEST_CASE("bilateral objective matches its definition") {
  SolverConfig cfg;
  cfg.k = 3;
  const ImagePlane g = random_plane(5, 4, 1), y = random_plane(5, 4, 2), m = random_plane(5, 4, 3);
  const BilateralWeights bw = bilateral_weights(g, cfg);
  double e = 0.0;
  for (int py = 0; py < 4; ++py)
    for (int px = 0; px < 5; ++px) {
      e += 0.5 * std::pow(static_cast<double>(y.at(px, py)) - m.at(px, py), 2);
      int o = 0;
      for (int dy = -1; dy <= 1; ++dy)
        for (int dx = -1; dx <= 1; ++dx, ++o)
          e += bw.at(o, px, py) * std::pow(static_cast<double>(y.at(px, py)) - y.at(reflect_index(px + dx, 5), reflect_index(py + dy, 4)), 2);
    }
  CHECK(bilateral_objective(y, m, bw, 0.5) == doctest::Approx(e).epsilon(1e-9));
}

TEST_CASE("solver smooths within regions but keeps the edge") {
  const int w = 32, h = 16;
  const ImagePlane g = edge_guide(w, h);
  ImagePlane m = random_plane(w, h, 12, -0.05f, 0.05f);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) m.at(x, y) += x < w / 2 ? 0.2f : 0.8f;
  const ImagePlane y = bilateral_solve(m, g, SolverConfig{});
  double var_in = 0.0, var_out = 0.0;
  for (int yy = 2; yy < h - 2; ++yy)
    for (int x = 2; x < w / 2 - 4; ++x) {
      var_in += std::pow(m.at(x, yy) - 0.2, 2);
      var_out += std::pow(y.at(x, yy) - 0.2, 2);
    }
  CHECK(var_out < 0.5 * var_in);
  CHECK(y.at(w / 2 + 1, h / 2) - y.at(w / 2 - 2, h / 2) > 0.5);
}

TEST_CASE("multi-plane solve shares weights") {
  const ImagePlane g = edge_guide(16, 12);
  const std::vector<ImagePlane> ms{random_plane(16, 12, 1), random_plane(16, 12, 2)};
  const auto ys = bilateral_solve(ms, g, SolverConfig{});
  REQUIRE(ys.size() == 2);
  CHECK(max_abs_diff(ys[1], bilateral_solve(ms[1], g, SolverConfig{})) == 0.0);
}

TEST_CASE("multiscale LTM with one unit scale equals plain slicing") {
  LtmGrid grid = LtmGrid::constant(4, 3, 1.1f, 0.9f, 1.2f, 1.3f, 0.5f);
  for (std::size_t i = 0; i < grid.values.size(); ++i) grid.values[i] += 0.01f * static_cast<float>(i % 7);
  const RgbImage img = random_image(24, 20, 3);
  const LtmPlanes a = multiscale_ltm(img, grid, {1.0});
  const LtmPlanes b = slice_ltm_grid(grid, guidance_map(img));
  CHECK(max_abs_diff(a.A, b.A) <= 1e-6);
  CHECK(max_abs_diff(a.W, b.W) <= 1e-6);
  const LtmPlanes c = multiscale_ltm(img, grid, {1.0, 0.5, 0.25}, true);
  CHECK(c.A.width() == 24);
  CHECK(c.A.height() == 20);
  CHECK_THROWS_AS(multiscale_ltm(img, grid, {}), ConfigError);
  CHECK_THROWS_AS(multiscale_ltm(img, grid, {1.5}), ConfigError);
}

TEST_CASE("multiscale of a constant grid is constant") {
  const LtmGrid grid = LtmGrid::constant(8, 8, 1.3f, 0.8f, 1.1f, 1.2f, 0.0f);
  const LtmPlanes p = multiscale_ltm(random_image(40, 30, 8), grid, {1.0, 0.5, 0.25, 0.125, 0.0625}, true);
  for (float v : p.A.data()) REQUIRE(v == doctest::Approx(1.3f).epsilon(1e-6));
  for (float v : p.W.data()) REQUIRE(v == doctest::Approx(0.5f).epsilon(1e-6));
}

TEST_CASE("box mean over clipped windows") {
  const ImagePlane p = random_plane(7, 5, 4);
  const ImagePlane b = box_mean_clipped(p, 2);
  for (int y = 0; y < 5; ++y)
    for (int x = 0; x < 7; ++x) {
      double s = 0.0;
      int n = 0;
      for (int yy = std::max(0, y - 2); yy <= std::min(4, y + 2); ++yy)
        for (int xx = std::max(0, x - 2); xx <= std::min(6, x + 2); ++xx, ++n) s += p.at(xx, yy);
      CHECK(b.at(x, y) == doctest::Approx(s / n).epsilon(1e-6));
    }
}

TEST_CASE("guided filter matches a direct windowed oracle") {
  const int w = 11, h = 9, r = 2;
  const double eps = 1e-2;
  const ImagePlane p = random_plane(w, h, 1), g = random_plane(w, h, 2);
  const ImagePlane q = guided_filter(p, g, r, eps);
  auto window = [&](int x, int y, auto fn) {
    double s = 0.0;
    int n = 0;
    for (int yy = std::max(0, y - r); yy <= std::min(h - 1, y + r); ++yy)
      for (int xx = std::max(0, x - r); xx <= std::min(w - 1, x + r); ++xx, ++n) s += fn(xx, yy);
    return s / n;
  };
  std::vector<double> a(w * h), b(w * h);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      const double mi = window(x, y, [&](int i, int j) { return double(g.at(i, j)); });
      const double mp = window(x, y, [&](int i, int j) { return double(p.at(i, j)); });
      const double ii = window(x, y, [&](int i, int j) { return double(g.at(i, j)) * g.at(i, j); });
      const double ip = window(x, y, [&](int i, int j) { return double(g.at(i, j)) * p.at(i, j); });
      a[y * w + x] = (ip - mi * mp) / (ii - mi * mi + eps);
      b[y * w + x] = mp - a[y * w + x] * mi;
    }
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      const double ma = window(x, y, [&](int i, int j) { return a[j * w + i]; });
      const double mb = window(x, y, [&](int i, int j) { return b[j * w + i]; });
      CHECK(q.at(x, y) == doctest::Approx(ma * g.at(x, y) + mb).epsilon(1e-5));
    }
}

TEST_CASE("guided filter with the input as its own guide and tiny eps is near identity") {
  const ImagePlane p = random_plane(16, 16, 3);
  CHECK(max_abs_diff(guided_filter(p, p, 3, 1e-8), p) < 1e-3);
}
