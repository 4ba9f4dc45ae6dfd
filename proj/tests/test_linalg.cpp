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
#include <limits>
#include <random>

#include "misp/error.hpp"
#include "misp/linalg.hpp"

using namespace misp;

namespace {

Mat3 random_mat(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  Mat3 m;
  for (double& v : m.m) v = u(rng);
  return m;
}

Eigen::Matrix3d to_eigen(const Mat3& m) {
  Eigen::Matrix3d e;
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c) e(r, c) = m(r, c);
  return e;
}

}  // namespace

TEST_CASE("Mat3 arithmetic matches Eigen") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 50; ++trial) {
    const Mat3 a = random_mat(rng), b = random_mat(rng);
    const Eigen::Matrix3d ea = to_eigen(a), eb = to_eigen(b);
    const Eigen::Matrix3d prod = ea * eb;
    const Mat3 p = a * b;
    for (int r = 0; r < 3; ++r)
      for (int c = 0; c < 3; ++c) CHECK(p(r, c) == doctest::Approx(prod(r, c)).epsilon(1e-12));
    CHECK(a.determinant() == doctest::Approx(ea.determinant()).epsilon(1e-12));
    if (std::abs(ea.determinant()) > 1e-3) {
      const Eigen::Matrix3d inv = ea.inverse();
      const Mat3 i = a.inverse();
      for (int r = 0; r < 3; ++r)
        for (int c = 0; c < 3; ++c) CHECK(i(r, c) == doctest::Approx(inv(r, c)).epsilon(1e-9));
    }
    const Vec3 v{0.3, -1.2, 2.5};
    const Vec3 av = a * v;
    const Eigen::Vector3d eav = ea * Eigen::Vector3d(0.3, -1.2, 2.5);
    for (int k = 0; k < 3; ++k) CHECK(av[k] == doctest::Approx(eav[k]).epsilon(1e-12));
  }
}

TEST_CASE("singular and non-finite matrices are rejected") {
  Mat3 s = Mat3::diag(1, 0, 1);
  CHECK_THROWS_AS(s.inverse(), NumericError);
  Mat3 n = Mat3::identity();
  n(1, 1) = std::numeric_limits<double>::quiet_NaN();
  CHECK_FALSE(n.finite());
  CHECK_THROWS_AS(n.inverse(), NumericError);
}

TEST_CASE("cholesky_solve4 matches Eigen on SPD systems") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int trial = 0; trial < 30; ++trial) {
    Eigen::Matrix4d m;
    for (int i = 0; i < 16; ++i) m(i / 4, i % 4) = u(rng);
    const Eigen::Matrix4d spd = m * m.transpose() + 0.1 * Eigen::Matrix4d::Identity();
    Eigen::Vector4d rhs(u(rng), u(rng), u(rng), u(rng));
    const Eigen::Vector4d want = spd.ldlt().solve(rhs);
    std::array<double, 16> a{};
    std::array<double, 4> b{};
    for (int i = 0; i < 16; ++i) a[i] = spd(i / 4, i % 4);
    for (int i = 0; i < 4; ++i) b[i] = rhs[i];
    REQUIRE(cholesky_solve4(a, b));
    for (int i = 0; i < 4; ++i) CHECK(b[i] == doctest::Approx(want[i]).epsilon(1e-8));
  }
  std::array<double, 16> neg{};
  neg[0] = -1.0;
  neg[5] = neg[10] = neg[15] = 1.0;
  std::array<double, 4> b{1, 1, 1, 1};
  CHECK_FALSE(cholesky_solve4(neg, b));
}

TEST_CASE("least_squares matches Eigen QR") {
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const std::size_t m = 40, n = 6, k = 3;
  Eigen::MatrixXd a(m, n), b(m, k);
  std::vector<double> av(m * n), bv(m * k);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < n; ++j) av[i * n + j] = a(i, j) = u(rng);
    for (std::size_t j = 0; j < k; ++j) bv[i * k + j] = b(i, j) = u(rng);
  }
  const Eigen::MatrixXd want = a.colPivHouseholderQr().solve(b);
  const auto got = least_squares(av, m, n, bv, k);
  REQUIRE(got.size() == n * k);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < k; ++j) CHECK(got[i * k + j] == doctest::Approx(want(i, j)).epsilon(1e-9));

  std::vector<double> deficient(m * 2);
  for (std::size_t i = 0; i < m; ++i) deficient[i * 2] = deficient[i * 2 + 1] = u(rng);
  CHECK_THROWS_AS(least_squares(deficient, m, 2, std::vector<double>(m, 1.0), 1), NumericError);
}

TEST_CASE("solve_dense matches Eigen LU") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const std::size_t n = 12;
  Eigen::MatrixXd a(n, n);
  Eigen::VectorXd rhs(n);
  std::vector<double> av(n * n), bv(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) av[i * n + j] = a(i, j) = u(rng);
    bv[i] = rhs[i] = u(rng);
  }
  const Eigen::VectorXd want = a.partialPivLu().solve(rhs);
  REQUIRE(solve_dense(av, bv, n));
  for (std::size_t i = 0; i < n; ++i) CHECK(bv[i] == doctest::Approx(want[i]).epsilon(1e-8));
  std::vector<double> zero(4, 0.0), b2{1, 1};
  CHECK_FALSE(solve_dense(zero, b2, 2));
}
