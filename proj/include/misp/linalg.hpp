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

// Small fixed-size dense algebra used by the color pipeline and the BGU solve.

#include <array>
#include <cstddef>
#include <vector>

namespace misp {

using Vec3 = std::array<double, 3>;

/// Row-major 3x3 matrix.
struct Mat3 {
  std::array<double, 9> m{};

  static Mat3 identity();
  static Mat3 diag(double a, double b, double c);

  double& operator()(int r, int c) { return m[3 * r + c]; }
  double operator()(int r, int c) const { return m[3 * r + c]; }

  Mat3 operator*(const Mat3& o) const;
  Vec3 operator*(const Vec3& v) const;
  Mat3 operator*(double s) const;
  Mat3 operator+(const Mat3& o) const;

  double determinant() const;
  /// Throws NumericError when the matrix is singular or non-finite.
  Mat3 inverse() const;
  bool finite() const;

  friend bool operator==(const Mat3&, const Mat3&) = default;
};

/// Solve A x = b for symmetric positive definite 4x4 A by Cholesky.
/// Returns false if A is not positive definite.
bool cholesky_solve4(const std::array<double, 16>& a, std::array<double, 4>& b);

/// Least-squares solution of A X = B by Householder QR. A is m x n row-major
/// with m >= n, B is m x k row-major; the result is n x k row-major. Throws
/// NumericError when A is rank deficient.
std::vector<double> least_squares(std::vector<double> a, std::size_t m, std::size_t n, std::vector<double> b,
                                  std::size_t k);

/// Solve a small dense square system by Gaussian elimination with partial
/// pivoting. Returns false when the matrix is singular.
bool solve_dense(std::vector<double> a, std::vector<double>& b, std::size_t n);

}  // namespace misp
