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

#include "misp/linalg.hpp"

#include <algorithm>
#include <cmath>

#include "misp/error.hpp"

namespace misp {

Mat3 Mat3::identity() { return diag(1.0, 1.0, 1.0); }

Mat3 Mat3::diag(double a, double b, double c) {
  Mat3 r;
  r(0, 0) = a;
  r(1, 1) = b;
  r(2, 2) = c;
  return r;
}

Mat3 Mat3::operator*(const Mat3& o) const {
  Mat3 r;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      double s = 0.0;
      for (int k = 0; k < 3; ++k) s += (*this)(i, k) * o(k, j);
      r(i, j) = s;
    }
  return r;
}

Vec3 Mat3::operator*(const Vec3& v) const {
  Vec3 r{};
  for (int i = 0; i < 3; ++i) r[i] = (*this)(i, 0) * v[0] + (*this)(i, 1) * v[1] + (*this)(i, 2) * v[2];
  return r;
}

Mat3 Mat3::operator*(double s) const {
  Mat3 r = *this;
  for (double& x : r.m) x *= s;
  return r;
}

Mat3 Mat3::operator+(const Mat3& o) const {
  Mat3 r = *this;
  for (int i = 0; i < 9; ++i) r.m[i] += o.m[i];
  return r;
}

double Mat3::determinant() const {
  const Mat3& a = *this;
  return a(0, 0) * (a(1, 1) * a(2, 2) - a(1, 2) * a(2, 1)) - a(0, 1) * (a(1, 0) * a(2, 2) - a(1, 2) * a(2, 0)) +
         a(0, 2) * (a(1, 0) * a(2, 1) - a(1, 1) * a(2, 0));
}

bool Mat3::finite() const {
  for (double x : m)
    if (!std::isfinite(x)) return false;
  return true;
}

Mat3 Mat3::inverse() const {
  const double det = determinant();
  if (!finite() || !std::isfinite(det) || std::abs(det) < 1e-14) throw NumericError("singular 3x3 matrix");
  const Mat3& a = *this;
  Mat3 r;
  r(0, 0) = a(1, 1) * a(2, 2) - a(1, 2) * a(2, 1);
  r(0, 1) = a(0, 2) * a(2, 1) - a(0, 1) * a(2, 2);
  r(0, 2) = a(0, 1) * a(1, 2) - a(0, 2) * a(1, 1);
  r(1, 0) = a(1, 2) * a(2, 0) - a(1, 0) * a(2, 2);
  r(1, 1) = a(0, 0) * a(2, 2) - a(0, 2) * a(2, 0);
  r(1, 2) = a(0, 2) * a(1, 0) - a(0, 0) * a(1, 2);
  r(2, 0) = a(1, 0) * a(2, 1) - a(1, 1) * a(2, 0);
  r(2, 1) = a(0, 1) * a(2, 0) - a(0, 0) * a(2, 1);
  r(2, 2) = a(0, 0) * a(1, 1) - a(0, 1) * a(1, 0);
  return r * (1.0 / det);
}

bool cholesky_solve4(const std::array<double, 16>& a, std::array<double, 4>& b) {
  double l[4][4] = {};
  for (int j = 0; j < 4; ++j) {
    double d = a[4 * j + j];
    for (int k = 0; k < j; ++k) d -= l[j][k] * l[j][k];
    if (!(d > 0.0)) return false;
    l[j][j] = std::sqrt(d);
    for (int i = j + 1; i < 4; ++i) {
      double s = a[4 * i + j];
      for (int k = 0; k < j; ++k) s -= l[i][k] * l[j][k];
      l[i][j] = s / l[j][j];
    }
  }
  for (int i = 0; i < 4; ++i) {
    double s = b[i];
    for (int k = 0; k < i; ++k) s -= l[i][k] * b[k];
    b[i] = s / l[i][i];
  }
  for (int i = 3; i >= 0; --i) {
    double s = b[i];
    for (int k = i + 1; k < 4; ++k) s -= l[k][i] * b[k];
    b[i] = s / l[i][i];
  }
  return true;
}

std::vector<double> least_squares(std::vector<double> a, std::size_t m, std::size_t n, std::vector<double> b,
                                  std::size_t k) {
  if (m < n || a.size() != m * n || b.size() != m * k) throw NumericError("least_squares: bad shapes");
  std::vector<double> diag(n);
  double scale = 0.0;
  for (double v : a) scale = std::max(scale, std::abs(v));
  for (std::size_t j = 0; j < n; ++j) {
    double norm = 0.0;
    for (std::size_t i = j; i < m; ++i) norm += a[i * n + j] * a[i * n + j];
    norm = std::sqrt(norm);
    if (norm <= 1e-12 * std::max(1.0, scale) * std::sqrt(static_cast<double>(m)))
      throw NumericError("least_squares: rank-deficient system");
    const double alpha = a[j * n + j] > 0.0 ? -norm : norm;
    // Householder vector v = x - alpha e_j stored in column j below the diagonal.
    a[j * n + j] -= alpha;
    double vnorm2 = 0.0;
    for (std::size_t i = j; i < m; ++i) vnorm2 += a[i * n + j] * a[i * n + j];
    for (std::size_t c = j + 1; c < n; ++c) {
      double dot = 0.0;
      for (std::size_t i = j; i < m; ++i) dot += a[i * n + j] * a[i * n + c];
      const double f = 2.0 * dot / vnorm2;
      for (std::size_t i = j; i < m; ++i) a[i * n + c] -= f * a[i * n + j];
    }
    for (std::size_t c = 0; c < k; ++c) {
      double dot = 0.0;
      for (std::size_t i = j; i < m; ++i) dot += a[i * n + j] * b[i * k + c];
      const double f = 2.0 * dot / vnorm2;
      for (std::size_t i = j; i < m; ++i) b[i * k + c] -= f * a[i * n + j];
    }
    diag[j] = alpha;
  }
  std::vector<double> x(n * k);
  for (std::size_t c = 0; c < k; ++c)
    for (std::size_t jj = n; jj-- > 0;) {
      double s = b[jj * k + c];
      for (std::size_t t = jj + 1; t < n; ++t) s -= a[jj * n + t] * x[t * k + c];
      x[jj * k + c] = s / diag[jj];
    }
  return x;
}

bool solve_dense(std::vector<double> a, std::vector<double>& b, std::size_t n) {
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    for (std::size_t r = col + 1; r < n; ++r)
      if (std::abs(a[r * n + col]) > std::abs(a[piv * n + col])) piv = r;
    if (!(std::abs(a[piv * n + col]) > 1e-300)) return false;
    if (piv != col) {
      for (std::size_t c = 0; c < n; ++c) std::swap(a[piv * n + c], a[col * n + c]);
      std::swap(b[piv], b[col]);
    }
    for (std::size_t r = col + 1; r < n; ++r) {
      const double f = a[r * n + col] / a[col * n + col];
      for (std::size_t c = col; c < n; ++c) a[r * n + c] -= f * a[col * n + c];
      b[r] -= f * b[col];
    }
  }
  for (std::size_t r = n; r-- > 0;) {
    double s = b[r];
    for (std::size_t c = r + 1; c < n; ++c) s -= a[r * n + c] * b[c];
    b[r] = s / a[r * n + r];
  }
  return true;
}

}  // namespace misp
