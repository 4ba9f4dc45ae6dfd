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

#include <immintrin.h>

#include "kernels_impl.hpp"
#include "misp/image.hpp"

namespace misp::simd::avx2 {
namespace {

void scale_clamp(const float* in, float* out, std::size_t n, float gain) {
  const __m256 g = _mm256_set1_ps(gain);
  const __m256 zero = _mm256_setzero_ps();
  const __m256 one = _mm256_set1_ps(1.0f);
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    __m256 v = _mm256_mul_ps(_mm256_loadu_ps(in + i), g);
    // max(v, 0) with v first returns 0 for NaN, matching the scalar clamp.
    v = _mm256_min_ps(_mm256_max_ps(v, zero), one);
    _mm256_storeu_ps(out + i, v);
  }
  for (; i < n; ++i) out[i] = clamp01(in[i] * gain);
}

void lerp(const float* a, const float* b, float* out, std::size_t n, float t) {
  const __m256 vt = _mm256_set1_ps(t);
  const __m256 vs = _mm256_set1_ps(1.0f - t);
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    const __m256 va = _mm256_mul_ps(vs, _mm256_loadu_ps(a + i));
    _mm256_storeu_ps(out + i, _mm256_fmadd_ps(vt, _mm256_loadu_ps(b + i), va));
  }
  const float s = 1.0f - t;
  for (; i < n; ++i) out[i] = s * a[i] + t * b[i];
}

void multiply_accumulate(float* acc, const float* w, const float* src, std::size_t n) {
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    const __m256 r = _mm256_fmadd_ps(_mm256_loadu_ps(w + i), _mm256_loadu_ps(src + i), _mm256_loadu_ps(acc + i));
    _mm256_storeu_ps(acc + i, r);
  }
  for (; i < n; ++i) acc[i] += w[i] * src[i];
}

void sor_relax(const float* y, const float* m, const float* resid, float* out, std::size_t n, float lambda,
               float omega) {
  const float step = omega / (lambda + 1.0f);
  const __m256 vl = _mm256_set1_ps(lambda);
  const __m256 vs = _mm256_set1_ps(step);
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    const __m256 vy = _mm256_loadu_ps(y + i);
    const __m256 d = _mm256_fmadd_ps(vl, _mm256_sub_ps(_mm256_loadu_ps(m + i), vy), _mm256_loadu_ps(resid + i));
    _mm256_storeu_ps(out + i, _mm256_fmadd_ps(vs, d, vy));
  }
  for (; i < n; ++i) {
    out[i] = y[i] + step * (lambda * (m[i] - y[i]) + resid[i]);
  }
}

void weighted_sum3(const float* rgb, float* out, std::size_t n, float w0, float w1, float w2) {
  const __m256i stride = _mm256_setr_epi32(0, 3, 6, 9, 12, 15, 18, 21);
  const __m256 v0 = _mm256_set1_ps(w0);
  const __m256 v1 = _mm256_set1_ps(w1);
  const __m256 v2 = _mm256_set1_ps(w2);
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    const float* base = rgb + 3 * i;
    const __m256 r = _mm256_i32gather_ps(base, stride, 4);
    const __m256 g = _mm256_i32gather_ps(base + 1, stride, 4);
    const __m256 b = _mm256_i32gather_ps(base + 2, stride, 4);
    __m256 acc = _mm256_mul_ps(v0, r);
    acc = _mm256_fmadd_ps(v1, g, acc);
    acc = _mm256_fmadd_ps(v2, b, acc);
    _mm256_storeu_ps(out + i, acc);
  }
  for (; i < n; ++i) out[i] = w0 * rgb[3 * i] + w1 * rgb[3 * i + 1] + w2 * rgb[3 * i + 2];
}

}  // namespace

const Kernels table{Isa::avx2, scale_clamp, lerp, multiply_accumulate, sor_relax, weighted_sum3};

}  // namespace misp::simd::avx2
