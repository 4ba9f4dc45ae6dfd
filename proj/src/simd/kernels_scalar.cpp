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

#include "kernels_impl.hpp"

#include "misp/image.hpp"

namespace misp::simd::scalar {
namespace {

void scale_clamp(const float* in, float* out, std::size_t n, float gain) {
  for (std::size_t i = 0; i < n; ++i) out[i] = clamp01(in[i] * gain);
}

void lerp(const float* a, const float* b, float* out, std::size_t n, float t) {
  const float s = 1.0f - t;
  for (std::size_t i = 0; i < n; ++i) out[i] = s * a[i] + t * b[i];
}

void multiply_accumulate(float* acc, const float* w, const float* src, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) acc[i] += w[i] * src[i];
}

void sor_relax(const float* y, const float* m, const float* resid, float* out, std::size_t n, float lambda,
               float omega) {
  const float step = omega / (lambda + 1.0f);
  for (std::size_t i = 0; i < n; ++i) out[i] = y[i] + step * (lambda * (m[i] - y[i]) + resid[i]);
}

void weighted_sum3(const float* rgb, float* out, std::size_t n, float w0, float w1, float w2) {
  for (std::size_t i = 0; i < n; ++i) out[i] = w0 * rgb[3 * i] + w1 * rgb[3 * i + 1] + w2 * rgb[3 * i + 2];
}

}  // namespace

const Kernels table{Isa::scalar, scale_clamp, lerp, multiply_accumulate, sor_relax, weighted_sum3};

}  // namespace misp::simd::scalar
