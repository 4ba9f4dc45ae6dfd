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

#include <arm_neon.h>

#include "kernels_impl.hpp"
#include "misp/image.hpp"

namespace misp::simd::neon {
namespace {

void scale_clamp(const float* in, float* out, std::size_t n, float gain) {
  const float32x4_t zero = vdupq_n_f32(0.0f);
  const float32x4_t one = vdupq_n_f32(1.0f);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    float32x4_t v = vmulq_n_f32(vld1q_f32(in + i), gain);
    // vmaxnmq would let NaN through; compare-and-select keeps the scalar semantics.
    v = vbslq_f32(vcgtq_f32(v, zero), v, zero);
    v = vminq_f32(v, one);
    vst1q_f32(out + i, v);
  }
  for (; i < n; ++i) out[i] = clamp01(in[i] * gain);
}

void lerp(const float* a, const float* b, float* out, std::size_t n, float t) {
  const float s = 1.0f - t;
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const float32x4_t va = vmulq_n_f32(vld1q_f32(a + i), s);
    vst1q_f32(out + i, vfmaq_n_f32(va, vld1q_f32(b + i), t));
  }
  for (; i < n; ++i) out[i] = s * a[i] + t * b[i];
}

void multiply_accumulate(float* acc, const float* w, const float* src, std::size_t n) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) vst1q_f32(acc + i, vfmaq_f32(vld1q_f32(acc + i), vld1q_f32(w + i), vld1q_f32(src + i)));
  for (; i < n; ++i) acc[i] += w[i] * src[i];
}

void sor_relax(const float* y, const float* m, const float* resid, float* out, std::size_t n, float lambda,
               float omega) {
  const float step = omega / (lambda + 1.0f);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const float32x4_t vy = vld1q_f32(y + i);
    const float32x4_t d = vfmaq_n_f32(vld1q_f32(resid + i), vsubq_f32(vld1q_f32(m + i), vy), lambda);
    vst1q_f32(out + i, vfmaq_n_f32(vy, d, step));
  }
  for (; i < n; ++i) out[i] = y[i] + step * (lambda * (m[i] - y[i]) + resid[i]);
}

void weighted_sum3(const float* rgb, float* out, std::size_t n, float w0, float w1, float w2) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const float32x4x3_t px = vld3q_f32(rgb + 3 * i);
    float32x4_t acc = vmulq_n_f32(px.val[0], w0);
    acc = vfmaq_n_f32(acc, px.val[1], w1);
    acc = vfmaq_n_f32(acc, px.val[2], w2);
    vst1q_f32(out + i, acc);
  }
  for (; i < n; ++i) out[i] = w0 * rgb[3 * i] + w1 * rgb[3 * i + 1] + w2 * rgb[3 * i + 2];
}

}  // namespace

const Kernels table{Isa::neon, scale_clamp, lerp, multiply_accumulate, sor_relax, weighted_sum3};

}  // namespace misp::simd::neon
