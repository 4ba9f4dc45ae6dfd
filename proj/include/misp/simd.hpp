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

// Data-parallel inner loops shared by the pixel operators. Every kernel has a
// scalar reference implementation; AVX2/FMA and NEON variants are compiled when
// the target supports them and picked at runtime. Set MISP_SIMD=scalar|avx2|neon
// to force a variant.

#include <cstddef>
#include <string_view>

namespace misp::simd {

enum class Isa { scalar, avx2, neon };

std::string_view to_string(Isa isa);

struct Kernels {
  Isa isa;

  /// out[i] = clamp(in[i] * gain, 0, 1)
  void (*scale_clamp)(const float* in, float* out, std::size_t n, float gain);

  /// out[i] = (1 - t) * a[i] + t * b[i]; exact at t = 0 and t = 1.
  void (*lerp)(const float* a, const float* b, float* out, std::size_t n, float t);

  /// acc[i] += w[i] * src[i]
  void (*multiply_accumulate)(float* acc, const float* w, const float* src, std::size_t n);

  /// out[i] = y[i] + omega * (lambda * (m[i] - y[i]) + resid[i]) / (lambda + 1)
  /// where resid is the weighted neighbor difference sum_q w_q (y_q - y_i).
  void (*sor_relax)(const float* y, const float* m, const float* resid, float* out, std::size_t n,
                    float lambda, float omega);

  /// out[i] = w0 * rgb[3i] + w1 * rgb[3i+1] + w2 * rgb[3i+2]
  void (*weighted_sum3)(const float* rgb, float* out, std::size_t n, float w0, float w1, float w2);
};

/// Best variant for this CPU (or the one forced through MISP_SIMD).
const Kernels& kernels();

const Kernels& scalar_kernels();

/// nullptr when the variant was not compiled in or the CPU lacks the feature.
const Kernels* avx2_kernels();
const Kernels* neon_kernels();

}  // namespace misp::simd
