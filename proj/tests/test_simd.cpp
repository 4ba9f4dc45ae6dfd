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

#include <random>
#include <vector>

#include "misp/simd.hpp"

using namespace misp::simd;

namespace {

std::vector<float> randv(std::size_t n, std::uint64_t seed, float lo = -1.0f, float hi = 2.0f) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<float> u(lo, hi);
  std::vector<float> v(n);
  for (float& x : v) x = u(rng);
  return v;
}

std::vector<const Kernels*> variants() {
  std::vector<const Kernels*> v;
  if (const Kernels* k = avx2_kernels()) v.push_back(k);
  if (const Kernels* k = neon_kernels()) v.push_back(k);
  return v;
}

}  // namespace

TEST_CASE("dispatch returns a usable table") {
  const Kernels& k = kernels();
  CHECK(k.scale_clamp != nullptr);
  CHECK(k.weighted_sum3 != nullptr);
  CHECK(scalar_kernels().isa == Isa::scalar);
  CHECK(to_string(Isa::avx2) == "avx2");
  MESSAGE("active kernels: " << to_string(k.isa));
}

TEST_CASE("vector kernels agree with the scalar reference") {
  const Kernels& ref = scalar_kernels();
  const auto vs = variants();
  if (vs.empty()) MESSAGE("no vector variant on this CPU; only the scalar table is exercised");
  for (const Kernels* k : vs) {
    CAPTURE(to_string(k->isa));
    for (std::size_t n : {0u, 1u, 3u, 7u, 8u, 9u, 15u, 16u, 17u, 31u, 64u, 67u, 1000u}) {
      CAPTURE(n);
      const auto a = randv(n, 1 + n), b = randv(n, 2 + n), c = randv(n, 3 + n);
      std::vector<float> o1(n), o2(n);

      ref.scale_clamp(a.data(), o1.data(), n, 1.7f);
      k->scale_clamp(a.data(), o2.data(), n, 1.7f);
      CHECK(o1 == o2);

      for (float t : {0.0f, 0.3f, 1.0f}) {
        ref.lerp(a.data(), b.data(), o1.data(), n, t);
        k->lerp(a.data(), b.data(), o2.data(), n, t);
        for (std::size_t i = 0; i < n; ++i) REQUIRE(std::abs(o1[i] - o2[i]) <= 1e-6f);
        if (t == 0.0f) CHECK(o2 == a);
        if (t == 1.0f) CHECK(o2 == b);
      }

      std::vector<float> acc1 = c, acc2 = c;
      ref.multiply_accumulate(acc1.data(), a.data(), b.data(), n);
      k->multiply_accumulate(acc2.data(), a.data(), b.data(), n);
      for (std::size_t i = 0; i < n; ++i) REQUIRE(std::abs(acc1[i] - acc2[i]) <= 1e-6f);

      ref.sor_relax(a.data(), b.data(), c.data(), o1.data(), n, 1e-3f, 1.6f);
      k->sor_relax(a.data(), b.data(), c.data(), o2.data(), n, 1e-3f, 1.6f);
      for (std::size_t i = 0; i < n; ++i) REQUIRE(std::abs(o1[i] - o2[i]) <= 2e-6f);

      const auto rgb = randv(3 * n, 4 + n, 0.0f, 1.0f);
      ref.weighted_sum3(rgb.data(), o1.data(), n, 0.2126f, 0.7152f, 0.0722f);
      k->weighted_sum3(rgb.data(), o2.data(), n, 0.2126f, 0.7152f, 0.0722f);
      for (std::size_t i = 0; i < n; ++i) REQUIRE(std::abs(o1[i] - o2[i]) <= 1e-6f);
    }
  }
}

TEST_CASE("scalar kernels match their definitions") {
  const Kernels& k = scalar_kernels();
  const float in[4] = {-0.5f, 0.25f, 0.75f, 2.0f};
  float out[4];
  k.scale_clamp(in, out, 4, 2.0f);
  CHECK(out[0] == 0.0f);
  CHECK(out[1] == 0.5f);
  CHECK(out[2] == 1.0f);
  const float y[1] = {0.2f}, m[1] = {0.6f}, s[1] = {0.4f};
  k.sor_relax(y, m, s, out, 1, 1.0f, 1.5f);
  CHECK(out[0] == doctest::Approx(0.2 + 1.5 * (1.0 * (0.6 - 0.2) + 0.4) / 2.0));
  const float c[3] = {0.3f, 0.3f, 0.0f};
  k.sor_relax(c, c + 1, c + 2, out, 1, 1e-3f, 1.6f);
  CHECK(out[0] == 0.3f);
  const float rgb[3] = {1.0f, 2.0f, 3.0f};
  k.weighted_sum3(rgb, out, 1, 0.5f, 0.25f, 0.125f);
  CHECK(out[0] == doctest::Approx(1.375));
}
