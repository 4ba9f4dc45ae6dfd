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

#include <chrono>
#include <filesystem>

#include "misp/bundleio.hpp"
#include "misp/error.hpp"
#include "misp/metrics.hpp"
#include "misp/pipeline.hpp"
#include "misp/resample.hpp"
#include "misp/synthetic.hpp"
#include "test_util.hpp"

using namespace misp;
using misp::test::max_abs_diff;

namespace {

const std::filesystem::path kPresets = MISP_TEST_PRESET_DIR;

RawBundle bundle_for(std::uint64_t seed, int w = 384, int h = 256, Cfa cfa = Cfa::RGGB) {
  return synth_bundle(synth_scene(w, h, seed), synth_metadata(cfa));
}

}  // namespace

TEST_CASE("identity recipe reconstructs the color-corrected input above 40 dB") {
  const auto t0 = std::chrono::steady_clock::now();
  const RenderRecipe recipe;
  const StyleParams style = resolve_style(recipe, kPresets);
  int idx = 0;
  for (Cfa cfa : {Cfa::RGGB, Cfa::BGGR, Cfa::GRBG, Cfa::GBRG, Cfa::RGGB}) {
    const RawBundle b = bundle_for(100 + idx++, 512, 384, cfa);
    const RgbImage ref = color_corrected(b);
    const RenderResult r = render(b, style, recipe);
    const double p = psnr(r.output, ref);
    MESSAGE("identity render " << idx << ": " << p << " dB");
    CHECK(p > 40.0);
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  CHECK(secs < 10.0);
}

TEST_CASE("synthetic bundles invert the as-shot color pipeline") {
  const RgbImage scene = synth_scene(128, 96, 3);
  const RawBundle b = synth_bundle(scene, synth_metadata());
  const RgbImage cc = color_corrected(b);
  // Bilinear demosaic blurs a little; smooth scenes stay close.
  CHECK(psnr(cc, scene) > 40.0);
}

TEST_CASE("stage list, preview sizes and determinism") {
  const RawBundle b = bundle_for(7);
  RenderRecipe recipe;
  recipe.styles = {"cinematic"};
  const StyleParams style = resolve_style(recipe, kPresets);
  const RenderResult r = render(b, style, recipe);
  std::vector<std::string> names;
  for (const auto& [n, _] : r.stages) names.push_back(n);
  CHECK(names == std::vector<std::string>{"denoise", "input", "gain", "gtm", "ltm", "lut3d", "chroma", "gamma", "output"});
  CHECK(r.stage("input")->width() == 96);
  CHECK(r.output.width() == 384);
  CHECK(r.output.state() == ColorState::display);
  CHECK(max_abs_diff(render(b, style, recipe).output, r.output) == 0.0);

  for (double s : {0.125, 0.25, 0.5}) {
    recipe.preview_scale = s;
    const RenderResult p = render(b, style, recipe);
    CHECK(p.output.width() == scaled_size(384, s));
    CHECK(p.output.height() == scaled_size(256, s));
  }
  recipe.preview_scale = 1.0;
  recipe.stages.lut3d = false;
  CHECK(render(b, style, recipe).stage("lut3d") == nullptr);
}

TEST_CASE("stage toggles only touch their own stage") {
  const RawBundle b = bundle_for(8);
  RenderRecipe base;
  base.styles = {"warm"};
  const StyleParams style = resolve_style(base, kPresets);
  const RenderResult r0 = render(b, style, base);

  RenderRecipe sharp = base;
  sharp.edits.sharpen = 1.5;
  const RenderResult r1 = render(b, style, sharp);
  CHECK(max_abs_diff(*r1.stage("gamma"), *r0.stage("gamma")) == 0.0);
  CHECK(max_abs_diff(r1.output, r0.output) > 0.0);
  sharp.stages.sharpen = false;
  CHECK(max_abs_diff(render(b, style, sharp).output, r0.output) == 0.0);

  RenderRecipe den = base;
  den.edits.luma_denoise = 0.5;
  CHECK(max_abs_diff(*render(b, style, den).stage("denoise"), *r0.stage("denoise")) > 0.0);
  den.stages.denoise = false;
  CHECK(max_abs_diff(render(b, style, den).output, r0.output) == 0.0);
  den.stages.denoise = true;
  den.edits.denoise_strength = 0.0;
  CHECK(max_abs_diff(render(b, style, den).output, r0.output) == 0.0);

  RenderRecipe sat = base;
  sat.edits.saturation = 0.4;
  const RenderResult rs = render(b, style, sat);
  CHECK(max_abs_diff(*rs.stage("chroma"), *r0.stage("chroma")) == 0.0);
  CHECK(max_abs_diff(rs.output, r0.output) > 0.0);
}

TEST_CASE("a mixed recipe renders exactly like the mixed style") {
  const RawBundle b = bundle_for(9);
  RenderRecipe recipe;
  recipe.styles = {"warm", "retro"};
  recipe.weights = {0.4, 0.6};
  const StyleParams mixed = mix_styles({load_style(kPresets, "warm"), load_style(kPresets, "retro")}, {0.4, 0.6});
  CHECK(resolve_style(recipe, kPresets) == mixed);
  CHECK(max_abs_diff(render(b, resolve_style(recipe, kPresets), recipe).output, render(b, mixed, recipe).output) == 0.0);
}

TEST_CASE("auto exposure is reported in applied_ev") {
  const RawBundle b = bundle_for(10);
  RenderRecipe recipe;
  recipe.edits.ev = 0.5;
  const StyleParams style = resolve_style(recipe, kPresets);
  CHECK(render(b, style, recipe).applied_ev == 0.5);
  recipe.edits.auto_exposure = true;
  const RgbImage lin = linearize(prepare_raw(b), b.meta, recipe.wb, 0.5);
  CHECK(render(b, style, recipe).applied_ev == doctest::Approx(0.5 + auto_exposure(lin)));
}

TEST_CASE("manual white balance at the as-shot cct and tint matches as-shot") {
  const RawBundle b = bundle_for(11);
  const RgbImage raw = prepare_raw(b);
  const CctTint ct = cct_tint_from_gains(b.meta, b.meta.wb_gains);
  const RgbImage as_shot = linearize(raw, b.meta, {});
  const RgbImage manual = linearize(raw, b.meta, {WbSource::manual, ct.cct, ct.tint});
  CHECK(max_abs_diff(as_shot, manual) < 1e-4);
  const RgbImage warm = linearize(raw, b.meta, {WbSource::manual, 3000.0, 0.0});
  CHECK(max_abs_diff(as_shot, warm) > 0.01);
}

TEST_CASE("gray world neutralizes a uniformly tinted scene") {
  RgbImage scene(64, 48, ColorState::linear_srgb);
  for (int y = 0; y < 48; ++y)
    for (int x = 0; x < 64; ++x) {
      const float v = 0.2f + 0.3f * x / 64.0f;
      float* p = scene.pixel(x, y);
      p[0] = 0.8f * v;
      p[1] = v;
      p[2] = 1.2f * v;
    }
  const RawBundle b = synth_bundle(scene, synth_metadata());
  const RgbImage gw = linearize(prepare_raw(b), b.meta, {WbSource::gray_world, 0, 0});
  double m[3] = {0, 0, 0};
  for (int y = 0; y < 48; ++y)
    for (int x = 0; x < 64; ++x)
      for (int c = 0; c < 3; ++c) m[c] += gw.pixel(x, y)[c];
  CHECK(m[0] / m[1] == doctest::Approx(1.0).epsilon(0.02));
  CHECK(m[2] / m[1] == doctest::Approx(1.0).epsilon(0.02));
}

TEST_CASE("invalid recipes and unknown styles are rejected") {
  RenderRecipe bad;
  bad.preview_scale = 0.3;
  CHECK_THROWS_AS(render(bundle_for(1, 64, 48), StyleParams{}, bad), SchemaError);
  RenderRecipe unknown;
  unknown.styles = {"does-not-exist"};
  CHECK_THROWS_AS(resolve_style(unknown, kPresets), ConfigError);
}
