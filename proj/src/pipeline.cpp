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

#include "misp/pipeline.hpp"

#include "misp/bundleio.hpp"
#include "misp/calib.hpp"
#include "misp/editops.hpp"
#include "misp/error.hpp"
#include "misp/resample.hpp"
#include "misp/upsample.hpp"

namespace misp {

const RgbImage* RenderResult::stage(const std::string& name) const {
  for (const auto& [n, img] : stages)
    if (n == name) return &img;
  return nullptr;
}

RgbImage prepare_raw(const RawBundle& bundle) {
  bundle.meta.validate();
  return demosaic_tiled(normalize_black_level(bundle), bundle.meta.cfa);
}

RgbImage linearize(const RgbImage& camera_raw, const CameraMetadata& meta, const WbSettings& wb, double ev) {
  const RgbImage raw = ev == 0.0 ? camera_raw : [&] {
    RgbImage r = apply_ev(camera_raw, ev);
    r.set_state(ColorState::camera_raw);
    return r;
  }();
  switch (wb.source) {
    case WbSource::as_shot:
      return apply_wb_ccm(raw, meta);
    case WbSource::gray_world: {
      const Rgb ill = gray_world_illuminant(raw);
      if (!(ill[0] > 0.0) || !(ill[2] > 0.0)) return apply_wb_ccm(raw, meta);
      const WbGains gains{ill[1] / ill[0], ill[1] / ill[2]};
      const double cct = meta.ccm_calibrations.size() > 1 ? cct_tint_from_gains(meta, gains).cct
                                                           : meta.ccm_calibrations.front().cct;
      return apply_wb_ccm(raw, gains, interpolate_ccm(meta, cct));
    }
    case WbSource::manual: {
      const WbGains gains = gains_from_cct_tint(meta, {wb.cct, wb.tint});
      return apply_wb_ccm(raw, gains, interpolate_ccm(meta, wb.cct));
    }
  }
  throw ConfigError("unknown white-balance source");
}

RgbImage color_corrected(const RawBundle& bundle) { return linearize(prepare_raw(bundle), bundle.meta, {}); }

StyleParams resolve_style(const RenderRecipe& recipe, const std::filesystem::path& preset_dir) {
  recipe.validate();
  std::vector<StyleParams> styles;
  for (const auto& name : recipe.styles) styles.push_back(load_style(preset_dir, name));
  if (styles.size() == 1) return styles.front();
  return mix_styles(styles, recipe.weights);
}

RenderResult render_linear(const RgbImage& linear_in, const StyleParams& style, const RenderRecipe& recipe) {
  recipe.validate();
  const EditSettings& e = recipe.edits;
  RenderResult res;
  res.applied_ev = e.ev;

  RgbImage linear = linear_in;
  if (recipe.stages.denoise && e.denoise_strength > 0.0 && (e.luma_denoise > 0.0 || e.chroma_denoise > 0.0)) {
    RgbImage d = linear;
    if (e.luma_denoise > 0.0) d = luma_denoise(d, e.luma_denoise);
    if (e.chroma_denoise > 0.0) d = chroma_denoise(d, e.chroma_denoise);
    linear = blend_strength(linear, d, e.denoise_strength);
    linear.set_state(ColorState::linear_srgb);
  }
  res.stages.emplace_back("denoise", linear);

  if (e.auto_exposure) {
    const double shift = auto_exposure(linear);
    res.applied_ev += shift;
    linear = apply_ev(linear, shift);
  }

  const int src_w = linear.width();
  const int src_h = linear.height();
  const int out_w = scaled_size(src_w, recipe.preview_scale);
  const int out_h = scaled_size(src_h, recipe.preview_scale);
  const bool upsample = recipe.preview_scale > 0.25;
  const RgbImage low_in = upsample ? resize(linear, scaled_size(src_w, 0.25), scaled_size(src_h, 0.25), ResampleMode::area)
                                   : resize(linear, out_w, out_h, ResampleMode::area);

  PhotofinishOptions opts;
  opts.downsample = 1.0;
  opts.lut3d = recipe.stages.lut3d;
  opts.multiscale = recipe.stages.multiscale;
  opts.refine = recipe.stages.refine;
  if (e.contrast != 0.0 || e.highlights != 0.0 || e.shadows != 0.0)
    opts.post_ltm = [&](const RgbImage& img) { return apply_luma_edits(img, e.contrast, e.highlights, e.shadows); };
  if (e.saturation != 0.0 || e.vibrance != 0.0)
    opts.post_gamma = [&](const RgbImage& img) { return adjust_sat_vib(img, e.saturation, e.vibrance); };
  PhotofinishResult pf = run_photofinish(low_in, style, opts);
  for (auto& s : pf.stages) res.stages.push_back(std::move(s));

  RgbImage out;
  if (upsample) {
    const RgbImage guide = out_w == src_w && out_h == src_h ? linear : resize(linear, out_w, out_h, ResampleMode::area);
    out = bgu_upsample(low_in, pf.output, guide);
  } else {
    out = std::move(pf.output);
  }
  if (recipe.stages.sharpen && e.sharpen > 0.0) out = sharpen(out, e.sharpen);
  out.set_state(ColorState::display);
  res.stages.emplace_back("output", out);
  res.output = std::move(out);
  return res;
}

RenderResult render(const RawBundle& bundle, const StyleParams& style, const RenderRecipe& recipe) {
  recipe.validate();
  const RgbImage linear = linearize(prepare_raw(bundle), bundle.meta, recipe.wb, recipe.edits.ev);
  return render_linear(linear, style, recipe);
}

}  // namespace misp
