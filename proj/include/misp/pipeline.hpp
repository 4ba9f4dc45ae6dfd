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

// End-to-end rendering of a raw bundle under a recipe.

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "misp/photofinish.hpp"
#include "misp/raw.hpp"
#include "misp/recipe.hpp"

namespace misp {

/// Black-level normalization and tiled demosaic; camera-raw RGB.
RgbImage prepare_raw(const RawBundle& bundle);

/// White balance and color correction for the chosen source, after an exposure
/// shift of `ev` stops on the camera-raw image.
RgbImage linearize(const RgbImage& camera_raw, const CameraMetadata& meta, const WbSettings& wb, double ev = 0.0);

/// The as-shot color-corrected image: the reference for identity renders.
RgbImage color_corrected(const RawBundle& bundle);

/// Loads every recipe style from `preset_dir` (falling back to the built-in
/// presets) and mixes them with the recipe weights.
StyleParams resolve_style(const RenderRecipe& recipe, const std::filesystem::path& preset_dir);

struct RenderResult {
  RgbImage output;  // display-referred, preview_scale times the source size
  std::vector<std::pair<std::string, RgbImage>> stages;
  double applied_ev = 0.0;  // recipe EV plus the auto-exposure shift
  const RgbImage* stage(const std::string& name) const;
};

/// Everything after WB/CCM: denoise, auto exposure, photofinishing at a quarter
/// of the source resolution, guided upsampling (or plain resampling at
/// preview_scale <= 1/4) and sharpening. Stage names: denoise, input, gain,
/// gtm, ltm, [lut3d], chroma, gamma, output.
RenderResult render_linear(const RgbImage& linear, const StyleParams& style, const RenderRecipe& recipe);

RenderResult render(const RawBundle& bundle, const StyleParams& style, const RenderRecipe& recipe);

}  // namespace misp
