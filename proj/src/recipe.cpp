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

#include "misp/recipe.hpp"

#include <cmath>
#include <set>

#include "misp/error.hpp"
#include "misp/raw.hpp"

namespace misp {
namespace {

using nlohmann::json;

void reject_unknown(const json& j, const std::set<std::string>& known, const std::string& prefix) {
  for (const auto& [key, _] : j.items())
    if (!known.count(key)) throw SchemaError(prefix + key, "unknown field");
}

void read_number(const json& j, const char* key, double& out, const std::string& prefix) {
  if (!j.contains(key)) return;
  if (!j[key].is_number()) throw SchemaError(prefix + key, "must be a number");
  out = j[key].get<double>();
}

void read_bool(const json& j, const char* key, bool& out, const std::string& prefix) {
  if (!j.contains(key)) return;
  if (!j[key].is_boolean()) throw SchemaError(prefix + key, "must be a boolean");
  out = j[key].get<bool>();
}

const json& object(const json& j, const char* key) {
  const json& v = j[key];
  if (!v.is_object()) throw SchemaError(key, "must be an object");
  return v;
}

}  // namespace

std::string to_string(WbSource s) {
  switch (s) {
    case WbSource::as_shot: return "as-shot";
    case WbSource::gray_world: return "gray-world";
    case WbSource::manual: return "manual";
  }
  return "as-shot";
}

WbSource parse_wb_source(const std::string& s) {
  if (s == "as-shot") return WbSource::as_shot;
  if (s == "gray-world") return WbSource::gray_world;
  if (s == "manual") return WbSource::manual;
  throw SchemaError("wb.source", "expected as-shot, gray-world or manual, got '" + s + "'");
}

void RenderRecipe::validate() const {
  if (styles.empty()) throw SchemaError("styles", "at least one style is required");
  if (weights.size() != styles.size()) throw SchemaError("weights", "needs one weight per style");
  double sum = 0.0;
  for (double w : weights) {
    if (!std::isfinite(w) || w < 0.0) throw SchemaError("weights", "weights must be finite and non-negative");
    sum += w;
  }
  if (std::abs(sum - 1.0) > kWeightSumTolerance) throw SchemaError("weights", "weights must sum to 1");
  for (const auto& s : styles)
    if (s.empty() || s.find_first_of("/\\") != std::string::npos || s.front() == '.')
      throw SchemaError("styles", "invalid style name '" + s + "'");
  try {
    edits.validate();
  } catch (const SchemaError& e) {
    throw SchemaError("edits." + e.field(), e.what());
  }
  if (wb.source == WbSource::manual) {
    if (!(wb.cct >= kLocusMinCct && wb.cct <= kLocusMaxCct)) throw SchemaError("wb.cct", "must lie in [2000, 12000] K");
    if (!(std::abs(wb.tint) <= 0.05)) throw SchemaError("wb.tint", "must lie in [-0.05, 0.05]");
  }
  const bool scale_ok = preview_scale == 0.125 || preview_scale == 0.25 || preview_scale == 0.5 || preview_scale == 1.0;
  if (!scale_ok) throw SchemaError("preview_scale", "must be one of 0.125, 0.25, 0.5, 1");
}

json recipe_to_json(const RenderRecipe& r) {
  const EditSettings& e = r.edits;
  return {{"styles", r.styles},
          {"weights", r.weights},
          {"edits",
           {{"ev", e.ev},
            {"auto_exposure", e.auto_exposure},
            {"contrast", e.contrast},
            {"highlights", e.highlights},
            {"shadows", e.shadows},
            {"saturation", e.saturation},
            {"vibrance", e.vibrance},
            {"sharpen", e.sharpen},
            {"denoise_strength", e.denoise_strength},
            {"luma_denoise", e.luma_denoise},
            {"chroma_denoise", e.chroma_denoise}}},
          {"stages",
           {{"denoise", r.stages.denoise},
            {"lut3d", r.stages.lut3d},
            {"multiscale", r.stages.multiscale},
            {"refine", r.stages.refine},
            {"sharpen", r.stages.sharpen}}},
          {"wb", {{"source", to_string(r.wb.source)}, {"cct", r.wb.cct}, {"tint", r.wb.tint}}},
          {"preview_scale", r.preview_scale}};
}

RenderRecipe recipe_from_json(const json& j) {
  if (!j.is_object()) throw SchemaError("recipe", "must be a JSON object");
  reject_unknown(j, {"styles", "weights", "edits", "stages", "wb", "preview_scale"}, "");
  RenderRecipe r;
  if (j.contains("styles")) {
    const json& s = j["styles"];
    if (s.is_string()) {
      r.styles = {s.get<std::string>()};
    } else if (s.is_array()) {
      r.styles.clear();
      for (const auto& e : s) {
        if (!e.is_string()) throw SchemaError("styles", "entries must be strings");
        r.styles.push_back(e.get<std::string>());
      }
    } else {
      throw SchemaError("styles", "must be a string or an array of strings");
    }
    r.weights.assign(r.styles.size(), r.styles.empty() ? 0.0 : 1.0 / static_cast<double>(r.styles.size()));
  }
  if (j.contains("weights")) {
    if (!j["weights"].is_array()) throw SchemaError("weights", "must be an array of numbers");
    r.weights.clear();
    for (const auto& e : j["weights"]) {
      if (!e.is_number()) throw SchemaError("weights", "entries must be numbers");
      r.weights.push_back(e.get<double>());
    }
  }
  if (j.contains("edits")) {
    const json& e = object(j, "edits");
    const std::string p = "edits.";
    reject_unknown(e,
                   {"ev", "auto_exposure", "contrast", "highlights", "shadows", "saturation", "vibrance", "sharpen",
                    "denoise_strength", "luma_denoise", "chroma_denoise"},
                   p);
    EditSettings& s = r.edits;
    read_number(e, "ev", s.ev, p);
    read_bool(e, "auto_exposure", s.auto_exposure, p);
    read_number(e, "contrast", s.contrast, p);
    read_number(e, "highlights", s.highlights, p);
    read_number(e, "shadows", s.shadows, p);
    read_number(e, "saturation", s.saturation, p);
    read_number(e, "vibrance", s.vibrance, p);
    read_number(e, "sharpen", s.sharpen, p);
    read_number(e, "denoise_strength", s.denoise_strength, p);
    read_number(e, "luma_denoise", s.luma_denoise, p);
    read_number(e, "chroma_denoise", s.chroma_denoise, p);
  }
  if (j.contains("stages")) {
    const json& s = object(j, "stages");
    const std::string p = "stages.";
    reject_unknown(s, {"denoise", "lut3d", "multiscale", "refine", "sharpen"}, p);
    read_bool(s, "denoise", r.stages.denoise, p);
    read_bool(s, "lut3d", r.stages.lut3d, p);
    read_bool(s, "multiscale", r.stages.multiscale, p);
    read_bool(s, "refine", r.stages.refine, p);
    read_bool(s, "sharpen", r.stages.sharpen, p);
  }
  if (j.contains("wb")) {
    const json& w = object(j, "wb");
    reject_unknown(w, {"source", "cct", "tint"}, "wb.");
    if (w.contains("source")) {
      if (!w["source"].is_string()) throw SchemaError("wb.source", "must be a string");
      r.wb.source = parse_wb_source(w["source"].get<std::string>());
    }
    read_number(w, "cct", r.wb.cct, "wb.");
    read_number(w, "tint", r.wb.tint, "wb.");
  }
  read_number(j, "preview_scale", r.preview_scale, "");
  r.validate();
  return r;
}

}  // namespace misp
