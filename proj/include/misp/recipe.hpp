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

// Render recipe: style selection and mix weights, edit settings, stage
// toggles, white-balance source and preview scale.

#include <string>
#include <vector>

#include <json.hpp>

#include "misp/editops.hpp"

namespace misp {

enum class WbSource { as_shot, gray_world, manual };

std::string to_string(WbSource s);
/// "as-shot", "gray-world" or "manual"; throws SchemaError("wb.source").
WbSource parse_wb_source(const std::string& s);

struct WbSettings {
  WbSource source = WbSource::as_shot;
  double cct = 6504.0;  // manual only
  double tint = 0.0;    // manual only
  friend bool operator==(const WbSettings&, const WbSettings&) = default;
};

struct StageToggles {
  bool denoise = true;
  bool lut3d = true;
  bool multiscale = false;
  bool refine = false;
  bool sharpen = true;
  friend bool operator==(const StageToggles&, const StageToggles&) = default;
};

struct RenderRecipe {
  std::vector<std::string> styles{"identity"};
  std::vector<double> weights{1.0};
  EditSettings edits;
  StageToggles stages;
  WbSettings wb;
  double preview_scale = 1.0;  // 1/8, 1/4, 1/2 or 1

  /// Throws SchemaError with a dotted field path (for example "edits.contrast").
  void validate() const;
  friend bool operator==(const RenderRecipe&, const RenderRecipe&) = default;
};

inline constexpr double kWeightSumTolerance = 1e-6;

nlohmann::json recipe_to_json(const RenderRecipe& r);
/// Missing keys keep their defaults; unknown keys and wrong types are
/// rejected. The result is validated.
RenderRecipe recipe_from_json(const nlohmann::json& j);

}  // namespace misp
