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

// On-disk formats: raw sidecar bundles, style presets and calibration results.
// The embedded-raw JPEG container lives in container.hpp.

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "misp/calib.hpp"
#include "misp/imageio.hpp"
#include "misp/photofinish.hpp"
#include "misp/raw.hpp"

namespace misp {

using nlohmann::json;

// --- base64 / little-endian float tensors ---------------------------------

std::string base64_encode(const Bytes& bytes);
/// Strict RFC 4648 decoding; throws FormatError on bad length or characters.
Bytes base64_decode(const std::string& text);

std::string encode_f32_le(const std::vector<float>& values);
/// Throws SchemaError(field) when the payload does not decode or holds a
/// number of floats other than `expected`.
std::vector<float> decode_f32_le(const std::string& text, std::size_t expected, const std::string& field);

// --- raw sidecar bundles ---------------------------------------------------

/// {black_level, white_level, cfa, wb_gains{r,g,b}, ccm_calibrations[{cct, matrix[9]}], iso,
///  width, height, mosaic}. `mosaic` is the file name of the frame next to the JSON.
json metadata_to_json(const CameraMetadata& meta);
/// Throws SchemaError naming the field at fault.
CameraMetadata metadata_from_json(const json& j);

/// Mosaic as 16-bit counts. Throws SchemaError("mosaic") for non-integral or
/// out-of-range samples.
Gray16 mosaic_to_gray16(const ImagePlane& mosaic);
ImagePlane gray16_to_mosaic(const Gray16& g);

/// Decodes a 16-bit grayscale PNG or a P5 PGM.
Gray16 decode_mosaic(const Bytes& bytes);

/// Builds a bundle from in-memory sidecar JSON text and mosaic file bytes.
/// Dimension fields in the JSON, when present, must match the mosaic.
RawBundle bundle_from_parts(const std::string& sidecar_json, const Bytes& mosaic_bytes);

/// Writes <stem>.json next to <stem>.png (or .pgm when `path` says so). `path`
/// names the JSON file.
void write_bundle(const std::filesystem::path& path, const RawBundle& bundle, bool pgm = false);
RawBundle read_bundle(const std::filesystem::path& path);

// --- style presets ---------------------------------------------------------

json style_to_json(const StyleParams& style);
/// Validates tensor lengths and parameter ranges.
StyleParams style_from_json(const json& j);
void write_style(const std::filesystem::path& path, const StyleParams& style);
StyleParams read_style(const std::filesystem::path& path);

/// Built-in presets: identity, default, warm, moody, cinematic, greenish, retro.
std::vector<std::string> builtin_style_names();
/// Throws ConfigError for unknown names.
StyleParams make_builtin_style(const std::string& name);

/// Style names from the *.json files of a directory, sorted; empty when the
/// directory does not exist.
std::vector<std::string> list_styles(const std::filesystem::path& dir);
/// Loads `dir/name.json`, or the built-in preset when the directory does not
/// have it.
StyleParams load_style(const std::filesystem::path& dir, const std::string& name);

// --- calibration results ---------------------------------------------------

json noise_model_to_json(const NoiseModel& model);
NoiseModel noise_model_from_json(const json& j);
/// [{mean, variance, iso, channel?}]
std::vector<PatchStat> patch_stats_from_json(const json& j);
json ccm_to_json(const Mat3& m);
json color_mapping_to_json(const ColorMapping& cm);

/// Reads the whole file as text and parses it; parse errors become FormatError.
json read_json_file(const std::filesystem::path& path);
void write_json_file(const std::filesystem::path& path, const json& j);

}  // namespace misp
