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

#include "misp/bundleio.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <bit>
#include <cmath>

#include "misp/error.hpp"

namespace misp {
namespace {

const json& require(const json& j, const char* field) {
  if (!j.is_object()) throw SchemaError(field, "expected an object holding this field");
  const auto it = j.find(field);
  if (it == j.end() || it->is_null()) throw SchemaError(field, "missing");
  return *it;
}

double number(const json& j, const char* field) {
  const json& v = require(j, field);
  if (!v.is_number()) throw SchemaError(field, "must be a number");
  return v.get<double>();
}

int integer(const json& j, const char* field) {
  const json& v = require(j, field);
  if (!v.is_number_integer()) throw SchemaError(field, "must be an integer");
  return v.get<int>();
}

std::string text(const json& j, const char* field) {
  const json& v = require(j, field);
  if (!v.is_string()) throw SchemaError(field, "must be a string");
  return v.get<std::string>();
}

Mat3 matrix_from_json(const json& j, const std::string& field) {
  std::vector<double> flat;
  if (!j.is_array()) throw SchemaError(field, "matrix must be an array");
  for (const auto& e : j) {
    if (e.is_array()) {
      for (const auto& f : e) {
        if (!f.is_number()) throw SchemaError(field, "matrix entries must be numbers");
        flat.push_back(f.get<double>());
      }
    } else if (e.is_number()) {
      flat.push_back(e.get<double>());
    } else {
      throw SchemaError(field, "matrix entries must be numbers");
    }
  }
  if (flat.size() != 9) throw SchemaError(field, "matrix must hold 9 entries");
  Mat3 m;
  std::copy(flat.begin(), flat.end(), m.m.begin());
  return m;
}

std::uint32_t load_le32(const std::uint8_t* p) {
  return static_cast<std::uint32_t>(p[0]) | static_cast<std::uint32_t>(p[1]) << 8 |
         static_cast<std::uint32_t>(p[2]) << 16 | static_cast<std::uint32_t>(p[3]) << 24;
}

std::string read_text(const std::filesystem::path& path) {
  const Bytes b = read_file(path);
  return std::string(b.begin(), b.end());
}

}  // namespace

std::string base64_encode(const Bytes& bytes) {
  std::string out(4 * ((bytes.size() + 2) / 3), '\0');
  const int n = EVP_EncodeBlock(reinterpret_cast<unsigned char*>(out.data()), bytes.data(), static_cast<int>(bytes.size()));
  out.resize(static_cast<std::size_t>(n));
  return out;
}

Bytes base64_decode(const std::string& s) {
  if (s.size() % 4 != 0) throw FormatError("base64: length is not a multiple of 4");
  std::size_t pad = 0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    const char c = s[i];
    const bool alnum = (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9');
    if (c == '=') {
      if (i + 2 < s.size()) throw FormatError("base64: padding before the end");
      ++pad;
    } else if (!(alnum || c == '+' || c == '/') || pad > 0) {
      throw FormatError("base64: invalid character at offset " + std::to_string(i));
    }
  }
  Bytes out(s.size() / 4 * 3);
  const int n = EVP_DecodeBlock(out.data(), reinterpret_cast<const unsigned char*>(s.data()), static_cast<int>(s.size()));
  if (n < 0) throw FormatError("base64: undecodable payload");
  out.resize(static_cast<std::size_t>(n) - pad);
  return out;
}

std::string encode_f32_le(const std::vector<float>& values) {
  Bytes b(values.size() * 4);
  for (std::size_t i = 0; i < values.size(); ++i) {
    const auto u = std::bit_cast<std::uint32_t>(values[i]);
    for (int k = 0; k < 4; ++k) b[4 * i + k] = static_cast<std::uint8_t>(u >> (8 * k));
  }
  return base64_encode(b);
}

std::vector<float> decode_f32_le(const std::string& s, std::size_t expected, const std::string& field) {
  Bytes b;
  try {
    b = base64_decode(s);
  } catch (const FormatError& e) {
    throw SchemaError(field, e.what());
  }
  if (b.size() != expected * 4)
    throw SchemaError(field, "holds " + std::to_string(b.size() / 4) + " floats, expected " + std::to_string(expected));
  std::vector<float> out(expected);
  for (std::size_t i = 0; i < expected; ++i) out[i] = std::bit_cast<float>(load_le32(&b[4 * i]));
  return out;
}

json metadata_to_json(const CameraMetadata& meta) {
  json cal = json::array();
  for (const auto& c : meta.ccm_calibrations)
    cal.push_back({{"cct", c.cct}, {"matrix", std::vector<double>(c.matrix.m.begin(), c.matrix.m.end())}});
  return {{"black_level", meta.black_level},
          {"white_level", meta.white_level},
          {"cfa", std::string(to_string(meta.cfa))},
          {"wb_gains", {{"r", meta.wb_gains.r}, {"g", 1.0}, {"b", meta.wb_gains.b}}},
          {"ccm_calibrations", cal},
          {"iso", meta.iso}};
}

CameraMetadata metadata_from_json(const json& j) {
  if (!j.is_object()) throw SchemaError("sidecar", "must be a JSON object");
  CameraMetadata m;
  m.black_level = number(j, "black_level");
  m.white_level = number(j, "white_level");
  m.cfa = parse_cfa(text(j, "cfa"));
  const json& wb = require(j, "wb_gains");
  if (wb.is_array()) {
    if (wb.size() != 3 || !wb[0].is_number() || !wb[1].is_number() || !wb[2].is_number())
      throw SchemaError("wb_gains", "array form must be [r, g, b]");
    const double g = wb[1].get<double>();
    if (!(g > 0.0)) throw SchemaError("wb_gains", "green gain must be positive");
    m.wb_gains = {wb[0].get<double>() / g, wb[2].get<double>() / g};
  } else if (wb.is_object()) {
    const double g = wb.contains("g") ? number(wb, "g") : 1.0;
    if (!(g > 0.0)) throw SchemaError("wb_gains", "green gain must be positive");
    if (!wb.contains("r") || !wb.contains("b")) throw SchemaError("wb_gains", "needs r and b");
    m.wb_gains = {number(wb, "r") / g, number(wb, "b") / g};
  } else {
    throw SchemaError("wb_gains", "must be an object {r, g, b} or an array");
  }
  const json& cal = require(j, "ccm_calibrations");
  if (!cal.is_array() || cal.empty()) throw SchemaError("ccm_calibrations", "must be a non-empty array");
  m.ccm_calibrations.clear();
  for (const auto& c : cal) {
    CcmCalibration cc;
    if (!c.is_object() || !c.contains("cct") || !c["cct"].is_number())
      throw SchemaError("ccm_calibrations", "each entry needs a numeric cct");
    cc.cct = c["cct"].get<double>();
    if (!c.contains("matrix")) throw SchemaError("ccm_calibrations", "each entry needs a matrix");
    cc.matrix = matrix_from_json(c["matrix"], "ccm_calibrations");
    m.ccm_calibrations.push_back(cc);
  }
  m.iso = number(j, "iso");
  m.validate();
  return m;
}

Gray16 mosaic_to_gray16(const ImagePlane& mosaic) {
  Gray16 g{mosaic.width(), mosaic.height(), std::vector<std::uint16_t>(mosaic.size())};
  const auto src = mosaic.data();
  for (std::size_t i = 0; i < src.size(); ++i) {
    const float v = src[i];
    if (!(v >= 0.0f && v <= 65535.0f) || v != std::floor(v))
      throw SchemaError("mosaic", "samples must be integers in [0, 65535]");
    g.data[i] = static_cast<std::uint16_t>(v);
  }
  return g;
}

ImagePlane gray16_to_mosaic(const Gray16& g) {
  ImagePlane p(g.width, g.height);
  auto dst = p.data();
  for (std::size_t i = 0; i < g.data.size(); ++i) dst[i] = static_cast<float>(g.data[i]);
  return p;
}

Gray16 decode_mosaic(const Bytes& bytes) {
  if (is_png(bytes)) return decode_png_gray16(bytes);
  if (bytes.size() >= 2 && bytes[0] == 'P' && bytes[1] == '5') return decode_pgm16(bytes);
  throw FormatError("mosaic: expected a 16-bit grayscale PNG or a P5 PGM");
}

RawBundle bundle_from_parts(const std::string& sidecar_json, const Bytes& mosaic_bytes) {
  json j;
  try {
    j = json::parse(sidecar_json);
  } catch (const json::parse_error& e) {
    throw SchemaError("sidecar", std::string("invalid JSON: ") + e.what());
  }
  RawBundle b;
  b.meta = metadata_from_json(j);
  Gray16 g;
  try {
    g = decode_mosaic(mosaic_bytes);
  } catch (const FormatError& e) {
    throw SchemaError("mosaic", e.what());
  }
  if (j.contains("width") && (!j["width"].is_number_integer() || j["width"].get<int>() != g.width))
    throw SchemaError("width", "does not match the mosaic");
  if (j.contains("height") && (!j["height"].is_number_integer() || j["height"].get<int>() != g.height))
    throw SchemaError("height", "does not match the mosaic");
  if (g.width < 2 || g.height < 2 || g.width % 2 || g.height % 2)
    throw SchemaError("mosaic", "dimensions must be even and at least 2x2");
  b.mosaic = gray16_to_mosaic(g);
  return b;
}

void write_bundle(const std::filesystem::path& path, const RawBundle& bundle, bool pgm) {
  bundle.meta.validate();
  const Gray16 g = mosaic_to_gray16(bundle.mosaic);
  std::filesystem::path mosaic_path = path;
  mosaic_path.replace_extension(pgm ? ".pgm" : ".png");
  json j = metadata_to_json(bundle.meta);
  j["width"] = g.width;
  j["height"] = g.height;
  j["mosaic"] = mosaic_path.filename().string();
  write_file(mosaic_path, pgm ? encode_pgm16(g) : encode_png_gray16(g));
  write_json_file(path, j);
}

RawBundle read_bundle(const std::filesystem::path& path) {
  const json j = read_json_file(path);
  const std::filesystem::path mosaic_path = path.parent_path() / text(j, "mosaic");
  if (!std::filesystem::exists(mosaic_path)) throw SchemaError("mosaic", "file not found: " + mosaic_path.string());
  return bundle_from_parts(j.dump(), read_file(mosaic_path));
}

json style_to_json(const StyleParams& s) {
  json j = {{"name", s.name},
            {"d_g", s.d_g},
            {"gtm", {{"a", s.gtm.a}, {"b", s.gtm.b}, {"c", s.gtm.c}}},
            {"gamma", s.gamma},
            {"ltm", {{"n_g", s.ltm.n_g}, {"n_c", s.ltm.n_c}, {"values", encode_f32_le(s.ltm.values)}}},
            {"chroma", {{"n_h", s.chroma.n_h}, {"values", encode_f32_le(s.chroma.values)}}}};
  if (s.lut3d) j["lut3d"] = {{"size", RgbLut3d::kSize}, {"values", encode_f32_le(s.lut3d->values)}};
  return j;
}

StyleParams style_from_json(const json& j) {
  if (!j.is_object()) throw SchemaError("style", "must be a JSON object");
  StyleParams s;
  s.name = text(j, "name");
  s.d_g = number(j, "d_g");
  const json& gtm = require(j, "gtm");
  s.gtm = {number(gtm, "a"), number(gtm, "b"), number(gtm, "c")};
  s.gamma = number(j, "gamma");
  const json& ltm = require(j, "ltm");
  s.ltm.n_g = integer(ltm, "n_g");
  s.ltm.n_c = integer(ltm, "n_c");
  if (s.ltm.n_g < 1 || s.ltm.n_c < 2 || s.ltm.n_g > 1024 || s.ltm.n_c > 1024)
    throw SchemaError("ltm", "n_g must be in [1, 1024] and n_c in [2, 1024]");
  s.ltm.values = decode_f32_le(text(ltm, "values"),
                               static_cast<std::size_t>(s.ltm.n_g) * s.ltm.n_g * s.ltm.n_c * kLtmSlots, "ltm.values");
  const json& chroma = require(j, "chroma");
  s.chroma.n_h = integer(chroma, "n_h");
  if (s.chroma.n_h < 2 || s.chroma.n_h > 4096) throw SchemaError("chroma", "n_h must be in [2, 4096]");
  s.chroma.values =
      decode_f32_le(text(chroma, "values"), static_cast<std::size_t>(s.chroma.n_h) * s.chroma.n_h * 2, "chroma.values");
  if (j.contains("lut3d") && !j["lut3d"].is_null()) {
    const json& l = j["lut3d"];
    if (l.contains("size") && (!l["size"].is_number_integer() || l["size"].get<int>() != RgbLut3d::kSize))
      throw SchemaError("lut3d", "size must be 11");
    RgbLut3d lut;
    lut.values = decode_f32_le(text(l, "values"),
                               static_cast<std::size_t>(RgbLut3d::kSize) * RgbLut3d::kSize * RgbLut3d::kSize * 3,
                               "lut3d.values");
    s.lut3d = std::move(lut);
  }
  s.validate();
  return s;
}

void write_style(const std::filesystem::path& path, const StyleParams& style) {
  style.validate();
  write_json_file(path, style_to_json(style));
}

StyleParams read_style(const std::filesystem::path& path) { return style_from_json(read_json_file(path)); }

std::vector<std::string> list_styles(const std::filesystem::path& dir) {
  std::vector<std::string> names;
  if (!std::filesystem::exists(dir)) return names;
  std::error_code ec;
  for (const auto& e : std::filesystem::directory_iterator(dir, ec))
    if (e.is_regular_file() && e.path().extension() == ".json") names.push_back(e.path().stem().string());
  if (ec) throw ConfigError("cannot list styles in " + dir.string() + ": " + ec.message());
  std::sort(names.begin(), names.end());
  return names;
}

StyleParams load_style(const std::filesystem::path& dir, const std::string& name) {
  if (name.empty() || name.find_first_of("/\\") != std::string::npos || name.front() == '.')
    throw ConfigError("invalid style name: " + name);
  const auto path = dir / (name + ".json");
  if (!dir.empty() && std::filesystem::exists(path)) return read_style(path);
  return make_builtin_style(name);
}

json noise_model_to_json(const NoiseModel& model) {
  json entries = json::array();
  for (const auto& e : model.entries)
    entries.push_back({{"iso", e.iso}, {"channel", e.channel}, {"beta1", e.beta1}, {"beta2", e.beta2}});
  return {{"noise_model", entries}};
}

NoiseModel noise_model_from_json(const json& j) {
  const json& arr = require(j, "noise_model");
  if (!arr.is_array() || arr.empty()) throw SchemaError("noise_model", "must be a non-empty array");
  NoiseModel m;
  for (const auto& e : arr) {
    NoiseEntry n;
    n.iso = number(e, "iso");
    n.channel = e.contains("channel") ? integer(e, "channel") : -1;
    n.beta1 = number(e, "beta1");
    n.beta2 = number(e, "beta2");
    if (n.channel < -1 || n.channel > 2) throw SchemaError("channel", "must be -1, 0, 1 or 2");
    m.entries.push_back(n);
  }
  std::sort(m.entries.begin(), m.entries.end(), [](const NoiseEntry& a, const NoiseEntry& b) {
    return a.channel != b.channel ? a.channel < b.channel : a.iso < b.iso;
  });
  return m;
}

std::vector<PatchStat> patch_stats_from_json(const json& j) {
  const json& arr = j.is_object() ? require(j, "patches") : j;
  if (!arr.is_array()) throw SchemaError("patches", "must be an array");
  std::vector<PatchStat> out;
  for (const auto& e : arr) {
    PatchStat p;
    p.mean = number(e, "mean");
    p.variance = number(e, "variance");
    p.iso = number(e, "iso");
    p.channel = e.contains("channel") ? integer(e, "channel") : -1;
    if (p.channel < -1 || p.channel > 2) throw SchemaError("channel", "must be -1, 0, 1 or 2");
    out.push_back(p);
  }
  return out;
}

json ccm_to_json(const Mat3& m) {
  return {{"ccm", json::array({json::array({m.m[0], m.m[1], m.m[2]}), json::array({m.m[3], m.m[4], m.m[5]}),
                               json::array({m.m[6], m.m[7], m.m[8]})})}};
}

json color_mapping_to_json(const ColorMapping& cm) { return {{"degree", cm.degree}, {"coeffs", cm.coeffs}}; }

json read_json_file(const std::filesystem::path& path) {
  try {
    return json::parse(read_text(path));
  } catch (const json::parse_error& e) {
    throw FormatError(path.string() + ": invalid JSON: " + e.what());
  }
}

void write_json_file(const std::filesystem::path& path, const json& j) {
  const std::string s = j.dump(2) + "\n";
  write_file(path, Bytes(s.begin(), s.end()));
}

}  // namespace misp
