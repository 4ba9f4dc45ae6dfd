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

#include <cstring>
#include <filesystem>

#include "misp/bundleio.hpp"
#include "misp/error.hpp"
#include "misp/synthetic.hpp"
#include "test_util.hpp"

using namespace misp;
namespace fs = std::filesystem;
using misp::test::max_abs_diff;
using misp::test::random_image;

namespace {

fs::path tmp_dir(const std::string& name) {
  const fs::path p = fs::path(MISP_TEST_TMP) / name;
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

RawBundle small_bundle(std::uint64_t seed = 3) {
  return synth_bundle(synth_scene(64, 48, seed), synth_metadata(Cfa::GRBG));
}

}  // namespace

TEST_CASE("base64 follows the RFC 4648 test vectors") {
  const std::pair<const char*, const char*> vectors[] = {
      {"", ""}, {"f", "Zg=="}, {"fo", "Zm8="}, {"foo", "Zm9v"}, {"foob", "Zm9vYg=="}, {"fooba", "Zm9vYmE="}, {"foobar", "Zm9vYmFy"}};
  for (auto [plain, enc] : vectors) {
    const Bytes b(plain, plain + std::strlen(plain));
    CHECK(base64_encode(b) == enc);
    CHECK(base64_decode(enc) == b);
  }
  CHECK_THROWS_AS(base64_decode("Zm9"), FormatError);
  CHECK_THROWS_AS(base64_decode("Zm9v!!=="), FormatError);
}

TEST_CASE("float tensors are little-endian base64") {
  CHECK(encode_f32_le({1.0f}) == "AACAPw==");
  const std::vector<float> v{0.0f, -2.5f, 3.25e-7f, 1e30f};
  CHECK(decode_f32_le(encode_f32_le(v), 4, "x") == v);
  try {
    decode_f32_le(encode_f32_le(v), 5, "ltm.values");
    FAIL("expected SchemaError");
  } catch (const SchemaError& e) {
    CHECK(e.field() == "ltm.values");
  }
  CHECK_THROWS_AS(decode_f32_le("@@@@", 1, "x"), SchemaError);
}

TEST_CASE("PNG, PGM and JPEG codecs round trip") {
  const RgbImage img = random_image(17, 11, 2, 0.0f, 1.0f, ColorState::display);
  const Bytes png = encode_png(img);
  CHECK(is_png(png));
  const RgbImage back = decode_png(png);
  CHECK(max_abs_diff(back, img) <= 0.5 / 255.0 + 1e-6);

  Gray16 g{9, 5, std::vector<std::uint16_t>(45)};
  for (std::size_t i = 0; i < g.data.size(); ++i) g.data[i] = static_cast<std::uint16_t>(i * 1451 % 65536);
  CHECK(decode_png_gray16(encode_png_gray16(g)) == g);
  CHECK(decode_pgm16(encode_pgm16(g)) == g);
  CHECK(decode_mosaic(encode_png_gray16(g)) == g);
  CHECK(decode_mosaic(encode_pgm16(g)) == g);

  const RgbImage smooth = misp::test::smooth_image(64, 48, 5);
  const Bytes jpg = encode_jpeg(smooth, 95);
  CHECK(is_jpeg(jpg));
  CHECK(max_abs_diff(decode_jpeg(jpg), smooth) < 0.05);
  CHECK_THROWS_AS(decode_png(Bytes{1, 2, 3}), FormatError);
  CHECK_THROWS_AS(decode_jpeg(Bytes{0xFF, 0xD8, 0}), FormatError);
  CHECK_THROWS_AS(decode_mosaic(Bytes{'x'}), FormatError);
}

TEST_CASE("metadata JSON round trips and accepts both gain forms") {
  const CameraMetadata meta = synth_metadata(Cfa::BGGR);
  CHECK(metadata_from_json(metadata_to_json(meta)) == meta);

  json j = metadata_to_json(meta);
  j["wb_gains"] = json::array({4.0, 2.0, 3.0});
  const CameraMetadata a = metadata_from_json(j);
  CHECK(a.wb_gains.r == 2.0);
  CHECK(a.wb_gains.b == 1.5);
  j["wb_gains"] = {{"r", 4.0}, {"g", 2.0}, {"b", 3.0}};
  CHECK(metadata_from_json(j).wb_gains == a.wb_gains);

  j["ccm_calibrations"][0]["matrix"] = json::array({json::array({1, 0, 0}), json::array({0, 1, 0}), json::array({0, 0, 1})});
  CHECK(metadata_from_json(j).ccm_calibrations[0].matrix == Mat3::identity());

  auto field_of = [](json bad) {
    try {
      metadata_from_json(bad);
    } catch (const SchemaError& e) {
      return e.field();
    }
    return std::string("<none>");
  };
  json bad = metadata_to_json(meta);
  bad.erase("white_level");
  CHECK(field_of(bad) == "white_level");
  bad = metadata_to_json(meta);
  bad["cfa"] = "XYZW";
  CHECK(field_of(bad) == "cfa");
  bad = metadata_to_json(meta);
  bad["ccm_calibrations"][0]["matrix"] = json::array({1, 2});
  CHECK(field_of(bad) == "ccm_calibrations");
  bad = metadata_to_json(meta);
  bad["wb_gains"] = "warm";
  CHECK(field_of(bad) == "wb_gains");
}

TEST_CASE("mosaic conversions reject non-integral or out-of-range counts") {
  ImagePlane m(2, 2);
  m.at(0, 0) = 12.0f;
  m.at(1, 1) = 65535.0f;
  const Gray16 g = mosaic_to_gray16(m);
  CHECK(g.data[0] == 12);
  CHECK(g.data[3] == 65535);
  CHECK(gray16_to_mosaic(g) == m);
  m.at(0, 1) = 1.5f;
  CHECK_THROWS_AS(mosaic_to_gray16(m), SchemaError);
  m.at(0, 1) = 70000.0f;
  CHECK_THROWS_AS(mosaic_to_gray16(m), SchemaError);
}

TEST_CASE("bundles round trip through PNG and PGM sidecars") {
  const fs::path dir = tmp_dir("bundles");
  const RawBundle b = small_bundle();
  write_bundle(dir / "shot.json", b);
  CHECK(fs::exists(dir / "shot.png"));
  CHECK(read_bundle(dir / "shot.json") == b);
  write_bundle(dir / "shot2.json", b, true);
  CHECK(fs::exists(dir / "shot2.pgm"));
  CHECK(read_bundle(dir / "shot2.json") == b);
  CHECK_THROWS_AS(read_bundle(dir / "missing.json"), std::exception);
}

TEST_CASE("bundle_from_parts checks dimensions") {
  const RawBundle b = small_bundle();
  json side = metadata_to_json(b.meta);
  side["width"] = 64;
  side["height"] = 48;
  const Bytes png = encode_png_gray16(mosaic_to_gray16(b.mosaic));
  CHECK(bundle_from_parts(side.dump(), png) == b);
  side["width"] = 65;
  try {
    bundle_from_parts(side.dump(), png);
    FAIL("expected SchemaError");
  } catch (const SchemaError& e) {
    CHECK(e.field() == "width");
  }
  CHECK_THROWS_AS(bundle_from_parts("{not json", png), std::exception);
  Gray16 odd{3, 2, std::vector<std::uint16_t>(6, 600)};
  CHECK_THROWS_AS(bundle_from_parts(metadata_to_json(b.meta).dump(), encode_png_gray16(odd)), SchemaError);
}

TEST_CASE("styles round trip through JSON") {
  for (const auto& name : builtin_style_names()) {
    CAPTURE(name);
    const StyleParams s = make_builtin_style(name);
    CHECK(style_from_json(style_to_json(s)) == s);
  }
  CHECK_THROWS_AS(make_builtin_style("nope"), ConfigError);
  json j = style_to_json(make_builtin_style("warm"));
  j["gamma"] = 9.0;
  CHECK_THROWS_AS(style_from_json(j), SchemaError);
  j = style_to_json(make_builtin_style("warm"));
  j["ltm"]["values"] = encode_f32_le({1.0f, 2.0f});
  CHECK_THROWS_AS(style_from_json(j), SchemaError);
}

TEST_CASE("preset directories list and load styles with builtin fallback") {
  const fs::path dir = tmp_dir("presets");
  StyleParams custom = make_builtin_style("warm");
  custom.name = "custom";
  custom.d_g = 1.3;
  write_style(dir / "custom.json", custom);
  CHECK(list_styles(dir) == std::vector<std::string>{"custom"});
  CHECK(load_style(dir, "custom") == custom);
  CHECK(load_style(dir, "moody") == make_builtin_style("moody"));
  CHECK_THROWS_AS(load_style(dir, "nonexistent"), ConfigError);
  CHECK(list_styles(dir / "absent").empty());
}

TEST_CASE("the shipped preset directory matches the builtin definitions") {
  const fs::path dir = MISP_TEST_PRESET_DIR;
  for (const auto& name : builtin_style_names()) {
    CAPTURE(name);
    REQUIRE(fs::exists(dir / (name + ".json")));
    CHECK(read_style(dir / (name + ".json")) == make_builtin_style(name));
  }
}

TEST_CASE("calibration JSON helpers") {
  NoiseModel model;
  model.entries = {{100, -1, 1e-4, 2e-6}, {800, 1, 8e-4, 1e-5}};
  const NoiseModel back = noise_model_from_json(noise_model_to_json(model));
  REQUIRE(back.entries.size() == 2);
  CHECK(back.entries[1].channel == 1);
  CHECK(back.entries[1].beta2 == 1e-5);

  const json stats = json::parse(R"([{"mean": 0.1, "variance": 1e-4, "iso": 100},
                                      {"mean": 0.2, "variance": 2e-4, "iso": 100, "channel": 2}])");
  const auto ps = patch_stats_from_json(stats);
  REQUIRE(ps.size() == 2);
  CHECK(ps[0].channel == -1);
  CHECK(ps[1].channel == 2);
  CHECK(patch_stats_from_json(json{{"patches", stats}}).size() == 2);

  const json c = ccm_to_json(Mat3::diag(1, 2, 3));
  CHECK(c["ccm"][1][1] == 2.0);

  const fs::path dir = tmp_dir("json");
  write_json_file(dir / "a.json", json{{"k", 1}});
  CHECK(read_json_file(dir / "a.json")["k"] == 1);
  write_file(dir / "bad.json", Bytes{'{', 'x'});
  CHECK_THROWS_AS(read_json_file(dir / "bad.json"), FormatError);
}
