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
#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "misp/bundleio.hpp"
#include "misp/container.hpp"
#include "misp/imageio.hpp"
#include "misp/metrics.hpp"
#include "misp/pipeline.hpp"

using namespace misp;
namespace fs = std::filesystem;

namespace {

const fs::path kTmp = MISP_TEST_TMP;

struct Run {
  int code;
  std::string out;
};

Run ispctl(const std::string& args) {
  fs::create_directories(kTmp);
  const fs::path out = kTmp / "stdout.txt";
  const std::string cmd = std::string("MISP_PRESETS='") + MISP_TEST_PRESET_DIR + "' '" + MISP_TEST_ISPCTL + "' " + args +
                          " > '" + out.string() + "' 2> '" + (kTmp / "stderr.txt").string() + "'";
  const int raw = std::system(cmd.c_str());
  std::ifstream in(out);
  std::stringstream ss;
  ss << in.rdbuf();
  return {WIFEXITED(raw) ? WEXITSTATUS(raw) : -1, ss.str()};
}

std::string q(const fs::path& p) { return "'" + p.string() + "'"; }

fs::path synth(const std::string& name, int w, int h, int seed, const std::string& extra = "") {
  const fs::path p = kTmp / name;
  const Run r = ispctl("synth-bundle -o " + q(p) + " --width " + std::to_string(w) + " --height " + std::to_string(h) +
                       " --seed " + std::to_string(seed) + " " + extra);
  REQUIRE(r.code == 0);
  return p;
}

}  // namespace

TEST_CASE("render with the identity recipe reproduces the color-corrected bundle") {
  const fs::path bundle = synth("id.json", 160, 120, 4);
  const fs::path out = kTmp / "id_render.png";  // id.png holds the mosaic
  REQUIRE(ispctl("render " + q(bundle) + " -o " + q(out)).code == 0);
  const RgbImage img = decode_png(read_file(out));
  const RgbImage ref = color_corrected(read_bundle(bundle));
  CHECK(img.width() == 160);
  CHECK(psnr(img, ref) > 40.0);
}

TEST_CASE("embed-raw output extracts bit-exactly and re-renders from the stored recipe") {
  const fs::path bundle = synth("emb.json", 96, 64, 5, "--cfa GRBG");
  const fs::path jpg = kTmp / "emb.jpg";
  REQUIRE(ispctl("render " + q(bundle) + " -o " + q(jpg) + " --style warm --contrast 0.3 --embed-raw").code == 0);

  const fs::path back = kTmp / "emb_back.json";
  const fs::path rec = kTmp / "emb_recipe.json";
  const Run ex = ispctl("--json extract " + q(jpg) + " -o " + q(back) + " --recipe-out " + q(rec));
  REQUIRE(ex.code == 0);
  CHECK(json::parse(ex.out)["embedded"] == true);
  CHECK(read_bundle(back) == read_bundle(bundle));
  const RenderRecipe stored = recipe_from_json(read_json_file(rec));
  CHECK(stored.styles == std::vector<std::string>{"warm"});
  CHECK(stored.edits.contrast == doctest::Approx(0.3));

  // Rendering the JPEG itself uses the embedded recipe.
  const fs::path a = kTmp / "emb_a.png";
  const fs::path b = kTmp / "emb_b.png";
  REQUIRE(ispctl("render " + q(jpg) + " -o " + q(a)).code == 0);
  REQUIRE(ispctl("render " + q(bundle) + " -o " + q(b) + " --recipe " + q(rec)).code == 0);
  CHECK(read_file(a) == read_file(b));

  CHECK(ispctl("render " + q(bundle) + " -o " + q(kTmp / "x.png") + " --embed-raw").code == 2);
}

TEST_CASE("extract on a plain JPEG reports absence") {
  const fs::path bundle = synth("plain.json", 32, 32, 1);
  const fs::path jpg = kTmp / "plain.jpg";
  REQUIRE(ispctl("render " + q(bundle) + " -o " + q(jpg)).code == 0);
  const Run r = ispctl("--json extract " + q(jpg));
  CHECK(r.code == 3);
  CHECK(json::parse(r.out)["embedded"] == false);
}

TEST_CASE("batch render over a quoted glob") {
  const fs::path dir = kTmp / "batch_in";
  fs::remove_all(dir);
  fs::create_directories(dir);
  for (int i = 0; i < 3; ++i) {
    const fs::path p = synth("batch_in/shot" + std::to_string(i) + ".json", 64, 48, 10 + i, i == 1 ? "--pgm" : "");
    (void)p;
  }
  const fs::path out = kTmp / "batch_out";
  fs::remove_all(out);
  const Run r = ispctl("--json render " + q(dir / "shot*.json") + " -o " + q(out) + " --style moody");
  REQUIRE(r.code == 0);
  const json rep = json::parse(r.out);
  CHECK(rep.size() == 3);
  for (int i = 0; i < 3; ++i) {
    const fs::path png = out / ("shot" + std::to_string(i) + ".png");
    REQUIRE(fs::exists(png));
    CHECK(decode_png(read_file(png)).width() == 64);
  }
  CHECK(rep[0]["style"] == "moody");
}

TEST_CASE("exit codes") {
  const fs::path bundle = synth("codes.json", 32, 32, 2);
  CHECK(ispctl("render").code == 2);
  CHECK(ispctl("frobnicate").code == 2);
  CHECK(ispctl("render " + q(bundle) + " -o " + q(kTmp / "c.png") + " --contrast 3").code == 3);
  CHECK(ispctl("render " + q(bundle) + " -o " + q(kTmp / "c.png") + " --style nope").code == 2);
  CHECK(ispctl("render " + q(kTmp / "missing*.json") + " -o " + q(kTmp / "c.png")).code == 2);
  {
    std::ofstream(kTmp / "broken.json") << "{\"width\": 4";
  }
  CHECK(ispctl("render " + q(kTmp / "broken.json") + " -o " + q(kTmp / "c.png")).code == 3);
  CHECK(ispctl("synth-bundle -o " + q(kTmp / "odd.json") + " --width 33").code == 2);
}

TEST_CASE("presets export writes every built-in style") {
  const fs::path dir = kTmp / "presets";
  fs::remove_all(dir);
  const Run r = ispctl("--json presets --export " + q(dir));
  REQUIRE(r.code == 0);
  for (const auto& n : builtin_style_names()) {
    CHECK(read_style(dir / (n + ".json")) == make_builtin_style(n));
  }
  std::vector<std::string> names = json::parse(r.out)["styles"];
  CHECK(names.size() >= builtin_style_names().size());
}

TEST_CASE("metrics on identical and different pictures") {
  RgbImage a(16, 16);
  for (int y = 0; y < 16; ++y)
    for (int x = 0; x < 16; ++x) {
        float* p = a.pixel(x, y);
        p[0] = x / 15.0f;
        p[1] = y / 15.0f;
        p[2] = 0.5f;
      }
  RgbImage b = a;
  for (float& v : b.data()) v = 0.5f;
  write_file(kTmp / "ma.png", encode_png(a));
  write_file(kTmp / "mb.png", encode_png(b));
  const Run same = ispctl("--json metrics " + q(kTmp / "ma.png") + " " + q(kTmp / "ma.png"));
  REQUIRE(same.code == 0);
  const json s = json::parse(same.out);
  CHECK(s["psnr"] == "inf");
  CHECK(s["ssim"].get<double>() == doctest::Approx(1.0));
  CHECK(s["delta_e76"].get<double>() == 0.0);
  const Run diff = ispctl("--json metrics " + q(kTmp / "ma.png") + " " + q(kTmp / "mb.png"));
  REQUIRE(diff.code == 0);
  const json d = json::parse(diff.out);
  CHECK(d["psnr"].get<double>() < 20.0);
  CHECK(d["delta_e76"].get<double>() > 1.0);
}

TEST_CASE("calibration subcommands") {
  json stats = json::array();
  for (int iso : {100, 400})
    for (double m : {0.1, 0.3, 0.6})
      stats.push_back({{"mean", m}, {"variance", 1e-4 * iso / 100 * m + 1e-6 * (iso / 100.0) * (iso / 100.0)}, {"iso", iso}});
  write_json_file(kTmp / "stats.json", stats);
  const Run nf = ispctl("calib noise-fit " + q(kTmp / "stats.json"));
  REQUIRE(nf.code == 0);
  CHECK(json::parse(nf.out).is_object());

  json pairs = {{"raw", json::array()}, {"srgb", json::array()}};
  const double m[3][3] = {{0.8, 0.15, 0.05}, {0.1, 0.8, 0.1}, {0.05, 0.15, 0.8}};
  for (double r : {0.1, 0.35, 0.6, 0.85})
    for (double g : {0.1, 0.35, 0.6, 0.85})
      for (double b : {0.1, 0.35, 0.6, 0.85}) {
        pairs["raw"].push_back({r, g, b});
        json o = json::array();
        for (int i = 0; i < 3; ++i) o.push_back(m[i][0] * r + m[i][1] * g + m[i][2] * b);
        pairs["srgb"].push_back(o);
      }
  write_json_file(kTmp / "pairs.json", pairs);
  const Run cf = ispctl("calib ccm-fit " + q(kTmp / "pairs.json") + " -o " + q(kTmp / "ccm.json"));
  REQUIRE(cf.code == 0);
  const json ccm = read_json_file(kTmp / "ccm.json")["ccm"];
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) CHECK(ccm[i][j].get<double>() == doctest::Approx(m[i][j]).epsilon(1e-6));

  json cm = {{"src", pairs["raw"]}, {"dst", pairs["srgb"]}};
  write_json_file(kTmp / "cm.json", cm);
  CHECK(ispctl("calib cm-fit " + q(kTmp / "cm.json") + " --degree 2").code == 0);
  write_json_file(kTmp / "bad.json", json{{"src", 3}});
  CHECK(ispctl("calib cm-fit " + q(kTmp / "bad.json")).code == 3);
}
