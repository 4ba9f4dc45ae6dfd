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

// ispctl: batch command-line front end of the misp library.

#include <fnmatch.h>
#include <tbb/parallel_for.h>

#include <CLI11.hpp>
#include <filesystem>
#include <iostream>
#include <optional>
#include <set>

#include "misp/bundleio.hpp"
#include "misp/calib.hpp"
#include "misp/container.hpp"
#include "misp/error.hpp"
#include "misp/imageio.hpp"
#include "misp/metrics.hpp"
#include "misp/pipeline.hpp"
#include "misp/synthetic.hpp"

namespace fs = std::filesystem;
using misp::json;

namespace {

enum Exit { kOk = 0, kUsage = 2, kFormat = 3, kNumeric = 4 };

struct RenderFlags {
  std::vector<std::string> inputs;
  std::string output;
  std::string recipe_path;
  std::vector<std::string> styles;
  std::vector<double> weights;
  bool no_denoise = false, no_3dlut = false, multiscale = false, refine = false, no_sharpen = false;
  bool embed_raw = false;
  double preview_scale = 1.0;
  misp::EditSettings edits;
  std::string wb = "as-shot";
  double cct = 6504.0, tint = 0.0;
  std::string format;
  int quality = 95;
};

/// Expands wildcard arguments the shell left alone (quoted globs).
std::vector<fs::path> expand_inputs(const std::vector<std::string>& args) {
  std::vector<fs::path> out;
  for (const auto& a : args) {
    if (a.find_first_of("*?[") == std::string::npos) {
      out.emplace_back(a);
      continue;
    }
    const fs::path p(a);
    const fs::path dir = p.has_parent_path() ? p.parent_path() : fs::path(".");
    std::vector<fs::path> hits;
    for (const auto& e : fs::directory_iterator(dir))
      if (e.is_regular_file() && fnmatch(p.filename().c_str(), e.path().filename().c_str(), 0) == 0)
        hits.push_back(e.path());
    if (hits.empty()) throw misp::ConfigError("no files match " + a);
    std::sort(hits.begin(), hits.end());
    out.insert(out.end(), hits.begin(), hits.end());
  }
  return out;
}

misp::RenderRecipe recipe_from_flags(const RenderFlags& f) {
  misp::RenderRecipe r;
  if (!f.styles.empty()) {
    r.styles = f.styles;
    r.weights = f.weights.empty() ? std::vector<double>(f.styles.size(), 1.0 / f.styles.size()) : f.weights;
  }
  r.edits = f.edits;
  r.stages.denoise = !f.no_denoise;
  r.stages.lut3d = !f.no_3dlut;
  r.stages.multiscale = f.multiscale;
  r.stages.refine = f.refine;
  r.stages.sharpen = !f.no_sharpen;
  r.wb.source = misp::parse_wb_source(f.wb);
  r.wb.cct = f.cct;
  r.wb.tint = f.tint;
  r.preview_scale = f.preview_scale;
  r.validate();
  return r;
}

struct Job {
  fs::path input;
  fs::path output;
  json report;
};

void render_one(Job& job, const std::optional<misp::RenderRecipe>& file_recipe, const misp::RenderRecipe& flag_recipe,
                const RenderFlags& f, const fs::path& presets) {
  const misp::Bytes head = misp::read_file(job.input);
  misp::RawBundle bundle;
  misp::RenderRecipe recipe = file_recipe ? *file_recipe : flag_recipe;
  if (misp::is_jpeg(head)) {
    auto x = misp::extract_raw(head);
    if (!x) throw misp::FormatError(job.input.string() + ": JPEG carries no embedded raw");
    bundle = std::move(x->bundle);
    if (!file_recipe) recipe = x->recipe;
  } else {
    bundle = misp::read_bundle(job.input);
  }
  const misp::StyleParams style = misp::resolve_style(recipe, presets);
  const misp::RenderResult r = misp::render(bundle, style, recipe);

  std::string fmt = f.format;
  if (fmt.empty()) {
    const std::string ext = job.output.extension().string();
    fmt = ext == ".jpg" || ext == ".jpeg" ? "jpg" : "png";
  }
  misp::Bytes bytes;
  if (fmt == "jpg") {
    bytes = misp::encode_jpeg(r.output, f.quality);
    if (f.embed_raw) bytes = misp::embed_raw(bytes, bundle, recipe);
  } else {
    if (f.embed_raw) throw misp::ConfigError("--embed-raw needs JPEG output");
    bytes = misp::encode_png(r.output);
  }
  misp::write_file(job.output, bytes);
  job.report = {{"input", job.input.string()},
                {"output", job.output.string()},
                {"width", r.output.width()},
                {"height", r.output.height()},
                {"applied_ev", r.applied_ev},
                {"style", style.name},
                {"embedded_raw", f.embed_raw}};
}

int run_render(const RenderFlags& f, const fs::path& presets, bool as_json, const std::set<std::string>& flags_seen) {
  std::optional<misp::RenderRecipe> file_recipe;
  if (!f.recipe_path.empty()) {
    file_recipe = misp::recipe_from_json(misp::read_json_file(f.recipe_path));
    if (!flags_seen.empty()) {
      std::string list;
      for (const auto& s : flags_seen) list += " " + s;
      std::cerr << "ispctl: --recipe given; ignoring" << list << "\n";
    }
  }
  const misp::RenderRecipe flag_recipe = recipe_from_flags(f);
  const auto inputs = expand_inputs(f.inputs);
  const bool batch = inputs.size() > 1 || fs::is_directory(f.output);
  const std::string ext = f.format.empty() ? (f.embed_raw ? ".jpg" : ".png") : "." + f.format;
  if (batch) fs::create_directories(f.output);

  std::vector<Job> jobs(inputs.size());
  std::set<fs::path> outputs;
  for (std::size_t i = 0; i < inputs.size(); ++i) {
    jobs[i].input = inputs[i];
    jobs[i].output = batch ? fs::path(f.output) / (inputs[i].stem().string() + ext) : fs::path(f.output);
    if (!outputs.insert(jobs[i].output).second)
      throw misp::ConfigError("two inputs map to the same output " + jobs[i].output.string());
  }
  std::vector<std::exception_ptr> errors(jobs.size());
  tbb::parallel_for(std::size_t{0}, jobs.size(), [&](std::size_t i) {
    try {
      render_one(jobs[i], file_recipe, flag_recipe, f, presets);
    } catch (...) {
      errors[i] = std::current_exception();
    }
  });
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  json all = json::array();
  for (const auto& j : jobs) all.push_back(j.report);
  if (as_json) std::cout << all.dump(2) << "\n";
  else
    for (const auto& j : jobs) std::cout << j.input.string() << " -> " << j.output.string() << "\n";
  return kOk;
}

std::vector<misp::Rgb> rgb_list(const json& j, const char* field) {
  if (!j.contains(field) || !j[field].is_array()) throw misp::SchemaError(field, "must be an array of [r, g, b]");
  std::vector<misp::Rgb> out;
  for (const auto& e : j[field]) {
    if (!e.is_array() || e.size() != 3) throw misp::SchemaError(field, "entries must be [r, g, b]");
    misp::Rgb p;
    for (int c = 0; c < 3; ++c) {
      if (!e[c].is_number()) throw misp::SchemaError(field, "entries must be numbers");
      p[c] = e[c].get<double>();
    }
    out.push_back(p);
  }
  return out;
}

void emit(const json& j, const std::string& out_path) {
  if (out_path.empty()) std::cout << j.dump(2) << "\n";
  else misp::write_json_file(out_path, j);
}

misp::RgbImage load_picture(const fs::path& p) {
  const misp::Bytes b = misp::read_file(p);
  if (misp::is_png(b)) return misp::decode_png(b);
  if (misp::is_jpeg(b)) return misp::decode_jpeg(b);
  throw misp::FormatError(p.string() + ": expected PNG or JPEG");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"misp raw rendering toolkit"};
  app.require_subcommand(1);
  bool as_json = false;
  std::string presets = MISP_DEFAULT_PRESET_DIR;
  if (const char* env = std::getenv("MISP_PRESETS")) presets = env;
  app.add_flag("--json", as_json, "Machine-readable output");
  app.add_option("--presets", presets, "Style preset directory");

  RenderFlags rf;
  auto* render = app.add_subcommand("render", "Render raw bundles (or JPEGs with an embedded raw)");
  render->add_option("inputs", rf.inputs, "Bundle JSON files, embedded-raw JPEGs or quoted globs")->required();
  render->add_option("-o,--output", rf.output, "Output file, or directory for several inputs")->required();
  render->add_option("--recipe", rf.recipe_path, "Recipe JSON; takes precedence over every recipe flag");
  const std::vector<CLI::Option*> recipe_opts = {
      render->add_option("--style", rf.styles, "Style name (repeat to mix)"),
      render->add_option("--weights", rf.weights, "Mix weights, one per --style"),
      render->add_flag("--no-denoise", rf.no_denoise, "Skip denoising"),
      render->add_flag("--no-3dlut", rf.no_3dlut, "Skip the style's 3D LuT"),
      render->add_flag("--multiscale", rf.multiscale, "Multi-scale LTM aggregation"),
      render->add_flag("--refine", rf.refine, "Bilateral refinement of the LTM planes"),
      render->add_flag("--no-sharpen", rf.no_sharpen, "Skip sharpening"),
      render->add_option("--preview-scale", rf.preview_scale, "0.125, 0.25, 0.5 or 1"),
      render->add_option("--ev", rf.edits.ev, "Exposure shift in stops"),
      render->add_flag("--auto-exposure", rf.edits.auto_exposure, "Histogram-based exposure"),
      render->add_option("--contrast", rf.edits.contrast, "[-1, 1]"),
      render->add_option("--highlights", rf.edits.highlights, "[-1, 1]"),
      render->add_option("--shadows", rf.edits.shadows, "[-1, 1]"),
      render->add_option("--saturation", rf.edits.saturation, "[-1, 1]"),
      render->add_option("--vibrance", rf.edits.vibrance, "[-1, 1]"),
      render->add_option("--sharpen", rf.edits.sharpen, "Sharpening amount >= 0"),
      render->add_option("--denoise-strength", rf.edits.denoise_strength, "[0, 1]"),
      render->add_option("--luma-denoise", rf.edits.luma_denoise, "[0, 1]"),
      render->add_option("--chroma-denoise", rf.edits.chroma_denoise, "[0, 1]"),
      render->add_option("--wb", rf.wb, "as-shot, gray-world or manual"),
      render->add_option("--cct", rf.cct, "Manual white balance CCT in K"),
      render->add_option("--tint", rf.tint, "Manual white balance tint"),
  };
  render->add_flag("--embed-raw", rf.embed_raw, "Append the raw bundle to the JPEG output");
  render->add_option("--format", rf.format, "png or jpg (default from the extension)")
      ->check(CLI::IsMember({"png", "jpg"}));
  render->add_option("--quality", rf.quality, "JPEG quality")->check(CLI::Range(1, 100));

  std::string ex_in, ex_out, ex_recipe, ex_jpeg;
  bool ex_pgm = false;
  auto* extract = app.add_subcommand("extract", "Recover the raw bundle embedded in a JPEG");
  extract->add_option("input", ex_in, "JPEG file")->required()->check(CLI::ExistingFile);
  extract->add_option("-o,--output", ex_out, "Bundle JSON to write");
  extract->add_option("--recipe-out", ex_recipe, "Write the stored recipe here");
  extract->add_option("--jpeg-out", ex_jpeg, "Write the visible JPEG without the trailer");
  extract->add_flag("--pgm", ex_pgm, "Store the mosaic as PGM instead of PNG");

  auto* calib = app.add_subcommand("calib", "Calibration fits");
  calib->require_subcommand(1);
  std::string nf_in, nf_out;
  auto* noise_fit = calib->add_subcommand("noise-fit", "Fit the noise model to patch statistics");
  noise_fit->add_option("stats", nf_in, "JSON [{mean, variance, iso, channel?}]")->required()->check(CLI::ExistingFile);
  noise_fit->add_option("-o,--output", nf_out, "Model JSON (stdout when omitted)");
  std::string cf_in, cf_out;
  auto* ccm_fit = calib->add_subcommand("ccm-fit", "Constrained CCM from white-balanced raw / linear sRGB pairs");
  ccm_fit->add_option("pairs", cf_in, "JSON {raw: [[r,g,b]...], srgb: [[r,g,b]...]}")->required()->check(CLI::ExistingFile);
  ccm_fit->add_option("-o,--output", cf_out, "CCM JSON (stdout when omitted)");
  std::string cm_in, cm_out;
  int cm_degree = 2;
  auto* cm_fit = calib->add_subcommand("cm-fit", "Polynomial color mapping between two RGB sets");
  cm_fit->add_option("pairs", cm_in, "JSON {src: [[r,g,b]...], dst: [[r,g,b]...]}")->required()->check(CLI::ExistingFile);
  cm_fit->add_option("--degree", cm_degree, "Polynomial degree")->check(CLI::Range(1, 4));
  cm_fit->add_option("-o,--output", cm_out, "Mapping JSON (stdout when omitted)");

  std::string m_a, m_b;
  auto* metrics = app.add_subcommand("metrics", "Compare two PNG/JPEG pictures");
  metrics->add_option("a", m_a, "Reference")->required()->check(CLI::ExistingFile);
  metrics->add_option("b", m_b, "Test")->required()->check(CLI::ExistingFile);

  std::string export_dir;
  auto* presets_cmd = app.add_subcommand("presets", "List styles, or write the built-in presets");
  presets_cmd->add_option("--export", export_dir, "Directory to write the built-in presets to");

  std::string sb_out, sb_cfa = "RGGB";
  int sb_w = 256, sb_h = 192;
  std::uint64_t sb_seed = 1;
  bool sb_pgm = false;
  auto* synth = app.add_subcommand("synth-bundle", "Write a synthetic raw bundle");
  synth->add_option("-o,--output", sb_out, "Bundle JSON path")->required();
  synth->add_option("--width", sb_w, "Even width")->check(CLI::Range(2, 1 << 15));
  synth->add_option("--height", sb_h, "Even height")->check(CLI::Range(2, 1 << 15));
  synth->add_option("--seed", sb_seed, "Scene seed");
  synth->add_option("--cfa", sb_cfa, "RGGB, BGGR, GRBG or GBRG");
  synth->add_flag("--pgm", sb_pgm, "Store the mosaic as PGM");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kUsage;
  }

  try {
    if (*render) {
      std::set<std::string> seen;
      for (auto* o : recipe_opts)
        if (o->count() > 0) seen.insert(o->get_name());
      return run_render(rf, presets, as_json, seen);
    }
    if (*extract) {
      auto x = misp::extract_raw(misp::read_file(ex_in));
      if (!x) {
        if (as_json) std::cout << json{{"embedded", false}}.dump() << "\n";
        std::cerr << "ispctl: " << ex_in << ": no embedded raw\n";
        return kFormat;
      }
      if (!ex_out.empty()) misp::write_bundle(ex_out, x->bundle, ex_pgm);
      if (!ex_recipe.empty()) misp::write_json_file(ex_recipe, misp::recipe_to_json(x->recipe));
      if (!ex_jpeg.empty()) misp::write_file(ex_jpeg, x->jpeg);
      const json rep = {{"embedded", true},
                        {"width", x->bundle.mosaic.width()},
                        {"height", x->bundle.mosaic.height()},
                        {"jpeg_bytes", x->jpeg.size()},
                        {"recipe", misp::recipe_to_json(x->recipe)}};
      if (as_json) std::cout << rep.dump(2) << "\n";
      else std::cout << "embedded raw " << x->bundle.mosaic.width() << "x" << x->bundle.mosaic.height() << "\n";
      return kOk;
    }
    if (*noise_fit) {
      const auto stats = misp::patch_stats_from_json(misp::read_json_file(nf_in));
      emit(misp::noise_model_to_json(misp::fit_noise_model(stats)), nf_out);
      return kOk;
    }
    if (*ccm_fit) {
      const json j = misp::read_json_file(cf_in);
      const misp::Mat3 m = misp::fit_ccm_constrained(rgb_list(j, "raw"), rgb_list(j, "srgb"));
      emit(misp::ccm_to_json(m), cf_out);
      return kOk;
    }
    if (*cm_fit) {
      const json j = misp::read_json_file(cm_in);
      emit(misp::color_mapping_to_json(misp::fit_color_mapping(rgb_list(j, "src"), rgb_list(j, "dst"), cm_degree)),
           cm_out);
      return kOk;
    }
    if (*metrics) {
      const misp::RgbImage a = load_picture(m_a);
      const misp::RgbImage b = load_picture(m_b);
      misp::MetricReport r = misp::compare(a, b);
      // Lab needs linear input; pictures on disk are gamma encoded.
      r.delta_e76 = misp::delta_e76(misp::make_pseudo_linear(a), misp::make_pseudo_linear(b));
      const json rep = {{"psnr", r.psnr_infinite ? json("inf") : json(r.psnr)},
                        {"ssim", r.ssim},
                        {"delta_e76", r.delta_e76},
                        {"tv_a", r.tv_a},
                        {"tv_b", r.tv_b}};
      if (as_json) {
        std::cout << rep.dump(2) << "\n";
      } else {
        for (const auto& [k, v] : rep.items()) std::cout << k << " " << v.dump() << "\n";
      }
      return kOk;
    }
    if (*presets_cmd) {
      if (!export_dir.empty()) {
        fs::create_directories(export_dir);
        for (const auto& n : misp::builtin_style_names())
          misp::write_style(fs::path(export_dir) / (n + ".json"), misp::make_builtin_style(n));
      }
      std::set<std::string> names;
      for (const auto& n : misp::builtin_style_names()) names.insert(n);
      if (fs::is_directory(presets))
        for (const auto& n : misp::list_styles(presets)) names.insert(n);
      if (as_json) std::cout << json{{"styles", names}}.dump(2) << "\n";
      else
        for (const auto& n : names) std::cout << n << "\n";
      return kOk;
    }
    if (*synth) {
      if (sb_w % 2 || sb_h % 2) throw misp::ConfigError("width and height must be even");
      const misp::RawBundle b =
          misp::synth_bundle(misp::synth_scene(sb_w, sb_h, sb_seed), misp::synth_metadata(misp::parse_cfa(sb_cfa)));
      misp::write_bundle(sb_out, b, sb_pgm);
      if (as_json) std::cout << json{{"bundle", sb_out}, {"width", sb_w}, {"height", sb_h}}.dump() << "\n";
      return kOk;
    }
  } catch (const misp::SchemaError& e) {
    std::cerr << "ispctl: schema error: " << e.what() << "\n";
    return kFormat;
  } catch (const misp::FormatError& e) {
    std::cerr << "ispctl: format error: " << e.what() << "\n";
    return kFormat;
  } catch (const misp::NumericError& e) {
    std::cerr << "ispctl: numeric failure: " << e.what() << "\n";
    return kNumeric;
  } catch (const misp::ConfigError& e) {
    std::cerr << "ispctl: " << e.what() << "\n";
    return kUsage;
  } catch (const fs::filesystem_error& e) {
    std::cerr << "ispctl: " << e.what() << "\n";
    return kFormat;
  }
  return kUsage;
}
