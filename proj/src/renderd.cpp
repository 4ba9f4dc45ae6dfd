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

#include "misp/renderd.hpp"

#include <httplib.h>

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <cstdlib>
#include <set>

#include "misp/bundleio.hpp"
#include "misp/container.hpp"
#include "misp/error.hpp"
#include "misp/imageio.hpp"
#include "misp/resample.hpp"

namespace misp {
namespace {

HttpReply json_reply(int status, const json& j) { return {status, "application/json", j.dump(), {}}; }

HttpReply error_reply(int status, const std::string& message, const std::string& field = {}) {
  json j = {{"error", message}};
  if (!field.empty()) j["field"] = field;
  return json_reply(status, j);
}

std::string to_string(const Bytes& b) { return std::string(b.begin(), b.end()); }

Bytes to_bytes(const std::string& s) { return Bytes(s.begin(), s.end()); }

RgbImage thumbnail(const RgbImage& img, int max_side) {
  const int longest = std::max(img.width(), img.height());
  if (longest <= max_side) return img;
  const double f = static_cast<double>(max_side) / longest;
  return resize(img, scaled_size(img.width(), f), scaled_size(img.height(), f), ResampleMode::area);
}

}  // namespace

ServiceConfig service_config_from_env(ServiceConfig base) {
  if (const char* p = std::getenv("MISP_PRESETS")) base.preset_dir = p;
  if (const char* o = std::getenv("MISP_CORS_ORIGIN")) base.cors_origin = o;
  if (const char* m = std::getenv("MISP_MAX_UPLOAD")) base.max_upload_bytes = std::strtoull(m, nullptr, 10);
  return base;
}

RenderService::RenderService(ServiceConfig cfg) : cfg_(std::move(cfg)) {
  if (cfg_.max_sessions == 0) throw ConfigError("max_sessions must be positive");
}

std::size_t RenderService::session_count() const {
  std::lock_guard lock(map_mu_);
  return sessions_.size();
}

std::shared_ptr<RenderService::Session> RenderService::find(const std::string& id) {
  std::lock_guard lock(map_mu_);
  const auto it = sessions_.find(id);
  if (it == sessions_.end()) return nullptr;
  lru_.splice(lru_.begin(), lru_, it->second.second);
  return it->second.first;
}

HttpReply RenderService::upload(RawBundle bundle, std::optional<RenderRecipe> recipe) {
  auto s = std::make_shared<Session>();
  s->camera_raw = prepare_raw(bundle);
  s->bundle = std::move(bundle);
  s->stored_recipe = std::move(recipe);
  std::lock_guard lock(map_mu_);
  char buf[32];
  std::snprintf(buf, sizeof buf, "img%06zu", next_id_++);
  s->id = buf;
  lru_.push_front(s->id);
  sessions_[s->id] = {s, lru_.begin()};
  while (sessions_.size() > cfg_.max_sessions) {
    sessions_.erase(lru_.back());
    lru_.pop_back();
  }
  json j = {{"id", s->id}, {"width", s->bundle.mosaic.width()}, {"height", s->bundle.mosaic.height()}};
  if (s->stored_recipe) j["recipe"] = recipe_to_json(*s->stored_recipe);
  return json_reply(201, j);
}

HttpReply RenderService::upload_parts(const std::string& sidecar, const std::string& mosaic) {
  if (sidecar.size() + mosaic.size() > cfg_.max_upload_bytes) return error_reply(413, "upload exceeds the size limit");
  try {
    return upload(bundle_from_parts(sidecar, to_bytes(mosaic)));
  } catch (const SchemaError& e) {
    return error_reply(400, e.what(), e.field());
  } catch (const Error& e) {
    return error_reply(400, e.what());
  }
}

HttpReply RenderService::upload_jpeg(const std::string& body) {
  if (body.size() > cfg_.max_upload_bytes) return error_reply(413, "upload exceeds the size limit");
  try {
    auto x = extract_raw(to_bytes(body));
    if (!x) return error_reply(400, "JPEG carries no embedded raw", "body");
    return upload(std::move(x->bundle), std::move(x->recipe));
  } catch (const SchemaError& e) {
    return error_reply(400, e.what(), e.field());
  } catch (const Error& e) {
    return error_reply(400, e.what(), "body");
  }
}

HttpReply RenderService::render(const std::string& id, const std::string& recipe_json, bool want_png) {
  auto s = find(id);
  if (!s) return error_reply(404, "unknown image id " + id);
  RenderRecipe recipe;
  StyleParams style;
  try {
    const json j = recipe_json.empty() ? json::object() : json::parse(recipe_json);
    recipe = recipe_from_json(j);
    style = resolve_style(recipe, cfg_.preset_dir);
  } catch (const json::parse_error& e) {
    return error_reply(400, std::string("request body is not JSON: ") + e.what());
  } catch (const SchemaError& e) {
    return error_reply(422, e.what(), e.field());
  } catch (const Error& e) {
    return error_reply(422, e.what(), "styles");
  }

  RenderResult r;
  try {
    std::lock_guard lock(s->mu);
    const std::pair<WbSettings, double> key{recipe.wb, recipe.edits.ev};
    if (!s->linear_key || *s->linear_key != key) {
      s->linear = linearize(s->camera_raw, s->bundle.meta, recipe.wb, recipe.edits.ev);
      s->linear_key = key;
    }
    r = render_linear(s->linear, style, recipe);
    if (recipe.preview_scale == 1.0) {
      s->full_recipe = recipe;
      s->full_output = r.output;
      s->full_style = style.name;
    }
  } catch (const ConfigError& e) {
    return error_reply(422, e.what());
  } catch (const NumericError& e) {
    return error_reply(500, e.what());
  }

  const Bytes preview = encode_png(r.output);
  if (want_png) return {200, "image/png", to_string(preview), {}};
  json stages = json::array();
  for (const auto& [name, img] : r.stages) {
    const RgbImage t = thumbnail(img, cfg_.thumbnail_size);
    stages.push_back({{"name", name}, {"width", t.width()}, {"height", t.height()}, {"png", base64_encode(encode_png(t))}});
  }
  return json_reply(200, {{"id", id},
                          {"width", r.output.width()},
                          {"height", r.output.height()},
                          {"applied_ev", r.applied_ev},
                          {"style", style.name},
                          {"preview", base64_encode(preview)},
                          {"stages", stages}});
}

HttpReply RenderService::styles() const {
  std::set<std::string> names;
  for (const auto& n : builtin_style_names()) names.insert(n);
  if (!cfg_.preset_dir.empty() && std::filesystem::is_directory(cfg_.preset_dir))
    for (const auto& n : list_styles(cfg_.preset_dir)) names.insert(n);
  return json_reply(200, {{"styles", std::vector<std::string>(names.begin(), names.end())}});
}

HttpReply RenderService::export_jpeg(const std::string& id, bool embed) {
  auto s = find(id);
  if (!s) return error_reply(404, "unknown image id " + id);
  std::lock_guard lock(s->mu);
  if (!s->full_recipe) return error_reply(409, "render at preview_scale 1 before exporting");
  Bytes jpeg = encode_jpeg(s->full_output, 95);
  if (embed) jpeg = embed_raw(jpeg, s->bundle, *s->full_recipe);
  std::string style = s->full_style;
  for (char& c : style)
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '-' && c != '_') c = '-';
  return {200, "image/jpeg", to_string(jpeg), id + "_" + style + ".jpg"};
}

void RenderService::install(httplib::Server& server) {
  server.set_payload_max_length(cfg_.max_upload_bytes);
  const std::string origin = cfg_.cors_origin;
  server.set_post_routing_handler([origin](const httplib::Request&, httplib::Response& res) {
    res.set_header("Access-Control-Allow-Origin", origin);
    res.set_header("Access-Control-Allow-Methods", "GET, POST, OPTIONS");
    res.set_header("Access-Control-Allow-Headers", "Content-Type, Accept");
    res.set_header("Access-Control-Expose-Headers", "Content-Disposition");
  });
  server.Options(R"(.*)", [](const httplib::Request&, httplib::Response& res) { res.status = 204; });
  server.set_exception_handler([](const httplib::Request&, httplib::Response& res, std::exception_ptr ep) {
    std::string msg = "internal error";
    try {
      std::rethrow_exception(ep);
    } catch (const std::exception& e) {
      msg = e.what();
    } catch (...) {
    }
    res.status = 500;
    res.set_content(json{{"error", msg}}.dump(), "application/json");
  });

  auto send = [](httplib::Response& res, const HttpReply& r) {
    res.status = r.status;
    res.set_content(r.body, r.content_type);
  };

  server.Post("/images", [this, send](const httplib::Request& req, httplib::Response& res) {
    if (req.is_multipart_form_data()) {
      if (!req.has_file("sidecar")) return send(res, error_reply(400, "missing multipart field", "sidecar"));
      if (!req.has_file("mosaic")) return send(res, error_reply(400, "missing multipart field", "mosaic"));
      return send(res, upload_parts(req.get_file_value("sidecar").content, req.get_file_value("mosaic").content));
    }
    const std::string ct = req.get_header_value("Content-Type");
    if (ct.rfind("image/jpeg", 0) == 0) return send(res, upload_jpeg(req.body));
    send(res, error_reply(400, "expected multipart/form-data or image/jpeg", "Content-Type"));
  });
  server.Post(R"(/images/([^/]+)/render)", [this, send](const httplib::Request& req, httplib::Response& res) {
    const std::string accept = req.get_header_value("Accept");
    const bool png = accept.find("image/png") != std::string::npos;
    send(res, render(req.matches[1], req.body, png));
  });
  server.Get("/styles", [this, send](const httplib::Request&, httplib::Response& res) { send(res, styles()); });
  server.Get(R"(/images/([^/]+)/export)", [this, send](const httplib::Request& req, httplib::Response& res) {
    bool embed = false;
    if (req.has_param("embed")) {
      const std::string v = req.get_param_value("embed");
      if (v == "true" || v == "1") {
        embed = true;
      } else if (v != "false" && v != "0") {
        return send(res, error_reply(400, "embed must be true or false", "embed"));
      }
    }
    const HttpReply r = export_jpeg(req.matches[1], embed);
    if (r.status == 200)
      res.set_header("Content-Disposition", "attachment; filename=\"" + r.filename + "\"");
    send(res, r);
  });
}

}  // namespace misp
