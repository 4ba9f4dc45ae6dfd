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

// Render service behind the studio UI. Handlers are plain member functions so
// they can be exercised without a socket; install() wires them to an HTTP
// server.

#include <cstddef>
#include <filesystem>
#include <list>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <unordered_map>

#include "misp/pipeline.hpp"
#include "misp/recipe.hpp"

namespace httplib {
class Server;
}

namespace misp {

struct ServiceConfig {
  std::filesystem::path preset_dir;
  std::string cors_origin = "*";
  std::size_t max_upload_bytes = 256u << 20;
  std::size_t max_sessions = 16;
  int thumbnail_size = 256;  // longest side of stage thumbnails
};

/// Reads MISP_PRESETS, MISP_CORS_ORIGIN and MISP_MAX_UPLOAD over the defaults.
ServiceConfig service_config_from_env(ServiceConfig base = {});

struct HttpReply {
  int status = 200;
  std::string content_type = "application/json";
  std::string body;
  std::string filename;  // download name for attachments
};

class RenderService {
 public:
  explicit RenderService(ServiceConfig cfg);

  /// 201 {"id"}; the demosaiced frame is computed up front.
  HttpReply upload(RawBundle bundle, std::optional<RenderRecipe> recipe = std::nullopt);
  /// Multipart fields "sidecar" (JSON text) and "mosaic" (PNG/PGM bytes).
  HttpReply upload_parts(const std::string& sidecar, const std::string& mosaic);
  /// A JPEG exported with an embedded raw; the stored recipe is echoed back.
  HttpReply upload_jpeg(const std::string& body);

  /// JSON {id, width, height, applied_ev, style, preview (base64 PNG),
  /// stages[{name, width, height, png}]}, or the bare preview PNG.
  HttpReply render(const std::string& id, const std::string& recipe_json, bool want_png);
  /// {"styles": [...]} from the preset directory plus the built-in presets.
  HttpReply styles() const;
  /// Needs an earlier render at preview_scale 1 (409 otherwise). The download
  /// name is <id>_<style>.jpg.
  HttpReply export_jpeg(const std::string& id, bool embed);

  void install(httplib::Server& server);

  const ServiceConfig& config() const noexcept { return cfg_; }
  std::size_t session_count() const;

 private:
  struct Session {
    std::string id;
    RawBundle bundle;
    RgbImage camera_raw;
    std::optional<RenderRecipe> stored_recipe;
    std::mutex mu;  // serializes renders of this session
    std::optional<std::pair<WbSettings, double>> linear_key;
    RgbImage linear;
    std::optional<RenderRecipe> full_recipe;  // last full-scale render
    RgbImage full_output;
    std::string full_style;
  };

  std::shared_ptr<Session> find(const std::string& id);

  ServiceConfig cfg_;
  mutable std::mutex map_mu_;
  std::list<std::string> lru_;  // most recent first
  std::unordered_map<std::string, std::pair<std::shared_ptr<Session>, std::list<std::string>::iterator>> sessions_;
  std::size_t next_id_ = 1;
};

}  // namespace misp
