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

#include <httplib.h>

#include <CLI11.hpp>
#include <csignal>
#include <cstdlib>
#include <iostream>

#include "misp/renderd.hpp"

namespace {
httplib::Server* g_server = nullptr;

void on_signal(int) {
  if (g_server) g_server->stop();
}
}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"misp render service"};
  std::string host = std::getenv("MISP_HOST") ? std::getenv("MISP_HOST") : "127.0.0.1";
  int port = std::getenv("MISP_PORT") ? std::atoi(std::getenv("MISP_PORT")) : 8080;
  misp::ServiceConfig cfg;
  cfg.preset_dir = MISP_DEFAULT_PRESET_DIR;
  cfg = misp::service_config_from_env(cfg);
  std::string presets = cfg.preset_dir.string();
  app.add_option("--host", host, "Bind address (MISP_HOST)");
  app.add_option("--port", port, "Listen port (MISP_PORT); 0 picks a free port")->check(CLI::Range(0, 65535));
  app.add_option("--presets", presets, "Style preset directory (MISP_PRESETS)");
  app.add_option("--cors-origin", cfg.cors_origin, "Allowed CORS origin (MISP_CORS_ORIGIN)");
  app.add_option("--max-sessions", cfg.max_sessions, "Sessions kept before LRU eviction")->check(CLI::PositiveNumber);
  CLI11_PARSE(app, argc, argv);
  cfg.preset_dir = presets;

  misp::RenderService service(cfg);
  httplib::Server server;
  service.install(server);
  g_server = &server;
  std::signal(SIGINT, on_signal);
  std::signal(SIGTERM, on_signal);

  if (port == 0) port = server.bind_to_any_port(host);
  else if (!server.bind_to_port(host, port)) port = -1;
  if (port < 0) {
    std::cerr << "renderd: cannot bind " << host << "\n";
    return 1;
  }
  std::cout << "renderd listening on http://" << host << ":" << port << std::endl;
  server.listen_after_bind();
  return 0;
}
