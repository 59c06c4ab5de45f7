// Copyright 2026 The Botshaper Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// botshaper: serve the HTTP API, replay scripts, summarize chat logs.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <httplib.h>

#include "botshaper/config.hpp"
#include "botshaper/replay.hpp"
#include "botshaper/service.hpp"

namespace {

using namespace botshaper;

struct ServeArgs {
  std::string config_path;
  std::string concept_source;
  std::string backend;
  std::string store_dir;
  int port = -1;
};

struct ReplayArgs {
  std::string script;
  std::uint64_t seed = 0;
  std::string expect;
  std::string out;
  std::string config_path;
};

struct StatsArgs {
  std::string dir;
  bool json = false;
};

ServiceConfig base_config(const std::string& path) {
  ServiceConfig config = path.empty() ? ServiceConfig{} : load_config(path);
  apply_env_overrides(config);
  return config;
}

int run_serve(const ServeArgs& args) {
  auto config = base_config(args.config_path);
  if (!args.concept_source.empty()) config.concept_source = args.concept_source;
  if (!args.backend.empty()) config.backend = args.backend;
  if (!args.store_dir.empty()) config.store_dir = args.store_dir;
  if (args.port >= 0) config.port = args.port;

  const auto runtime = build_runtime(config);
  ApiService::Options options;
  options.cors_origin = config.cors_origin;
  ApiService service(runtime.engine, SessionStore(config.store_dir), options);

  httplib::Server server;
  service.attach(server);
  if (!config.web_root.empty() && !server.set_mount_point("/", config.web_root.string())) {
    std::cerr << "botshaper: web root not found: " << config.web_root << "\n";
    return 2;
  }
  if (!server.bind_to_port(config.bind_address, config.port)) {
    std::cerr << "botshaper: cannot bind " << config.bind_address << ":" << config.port << "\n";
    return 2;
  }
  std::cerr << "botshaper: listening on http://" << config.bind_address << ":" << config.port << " ("
            << runtime.backend->name() << " backend, " << config.concept_source << " concepts)\n";
  return server.listen_after_bind() ? 0 : 2;
}

int run_replay(const ReplayArgs& args) {
  auto config = base_config(args.config_path);
  // Replays must not depend on the network.
  config.concept_source = "snapshot";
  config.backend = "stub";
  const auto runtime = build_runtime(config);

  const auto steps = parse_script_file(args.script);
  const auto result = replay(*runtime.engine, steps, args.seed);
  const auto actual = replay_to_string(result);

  if (!args.out.empty()) {
    std::ofstream out(args.out, std::ios::binary);
    out << actual;
    if (!out) throw Error(ErrorCode::StoreUnavailable, "cannot write " + args.out);
  } else if (args.expect.empty()) {
    std::cout << actual;
  }

  if (!args.expect.empty()) {
    std::ifstream in(args.expect, std::ios::binary);
    if (!in) throw Error(ErrorCode::NotFound, "cannot read golden " + args.expect);
    std::ostringstream expected;
    expected << in.rdbuf();
    if (const auto d = first_divergence(expected.str(), actual)) {
      std::cerr << to_string(ErrorCode::ExpectationMismatch) << ": " << args.script << " diverges from "
                << args.expect << " at " << format_divergence(*d);
      return 1;
    }
    std::cerr << "replay matches " << args.expect << "\n";
  }
  return 0;
}

int run_stats(const StatsArgs& args) {
  const auto stats = compute_stats(collect_lengths(args.dir));
  if (args.json) {
    std::cout << stats_to_json(stats).dump(2) << "\n";
  } else {
    std::cout << stats_to_text(stats);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Conversational character creation engine"};
  app.require_subcommand(1);

  ServeArgs serve_args;
  auto* serve = app.add_subcommand("serve", "Run the HTTP API");
  serve->add_option("--config", serve_args.config_path, "JSON config file")->check(CLI::ExistingFile);
  serve->add_option("--concept-source", serve_args.concept_source, "live or snapshot")
      ->check(CLI::IsMember({"live", "snapshot"}));
  serve->add_option("--backend", serve_args.backend, "stub or remote")->check(CLI::IsMember({"stub", "remote"}));
  serve->add_option("--store-dir", serve_args.store_dir, "Session directory");
  serve->add_option("--port", serve_args.port, "Listen port")->check(CLI::Range(0, 65535));

  ReplayArgs replay_args;
  auto* replay_cmd = app.add_subcommand("replay", "Replay a script headlessly");
  replay_cmd->add_option("script", replay_args.script, "Script file")->required()->check(CLI::ExistingFile);
  replay_cmd->add_option("--seed", replay_args.seed, "Session seed")->required();
  replay_cmd->add_option("--expect", replay_args.expect, "Golden document to compare against");
  replay_cmd->add_option("--out", replay_args.out, "Write the document here instead of stdout");
  replay_cmd->add_option("--config", replay_args.config_path, "JSON config file (data paths)")
      ->check(CLI::ExistingFile);

  StatsArgs stats_args;
  auto* stats = app.add_subcommand("stats", "Dialogue length statistics");
  stats->add_option("dir", stats_args.dir, "Session store or replay output directory")->required();
  stats->add_flag("--json", stats_args.json, "Emit JSON");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*serve) return run_serve(serve_args);
    if (*replay_cmd) return run_replay(replay_args);
    if (*stats) return run_stats(stats_args);
  } catch (const botshaper::Error& e) {
    std::cerr << "botshaper: " << botshaper::to_string(e.code()) << ": " << e.what() << "\n";
    return 2;
  }
  return 0;
}
