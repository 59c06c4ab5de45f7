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

#include "botshaper/config.hpp"

#include <cstdlib>
#include <fstream>

#include <json.hpp>

#include "botshaper/error.hpp"

#ifndef BOTSHAPER_DATA_DIR
#define BOTSHAPER_DATA_DIR "data"
#endif

namespace botshaper {

namespace {

[[noreturn]] void bad_config(const std::string& what) {
  throw Error(ErrorCode::InvalidArgument, "config: " + what);
}

}  // namespace

std::filesystem::path default_data_dir() { return BOTSHAPER_DATA_DIR; }

ServiceConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) bad_config("cannot read " + path.string());
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    bad_config(e.what());
  }
  if (!j.is_object()) bad_config("top level must be an object");

  ServiceConfig c;
  // relative paths in the file are relative to the file itself
  const auto base = path.parent_path();
  const auto path_value = [&](const nlohmann::json& v) {
    std::filesystem::path p = v.get<std::string>();
    return p.is_relative() ? base / p : p;
  };
  try {
    for (const auto& [key, value] : j.items()) {
      if (key == "bind_address") c.bind_address = value.get<std::string>();
      else if (key == "port") c.port = value.get<int>();
      else if (key == "store_dir") c.store_dir = path_value(value);
      else if (key == "registry_path") c.registry_path = path_value(value);
      else if (key == "snapshot_path") c.snapshot_path = path_value(value);
      else if (key == "backend") c.backend = value.get<std::string>();
      else if (key == "backend_url") c.backend_url = value.get<std::string>();
      else if (key == "concept_source") c.concept_source = value.get<std::string>();
      else if (key == "concept_url") c.concept_url = value.get<std::string>();
      else if (key == "cors_origin") c.cors_origin = value.get<std::string>();
      else if (key == "web_root") c.web_root = path_value(value);
      else if (key == "history_window") c.engine.history_window = value.get<std::size_t>();
      else if (key == "candidate_count") c.engine.candidate_count = value.get<std::size_t>();
      else if (key == "max_suggestion_streak") c.engine.max_suggestion_streak = value.get<std::uint32_t>();
      else bad_config("unknown key '" + key + "'");
    }
  } catch (const nlohmann::json::exception& e) {
    bad_config(e.what());
  }
  return c;
}

std::optional<std::string> process_env(const std::string& name) {
  if (const char* v = std::getenv(name.c_str())) return std::string(v);
  return std::nullopt;
}

void apply_env_overrides(ServiceConfig& c, const EnvLookup& env) {
  if (auto v = env("BOTSHAPER_BIND")) c.bind_address = *v;
  if (auto v = env("BOTSHAPER_PORT")) {
    try {
      c.port = std::stoi(*v);
    } catch (const std::exception&) {
      bad_config("BOTSHAPER_PORT is not a number");
    }
  }
  if (auto v = env("BOTSHAPER_STORE_DIR")) c.store_dir = *v;
  if (auto v = env("BOTSHAPER_REGISTRY")) c.registry_path = *v;
  if (auto v = env("BOTSHAPER_SNAPSHOT")) c.snapshot_path = *v;
  if (auto v = env("BOTSHAPER_BACKEND")) c.backend = *v;
  if (auto v = env("BOTSHAPER_BACKEND_URL")) c.backend_url = *v;
  if (auto v = env("BOTSHAPER_CONCEPT_SOURCE")) c.concept_source = *v;
  if (auto v = env("BOTSHAPER_CONCEPT_URL")) c.concept_url = *v;
  if (auto v = env("BOTSHAPER_CORS_ORIGIN")) c.cors_origin = *v;
  if (auto v = env("BOTSHAPER_WEB_ROOT")) c.web_root = *v;
}

Runtime build_runtime(const ServiceConfig& config) {
  Runtime rt;
  auto registry = std::make_shared<const AttributeRegistry>(load_registry_file(config.registry_path));
  auto snapshot_source = std::make_shared<const SnapshotSource>(load_snapshot_file(config.snapshot_path));
  for (const auto& def : registry->entries()) {
    if (def.suggestible() && !snapshot_source->snapshot().has_node(*def.concept_node)) {
      throw Error(ErrorCode::ValidationError, "concept node '" + *def.concept_node + "' of '" +
                                                  def.id.str() + "' is missing from the snapshot");
    }
  }

  std::shared_ptr<const ConceptSource> source;
  if (config.concept_source == "snapshot") {
    source = snapshot_source;
  } else if (config.concept_source == "live") {
    source = std::make_shared<const FallbackSource>(
        std::make_shared<const HttpConceptSource>(config.concept_url), snapshot_source);
  } else {
    bad_config("unknown concept source '" + config.concept_source + "'");
  }

  if (config.backend == "stub") {
    rt.backend = std::make_shared<const StubBackend>(registry);
  } else if (config.backend == "remote") {
    rt.backend = std::make_shared<const RemoteBackend>(config.backend_url);
  } else {
    bad_config("unknown backend '" + config.backend + "'");
  }

  rt.registry = registry;
  rt.suggester = std::make_shared<const ConceptSuggester>(source);
  rt.engine = std::make_shared<const Engine>(rt.registry, rt.suggester, rt.backend, config.engine);
  return rt;
}

}  // namespace botshaper
