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

// Service configuration: a JSON file plus BOTSHAPER_* environment overrides.

#pragma once

#include <filesystem>
#include <functional>
#include <memory>
#include <optional>
#include <string>

#include "botshaper/concepts.hpp"
#include "botshaper/dialogue.hpp"
#include "botshaper/engine.hpp"
#include "botshaper/registry.hpp"
#include "botshaper/store.hpp"

namespace botshaper {

/// Directory holding the shipped registry and concept snapshot.
std::filesystem::path default_data_dir();

struct ServiceConfig {
  std::string bind_address = "127.0.0.1";
  int port = 8080;
  std::filesystem::path store_dir = "sessions";
  std::filesystem::path registry_path = default_data_dir() / "attributes.tsv";
  std::filesystem::path snapshot_path = default_data_dir() / "concepts.tsv";
  /// "stub" or "remote".
  std::string backend = "stub";
  std::string backend_url = "http://127.0.0.1:8000";
  /// "snapshot" (offline) or "live" (live service, snapshot fallback).
  std::string concept_source = "live";
  std::string concept_url = std::string(HttpConceptSource::kDefaultBaseUrl);
  std::string cors_origin = "http://localhost:5173";
  /// Static client files served under "/", when set.
  std::filesystem::path web_root;
  EngineConfig engine;
};

/// Reads a JSON config file; unknown keys are rejected. Throws
/// InvalidArgument.
ServiceConfig load_config(const std::filesystem::path& path);

using EnvLookup = std::function<std::optional<std::string>(const std::string&)>;

/// The process environment.
std::optional<std::string> process_env(const std::string& name);

/// Applies BOTSHAPER_BIND, _PORT, _STORE_DIR, _REGISTRY, _SNAPSHOT, _BACKEND,
/// _BACKEND_URL, _CONCEPT_SOURCE, _CONCEPT_URL, _CORS_ORIGIN, _WEB_ROOT.
void apply_env_overrides(ServiceConfig& config, const EnvLookup& env = process_env);

/// Everything a running service or replay needs, wired from a config.
struct Runtime {
  std::shared_ptr<const AttributeRegistry> registry;
  std::shared_ptr<const ConceptSuggester> suggester;
  std::shared_ptr<const DialogueBackend> backend;
  std::shared_ptr<const Engine> engine;
};

/// Loads the registry and snapshot and builds the backends. Throws
/// ParseError / ValidationError for bad data files, InvalidArgument for an
/// unknown backend or concept source. Also checks that every suggestible
/// attribute's concept node is present in the snapshot.
Runtime build_runtime(const ServiceConfig& config);

}  // namespace botshaper
