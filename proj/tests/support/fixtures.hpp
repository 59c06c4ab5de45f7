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

// Shared test helpers: data paths, an offline runtime, random scripts.

#pragma once

#include <unistd.h>

#include <atomic>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <memory>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "botshaper/config.hpp"
#include "botshaper/replay.hpp"

namespace botshaper::testing {

inline std::filesystem::path data_path(const std::string& name) {
  return std::filesystem::path(BOTSHAPER_TEST_DATA_DIR) / name;
}

inline std::filesystem::path golden_path(const std::string& name) {
  return std::filesystem::path(BOTSHAPER_TEST_GOLDEN_DIR) / name;
}

inline std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

/// Stub backend, bundled snapshot, shipped registry. Built once.
inline const Runtime& offline_runtime() {
  static const Runtime rt = [] {
    ServiceConfig config;
    config.registry_path = data_path("attributes.tsv");
    config.snapshot_path = data_path("concepts.tsv");
    config.concept_source = "snapshot";
    config.backend = "stub";
    return build_runtime(config);
  }();
  return rt;
}

inline const Engine& offline_engine() { return *offline_runtime().engine; }

/// A fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  TempDir() {
    static std::atomic<int> counter{0};
    path_ = std::filesystem::temp_directory_path() /
            ("botshaper-test-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

inline const std::vector<std::string>& utterance_pool() {
  static const std::vector<std::string> pool = {
      "hi", "Jane", "zombie", "Can you give me a suggestion?", "yes", "no", "Something else",
      "What does that mean?", "skip", "Let's chat", "What else could we describe?",
      "What is your name?", "What is your favourite meal?", "Tell me about your hair",
      "Your age is 42.", "Your hobby is chess", "banana", "I like it", "Any ideas?",
      "What is your biggest fear?", "Your biggest fear is clowns", "ok", "nope",
      "Where do you come from?", "Your name is Jane.", "Do you have a job?",
  };
  return pool;
}

/// A random action script. Actions are drawn blind (candidate indices and
/// message ids may be invalid), so replays also exercise error paths.
inline std::vector<ScriptStep> random_script(std::uint64_t seed, std::size_t length) {
  std::mt19937_64 gen(seed);
  const auto& pool = utterance_pool();
  const auto& registry = offline_runtime().registry->entries();
  std::vector<ScriptStep> steps;
  for (std::size_t i = 0; i < length; ++i) {
    ScriptStep step;
    step.line = i + 1;
    const auto roll = gen() % 20;
    if (roll < 14) {
      step.kind = ScriptStep::Kind::user;
      step.text = pool[gen() % pool.size()];
    } else if (roll < 17) {
      step.kind = ScriptStep::Kind::choose;
      step.number = gen() % 4;
    } else if (roll < 18) {
      step.kind = ScriptStep::Kind::remove;
      step.text = registry[gen() % registry.size()].id.str();
    } else {
      step.kind = ScriptStep::Kind::pin;
      step.number = gen() % (2 * i + 4);
    }
    steps.push_back(std::move(step));
  }
  return steps;
}

}  // namespace botshaper::testing
