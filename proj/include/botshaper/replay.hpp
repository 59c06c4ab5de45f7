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

// Headless replay of scripted conversations, golden comparison, and
// chat-log length statistics.
//
// Script format, one action per line:
//
//   # comment
//   U <text>        user message
//   C <index>       choose a pending candidate
//   D <attribute>   delete an attribute
//   P <message id>  pin a bot message
//
// Blank lines are ignored.

#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "botshaper/codec.hpp"
#include "botshaper/engine.hpp"

namespace botshaper {

struct ScriptStep {
  enum class Kind { user, choose, remove, pin };
  Kind kind = Kind::user;
  std::string text;         // user message or attribute id
  std::uint64_t number = 0; // candidate index or message id
  std::size_t line = 0;     // 1-based source line

  friend bool operator==(const ScriptStep&, const ScriptStep&) = default;
};

/// Throws ScriptParseError naming the offending line.
std::vector<ScriptStep> parse_script(std::string_view source);
std::vector<ScriptStep> parse_script_file(const std::filesystem::path& path);

std::string_view to_string(ScriptStep::Kind kind) noexcept;

inline constexpr std::string_view kReplaySessionId = "replay";

struct ReplayResult {
  Session session;
  /// {seed, events: [...], session: <session document>}
  Json document;
};

/// Runs the steps against a fresh session. Engine precondition failures
/// (no candidates pending, unknown message, ...) are recorded as error
/// events and the replay continues.
ReplayResult replay(const Engine& engine, const std::vector<ScriptStep>& steps, std::uint64_t seed);

/// The document as written to disk: two-space indentation plus a newline.
std::string replay_to_string(const ReplayResult& result);

struct Divergence {
  std::size_t line = 0;  // 1-based
  std::string expected;
  std::string actual;
};

/// First differing line, or std::nullopt when the texts are identical.
std::optional<Divergence> first_divergence(std::string_view expected, std::string_view actual);

/// "line N:\n- <expected>\n+ <actual>\n"
std::string format_divergence(const Divergence& d);

struct SessionLength {
  std::string name;
  std::size_t lines = 0;

  friend bool operator==(const SessionLength&, const SessionLength&) = default;
};

struct LengthStats {
  std::vector<SessionLength> sessions;
  double mean = 0.0;
  /// Population standard deviation.
  double sd = 0.0;
};

/// Throws NoSessions for an empty input.
LengthStats compute_stats(std::vector<SessionLength> sessions);

/// Line counts (ChatMessages per transcript) for every session document or
/// replay document in `dir`, ordered by file name. Other files are skipped.
/// Throws NoSessions when nothing usable is found, StoreUnavailable when the
/// directory cannot be read.
std::vector<SessionLength> collect_lengths(const std::filesystem::path& dir);

Json stats_to_json(const LengthStats& stats);
std::string stats_to_text(const LengthStats& stats);

}  // namespace botshaper
