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

// JSON encodings shared by the session store, the HTTP API and replay.
// Encoders emit a fixed field order so documents diff cleanly.

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include <json.hpp>

#include "botshaper/domain.hpp"
#include "botshaper/engine.hpp"
#include "botshaper/registry.hpp"

namespace botshaper {

using Json = nlohmann::ordered_json;

inline constexpr int kSchemaVersion = 1;

/// "2026-10-19T08:30:00Z"
std::string format_rfc3339(std::int64_t unix_seconds);
/// Accepts "Z" or "+hh:mm"/"-hh:mm" offsets and optional fractional seconds.
std::optional<std::int64_t> parse_rfc3339(std::string_view s);

Json to_json(const ChatMessage& m);
Json to_json(const Character& c);
Json pins_to_json(const std::vector<PinnedStatement>& pins);
Json to_json(const EngineState& s);
Json to_json(const TurnOutput& t);
Json to_json(const AttributeDefinition& d);

/// The versioned session document.
Json session_to_json(const Session& s);
std::string session_to_string(const Session& s);

/// Throws VersionMismatch for a schema_version other than 1 and
/// CorruptDocument for anything structurally wrong, including broken
/// transcript or pin invariants.
Session session_from_json(const nlohmann::json& doc);
Session session_from_string(std::string_view text);

}  // namespace botshaper
