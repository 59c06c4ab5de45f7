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

#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "botshaper/domain.hpp"

namespace botshaper {

struct SessionSummary {
  std::string session_id;
  std::string character_name;  // "(unnamed)" when no name is defined
  std::int64_t created_at = 0;
  std::size_t message_count = 0;

  friend bool operator==(const SessionSummary&, const SessionSummary&) = default;
};

/// One JSON document per session (`<session_id>.json`) under a directory.
///
/// Saves write a temporary file and rename it into place while holding an
/// flock on `<session_id>.lock`, so readers only ever see complete
/// documents. Session ids must match [A-Za-z0-9_-]+.
class SessionStore {
 public:
  explicit SessionStore(std::filesystem::path directory);

  const std::filesystem::path& directory() const noexcept { return directory_; }

  /// Throws StoreUnavailable, or InvalidArgument for an unusable id.
  std::string save(const Session& session) const;

  /// Throws NotFound, VersionMismatch or CorruptDocument.
  Session load(std::string_view session_id) const;

  bool exists(std::string_view session_id) const;

  /// Newest first; ties broken by id. Unreadable documents are skipped.
  /// Throws StoreUnavailable when the directory cannot be listed.
  std::vector<SessionSummary> list() const;

  static bool is_valid_id(std::string_view id) noexcept;

 private:
  std::filesystem::path path_for(std::string_view id) const;

  std::filesystem::path directory_;
};

SessionSummary summarize(const Session& session);

}  // namespace botshaper
