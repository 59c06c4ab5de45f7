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

// Attribute value suggestions from a concept graph.
//
// A value for an attribute whose concept node is C is any label A with an
// edge "A IsA C". Edges come from a ConceptSource: the bundled snapshot, a
// live ConceptNet-compatible HTTP service, or live-with-snapshot-fallback.

#pragma once

#include <chrono>
#include <cstddef>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "botshaper/domain.hpp"
#include "botshaper/registry.hpp"
#include "botshaper/rng.hpp"

namespace botshaper {

inline constexpr std::string_view kIsA = "IsA";

struct ConceptEdge {
  std::string start_label;
  std::string relation{kIsA};
  std::string end_node;
  double weight = 1.0;

  friend bool operator==(const ConceptEdge&, const ConceptEdge&) = default;
};

/// Underscores to spaces, then drops one leading article (a/an/the).
std::string clean_label(std::string_view label);

class ConceptSnapshot {
 public:
  ConceptSnapshot() = default;
  ConceptSnapshot(std::map<std::string, std::vector<ConceptEdge>> edges, std::string version);

  /// Edges ending at `node`, in stored order. Empty if the node is unknown.
  const std::vector<ConceptEdge>& edges(std::string_view node) const;
  bool has_node(std::string_view node) const { return edges_.count(std::string(node)) > 0; }
  const std::string& version() const noexcept { return version_; }
  std::size_t node_count() const noexcept { return edges_.size(); }

 private:
  std::map<std::string, std::vector<ConceptEdge>, std::less<>> edges_;
  std::string version_;
};

/// Snapshot format: `end_node \t start_label \t weight` per line, `#`
/// comments, `# version: <tag>`. Throws ParseError.
ConceptSnapshot load_snapshot(std::string_view source);
ConceptSnapshot load_snapshot_file(const std::filesystem::path& path);

/// Where edges come from. Implementations must be safe to call concurrently.
class ConceptSource {
 public:
  virtual ~ConceptSource() = default;
  /// Up to `limit` IsA edges ending at `node`, labels cleaned. Throws
  /// SourceUnavailable when the source cannot answer.
  virtual std::vector<ConceptEdge> query(const std::string& node, std::size_t limit) const = 0;
};

class SnapshotSource final : public ConceptSource {
 public:
  explicit SnapshotSource(ConceptSnapshot snapshot) : snapshot_(std::move(snapshot)) {}
  std::vector<ConceptEdge> query(const std::string& node, std::size_t limit) const override;
  const ConceptSnapshot& snapshot() const noexcept { return snapshot_; }

 private:
  ConceptSnapshot snapshot_;
};

/// GET {base}/query?end=/c/en/<node>&rel=/r/IsA&limit=<n>, one retry on
/// transport failure or 5xx.
class HttpConceptSource final : public ConceptSource {
 public:
  static constexpr std::string_view kDefaultBaseUrl = "https://api.conceptnet.io";

  explicit HttpConceptSource(std::string base_url = std::string(kDefaultBaseUrl),
                             std::chrono::milliseconds timeout = std::chrono::seconds(5));
  std::vector<ConceptEdge> query(const std::string& node, std::size_t limit) const override;

  static std::string request_path(std::string_view node, std::size_t limit);

 private:
  std::string base_url_;
  std::chrono::milliseconds timeout_;
};

/// Extracts IsA edges from a ConceptNet /query response body. Throws
/// SourceUnavailable on malformed JSON.
std::vector<ConceptEdge> parse_conceptnet_response(std::string_view body, std::string_view node,
                                                   std::size_t limit);

/// Tries `primary`; on SourceUnavailable answers from `fallback`.
class FallbackSource final : public ConceptSource {
 public:
  FallbackSource(std::shared_ptr<const ConceptSource> primary,
                 std::shared_ptr<const ConceptSource> fallback)
      : primary_(std::move(primary)), fallback_(std::move(fallback)) {}
  std::vector<ConceptEdge> query(const std::string& node, std::size_t limit) const override;

 private:
  std::shared_ptr<const ConceptSource> primary_;
  std::shared_ptr<const ConceptSource> fallback_;
};

class ConceptSuggester {
 public:
  static constexpr std::size_t kDefaultFetchLimit = 20;

  explicit ConceptSuggester(std::shared_ptr<const ConceptSource> source,
                            std::size_t fetch_limit = kDefaultFetchLimit);

  /// Cached per (node, limit). Throws InvalidArgument for an empty node or
  /// zero limit, SourceUnavailable, or NoEdges.
  std::vector<ConceptEdge> fetch_instances(const std::string& node, std::size_t limit) const;

  /// candidates[rng.next() mod n], where candidates are the fetched labels
  /// minus the attribute's rejected values and current value. Throws
  /// NotSuggestible, Exhausted, plus anything fetch_instances throws. The
  /// rng only advances on success.
  std::string suggest_value(const AttributeDefinition& def, const Character& character,
                            SeededRng& rng) const;

  std::size_t fetch_limit() const noexcept { return fetch_limit_; }

 private:
  std::shared_ptr<const ConceptSource> source_;
  std::size_t fetch_limit_;
  mutable std::mutex cache_mutex_;
  mutable std::map<std::pair<std::string, std::size_t>, std::vector<ConceptEdge>> cache_;
};

}  // namespace botshaper
