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

#include "botshaper/concepts.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <set>
#include <sstream>

#include <httplib.h>
#include <json.hpp>

#include "botshaper/error.hpp"
#include "botshaper/text.hpp"

namespace botshaper {

namespace {

constexpr std::string_view kVersionTag = "# version:";

std::string url_encode(std::string_view s) {
  static constexpr char kHex[] = "0123456789ABCDEF";
  std::string out;
  for (unsigned char c : s) {
    if (std::isalnum(c) || c == '_' || c == '-' || c == '.' || c == '~' || c == '/') {
      out += static_cast<char>(c);
    } else {
      out += '%';
      out += kHex[c >> 4];
      out += kHex[c & 0xF];
    }
  }
  return out;
}

std::vector<ConceptEdge> clean_edges(std::vector<ConceptEdge> edges, std::size_t limit) {
  for (auto& e : edges) e.start_label = clean_label(e.start_label);
  std::erase_if(edges, [](const ConceptEdge& e) { return e.start_label.empty(); });
  if (edges.size() > limit) edges.resize(limit);
  return edges;
}

}  // namespace

std::string clean_label(std::string_view label) {
  auto s = text::replace_all(std::string(label), "_", " ");
  auto trimmed = std::string(text::trim(s));
  for (std::string_view article : {"a ", "an ", "the "}) {
    if (text::starts_with_ci(trimmed, article) && trimmed.size() > article.size()) {
      trimmed = std::string(text::trim(std::string_view(trimmed).substr(article.size())));
      break;
    }
  }
  return trimmed;
}

ConceptSnapshot::ConceptSnapshot(std::map<std::string, std::vector<ConceptEdge>> edges,
                                 std::string version)
    : edges_(edges.begin(), edges.end()), version_(std::move(version)) {}

const std::vector<ConceptEdge>& ConceptSnapshot::edges(std::string_view node) const {
  static const std::vector<ConceptEdge> kNone;
  auto it = edges_.find(node);
  return it == edges_.end() ? kNone : it->second;
}

ConceptSnapshot load_snapshot(std::string_view source) {
  std::map<std::string, std::vector<ConceptEdge>> edges;
  std::string version;
  std::istringstream in{std::string(source)};
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    if (!raw.empty() && raw.back() == '\r') raw.pop_back();
    const auto trimmed = text::trim(raw);
    if (trimmed.empty()) continue;
    if (trimmed.front() == '#') {
      if (trimmed.starts_with(kVersionTag)) {
        version = std::string(text::trim(trimmed.substr(kVersionTag.size())));
      }
      continue;
    }
    const auto fields = text::split(raw, '\t');
    const auto where = "line " + std::to_string(line_no) + ": ";
    if (fields.size() != 3) {
      throw Error(ErrorCode::ParseError, where + "expected end_node, start_label, weight");
    }
    ConceptEdge edge;
    edge.end_node = std::string(text::trim(fields[0]));
    edge.start_label = std::string(text::trim(fields[1]));
    try {
      std::size_t used = 0;
      edge.weight = std::stod(fields[2], &used);
      if (!text::trim(std::string_view(fields[2]).substr(used)).empty()) throw std::invalid_argument("");
    } catch (const std::exception&) {
      throw Error(ErrorCode::ParseError, where + "bad weight '" + fields[2] + "'");
    }
    if (edge.end_node.empty() || edge.start_label.empty() || edge.weight < 0) {
      throw Error(ErrorCode::ParseError, where + "empty label or negative weight");
    }
    edges[edge.end_node].push_back(std::move(edge));
  }
  return ConceptSnapshot(std::move(edges), std::move(version));
}

ConceptSnapshot load_snapshot_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::ParseError, "cannot read snapshot file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return load_snapshot(buf.str());
}

std::vector<ConceptEdge> SnapshotSource::query(const std::string& node, std::size_t limit) const {
  return clean_edges(snapshot_.edges(node), limit);
}

HttpConceptSource::HttpConceptSource(std::string base_url, std::chrono::milliseconds timeout)
    : base_url_(std::move(base_url)), timeout_(timeout) {
  while (!base_url_.empty() && base_url_.back() == '/') base_url_.pop_back();
}

std::string HttpConceptSource::request_path(std::string_view node, std::size_t limit) {
  return "/query?end=/c/en/" + url_encode(node) + "&rel=/r/IsA&limit=" + std::to_string(limit);
}

std::vector<ConceptEdge> HttpConceptSource::query(const std::string& node, std::size_t limit) const {
  const auto path = request_path(node, limit);
  std::string failure = "no attempt";
  for (int attempt = 0; attempt < 2; ++attempt) {
    httplib::Client client(base_url_);
    if (!client.is_valid()) {
      throw Error(ErrorCode::SourceUnavailable, "unsupported concept service url " + base_url_);
    }
    const auto secs = std::chrono::duration_cast<std::chrono::seconds>(timeout_);
    const auto usecs = std::chrono::duration_cast<std::chrono::microseconds>(timeout_ - secs);
    client.set_connection_timeout(secs.count(), usecs.count());
    client.set_read_timeout(secs.count(), usecs.count());
    client.set_follow_location(true);

    auto res = client.Get(path);
    if (!res) {
      failure = "transport error: " + httplib::to_string(res.error());
      continue;
    }
    if (res->status >= 500) {
      failure = "status " + std::to_string(res->status);
      continue;
    }
    if (res->status != 200) {
      throw Error(ErrorCode::SourceUnavailable,
                  "concept service answered " + std::to_string(res->status));
    }
    return parse_conceptnet_response(res->body, node, limit);
  }
  throw Error(ErrorCode::SourceUnavailable, "concept service unreachable (" + failure + ")");
}

std::vector<ConceptEdge> parse_conceptnet_response(std::string_view body, std::string_view node,
                                                   std::size_t limit) {
  std::vector<ConceptEdge> edges;
  try {
    const auto doc = nlohmann::json::parse(body);
    for (const auto& e : doc.at("edges")) {
      const auto& rel = e.at("rel");
      const std::string rel_label = rel.contains("label") ? rel.at("label").get<std::string>()
                                                          : rel.value("@id", "");
      if (rel_label != kIsA && rel_label != "/r/IsA") continue;
      const auto& start = e.at("start");
      if (start.contains("@id") && !start.at("@id").get<std::string>().starts_with("/c/en/")) {
        continue;
      }
      ConceptEdge edge;
      edge.start_label = start.at("label").get<std::string>();
      edge.end_node = std::string(node);
      edge.weight = e.value("weight", 1.0);
      edges.push_back(std::move(edge));
    }
  } catch (const nlohmann::json::exception& ex) {
    throw Error(ErrorCode::SourceUnavailable, std::string("malformed concept response: ") + ex.what());
  }
  return clean_edges(std::move(edges), limit);
}

std::vector<ConceptEdge> FallbackSource::query(const std::string& node, std::size_t limit) const {
  try {
    return primary_->query(node, limit);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::SourceUnavailable) throw;
    return fallback_->query(node, limit);
  }
}

ConceptSuggester::ConceptSuggester(std::shared_ptr<const ConceptSource> source, std::size_t fetch_limit)
    : source_(std::move(source)), fetch_limit_(fetch_limit) {}

std::vector<ConceptEdge> ConceptSuggester::fetch_instances(const std::string& node,
                                                           std::size_t limit) const {
  if (node.empty()) throw Error(ErrorCode::InvalidArgument, "concept node must not be empty");
  if (limit == 0) throw Error(ErrorCode::InvalidArgument, "limit must be positive");
  const auto key = std::make_pair(node, limit);
  {
    std::lock_guard lock(cache_mutex_);
    if (auto it = cache_.find(key); it != cache_.end()) return it->second;
  }
  // queried outside the lock; a racing duplicate fetch just overwrites
  auto edges = source_->query(node, limit);
  if (edges.empty()) throw Error(ErrorCode::NoEdges, "no IsA edges end at '" + node + "'");
  std::lock_guard lock(cache_mutex_);
  cache_[key] = edges;
  return edges;
}

std::string ConceptSuggester::suggest_value(const AttributeDefinition& def, const Character& character,
                                            SeededRng& rng) const {
  if (!def.suggestible()) {
    throw Error(ErrorCode::NotSuggestible, "no suggestions for '" + def.id.str() + "'");
  }
  const auto edges = fetch_instances(*def.concept_node, fetch_limit_);
  const auto& rejected = character.rejected_for(def.id.str());
  const auto* current = character.find(def.id.str());

  std::vector<std::string> candidates;
  std::set<std::string> seen;
  for (const auto& e : edges) {
    const auto& label = e.start_label;
    if (rejected.count(label) || (current && current->value == label)) continue;
    if (seen.insert(label).second) candidates.push_back(label);
  }
  if (candidates.empty()) {
    throw Error(ErrorCode::Exhausted, "every suggestion for '" + def.id.str() + "' was rejected");
  }
  return candidates[rng.index(candidates.size())];
}

}  // namespace botshaper
