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

// Persona construction and open-conversation generation.
//
// The engine hands a GenerationRequest (persona sentences, a window of the
// open-mode history, a candidate count and a seed) to a DialogueBackend and
// gets back exactly `n` candidate replies.

#pragma once

#include <array>
#include <chrono>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "botshaper/domain.hpp"
#include "botshaper/registry.hpp"

namespace botshaper {

struct PersonaSentence {
  std::string attribute;
  std::string text;

  friend bool operator==(const PersonaSentence&, const PersonaSentence&) = default;
};

/// One sentence per defined attribute, in definition order. Throws
/// UnknownAttribute if the character uses an id the registry lacks.
std::vector<PersonaSentence> build_persona(const Character& character,
                                           const AttributeRegistry& registry);

struct HistoryEntry {
  Author role = Author::user;
  std::string text;

  friend bool operator==(const HistoryEntry&, const HistoryEntry&) = default;
};

inline constexpr std::size_t kDefaultHistoryWindow = 10;
inline constexpr std::size_t kDefaultCandidateCount = 3;
inline constexpr std::size_t kRemotePersonaBudget = 20;

/// The last `max_turns` entries, order preserved.
template <typename T>
std::vector<T> window_history(std::span<const T> history, std::size_t max_turns) {
  const auto keep = history.size() < max_turns ? history.size() : max_turns;
  return std::vector<T>(history.end() - static_cast<std::ptrdiff_t>(keep), history.end());
}

template <typename T>
std::vector<T> window_history(const std::vector<T>& history, std::size_t max_turns) {
  return window_history(std::span<const T>(history), max_turns);
}

struct GenerationRequest {
  std::vector<std::string> persona;
  /// Attribute id behind each persona sentence (parallel to `persona`).
  /// In-process only: the stub uses it for fact lookup, it is not sent over
  /// the wire.
  std::vector<std::string> persona_attributes;
  std::vector<HistoryEntry> history;
  std::size_t n = kDefaultCandidateCount;
  std::uint64_t seed = 0;

  friend bool operator==(const GenerationRequest&, const GenerationRequest&) = default;
};

/// Builds a request from persona sentences and history.
GenerationRequest make_request(const std::vector<PersonaSentence>& persona,
                               std::vector<HistoryEntry> history, std::size_t n,
                               std::uint64_t seed);

class DialogueBackend {
 public:
  virtual ~DialogueBackend() = default;
  /// Exactly req.n candidates with dense indices. Throws BackendUnavailable
  /// or MalformedResponse.
  virtual std::vector<GenerationCandidate> generate(const GenerationRequest& req) const = 0;
  virtual std::string_view name() const noexcept = 0;
};

/// Validates the request, then delegates. Throws InvalidArgument for n == 0.
std::vector<GenerationCandidate> generate_candidates(const GenerationRequest& req,
                                                     const DialogueBackend& backend);

inline constexpr std::size_t kGenericReplyCount = 32;
const std::array<std::string_view, kGenericReplyCount>& generic_replies() noexcept;

/// Deterministic backend with no model behind it.
///
///  1. Fact echo: if the last user message mentions a phrase of a defined
///     attribute (display name, id or synonym), candidate 0 is that
///     attribute's persona sentence and candidate 1 is "Well, " followed by
///     the sentence with its first letter lowercased.
///  2. Fact proposal: otherwise, if the message asks about a "favourite
///     <topic>" the stub knows, candidate 1 proposes a value for it
///     ("My favourite meal is pizza.").
///  3. Remaining slots are filled from the 32-entry generic table, slot k
///     at index (h + k) mod 32 where h = request_hash(req).
class StubBackend final : public DialogueBackend {
 public:
  explicit StubBackend(std::shared_ptr<const AttributeRegistry> registry);

  std::vector<GenerationCandidate> generate(const GenerationRequest& req) const override;
  std::string_view name() const noexcept override { return "stub"; }

  /// FNV-1a-64 over the canonical request bytes:
  ///   for each persona sentence: normalized tokens joined by ' ', then '\n'
  ///   0x1E
  ///   for each history entry: "user:" or "bot:", normalized text, '\n'
  ///   0x1E
  ///   the seed in decimal
  static std::uint64_t request_hash(const GenerationRequest& req);

 private:
  std::shared_ptr<const AttributeRegistry> registry_;
};

/// HTTP POST {base}/generate with the JSON wire format, one retry on
/// transport failure or 5xx.
class RemoteBackend final : public DialogueBackend {
 public:
  explicit RemoteBackend(std::string base_url,
                         std::chrono::milliseconds timeout = std::chrono::seconds(15),
                         std::size_t persona_budget = kRemotePersonaBudget);

  std::vector<GenerationCandidate> generate(const GenerationRequest& req) const override;
  std::string_view name() const noexcept override { return "remote"; }

 private:
  std::string base_url_;
  std::chrono::milliseconds timeout_;
  std::size_t persona_budget_;
};

/// Request body for POST /generate. Persona sentences beyond the budget are
/// dropped oldest first.
std::string encode_generate_request(const GenerationRequest& req,
                                    std::size_t persona_budget = kRemotePersonaBudget);

/// Parses a POST /generate request body (used by test doubles and adapters).
/// Throws MalformedResponse.
GenerationRequest decode_generate_request(std::string_view body);

/// Parses `{"candidates": [string]}`; requires exactly `n` non-empty
/// (after trimming) strings. Throws MalformedResponse.
std::vector<GenerationCandidate> decode_generate_response(std::string_view body, std::size_t n);

}  // namespace botshaper
