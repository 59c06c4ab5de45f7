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

// Shared data model: characters, transcripts, pins and sessions.
//
// Everything here is a value type. The free functions at the bottom are the
// only sanctioned way to mutate a Character or a Session's pinboard; they
// take the old state by value and hand back the new one.

#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace botshaper {

inline constexpr std::size_t kMaxValueLength = 200;

/// Lowercase token naming one registry entry, e.g. "biggest_fear".
class AttributeId {
 public:
  AttributeId() = default;
  /// Throws Error{InvalidArgument} unless `id` matches [a-z][a-z0-9_]*.
  explicit AttributeId(std::string id);

  static bool is_valid(std::string_view id) noexcept;

  const std::string& str() const noexcept { return id_; }

  friend auto operator<=>(const AttributeId&, const AttributeId&) = default;

 private:
  std::string id_;
};

enum class ValueSource { user_typed, suggestion_accepted };

struct AttributeValue {
  AttributeId attribute;
  std::string value;
  ValueSource source = ValueSource::user_typed;
  std::uint64_t defined_at = 0;

  friend bool operator==(const AttributeValue&, const AttributeValue&) = default;
};

/// The evolving artifact. Attributes are kept in definition order, which is
/// also ascending `defined_at` order.
class Character {
 public:
  using RejectedMap = std::map<std::string, std::set<std::string>>;

  const std::vector<AttributeValue>& attributes() const noexcept { return attributes_; }
  const RejectedMap& rejected_values() const noexcept { return rejected_; }

  const AttributeValue* find(std::string_view id) const noexcept;
  bool contains(std::string_view id) const noexcept { return find(id) != nullptr; }
  std::size_t size() const noexcept { return attributes_.size(); }
  bool empty() const noexcept { return attributes_.empty(); }

  /// Rejected values recorded for `id`; empty when none.
  const std::set<std::string>& rejected_for(std::string_view id) const;

  // Raw mutators used by the free functions below and by the document
  // decoder. They keep the per-attribute invariants but do no trimming.
  void put(AttributeValue value);
  bool erase(std::string_view id);
  void reject(const std::string& id, const std::string& value);

  friend bool operator==(const Character&, const Character&) = default;

 private:
  std::vector<AttributeValue> attributes_;
  RejectedMap rejected_;
};

enum class Author { user, bot };
enum class Mode { guided, open };
enum class MessageKind { utterance, prompt, explanation, suggestion, system };

struct ChatMessage {
  std::uint64_t id = 0;
  Author author = Author::bot;
  std::string text;
  Mode mode = Mode::guided;
  MessageKind kind = MessageKind::utterance;

  friend bool operator==(const ChatMessage&, const ChatMessage&) = default;
};

struct PinnedStatement {
  std::uint64_t message_id = 0;
  std::uint64_t pinned_at = 0;

  friend bool operator==(const PinnedStatement&, const PinnedStatement&) = default;
};

struct GenerationCandidate {
  std::string text;
  std::size_t index = 0;

  friend bool operator==(const GenerationCandidate&, const GenerationCandidate&) = default;
};

enum class PhaseKind {
  greeting,  // guided, nothing pending
  awaiting_name,
  awaiting_value,
  suggestion_offered,
  open_idle,
  candidates_offered,
};

/// Where the conversation stands. Only the fields relevant to `kind` are
/// populated; the named constructors keep that straight.
struct Phase {
  PhaseKind kind = PhaseKind::greeting;
  std::string attribute;                         // awaiting_value, suggestion_offered
  std::string candidate;                         // suggestion_offered
  std::vector<GenerationCandidate> candidates;   // candidates_offered

  static Phase greeting() { return {}; }
  static Phase awaiting_name() { return {PhaseKind::awaiting_name, "name", {}, {}}; }
  static Phase awaiting_value(std::string id) {
    return {PhaseKind::awaiting_value, std::move(id), {}, {}};
  }
  static Phase suggestion_offered(std::string id, std::string candidate) {
    return {PhaseKind::suggestion_offered, std::move(id), std::move(candidate), {}};
  }
  static Phase open_idle() { return {PhaseKind::open_idle, {}, {}, {}}; }
  static Phase candidates_offered(std::vector<GenerationCandidate> c) {
    return {PhaseKind::candidates_offered, {}, {}, std::move(c)};
  }

  friend bool operator==(const Phase&, const Phase&) = default;
};

struct EngineState {
  Mode mode = Mode::guided;
  Phase phase;
  /// Ids of currently defined attributes whose latest definition happened in
  /// guided mode, in definition order.
  std::vector<std::string> guided_defined;
  bool switch_hint_shown = false;
  /// Incremented once per user action; stamps attribute definitions and pins.
  std::uint64_t turn = 0;
  std::uint64_t rng_state = 0;
  /// Suggestions offered in a row for the attribute currently in play.
  std::uint32_t suggestion_streak = 0;

  std::size_t guided_defined_count() const noexcept { return guided_defined.size(); }

  friend bool operator==(const EngineState&, const EngineState&) = default;
};

struct Session {
  std::string session_id;
  std::uint64_t seed = 0;
  Character character;
  std::vector<ChatMessage> transcript;
  std::vector<PinnedStatement> pins;
  EngineState engine_state;
  /// Seconds since the Unix epoch, UTC.
  std::int64_t created_at = 0;

  const ChatMessage* find_message(std::uint64_t id) const noexcept;

  friend bool operator==(const Session&, const Session&) = default;
};

/// Trims `value.value`, enforces 1..200 code points, and stores it. A
/// previous value for the same attribute moves to rejected_values. Throws
/// EmptyValue, ValueTooLong, or InvalidArgument when `defined_at` does not
/// advance past the latest definition.
Character set_attribute(Character character, AttributeValue value);

/// Idempotent removal.
Character delete_attribute(Character character, const AttributeId& id);

/// Appends a pin unless the message is already pinned. Throws UnknownMessage
/// or NotBotMessage.
Session pin_message(Session session, std::uint64_t message_id, std::uint64_t pinned_at);

/// Removes a pin if present.
Session unpin_message(Session session, std::uint64_t message_id);

// In-place forms of the two above, for callers holding large sessions.
// apply_pin leaves the session untouched when it throws.
void apply_pin(Session& session, std::uint64_t message_id, std::uint64_t pinned_at);
bool apply_unpin(Session& session, std::uint64_t message_id);

std::string_view to_string(ValueSource v) noexcept;
std::string_view to_string(Author v) noexcept;
std::string_view to_string(Mode v) noexcept;
std::string_view to_string(MessageKind v) noexcept;
std::string_view to_string(PhaseKind v) noexcept;

// Inverse lookups; std::nullopt for unknown names.
std::optional<ValueSource> value_source_from(std::string_view s) noexcept;
std::optional<Author> author_from(std::string_view s) noexcept;
std::optional<Mode> mode_from(std::string_view s) noexcept;
std::optional<MessageKind> message_kind_from(std::string_view s) noexcept;
std::optional<PhaseKind> phase_kind_from(std::string_view s) noexcept;

}  // namespace botshaper
