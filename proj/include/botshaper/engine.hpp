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

// The botshaping state machine.
//
// Two modes. In guided mode the bot asks for one undefined attribute at a
// time, drawn at random from the registry, and can explain it or suggest
// values from the concept graph. In open mode every user message yields a
// set of candidate replies conditioned on the persona; only the candidate
// the user picks enters the transcript.
//
// Switching is explicit: "Let's chat" is offered once, when the third
// attribute has been defined in guided mode, and open mode always offers
// "What else could we describe?".
//
// The engine holds no per-session state. Every handler mutates the Session
// it is given and returns what the client should show for that turn.
// Precondition failures (EmptyText, NoCandidatesPending, ...) are raised
// before anything changes.

#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "botshaper/concepts.hpp"
#include "botshaper/dialogue.hpp"
#include "botshaper/domain.hpp"
#include "botshaper/error.hpp"
#include "botshaper/intent.hpp"
#include "botshaper/registry.hpp"

namespace botshaper {

inline constexpr std::string_view kLetsChat = "Let's chat";
inline constexpr std::string_view kWhatElse = "What else could we describe?";

struct EngineConfig {
  std::size_t history_window = kDefaultHistoryWindow;
  std::size_t candidate_count = kDefaultCandidateCount;
  /// Suggestions offered in a row before the bot asks the user to type.
  std::uint32_t max_suggestion_streak = 5;
  /// Guided definitions needed before "Let's chat" is offered.
  std::size_t switch_hint_threshold = 3;
};

struct CharacterDelta {
  enum class Op { set, remove };
  Op op = Op::set;
  std::string attribute;
  std::string value;  // set only
  ValueSource source = ValueSource::user_typed;

  friend bool operator==(const CharacterDelta&, const CharacterDelta&) = default;
};

struct PinDelta {
  enum class Op { pin, unpin };
  Op op = Op::pin;
  std::uint64_t message_id = 0;

  friend bool operator==(const PinDelta&, const PinDelta&) = default;
};

struct TurnError {
  ErrorCode code = ErrorCode::InvalidArgument;
  std::string message;

  friend bool operator==(const TurnError&, const TurnError&) = default;
};

inline constexpr std::size_t kMaxQuickReplies = 4;

struct TurnOutput {
  /// The user's own message as recorded, when the turn had one.
  std::optional<ChatMessage> user_message;
  std::vector<ChatMessage> bot_messages;
  std::vector<std::string> quick_replies;
  std::optional<std::vector<GenerationCandidate>> candidates;
  std::optional<CharacterDelta> character_delta;
  std::optional<PinDelta> pin_delta;
  /// Canonical form of the recognized intent, for message turns.
  std::optional<std::string> intent;
  std::optional<TurnError> error;

  friend bool operator==(const TurnOutput&, const TurnOutput&) = default;
};

class Engine {
 public:
  Engine(std::shared_ptr<const AttributeRegistry> registry,
         std::shared_ptr<const ConceptSuggester> suggester,
         std::shared_ptr<const DialogueBackend> backend, EngineConfig config = {});

  /// Greeting plus the name prompt; phase awaiting_name.
  std::pair<Session, TurnOutput> start_session(std::uint64_t seed, std::string session_id,
                                               std::int64_t created_at) const;

  /// Recognizes the utterance in the session's context and applies the
  /// transition. Backend and concept-source failures become an apologetic
  /// bot message plus TurnOutput::error. Throws EmptyText.
  TurnOutput handle_user_message(Session& session, std::string_view text) const;

  /// Throws NoCandidatesPending or IndexOutOfRange.
  TurnOutput handle_candidate_choice(Session& session, std::size_t index) const;

  /// Throws InvalidArgument for a malformed id; unknown ids are a no-op.
  TurnOutput handle_delete_attribute(Session& session, std::string_view id) const;

  /// Throws UnknownMessage or NotBotMessage.
  TurnOutput handle_pin(Session& session, std::uint64_t message_id) const;
  TurnOutput handle_unpin(Session& session, std::uint64_t message_id) const;

  RecognizerContext context_for(const Session& session) const;

  const AttributeRegistry& registry() const noexcept { return *registry_; }
  const EngineConfig& config() const noexcept { return config_; }

 private:
  class Turn;

  std::shared_ptr<const AttributeRegistry> registry_;
  std::shared_ptr<const ConceptSuggester> suggester_;
  std::shared_ptr<const DialogueBackend> backend_;
  EngineConfig config_;
};

/// Checks the mode/phase and counter invariants; returns a description of
/// the first violation, or std::nullopt.
std::optional<std::string> check_engine_invariants(const Session& session);

}  // namespace botshaper
