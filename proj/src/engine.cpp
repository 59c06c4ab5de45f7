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

#include "botshaper/engine.hpp"

#include <algorithm>

#include "botshaper/text.hpp"

namespace botshaper {

namespace {

std::string lower_name(const AttributeDefinition& def) { return text::to_lower(def.display_name); }

bool is_guided_phase(PhaseKind k) {
  return k == PhaseKind::greeting || k == PhaseKind::awaiting_name ||
         k == PhaseKind::awaiting_value || k == PhaseKind::suggestion_offered;
}

}  // namespace

// One user action in flight: owns the rng copy and the output being built.
class Engine::Turn {
 public:
  Turn(const Engine& engine, Session& session)
      : engine_(engine), session_(session), state_(session.engine_state),
        rng_(session.engine_state.rng_state) {}

  ~Turn() { state_.rng_state = rng_.state(); }

  TurnOutput& out() { return out_; }

  void record_user(std::string text) {
    ChatMessage msg{next_id(), Author::user, std::move(text), state_.mode, MessageKind::utterance};
    session_.transcript.push_back(msg);
    out_.user_message = std::move(msg);
  }

  void say(std::string text, MessageKind kind) {
    ChatMessage msg{next_id(), Author::bot, std::move(text), state_.mode, kind};
    session_.transcript.push_back(msg);
    out_.bot_messages.push_back(std::move(msg));
  }

  void fail(ErrorCode code, std::string message) { out_.error = TurnError{code, std::move(message)}; }

  void dispatch(const Intent& intent) {
    switch (intent.kind) {
      case IntentKind::SwitchToOpen: return switch_to_open();
      case IntentKind::SwitchToGuided: return switch_to_guided();
      case IntentKind::DefineAttribute: return define_and_continue(intent.attribute, intent.text);
      case IntentKind::ProvideValue: return define_and_continue(current_attribute(), intent.text);
      case IntentKind::RequestSuggestion: return request_suggestion();
      case IntentKind::AcceptSuggestion: return accept_suggestion();
      case IntentKind::RejectSuggestion: return reject_suggestion();
      case IntentKind::RequestExplanation: return explain();
      case IntentKind::SkipAttribute: return skip();
      case IntentKind::OpenUtterance: return open_utterance();
      case IntentKind::Greeting: return greet();
      case IntentKind::Unrecognized: return help();
    }
  }

  void finish_quick_replies(bool allow_hint) {
    auto& chips = out_.quick_replies;
    chips = phase_chips();
    if (allow_hint && state_.mode == Mode::guided && !state_.switch_hint_shown &&
        state_.guided_defined_count() >= engine_.config_.switch_hint_threshold) {
      chips.emplace_back(kLetsChat);
      state_.switch_hint_shown = true;
    }
    if (chips.size() > kMaxQuickReplies) chips.resize(kMaxQuickReplies);
  }

  void prompt_next(std::string_view exclude = {}) {
    state_.suggestion_streak = 0;
    try {
      const auto& def = draw_undefined(registry(), session_.character, rng_, exclude);
      state_.phase = def.id.str() == "name" ? Phase::awaiting_name()
                                            : Phase::awaiting_value(def.id.str());
      say(def.prompt, MessageKind::prompt);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::NoneRemaining) throw;
      state_.phase = Phase::greeting();
      say("That's everything! You have described all " + std::to_string(registry().size()) +
              " of my attributes. Say \"Let's chat\" and we can talk.",
          MessageKind::system);
    }
  }

 private:
  const AttributeRegistry& registry() const { return *engine_.registry_; }

  std::uint64_t next_id() const { return session_.transcript.size(); }

  // Attribute the guided conversation is currently about, if any.
  std::string current_attribute() const {
    switch (state_.phase.kind) {
      case PhaseKind::awaiting_name:
      case PhaseKind::awaiting_value:
      case PhaseKind::suggestion_offered:
        return state_.phase.attribute;
      default:
        return {};
    }
  }

  std::vector<std::string> phase_chips() const {
    if (state_.mode == Mode::open) return {std::string(kWhatElse)};
    switch (state_.phase.kind) {
      case PhaseKind::awaiting_name:
      case PhaseKind::awaiting_value: {
        std::vector<std::string> chips;
        if (registry().at(state_.phase.attribute).suggestible()) chips.emplace_back("Give me a suggestion");
        chips.emplace_back("What does that mean?");
        chips.emplace_back("Skip");
        return chips;
      }
      case PhaseKind::suggestion_offered:
        return {"Yes", "Something else", "What does that mean?"};
      default:
        return {};
    }
  }

  // Stores a value for `id` and confirms it. Returns false (with a message)
  // when the value is rejected by the domain rules.
  bool define(const std::string& id, const std::string& value, ValueSource source) {
    const auto& def = registry().at(id);
    try {
      session_.character = set_attribute(std::move(session_.character),
                                         AttributeValue{def.id, value, source, state_.turn});
    } catch (const Error& e) {
      if (e.code() != ErrorCode::EmptyValue && e.code() != ErrorCode::ValueTooLong) throw;
      fail(e.code(), e.what());
      say(e.code() == ErrorCode::ValueTooLong
              ? "That's too long for me to remember. Could you keep it under 200 characters?"
              : "I didn't catch a value there. Could you try again?",
          MessageKind::system);
      return false;
    }
    auto& guided = state_.guided_defined;
    std::erase(guided, id);
    if (state_.mode == Mode::guided) guided.push_back(id);

    const auto* stored = session_.character.find(id);
    out_.character_delta = CharacterDelta{CharacterDelta::Op::set, id, stored->value, source};
    say("Okay! " + def.render(stored->value), MessageKind::system);
    return true;
  }

  void define_and_continue(const std::string& id, const std::string& value) {
    if (id.empty()) return help();
    if (!define(id, value, ValueSource::user_typed)) return;
    if (state_.mode == Mode::guided) prompt_next();
  }

  void request_suggestion() {
    const auto id = current_attribute();
    if (id.empty()) return prompt_next();
    offer_suggestion(id);
  }

  void offer_suggestion(const std::string& id) {
    const auto& def = registry().at(id);
    const auto ask_to_type = [&](std::string text) {
      state_.phase = id == "name" ? Phase::awaiting_name() : Phase::awaiting_value(id);
      say(std::move(text), MessageKind::system);
    };
    if (!def.suggestible()) {
      return ask_to_type("I don't have any ideas for my " + lower_name(def) +
                         ". What do you think it is?");
    }
    if (state_.suggestion_streak >= engine_.config_.max_suggestion_streak) {
      return ask_to_type("I'm running out of good ideas. Why don't you tell me what my " +
                         lower_name(def) + " is?");
    }
    try {
      auto value = engine_.suggester_->suggest_value(def, session_.character, rng_);
      ++state_.suggestion_streak;
      say("How about \"" + value + "\"?", MessageKind::suggestion);
      state_.phase = Phase::suggestion_offered(id, std::move(value));
    } catch (const Error& e) {
      switch (e.code()) {
        case ErrorCode::Exhausted:
        case ErrorCode::NoEdges:
          return ask_to_type("I'm out of ideas for my " + lower_name(def) +
                             ". What do you think it is?");
        case ErrorCode::SourceUnavailable:
          fail(e.code(), e.what());
          return ask_to_type("Sorry, I can't reach my ideas right now. What do you think my " +
                             lower_name(def) + " is?");
        default:
          throw;
      }
    }
  }

  void accept_suggestion() {
    if (state_.phase.kind != PhaseKind::suggestion_offered) return help();
    const auto id = state_.phase.attribute;
    const auto value = state_.phase.candidate;
    if (!define(id, value, ValueSource::suggestion_accepted)) return;
    prompt_next();
  }

  void reject_suggestion() {
    if (state_.phase.kind != PhaseKind::suggestion_offered) return help();
    const auto id = state_.phase.attribute;
    session_.character.reject(id, state_.phase.candidate);
    offer_suggestion(id);
  }

  void explain() {
    const auto id = current_attribute();
    if (id.empty()) return help();
    const auto& def = registry().at(id);
    say(explanation_for(registry(), id), MessageKind::explanation);
    if (state_.phase.kind == PhaseKind::suggestion_offered) state_.phase = Phase::awaiting_value(id);
    say(def.prompt, MessageKind::prompt);
  }

  void skip() { prompt_next(current_attribute()); }

  void switch_to_open() {
    if (state_.mode == Mode::open) {
      state_.phase = Phase::open_idle();
      return say("We are already chatting. Ask me anything!", MessageKind::system);
    }
    state_.mode = Mode::open;
    state_.phase = Phase::open_idle();
    state_.suggestion_streak = 0;
    say("Great, let's chat! Ask me anything about myself.", MessageKind::system);
  }

  void switch_to_guided() {
    state_.mode = Mode::guided;
    state_.phase = Phase::greeting();
    say("Sure, let's describe me some more.", MessageKind::system);
    prompt_next();
  }

  void open_utterance() {
    std::vector<HistoryEntry> history;
    for (const auto& m : session_.transcript) {
      if (m.mode == Mode::open && m.kind == MessageKind::utterance) history.push_back({m.author, m.text});
    }
    auto req = make_request(build_persona(session_.character, registry()),
                            window_history(history, engine_.config_.history_window),
                            engine_.config_.candidate_count, rng_.next());
    try {
      auto candidates = generate_candidates(req, *engine_.backend_);
      state_.phase = Phase::candidates_offered(candidates);
      out_.candidates = std::move(candidates);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::BackendUnavailable && e.code() != ErrorCode::MalformedResponse) throw;
      fail(e.code(), e.what());
      state_.phase = Phase::open_idle();
      say("Sorry, I lost my train of thought. Could you say that again?", MessageKind::system);
    }
  }

  void greet() {
    say("Hello! Let's find out who I am.", MessageKind::system);
    const auto id = current_attribute();
    if (id.empty()) return prompt_next();
    if (state_.phase.kind == PhaseKind::suggestion_offered) state_.phase = Phase::awaiting_value(id);
    say(registry().at(id).prompt, MessageKind::prompt);
  }

  void help() {
    if (state_.phase.kind == PhaseKind::suggestion_offered) {
      const auto& def = registry().at(state_.phase.attribute);
      return say("Should my " + lower_name(def) + " be \"" + state_.phase.candidate +
                     "\"? Say yes or no, or tell me directly, like \"Your " + lower_name(def) +
                     " is ...\".",
                 MessageKind::system);
    }
    if (state_.mode == Mode::guided) {
      return say("Sorry, I didn't get that. You can tell me about myself, like \"Your name is "
                 "Jane.\", ask me for ideas, or say \"Let's chat\".",
                 MessageKind::system);
    }
    say("Sorry, I didn't get that.", MessageKind::system);
  }

  const Engine& engine_;
  Session& session_;
  EngineState& state_;
  SeededRng rng_;
  TurnOutput out_;
};

Engine::Engine(std::shared_ptr<const AttributeRegistry> registry,
               std::shared_ptr<const ConceptSuggester> suggester,
               std::shared_ptr<const DialogueBackend> backend, EngineConfig config)
    : registry_(std::move(registry)), suggester_(std::move(suggester)),
      backend_(std::move(backend)), config_(config) {}

std::pair<Session, TurnOutput> Engine::start_session(std::uint64_t seed, std::string session_id,
                                                     std::int64_t created_at) const {
  Session session;
  session.session_id = std::move(session_id);
  session.seed = seed;
  session.created_at = created_at;
  session.engine_state.rng_state = seed;

  TurnOutput out;
  {
    Turn turn(*this, session);
    turn.say("Hi! I'm a brand-new character and I don't know anything about myself yet. "
             "Help me find out who I am!",
             MessageKind::system);
    session.engine_state.phase = Phase::awaiting_name();
    turn.say(registry_->at("name").prompt, MessageKind::prompt);
    turn.finish_quick_replies(false);
    out = std::move(turn.out());
  }
  return {std::move(session), std::move(out)};
}

RecognizerContext Engine::context_for(const Session& session) const {
  RecognizerContext ctx;
  ctx.registry = registry_.get();
  ctx.mode = session.engine_state.mode;
  const auto& phase = session.engine_state.phase;
  if (ctx.mode == Mode::guided) {
    switch (phase.kind) {
      case PhaseKind::awaiting_name:
      case PhaseKind::awaiting_value:
        ctx.awaiting = Awaiting::value_for;
        ctx.attribute = phase.attribute;
        break;
      case PhaseKind::suggestion_offered:
        ctx.awaiting = Awaiting::accept_reject;
        break;
      default:
        break;
    }
  }
  return ctx;
}

TurnOutput Engine::handle_user_message(Session& session, std::string_view text) const {
  const auto trimmed = std::string(text::trim(text));
  if (trimmed.empty()) throw Error(ErrorCode::EmptyText, "message text is empty");

  const auto intent = recognize(trimmed, context_for(session));
  auto& state = session.engine_state;
  ++state.turn;
  // a new message withdraws any candidates still on offer
  if (state.phase.kind == PhaseKind::candidates_offered) state.phase = Phase::open_idle();

  Turn turn(*this, session);
  turn.out().intent = to_string(intent);
  turn.record_user(trimmed);
  turn.dispatch(intent);
  turn.finish_quick_replies(true);
  return std::move(turn.out());
}

TurnOutput Engine::handle_candidate_choice(Session& session, std::size_t index) const {
  auto& state = session.engine_state;
  if (state.phase.kind != PhaseKind::candidates_offered) {
    throw Error(ErrorCode::NoCandidatesPending, "no candidate replies are pending");
  }
  if (index >= state.phase.candidates.size()) {
    throw Error(ErrorCode::IndexOutOfRange, "candidate " + std::to_string(index) + " of " +
                                                std::to_string(state.phase.candidates.size()));
  }
  auto chosen = std::move(state.phase.candidates[index].text);
  ++state.turn;
  state.phase = Phase::open_idle();

  Turn turn(*this, session);
  turn.say(std::move(chosen), MessageKind::utterance);
  turn.finish_quick_replies(false);
  return std::move(turn.out());
}

TurnOutput Engine::handle_delete_attribute(Session& session, std::string_view id) const {
  if (!AttributeId::is_valid(id)) {
    throw Error(ErrorCode::InvalidArgument, "malformed attribute id '" + std::string(id) + "'");
  }
  auto& state = session.engine_state;
  ++state.turn;
  Turn turn(*this, session);
  if (session.character.erase(id)) {
    std::erase(state.guided_defined, std::string(id));
    turn.out().character_delta = CharacterDelta{CharacterDelta::Op::remove, std::string(id), {}, {}};
  }
  turn.finish_quick_replies(false);
  return std::move(turn.out());
}

TurnOutput Engine::handle_pin(Session& session, std::uint64_t message_id) const {
  apply_pin(session, message_id, session.engine_state.turn + 1);
  ++session.engine_state.turn;
  Turn turn(*this, session);
  turn.out().pin_delta = PinDelta{PinDelta::Op::pin, message_id};
  turn.finish_quick_replies(false);
  return std::move(turn.out());
}

TurnOutput Engine::handle_unpin(Session& session, std::uint64_t message_id) const {
  ++session.engine_state.turn;
  const bool removed = apply_unpin(session, message_id);
  Turn turn(*this, session);
  if (removed) turn.out().pin_delta = PinDelta{PinDelta::Op::unpin, message_id};
  turn.finish_quick_replies(false);
  return std::move(turn.out());
}

std::optional<std::string> check_engine_invariants(const Session& session) {
  const auto& state = session.engine_state;
  const auto kind = state.phase.kind;
  if (state.mode == Mode::guided && !is_guided_phase(kind)) {
    return "guided mode in phase " + std::string(to_string(kind));
  }
  if (state.mode == Mode::open && is_guided_phase(kind)) {
    return "open mode in phase " + std::string(to_string(kind));
  }
  if (kind == PhaseKind::candidates_offered && state.phase.candidates.empty()) {
    return "candidates_offered without candidates";
  }
  if (state.guided_defined_count() > session.character.size()) {
    return "guided_defined_count exceeds attribute count";
  }
  for (const auto& id : state.guided_defined) {
    if (!session.character.contains(id)) return "guided attribute '" + id + "' is not defined";
  }
  for (std::size_t i = 0; i < session.transcript.size(); ++i) {
    if (session.transcript[i].id != i) return "transcript ids are not dense";
    if (session.transcript[i].text.empty()) return "empty message " + std::to_string(i);
  }
  for (const auto& pin : session.pins) {
    const auto* m = session.find_message(pin.message_id);
    if (!m || m->author != Author::bot) return "pin to a missing or user message";
  }
  for (const auto& [id, values] : session.character.rejected_values()) {
    if (const auto* cur = session.character.find(id); cur && values.count(cur->value)) {
      return "current value of '" + id + "' is also rejected";
    }
  }
  return std::nullopt;
}

}  // namespace botshaper
