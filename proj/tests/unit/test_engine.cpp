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

#include <gtest/gtest.h>

#include <algorithm>
#include <functional>

#include "botshaper/codec.hpp"
#include "botshaper/engine.hpp"
#include "fixtures.hpp"

namespace botshaper {
namespace {

using testing::offline_engine;
using testing::offline_runtime;

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorCode::InvalidArgument;
}

Session start(std::uint64_t seed) { return offline_engine().start_session(seed, "t", 0).first; }

bool has_chip(const TurnOutput& t, std::string_view chip) {
  return std::find(t.quick_replies.begin(), t.quick_replies.end(), chip) != t.quick_replies.end();
}

TurnOutput say(Session& s, std::string_view text) { return offline_engine().handle_user_message(s, text); }

class ThrowingBackend final : public DialogueBackend {
 public:
  std::vector<GenerationCandidate> generate(const GenerationRequest&) const override {
    throw Error(ErrorCode::BackendUnavailable, "model is asleep");
  }
  std::string_view name() const noexcept override { return "throwing"; }
};

class DownSource final : public ConceptSource {
 public:
  std::vector<ConceptEdge> query(const std::string&, std::size_t) const override {
    throw Error(ErrorCode::SourceUnavailable, "offline");
  }
};

TEST(Start, GreetsAndAsksForName) {
  auto [s, out] = offline_engine().start_session(7, "a", 0);
  ASSERT_EQ(out.bot_messages.size(), 2u);
  EXPECT_EQ(out.bot_messages[1].text, "What is my name?");
  EXPECT_EQ(s.engine_state.phase.kind, PhaseKind::awaiting_name);
  EXPECT_EQ(s.engine_state.mode, Mode::guided);
  EXPECT_EQ(s.transcript[0].id, 0u);
  EXPECT_EQ(s.transcript[1].id, 1u);
  EXPECT_FALSE(has_chip(out, "Give me a suggestion"));
  EXPECT_TRUE(has_chip(out, "What does that mean?"));

  auto [s2, out2] = offline_engine().start_session(7, "a", 0);
  EXPECT_EQ(s, s2);
  EXPECT_EQ(out, out2);
}

TEST(Guided, NameThenRandomDraw) {
  auto s = start(617);
  const auto out = say(s, "Jane");
  EXPECT_EQ(out.intent, "ProvideValue(Jane)");
  ASSERT_TRUE(out.character_delta);
  EXPECT_EQ(out.character_delta->attribute, "name");
  EXPECT_EQ(s.character.find("name")->value, "Jane");
  EXPECT_EQ(out.bot_messages[0].text, "Okay! My name is Jane.");
  EXPECT_EQ(out.bot_messages[1].kind, MessageKind::prompt);
  EXPECT_EQ(s.engine_state.phase.kind, PhaseKind::awaiting_value);
}

TEST(Guided, SuggestionRejectAccept) {
  auto s = start(617);
  say(s, "Jane");
  ASSERT_EQ(s.engine_state.phase.attribute, "biggest_fear");

  auto out = say(s, "Can you give me a suggestion?");
  EXPECT_EQ(s.engine_state.phase.kind, PhaseKind::suggestion_offered);
  EXPECT_EQ(s.engine_state.phase.candidate, "physical examination");
  EXPECT_EQ(out.bot_messages[0].kind, MessageKind::suggestion);
  EXPECT_EQ(out.quick_replies, (std::vector<std::string>{"Yes", "Something else", "What does that mean?"}));

  say(s, "no");
  EXPECT_EQ(s.engine_state.phase.candidate, "zombie");
  EXPECT_EQ(s.character.rejected_for("biggest_fear"), std::set<std::string>{"physical examination"});

  out = say(s, "yes");
  const auto* fear = s.character.find("biggest_fear");
  ASSERT_TRUE(fear);
  EXPECT_EQ(fear->value, "zombie");
  EXPECT_EQ(fear->source, ValueSource::suggestion_accepted);
  EXPECT_EQ(s.engine_state.phase.kind, PhaseKind::awaiting_value);
  EXPECT_NE(s.engine_state.phase.attribute, "biggest_fear");
}

TEST(Guided, ExplanationKeepsTheAttribute) {
  auto s = start(617);
  say(s, "Jane");
  const auto out = say(s, "What does that mean?");
  ASSERT_EQ(out.bot_messages.size(), 2u);
  EXPECT_EQ(out.bot_messages[0].kind, MessageKind::explanation);
  EXPECT_EQ(out.bot_messages[0].text, offline_runtime().registry->at("biggest_fear").explanation);
  EXPECT_EQ(out.bot_messages[1].text, "What is my biggest fear?");
  EXPECT_EQ(s.engine_state.phase.attribute, "biggest_fear");
}

TEST(Guided, SkipDrawsAnotherAttribute) {
  auto s = start(617);
  say(s, "Jane");
  say(s, "skip");
  EXPECT_EQ(s.engine_state.phase.kind, PhaseKind::awaiting_value);
  EXPECT_NE(s.engine_state.phase.attribute, "biggest_fear");
  EXPECT_FALSE(s.character.contains("biggest_fear"));
}

TEST(Guided, NonSuggestibleAttributeAsksTheUser) {
  auto s = start(1);
  const auto out = say(s, "Give me a suggestion");
  EXPECT_EQ(s.engine_state.phase.kind, PhaseKind::awaiting_name);
  EXPECT_EQ(out.bot_messages.back().kind, MessageKind::system);
  EXPECT_FALSE(out.error);
}

TEST(Guided, DefinePatternWorksWhilePrompted) {
  auto s = start(1);
  say(s, "Jane");
  const auto out = say(s, "Your age is 42.");
  EXPECT_EQ(s.character.find("age")->value, "42");
  EXPECT_EQ(out.intent, "DefineAttribute(age=42)");
}

TEST(Guided, TooLongValueIsReported) {
  auto s = start(1);
  const auto out = say(s, std::string(250, 'x'));
  ASSERT_TRUE(out.error);
  EXPECT_EQ(out.error->code, ErrorCode::ValueTooLong);
  EXPECT_FALSE(s.character.contains("name"));
  EXPECT_EQ(s.engine_state.phase.kind, PhaseKind::awaiting_name);
}

TEST(Guided, EmptyTextIsRejectedBeforeAnythingChanges) {
  auto s = start(1);
  const auto before = s;
  EXPECT_EQ(code_of([&] { say(s, "   "); }), ErrorCode::EmptyText);
  EXPECT_EQ(s, before);
}

TEST(Guided, SuggestionSourceDownIsAnErrorTurn) {
  auto registry = offline_runtime().registry;
  Engine engine(registry, std::make_shared<ConceptSuggester>(std::make_shared<DownSource>()),
                offline_runtime().backend);
  auto s = engine.start_session(617, "x", 0).first;
  engine.handle_user_message(s, "Jane");
  const auto out = engine.handle_user_message(s, "Can you give me a suggestion?");
  ASSERT_TRUE(out.error);
  EXPECT_EQ(out.error->code, ErrorCode::SourceUnavailable);
  EXPECT_EQ(s.engine_state.phase.kind, PhaseKind::awaiting_value);
}

TEST(Guided, ExhaustionCongratulates) {
  auto s = start(3);
  // define everything via the explicit pattern
  for (const auto& def : offline_runtime().registry->entries()) {
    say(s, "Your " + def.display_name + " is x" + def.id.str());
  }
  ASSERT_EQ(s.character.size(), 31u);
  EXPECT_EQ(s.engine_state.phase.kind, PhaseKind::greeting);
  EXPECT_NE(s.transcript.back().text.find("all 31"), std::string::npos) << s.transcript.back().text;
  const auto out = say(s, "skip");
  EXPECT_NE(out.bot_messages.back().text.find("Let's chat"), std::string::npos);
}

TEST(Switch, LetsChatChipAppearsOnceAtThirdDefinition) {
  auto s = start(5);
  EXPECT_FALSE(has_chip(say(s, "Jane"), kLetsChat));
  EXPECT_FALSE(has_chip(say(s, "something"), kLetsChat));
  EXPECT_EQ(s.engine_state.guided_defined_count(), 2u);
  const auto third = say(s, "something else entirely");
  EXPECT_EQ(s.engine_state.guided_defined_count(), 3u);
  EXPECT_TRUE(has_chip(third, kLetsChat));
  EXPECT_TRUE(s.engine_state.switch_hint_shown);
  EXPECT_FALSE(has_chip(say(s, "a fourth value"), kLetsChat));
}

TEST(Switch, OpenModeAlwaysOffersWhatElse) {
  auto s = start(5);
  auto out = say(s, "Let's chat");
  EXPECT_EQ(s.engine_state.mode, Mode::open);
  EXPECT_EQ(s.engine_state.phase.kind, PhaseKind::open_idle);
  EXPECT_EQ(out.quick_replies, (std::vector<std::string>{std::string(kWhatElse)}));
  out = say(s, "How are you?");
  EXPECT_TRUE(has_chip(out, kWhatElse));
  out = offline_engine().handle_candidate_choice(s, 0);
  EXPECT_TRUE(has_chip(out, kWhatElse));
  out = say(s, "What else could we describe?");
  EXPECT_EQ(s.engine_state.mode, Mode::guided);
  EXPECT_EQ(out.bot_messages.back().kind, MessageKind::prompt);
}

TEST(Open, ThreeCandidatesAndOnlyTheChosenOneIsKept) {
  auto s = start(4);
  say(s, "Jane");
  say(s, "Let's chat");
  const auto out = say(s, "What is your favourite meal?");
  ASSERT_TRUE(out.candidates);
  ASSERT_EQ(out.candidates->size(), 3u);
  EXPECT_TRUE(out.bot_messages.empty());
  EXPECT_EQ(s.engine_state.phase.kind, PhaseKind::candidates_offered);

  const auto size_before = s.transcript.size();
  const auto chosen = (*out.candidates)[1].text;
  const auto choice = offline_engine().handle_candidate_choice(s, 1);
  ASSERT_EQ(s.transcript.size(), size_before + 1);
  EXPECT_EQ(s.transcript.back().text, chosen);
  EXPECT_EQ(s.transcript.back().author, Author::bot);
  EXPECT_EQ(choice.bot_messages.size(), 1u);
  for (const auto& m : s.transcript) {
    EXPECT_NE(m.text, (*out.candidates)[0].text);
    EXPECT_NE(m.text, (*out.candidates)[2].text);
  }
  EXPECT_EQ(s.engine_state.phase.kind, PhaseKind::open_idle);
  EXPECT_EQ(code_of([&] { offline_engine().handle_candidate_choice(s, 1); }), ErrorCode::NoCandidatesPending);
}

TEST(Open, ChoicePreconditions) {
  auto s = start(4);
  EXPECT_EQ(code_of([&] { offline_engine().handle_candidate_choice(s, 0); }), ErrorCode::NoCandidatesPending);
  say(s, "Let's chat");
  say(s, "Hello?");
  const auto before = s;
  EXPECT_EQ(code_of([&] { offline_engine().handle_candidate_choice(s, 5); }), ErrorCode::IndexOutOfRange);
  EXPECT_EQ(s, before);
}

TEST(Open, NewMessageWithdrawsPendingCandidates) {
  auto s = start(4);
  say(s, "Let's chat");
  say(s, "Hello?");
  say(s, "What else could we describe?");
  EXPECT_EQ(code_of([&] { offline_engine().handle_candidate_choice(s, 0); }), ErrorCode::NoCandidatesPending);
}

TEST(Open, PersonaConditioningFollowsDeletes) {
  auto s = start(4);
  say(s, "Your hair is dark purple");
  say(s, "Let's chat");
  auto out = say(s, "Tell me about your hair");
  EXPECT_EQ((*out.candidates)[0].text, "The color of my hair is dark purple.");
  offline_engine().handle_delete_attribute(s, "hair");
  out = say(s, "Tell me about your hair");
  EXPECT_NE((*out.candidates)[0].text, "The color of my hair is dark purple.");
}

TEST(Open, BackendFailureApologizes) {
  Engine engine(offline_runtime().registry, offline_runtime().suggester, std::make_shared<ThrowingBackend>());
  auto s = engine.start_session(1, "x", 0).first;
  engine.handle_user_message(s, "Let's chat");
  const auto out = engine.handle_user_message(s, "Hello?");
  ASSERT_TRUE(out.error);
  EXPECT_EQ(out.error->code, ErrorCode::BackendUnavailable);
  EXPECT_FALSE(out.candidates);
  EXPECT_EQ(s.engine_state.phase.kind, PhaseKind::open_idle);
  EXPECT_EQ(out.bot_messages.size(), 1u);
}

TEST(Character, DeleteUpdatesGuidedCount) {
  auto s = start(5);
  say(s, "Jane");
  EXPECT_EQ(s.engine_state.guided_defined_count(), 1u);
  auto out = offline_engine().handle_delete_attribute(s, "name");
  ASSERT_TRUE(out.character_delta);
  EXPECT_EQ(out.character_delta->op, CharacterDelta::Op::remove);
  EXPECT_EQ(s.engine_state.guided_defined_count(), 0u);
  out = offline_engine().handle_delete_attribute(s, "name");
  EXPECT_FALSE(out.character_delta);
  EXPECT_EQ(code_of([&] { offline_engine().handle_delete_attribute(s, "Not An Id"); }),
            ErrorCode::InvalidArgument);
}

TEST(Pins, PinAndUnpin) {
  auto s = start(5);
  say(s, "Let's chat");
  say(s, "Do you like music?");
  offline_engine().handle_candidate_choice(s, 0);
  const auto bot_line = s.transcript.back().id;
  auto out = offline_engine().handle_pin(s, bot_line);
  ASSERT_EQ(s.pins.size(), 1u);
  EXPECT_EQ(s.pins[0].message_id, bot_line);
  EXPECT_EQ(out.pin_delta, (PinDelta{PinDelta::Op::pin, bot_line}));
  EXPECT_EQ(code_of([&] { offline_engine().handle_pin(s, 2); }), ErrorCode::NotBotMessage);
  EXPECT_EQ(code_of([&] { offline_engine().handle_pin(s, 999); }), ErrorCode::UnknownMessage);
  out = offline_engine().handle_unpin(s, 0);
  EXPECT_FALSE(out.pin_delta);
  out = offline_engine().handle_unpin(s, bot_line);
  EXPECT_TRUE(s.pins.empty());
}

// Property: the mode/phase invariants hold after every step of random
// action scripts (10,000 steps in total).
TEST(EngineProperty, InvariantsHoldOverRandomScripts) {
  const auto& engine = offline_engine();
  std::size_t steps_run = 0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    auto s = engine.start_session(seed, "p", 0).first;
    ASSERT_EQ(check_engine_invariants(s), std::nullopt);
    for (const auto& step : testing::random_script(seed + 1000, 500)) {
      try {
        switch (step.kind) {
          case ScriptStep::Kind::user: engine.handle_user_message(s, step.text); break;
          case ScriptStep::Kind::choose: engine.handle_candidate_choice(s, step.number); break;
          case ScriptStep::Kind::remove: engine.handle_delete_attribute(s, step.text); break;
          case ScriptStep::Kind::pin: engine.handle_pin(s, step.number); break;
        }
      } catch (const Error&) {
      }
      ++steps_run;
      const auto violation = check_engine_invariants(s);
      ASSERT_EQ(violation, std::nullopt) << "seed " << seed << " line " << step.line << ": " << *violation;
    }
  }
  EXPECT_EQ(steps_run, 10000u);
}

// Property: "Let's chat" is offered exactly once, on the turn where the
// guided count first reaches three.
TEST(EngineProperty, SwitchHintThreshold) {
  const auto& engine = offline_engine();
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    auto s = engine.start_session(seed, "p", 0).first;
    int shown = 0;
    bool reached = false;
    for (const auto& step : testing::random_script(seed, 150)) {
      if (step.kind != ScriptStep::Kind::user) continue;
      const auto before = s.engine_state.guided_defined_count();
      const auto out = engine.handle_user_message(s, step.text);
      const bool first_reach = !reached && before < 3 && s.engine_state.guided_defined_count() >= 3;
      reached = reached || first_reach;
      if (has_chip(out, kLetsChat)) {
        ++shown;
        EXPECT_TRUE(first_reach) << "seed " << seed;
      } else {
        EXPECT_FALSE(first_reach) << "seed " << seed;
      }
    }
    EXPECT_EQ(shown, reached ? 1 : 0) << "seed " << seed;
  }
}

TEST(EngineProperty, DeterministicAcrossRuns) {
  const auto steps = testing::random_script(77, 300);
  const auto a = replay(offline_engine(), steps, 77);
  const auto b = replay(offline_engine(), steps, 77);
  EXPECT_EQ(replay_to_string(a), replay_to_string(b));
  const auto c = replay(offline_engine(), steps, 78);
  EXPECT_NE(session_to_string(a.session), session_to_string(c.session));
}

}  // namespace
}  // namespace botshaper
