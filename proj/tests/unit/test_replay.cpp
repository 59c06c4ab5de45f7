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

#include <cmath>
#include <fstream>
#include <functional>

#include <json.hpp>

#include "botshaper/replay.hpp"
#include "botshaper/store.hpp"
#include "fixtures.hpp"

namespace botshaper {
namespace {

using testing::data_path;
using testing::golden_path;
using testing::offline_engine;
using testing::read_text;
using testing::TempDir;

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorCode::InvalidArgument;
}

// A session whose transcript has exactly `lines` messages.
Session session_with_lines(const std::string& id, std::size_t lines) {
  auto s = offline_engine().start_session(1, id, 0).first;
  while (s.transcript.size() < lines) {
    s.transcript.push_back({s.transcript.size(), Author::bot, "line", Mode::guided, MessageKind::system});
  }
  s.transcript.resize(lines);
  return s;
}

TEST(Script, Parses) {
  const auto steps = parse_script("# header\n\nU Your name is Jane.\nC 1\r\nD hair\n  P 12  \n");
  ASSERT_EQ(steps.size(), 4u);
  EXPECT_EQ(steps[0].kind, ScriptStep::Kind::user);
  EXPECT_EQ(steps[0].text, "Your name is Jane.");
  EXPECT_EQ(steps[0].line, 3u);
  EXPECT_EQ(steps[1].number, 1u);
  EXPECT_EQ(steps[2].text, "hair");
  EXPECT_EQ(steps[3].kind, ScriptStep::Kind::pin);
  EXPECT_EQ(steps[3].number, 12u);
}

TEST(Script, ParseErrorsNameTheLine) {
  for (const auto* bad : {"U hi\nX what\n", "U hi\nC one\n", "U hi\nD Hair\n", "U hi\nU\n", "U hi\nUhi\n"}) {
    try {
      parse_script(bad);
      FAIL() << bad;
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::ScriptParseError);
      EXPECT_NE(std::string(e.what()).find("line 2"), std::string::npos) << e.what();
    }
  }
}

TEST(Replay, Fig2aEndsWithAcceptedZombie) {
  const auto result = replay(offline_engine(), parse_script_file(data_path("scripts/fig2a.script")), 617);
  const auto* fear = result.session.character.find("biggest_fear");
  ASSERT_TRUE(fear);
  EXPECT_EQ(fear->value, "zombie");
  EXPECT_EQ(fear->source, ValueSource::suggestion_accepted);
  EXPECT_EQ(replay_to_string(result), read_text(golden_path("fig2a.json")));
}

TEST(Replay, Fig2bOffersThreeAndKeepsTheSecond) {
  const auto result = replay(offline_engine(), parse_script_file(data_path("scripts/fig2b.script")), 4);
  const auto& events = result.document["events"];
  const Json* offer = nullptr;
  const Json* choice = nullptr;
  for (const auto& e : events) {
    if (e["action"] == "user" && e["turn"]["candidates"].is_array()) offer = &e;
    if (e["action"] == "choose") choice = &e;
  }
  ASSERT_TRUE(offer && choice);
  ASSERT_EQ((*offer)["turn"]["candidates"].size(), 3u);
  EXPECT_EQ((*choice)["input"], 1);
  const auto chosen = (*offer)["turn"]["candidates"][1]["text"].get<std::string>();
  EXPECT_EQ(chosen, "My favourite meal is pizza.");
  std::size_t hits = 0;
  for (const auto& m : result.session.transcript) {
    hits += m.text == chosen;
    EXPECT_NE(m.text, (*offer)["turn"]["candidates"][0]["text"].get<std::string>());
    EXPECT_NE(m.text, (*offer)["turn"]["candidates"][2]["text"].get<std::string>());
  }
  EXPECT_EQ(hits, 1u);
  EXPECT_EQ(replay_to_string(result), read_text(golden_path("fig2b.json")));
}

TEST(Replay, ErrorsAreRecordedAndReplayContinues) {
  const auto result = replay(offline_engine(), parse_script("C 0\nP 500\nU Jane\n"), 1);
  const auto& events = result.document["events"];
  ASSERT_EQ(events.size(), 4u);
  EXPECT_EQ(events[0]["action"], "start");
  EXPECT_EQ(events[1]["error"]["error_code"], "NoCandidatesPending");
  EXPECT_EQ(events[2]["error"]["error_code"], "UnknownMessage");
  EXPECT_TRUE(events[3].contains("turn"));
  EXPECT_EQ(result.session.character.find("name")->value, "Jane");
}

TEST(Replay, SameScriptAndSeedSameBytes) {
  const auto steps = parse_script_file(data_path("scripts/fig2b.script"));
  EXPECT_EQ(replay_to_string(replay(offline_engine(), steps, 11)),
            replay_to_string(replay(offline_engine(), steps, 11)));
}

TEST(Divergence, FindsFirstDifferingLine) {
  EXPECT_FALSE(first_divergence("a\nb\n", "a\nb\n"));
  const auto d = first_divergence("a\nb\nc\n", "a\nx\nc\n");
  ASSERT_TRUE(d);
  EXPECT_EQ(d->line, 2u);
  EXPECT_EQ(d->expected, "b");
  EXPECT_EQ(d->actual, "x");
  EXPECT_EQ(format_divergence(*d), "line 2:\n- b\n+ x\n");
  const auto shorter = first_divergence("a\nb\n", "a\n");
  ASSERT_TRUE(shorter);
  EXPECT_EQ(shorter->actual, "<end of file>");
  EXPECT_TRUE(first_divergence("a", "a\n"));
}

TEST(Stats, MeanAndPopulationSd) {
  auto s = compute_stats({{"a", 60}, {"b", 68}});
  EXPECT_DOUBLE_EQ(s.mean, 64.0);
  EXPECT_DOUBLE_EQ(s.sd, 4.0);
  s = compute_stats({{"only", 64}});
  EXPECT_DOUBLE_EQ(s.mean, 64.0);
  EXPECT_DOUBLE_EQ(s.sd, 0.0);
  s = compute_stats({{"a", 2}, {"b", 4}, {"c", 4}, {"d", 4}, {"e", 5}, {"f", 5}, {"g", 7}, {"h", 9}});
  EXPECT_DOUBLE_EQ(s.mean, 5.0);
  EXPECT_DOUBLE_EQ(s.sd, 2.0);
  EXPECT_EQ(code_of([] { compute_stats({}); }), ErrorCode::NoSessions);
}

TEST(Stats, ReadsSessionStoresAndReplayOutputs) {
  TempDir dir;
  SessionStore store(dir.path());
  store.save(session_with_lines("first", 60));
  store.save(session_with_lines("second", 68));
  const auto lengths = collect_lengths(dir.path());
  EXPECT_EQ(lengths, (std::vector<SessionLength>{{"first", 60}, {"second", 68}}));
  const auto stats = compute_stats(lengths);
  const auto j = stats_to_json(stats);
  EXPECT_EQ(j["mean"], 64.0);
  EXPECT_EQ(j["sd"], 4.0);
  EXPECT_EQ(j["count"], 2);
  EXPECT_NE(stats_to_text(stats).find("mean: 64.00\nsd: 4.00"), std::string::npos);

  TempDir replays;
  const auto result = replay(offline_engine(), parse_script_file(data_path("scripts/fig2a.script")), 617);
  std::ofstream(replays.path() / "fig2a.json") << replay_to_string(result);
  const auto from_replay = collect_lengths(replays.path());
  ASSERT_EQ(from_replay.size(), 1u);
  EXPECT_EQ(from_replay[0].lines, result.session.transcript.size());
}

TEST(Stats, EmptyOrMissingDirectory) {
  TempDir dir;
  EXPECT_EQ(code_of([&] { collect_lengths(dir.path()); }), ErrorCode::NoSessions);
  std::ofstream(dir.path() / "notes.json") << R"({"hello": 1})";
  EXPECT_EQ(code_of([&] { collect_lengths(dir.path()); }), ErrorCode::NoSessions);
  EXPECT_EQ(code_of([&] { collect_lengths(dir.path() / "nope"); }), ErrorCode::StoreUnavailable);
}

}  // namespace
}  // namespace botshaper
