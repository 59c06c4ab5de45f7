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

#include "botshaper/codec.hpp"

#include <cctype>
#include <cstdio>
#include <ctime>

#include "botshaper/error.hpp"

namespace botshaper {

namespace {

[[noreturn]] void corrupt(const std::string& what) {
  throw Error(ErrorCode::CorruptDocument, "corrupt session document: " + what);
}

template <typename E>
E enum_field(const nlohmann::json& j, const char* key, std::optional<E> (*from)(std::string_view)) {
  const auto s = j.at(key).get<std::string>();
  const auto v = from(s);
  if (!v) corrupt(std::string("bad ") + key + " '" + s + "'");
  return *v;
}

Json phase_to_json(const Phase& p) {
  Json j;
  j["kind"] = to_string(p.kind);
  switch (p.kind) {
    case PhaseKind::awaiting_name:
    case PhaseKind::awaiting_value:
      j["attribute"] = p.attribute;
      break;
    case PhaseKind::suggestion_offered:
      j["attribute"] = p.attribute;
      j["candidate"] = p.candidate;
      break;
    case PhaseKind::candidates_offered: {
      auto arr = Json::array();
      for (const auto& c : p.candidates) arr.push_back(c.text);
      j["candidates"] = std::move(arr);
      break;
    }
    default:
      break;
  }
  return j;
}

Phase phase_from_json(const nlohmann::json& j) {
  Phase p;
  p.kind = enum_field<PhaseKind>(j, "kind", &phase_kind_from);
  switch (p.kind) {
    case PhaseKind::awaiting_name:
    case PhaseKind::awaiting_value:
      p.attribute = j.at("attribute").get<std::string>();
      break;
    case PhaseKind::suggestion_offered:
      p.attribute = j.at("attribute").get<std::string>();
      p.candidate = j.at("candidate").get<std::string>();
      break;
    case PhaseKind::candidates_offered: {
      const auto texts = j.at("candidates").get<std::vector<std::string>>();
      for (std::size_t i = 0; i < texts.size(); ++i) p.candidates.push_back({texts[i], i});
      if (p.candidates.empty()) corrupt("candidates_offered without candidates");
      break;
    }
    default:
      break;
  }
  return p;
}

Json delta_to_json(const CharacterDelta& d) {
  Json j;
  j["op"] = d.op == CharacterDelta::Op::set ? "set" : "delete";
  j["attribute"] = d.attribute;
  if (d.op == CharacterDelta::Op::set) {
    j["value"] = d.value;
    j["source"] = to_string(d.source);
  }
  return j;
}

}  // namespace

std::string format_rfc3339(std::int64_t unix_seconds) {
  const std::time_t t = static_cast<std::time_t>(unix_seconds);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::optional<std::int64_t> parse_rfc3339(std::string_view s) {
  const std::string str(s);
  int y, mo, d, h, mi, sec, consumed = 0;
  if (std::sscanf(str.c_str(), "%4d-%2d-%2dT%2d:%2d:%2d%n", &y, &mo, &d, &h, &mi, &sec, &consumed) != 6 ||
      consumed != 19) {
    return std::nullopt;
  }
  std::size_t pos = 19;
  if (pos < str.size() && str[pos] == '.') {
    ++pos;
    while (pos < str.size() && std::isdigit(static_cast<unsigned char>(str[pos]))) ++pos;
  }
  long offset = 0;
  if (pos < str.size() && (str[pos] == 'Z' || str[pos] == 'z')) {
    ++pos;
  } else if (pos + 6 == str.size() && (str[pos] == '+' || str[pos] == '-') && str[pos + 3] == ':') {
    int oh = 0, om = 0;
    if (std::sscanf(str.c_str() + pos + 1, "%2d:%2d", &oh, &om) != 2) return std::nullopt;
    offset = (str[pos] == '+' ? 1 : -1) * (oh * 3600L + om * 60L);
    pos += 6;
  } else {
    return std::nullopt;
  }
  if (pos != str.size()) return std::nullopt;
  if (mo < 1 || mo > 12 || d < 1 || d > 31 || h > 23 || mi > 59 || sec > 60) return std::nullopt;
  std::tm tm{};
  tm.tm_year = y - 1900;
  tm.tm_mon = mo - 1;
  tm.tm_mday = d;
  tm.tm_hour = h;
  tm.tm_min = mi;
  tm.tm_sec = sec;
  return static_cast<std::int64_t>(timegm(&tm)) - offset;
}

Json to_json(const ChatMessage& m) {
  Json j;
  j["id"] = m.id;
  j["author"] = to_string(m.author);
  j["text"] = m.text;
  j["mode"] = to_string(m.mode);
  j["kind"] = to_string(m.kind);
  return j;
}

Json to_json(const Character& c) {
  Json j;
  auto attrs = Json::array();
  for (const auto& a : c.attributes()) {
    Json e;
    e["attribute"] = a.attribute.str();
    e["value"] = a.value;
    e["source"] = to_string(a.source);
    e["defined_at"] = a.defined_at;
    attrs.push_back(std::move(e));
  }
  j["attributes"] = std::move(attrs);
  auto rejected = Json::object();
  for (const auto& [id, values] : c.rejected_values()) {
    rejected[id] = std::vector<std::string>(values.begin(), values.end());
  }
  j["rejected_values"] = std::move(rejected);
  return j;
}

Json pins_to_json(const std::vector<PinnedStatement>& pins) {
  auto arr = Json::array();
  for (const auto& p : pins) {
    Json e;
    e["message_id"] = p.message_id;
    e["pinned_at"] = p.pinned_at;
    arr.push_back(std::move(e));
  }
  return arr;
}

Json to_json(const EngineState& s) {
  Json j;
  j["mode"] = to_string(s.mode);
  j["phase"] = phase_to_json(s.phase);
  j["guided_defined_count"] = s.guided_defined_count();
  j["guided_defined"] = s.guided_defined;
  j["switch_hint_shown"] = s.switch_hint_shown;
  j["turn"] = s.turn;
  j["rng_state"] = s.rng_state;
  j["suggestion_streak"] = s.suggestion_streak;
  return j;
}

Json to_json(const TurnOutput& t) {
  Json j;
  j["user_message"] = t.user_message ? to_json(*t.user_message) : Json(nullptr);
  auto bots = Json::array();
  for (const auto& m : t.bot_messages) bots.push_back(to_json(m));
  j["bot_messages"] = std::move(bots);
  j["quick_replies"] = t.quick_replies;
  if (t.candidates) {
    auto arr = Json::array();
    for (const auto& c : *t.candidates) arr.push_back(Json{{"index", c.index}, {"text", c.text}});
    j["candidates"] = std::move(arr);
  } else {
    j["candidates"] = nullptr;
  }
  j["character_delta"] = t.character_delta ? delta_to_json(*t.character_delta) : Json(nullptr);
  if (t.pin_delta) {
    j["pin_delta"] = Json{{"op", t.pin_delta->op == PinDelta::Op::pin ? "pin" : "unpin"},
                          {"message_id", t.pin_delta->message_id}};
  } else {
    j["pin_delta"] = nullptr;
  }
  j["intent"] = t.intent ? Json(*t.intent) : Json(nullptr);
  if (t.error) {
    j["error"] = Json{{"error_code", to_string(t.error->code)}, {"message", t.error->message}};
  } else {
    j["error"] = nullptr;
  }
  return j;
}

Json to_json(const AttributeDefinition& d) {
  Json j;
  j["id"] = d.id.str();
  j["display_name"] = d.display_name;
  j["category"] = to_string(d.category);
  j["prompt"] = d.prompt;
  j["suggestible"] = d.suggestible();
  return j;
}

Json session_to_json(const Session& s) {
  Json j;
  j["schema_version"] = kSchemaVersion;
  j["session_id"] = s.session_id;
  j["seed"] = s.seed;
  j["created_at"] = format_rfc3339(s.created_at);
  j["engine_state"] = to_json(s.engine_state);
  j["character"] = to_json(s.character);
  auto transcript = Json::array();
  for (const auto& m : s.transcript) transcript.push_back(to_json(m));
  j["transcript"] = std::move(transcript);
  j["pins"] = pins_to_json(s.pins);
  return j;
}

std::string session_to_string(const Session& s) { return session_to_json(s).dump(2) + "\n"; }

Session session_from_json(const nlohmann::json& doc) {
  if (!doc.is_object()) corrupt("not an object");
  if (!doc.contains("schema_version") || !doc.at("schema_version").is_number_integer()) {
    corrupt("missing schema_version");
  }
  const auto version = doc.at("schema_version").get<long long>();
  if (version != kSchemaVersion) {
    throw Error(ErrorCode::VersionMismatch,
                "session schema version " + std::to_string(version) + " is not supported");
  }

  Session s;
  try {
    s.session_id = doc.at("session_id").get<std::string>();
    s.seed = doc.at("seed").get<std::uint64_t>();
    const auto created = parse_rfc3339(doc.at("created_at").get<std::string>());
    if (!created) corrupt("bad created_at");
    s.created_at = *created;

    const auto& es = doc.at("engine_state");
    auto& state = s.engine_state;
    state.mode = enum_field<Mode>(es, "mode", &mode_from);
    state.phase = phase_from_json(es.at("phase"));
    state.guided_defined = es.at("guided_defined").get<std::vector<std::string>>();
    if (es.at("guided_defined_count").get<std::size_t>() != state.guided_defined.size()) {
      corrupt("guided_defined_count disagrees with guided_defined");
    }
    state.switch_hint_shown = es.at("switch_hint_shown").get<bool>();
    state.turn = es.at("turn").get<std::uint64_t>();
    state.rng_state = es.at("rng_state").get<std::uint64_t>();
    state.suggestion_streak = es.at("suggestion_streak").get<std::uint32_t>();

    const auto& ch = doc.at("character");
    std::uint64_t last_turn = 0;
    for (const auto& a : ch.at("attributes")) {
      const auto id = a.at("attribute").get<std::string>();
      if (!AttributeId::is_valid(id)) corrupt("bad attribute id '" + id + "'");
      if (s.character.contains(id)) corrupt("attribute '" + id + "' appears twice");
      AttributeValue v{AttributeId(id), a.at("value").get<std::string>(),
                       enum_field<ValueSource>(a, "source", &value_source_from),
                       a.at("defined_at").get<std::uint64_t>()};
      if (v.value.empty()) corrupt("empty value for '" + id + "'");
      if (!s.character.empty() && v.defined_at <= last_turn) corrupt("defined_at not increasing");
      last_turn = v.defined_at;
      s.character.put(std::move(v));
    }
    for (const auto& [id, values] : ch.at("rejected_values").items()) {
      for (const auto& v : values) {
        const auto text = v.get<std::string>();
        if (const auto* cur = s.character.find(id); cur && cur->value == text) {
          corrupt("current value of '" + id + "' listed as rejected");
        }
        s.character.reject(id, text);
      }
    }

    for (const auto& m : doc.at("transcript")) {
      ChatMessage msg{m.at("id").get<std::uint64_t>(),
                      enum_field<Author>(m, "author", &author_from), m.at("text").get<std::string>(),
                      enum_field<Mode>(m, "mode", &mode_from),
                      enum_field<MessageKind>(m, "kind", &message_kind_from)};
      if (msg.id != s.transcript.size()) corrupt("transcript ids are not dense");
      if (msg.text.empty()) corrupt("empty message text");
      s.transcript.push_back(std::move(msg));
    }
    for (const auto& p : doc.at("pins")) {
      PinnedStatement pin{p.at("message_id").get<std::uint64_t>(), p.at("pinned_at").get<std::uint64_t>()};
      const auto* m = s.find_message(pin.message_id);
      if (!m || m->author != Author::bot) corrupt("pin does not reference a bot message");
      for (const auto& existing : s.pins) {
        if (existing.message_id == pin.message_id) corrupt("duplicate pin");
      }
      s.pins.push_back(pin);
    }
  } catch (const nlohmann::json::exception& e) {
    corrupt(e.what());
  }
  return s;
}

Session session_from_string(std::string_view text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    corrupt(e.what());
  }
  return session_from_json(doc);
}

}  // namespace botshaper
