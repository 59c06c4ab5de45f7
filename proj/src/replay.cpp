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

#include "botshaper/replay.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "botshaper/text.hpp"

namespace botshaper {

namespace {

[[noreturn]] void script_error(std::size_t line, const std::string& what) {
  throw Error(ErrorCode::ScriptParseError, "line " + std::to_string(line) + ": " + what);
}

std::string read_file(const std::filesystem::path& path, ErrorCode code) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(code, "cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Json error_json(ErrorCode code, std::string_view message) {
  Json j;
  j["error_code"] = to_string(code);
  j["message"] = message;
  return j;
}

std::vector<std::string_view> split_lines(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t pos = 0;
  while (pos < s.size()) {
    auto nl = s.find('\n', pos);
    if (nl == std::string_view::npos) nl = s.size();
    out.push_back(s.substr(pos, nl - pos));
    pos = nl + 1;
  }
  return out;
}

}  // namespace

std::string_view to_string(ScriptStep::Kind kind) noexcept {
  switch (kind) {
    case ScriptStep::Kind::user: return "user";
    case ScriptStep::Kind::choose: return "choose";
    case ScriptStep::Kind::remove: return "delete";
    case ScriptStep::Kind::pin: return "pin";
  }
  return "?";
}

std::vector<ScriptStep> parse_script(std::string_view source) {
  std::vector<ScriptStep> steps;
  std::size_t line_no = 0;
  for (auto raw : split_lines(source)) {
    ++line_no;
    if (!raw.empty() && raw.back() == '\r') raw.remove_suffix(1);
    const auto line = text::trim(raw);
    if (line.empty() || line.front() == '#') continue;
    if (line.size() < 2 || line[1] != ' ') script_error(line_no, "expected '<U|C|D|P> <argument>'");
    const auto arg = text::trim(line.substr(2));
    if (arg.empty()) script_error(line_no, "missing argument");
    ScriptStep step;
    step.line = line_no;
    switch (line[0]) {
      case 'U':
        step.kind = ScriptStep::Kind::user;
        step.text = std::string(arg);
        break;
      case 'C':
      case 'P':
        step.kind = line[0] == 'C' ? ScriptStep::Kind::choose : ScriptStep::Kind::pin;
        if (!text::parse_u64(arg, step.number)) script_error(line_no, "expected a number, got '" + std::string(arg) + "'");
        break;
      case 'D':
        step.kind = ScriptStep::Kind::remove;
        step.text = std::string(arg);
        if (!AttributeId::is_valid(step.text)) script_error(line_no, "malformed attribute '" + step.text + "'");
        break;
      default:
        script_error(line_no, std::string("unknown action '") + line[0] + "'");
    }
    steps.push_back(std::move(step));
  }
  return steps;
}

std::vector<ScriptStep> parse_script_file(const std::filesystem::path& path) {
  return parse_script(read_file(path, ErrorCode::ScriptParseError));
}

ReplayResult replay(const Engine& engine, const std::vector<ScriptStep>& steps, std::uint64_t seed) {
  auto [session, opening] = engine.start_session(seed, std::string(kReplaySessionId), 0);

  auto events = Json::array();
  events.push_back(Json{{"line", 0}, {"action", "start"}, {"turn", to_json(opening)}});

  for (const auto& step : steps) {
    Json event;
    event["line"] = step.line;
    event["action"] = to_string(step.kind);
    if (step.kind == ScriptStep::Kind::user || step.kind == ScriptStep::Kind::remove) {
      event["input"] = step.text;
    } else {
      event["input"] = step.number;
    }
    try {
      TurnOutput turn;
      switch (step.kind) {
        case ScriptStep::Kind::user: turn = engine.handle_user_message(session, step.text); break;
        case ScriptStep::Kind::choose: turn = engine.handle_candidate_choice(session, step.number); break;
        case ScriptStep::Kind::remove: turn = engine.handle_delete_attribute(session, step.text); break;
        case ScriptStep::Kind::pin: turn = engine.handle_pin(session, step.number); break;
      }
      event["turn"] = to_json(turn);
    } catch (const Error& e) {
      event["error"] = error_json(e.code(), e.what());
    }
    events.push_back(std::move(event));
  }

  ReplayResult result;
  result.document["seed"] = seed;
  result.document["events"] = std::move(events);
  result.document["session"] = session_to_json(session);
  result.session = std::move(session);
  return result;
}

std::string replay_to_string(const ReplayResult& result) { return result.document.dump(2) + "\n"; }

std::optional<Divergence> first_divergence(std::string_view expected, std::string_view actual) {
  const auto a = split_lines(expected);
  const auto b = split_lines(actual);
  const auto n = std::max(a.size(), b.size());
  for (std::size_t i = 0; i < n; ++i) {
    const auto* x = i < a.size() ? &a[i] : nullptr;
    const auto* y = i < b.size() ? &b[i] : nullptr;
    if (x && y && *x == *y) continue;
    return Divergence{i + 1, x ? std::string(*x) : "<end of file>", y ? std::string(*y) : "<end of file>"};
  }
  // Same lines; differ only in a trailing newline.
  if (expected != actual) return Divergence{n + 1, "", ""};
  return std::nullopt;
}

std::string format_divergence(const Divergence& d) {
  return "line " + std::to_string(d.line) + ":\n- " + d.expected + "\n+ " + d.actual + "\n";
}

LengthStats compute_stats(std::vector<SessionLength> sessions) {
  if (sessions.empty()) throw Error(ErrorCode::NoSessions, "no sessions to summarize");
  LengthStats stats;
  double sum = 0.0;
  for (const auto& s : sessions) sum += static_cast<double>(s.lines);
  const auto n = static_cast<double>(sessions.size());
  stats.mean = sum / n;
  double sq = 0.0;
  for (const auto& s : sessions) {
    const double d = static_cast<double>(s.lines) - stats.mean;
    sq += d * d;
  }
  stats.sd = std::sqrt(sq / n);
  stats.sessions = std::move(sessions);
  return stats;
}

std::vector<SessionLength> collect_lengths(const std::filesystem::path& dir) {
  std::error_code ec;
  if (!std::filesystem::is_directory(dir, ec)) {
    throw Error(ErrorCode::StoreUnavailable, "not a directory: " + dir.string());
  }
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir, ec)) {
    if (entry.is_regular_file() && entry.path().extension() == ".json") files.push_back(entry.path());
  }
  if (ec) throw Error(ErrorCode::StoreUnavailable, "cannot list " + dir.string() + ": " + ec.message());
  std::sort(files.begin(), files.end());

  std::vector<SessionLength> out;
  for (const auto& path : files) {
    nlohmann::json doc;
    try {
      doc = nlohmann::json::parse(read_file(path, ErrorCode::StoreUnavailable));
    } catch (const nlohmann::json::exception&) {
      continue;
    }
    if (!doc.is_object()) continue;
    if (doc.contains("session") && doc["session"].is_object()) doc = doc["session"];
    const auto it = doc.find("transcript");
    if (it == doc.end() || !it->is_array()) continue;
    std::string name = path.stem().string();
    if (doc.contains("session_id") && doc["session_id"].is_string()) name = doc["session_id"].get<std::string>();
    out.push_back({name, it->size()});
  }
  if (out.empty()) throw Error(ErrorCode::NoSessions, "no session documents in " + dir.string());
  return out;
}

Json stats_to_json(const LengthStats& stats) {
  auto sessions = Json::array();
  for (const auto& s : stats.sessions) sessions.push_back(Json{{"session", s.name}, {"lines", s.lines}});
  Json j;
  j["sessions"] = std::move(sessions);
  j["count"] = stats.sessions.size();
  j["mean"] = stats.mean;
  j["sd"] = stats.sd;
  return j;
}

std::string stats_to_text(const LengthStats& stats) {
  std::string out;
  char buf[64];
  for (const auto& s : stats.sessions) out += s.name + "\t" + std::to_string(s.lines) + "\n";
  std::snprintf(buf, sizeof buf, "%.2f", stats.mean);
  out += "sessions: " + std::to_string(stats.sessions.size()) + "\nmean: " + buf;
  std::snprintf(buf, sizeof buf, "%.2f", stats.sd);
  out += "\nsd: " + std::string(buf) + "\n";
  return out;
}

}  // namespace botshaper
