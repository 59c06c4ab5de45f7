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

#include "botshaper/service.hpp"

#include <chrono>
#include <random>

#include <httplib.h>

#include "botshaper/text.hpp"

namespace botshaper {

namespace {

void send_json(httplib::Response& res, int status, const Json& body) {
  res.status = status;
  res.set_content(body.dump(), "application/json");
}

void send_error(httplib::Response& res, ErrorCode code, const std::string& message) {
  send_json(res, http_status_for(code), error_body(code, message));
}

// Parses a JSON object body; an empty body counts as {}.
std::optional<nlohmann::json> parse_body(const httplib::Request& req, httplib::Response& res) {
  if (text::trim(req.body).empty()) return nlohmann::json::object();
  try {
    auto j = nlohmann::json::parse(req.body);
    if (j.is_object()) return j;
  } catch (const nlohmann::json::exception&) {
  }
  send_json(res, 400, error_body(ErrorCode::InvalidArgument, "body must be a JSON object"));
  return std::nullopt;
}

std::mt19937_64& random_engine() {
  thread_local std::mt19937_64 gen{std::random_device{}()};
  return gen;
}

}  // namespace

int http_status_for(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::NotFound: return 404;
    case ErrorCode::NoCandidatesPending: return 409;
    case ErrorCode::InvalidArgument:
    case ErrorCode::EmptyText:
    case ErrorCode::EmptyValue:
    case ErrorCode::ValueTooLong:
    case ErrorCode::IndexOutOfRange:
    case ErrorCode::NotBotMessage:
    case ErrorCode::UnknownMessage:
    case ErrorCode::UnknownAttribute:
      return 422;
    case ErrorCode::BackendUnavailable:
    case ErrorCode::SourceUnavailable:
      return 502;
    default:
      return 500;
  }
}

Json error_body(ErrorCode code, const std::string& message) {
  Json j;
  j["error_code"] = to_string(code);
  j["message"] = message;
  return j;
}

Json state_summary(const Session& session) {
  const auto& state = session.engine_state;
  Json j;
  j["mode"] = to_string(state.mode);
  j["phase"] = to_string(state.phase.kind);
  j["guided_defined_count"] = state.guided_defined_count();
  j["switch_hint_shown"] = state.switch_hint_shown;
  j["message_count"] = session.transcript.size();
  j["character"] = to_json(session.character);
  return j;
}

ApiService::ApiService(std::shared_ptr<const Engine> engine, SessionStore store, Options options)
    : engine_(std::move(engine)), store_(std::move(store)), options_(std::move(options)) {
  if (!options_.clock) {
    options_.clock = [] {
      return std::chrono::duration_cast<std::chrono::seconds>(
                 std::chrono::system_clock::now().time_since_epoch())
          .count();
    };
  }
  if (!options_.seed_generator) options_.seed_generator = [] { return random_engine()(); };
}

std::shared_ptr<std::mutex> ApiService::session_mutex(const std::string& id) {
  std::lock_guard lock(locks_mutex_);
  auto& m = locks_[id];
  if (!m) m = std::make_shared<std::mutex>();
  return m;
}

std::string ApiService::new_session_id() {
  if (options_.id_generator) return options_.id_generator();
  static constexpr char kHex[] = "0123456789abcdef";
  std::string id(16, '0');
  auto bits = random_engine()();
  for (auto& c : id) {
    c = kHex[bits & 0xF];
    bits >>= 4;
  }
  return id;
}

void ApiService::attach(httplib::Server& server) {
  const auto origin = options_.cors_origin;
  server.set_default_headers({{"Access-Control-Allow-Origin", origin},
                              {"Access-Control-Allow-Methods", "GET, POST, DELETE, OPTIONS"},
                              {"Access-Control-Allow-Headers", "Content-Type"}});
  server.Options(R"(/api/.*)", [](const httplib::Request&, httplib::Response& res) { res.status = 204; });

  server.set_exception_handler([](const httplib::Request&, httplib::Response& res, std::exception_ptr ep) {
    try {
      std::rethrow_exception(ep);
    } catch (const Error& e) {
      send_error(res, e.code(), e.what());
    } catch (const std::exception& e) {
      send_json(res, 500, error_body(ErrorCode::InvalidArgument, e.what()));
    }
  });

  // Runs `step` on the stored session under its lock and saves the result.
  auto mutate = [this](const std::string& id, httplib::Response& res, auto&& step) {
    auto m = session_mutex(id);
    std::lock_guard lock(*m);
    auto session = store_.load(id);
    Json body = step(session);
    store_.save(session);
    send_json(res, 200, body);
  };

  server.Get("/api/attributes", [this](const httplib::Request&, httplib::Response& res) {
    auto arr = Json::array();
    for (const auto& def : engine_->registry().entries()) arr.push_back(to_json(def));
    send_json(res, 200, arr);
  });

  server.Get("/api/sessions", [this](const httplib::Request&, httplib::Response& res) {
    auto arr = Json::array();
    for (const auto& s : store_.list()) {
      arr.push_back(Json{{"session_id", s.session_id},
                         {"character_name", s.character_name},
                         {"created_at", format_rfc3339(s.created_at)},
                         {"message_count", s.message_count}});
    }
    send_json(res, 200, arr);
  });

  server.Post("/api/sessions", [this](const httplib::Request& req, httplib::Response& res) {
    const auto body = parse_body(req, res);
    if (!body) return;
    std::uint64_t seed = 0;
    if (body->contains("seed") && !body->at("seed").is_null()) {
      if (!body->at("seed").is_number_unsigned()) {
        return send_error(res, ErrorCode::InvalidArgument, "seed must be a non-negative integer");
      }
      seed = body->at("seed").get<std::uint64_t>();
    } else {
      seed = options_.seed_generator();
    }
    std::string id;
    {
      std::lock_guard lock(create_mutex_);
      do {
        id = new_session_id();
      } while (store_.exists(id));
      auto [session, opening] = engine_->start_session(seed, id, options_.clock());
      store_.save(session);
      send_json(res, 201, Json{{"session_id", id}, {"opening", to_json(opening)}});
    }
  });

  server.Get(R"(/api/sessions/([^/]+))", [this](const httplib::Request& req, httplib::Response& res) {
    send_json(res, 200, session_to_json(store_.load(req.matches[1].str())));
  });

  server.Post(R"(/api/sessions/([^/]+)/messages)",
              [this, mutate](const httplib::Request& req, httplib::Response& res) {
                const auto id = req.matches[1].str();
                if (!store_.exists(id)) return send_error(res, ErrorCode::NotFound, "no session '" + id + "'");
                const auto body = parse_body(req, res);
                if (!body) return;
                const auto it = body->find("text");
                if (it == body->end() || !it->is_string() || text::trim(it->get<std::string>()).empty()) {
                  return send_error(res, ErrorCode::EmptyText, "text must be a non-empty string");
                }
                const auto text = it->get<std::string>();
                mutate(id, res, [&](Session& s) {
                  auto turn = engine_->handle_user_message(s, text);
                  return Json{{"turn", to_json(turn)}, {"state_summary", state_summary(s)}};
                });
              });

  server.Post(R"(/api/sessions/([^/]+)/candidates/([^/]+))",
              [this, mutate](const httplib::Request& req, httplib::Response& res) {
                const auto id = req.matches[1].str();
                if (!store_.exists(id)) return send_error(res, ErrorCode::NotFound, "no session '" + id + "'");
                std::uint64_t index = 0;
                if (!text::parse_u64(req.matches[2].str(), index)) {
                  return send_error(res, ErrorCode::IndexOutOfRange, "candidate index must be a number");
                }
                mutate(id, res, [&](Session& s) {
                  auto turn = engine_->handle_candidate_choice(s, index);
                  return Json{{"turn", to_json(turn)}, {"state_summary", state_summary(s)}};
                });
              });

  server.Delete(R"(/api/sessions/([^/]+)/attributes/([^/]+))",
                [this, mutate](const httplib::Request& req, httplib::Response& res) {
                  const auto id = req.matches[1].str();
                  if (!store_.exists(id)) return send_error(res, ErrorCode::NotFound, "no session '" + id + "'");
                  const auto attr = req.matches[2].str();
                  if (!AttributeId::is_valid(attr)) {
                    return send_error(res, ErrorCode::InvalidArgument, "malformed attribute '" + attr + "'");
                  }
                  mutate(id, res, [&](Session& s) {
                    auto turn = engine_->handle_delete_attribute(s, attr);
                    return Json{{"character", to_json(s.character)}, {"turn", to_json(turn)}};
                  });
                });

  server.Post(R"(/api/sessions/([^/]+)/pins)", [this, mutate](const httplib::Request& req, httplib::Response& res) {
    const auto id = req.matches[1].str();
    if (!store_.exists(id)) return send_error(res, ErrorCode::NotFound, "no session '" + id + "'");
    const auto body = parse_body(req, res);
    if (!body) return;
    const auto it = body->find("message_id");
    if (it == body->end() || !it->is_number_unsigned()) {
      return send_error(res, ErrorCode::InvalidArgument, "message_id must be a non-negative integer");
    }
    const auto message_id = it->get<std::uint64_t>();
    mutate(id, res, [&](Session& s) {
      auto turn = engine_->handle_pin(s, message_id);
      return Json{{"pins", pins_to_json(s.pins)}, {"turn", to_json(turn)}};
    });
  });

  server.Delete(R"(/api/sessions/([^/]+)/pins/([^/]+))",
                [this, mutate](const httplib::Request& req, httplib::Response& res) {
                  const auto id = req.matches[1].str();
                  if (!store_.exists(id)) return send_error(res, ErrorCode::NotFound, "no session '" + id + "'");
                  std::uint64_t message_id = 0;
                  if (!text::parse_u64(req.matches[2].str(), message_id)) {
                    return send_error(res, ErrorCode::InvalidArgument, "message id must be a number");
                  }
                  mutate(id, res, [&](Session& s) {
                    auto turn = engine_->handle_unpin(s, message_id);
                    return Json{{"pins", pins_to_json(s.pins)}, {"turn", to_json(turn)}};
                  });
                });
}

}  // namespace botshaper
