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

// HTTP API over the engine and the session store.
//
//   POST   /api/sessions                          {seed?}        -> 201 {session_id, opening}
//   GET    /api/sessions                                         -> 200 [summary]
//   GET    /api/sessions/{id}                                    -> 200 session document
//   POST   /api/sessions/{id}/messages            {text}         -> 200 {turn, state_summary}
//   POST   /api/sessions/{id}/candidates/{index}                 -> 200 {turn}
//   DELETE /api/sessions/{id}/attributes/{attr}                  -> 200 {character}
//   POST   /api/sessions/{id}/pins                {message_id}   -> 200 {pins}
//   DELETE /api/sessions/{id}/pins/{message_id}                  -> 200 {pins}
//   GET    /api/attributes                                       -> 200 [attribute]
//
// Errors are {error_code, message}. Mutations on one session are
// serialized; each 2xx response is sent only after the document is saved.

#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <string>

#include "botshaper/codec.hpp"
#include "botshaper/engine.hpp"
#include "botshaper/error.hpp"
#include "botshaper/store.hpp"

namespace httplib {
class Server;
}

namespace botshaper {

int http_status_for(ErrorCode code) noexcept;

Json error_body(ErrorCode code, const std::string& message);

/// {mode, phase, guided_defined_count, switch_hint_shown, message_count, character}
Json state_summary(const Session& session);

class ApiService {
 public:
  struct Options {
    std::string cors_origin = "http://localhost:5173";
    std::function<std::int64_t()> clock;           // unix seconds; system clock when empty
    std::function<std::string()> id_generator;     // random 16 hex digits when empty
    std::function<std::uint64_t()> seed_generator; // random when empty
  };

  ApiService(std::shared_ptr<const Engine> engine, SessionStore store, Options options);

  /// Registers all routes (and CORS handling) on `server`.
  void attach(httplib::Server& server);

  const SessionStore& store() const noexcept { return store_; }

 private:
  std::shared_ptr<std::mutex> session_mutex(const std::string& id);
  std::string new_session_id();

  std::shared_ptr<const Engine> engine_;
  SessionStore store_;
  Options options_;
  std::mutex locks_mutex_;
  std::map<std::string, std::shared_ptr<std::mutex>> locks_;
  std::mutex create_mutex_;
};

}  // namespace botshaper
