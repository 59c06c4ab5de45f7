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

#include "botshaper/dialogue.hpp"

#include <algorithm>

#include <httplib.h>
#include <json.hpp>

#include "botshaper/error.hpp"
#include "botshaper/intent.hpp"
#include "botshaper/text.hpp"

namespace botshaper {

namespace {

constexpr std::array<std::string_view, kGenericReplyCount> kGenericReplies{{
    "That's a good question. Let me think about it.",
    "Hmm, I have never really thought about that.",
    "Why do you ask?",
    "I'd rather not say. Not yet, anyway.",
    "That depends on the day, honestly.",
    "You ask a lot of questions, you know.",
    "I'm not sure. What would you like the answer to be?",
    "Ha! That reminds me of something that happened a long time ago.",
    "I think about that more often than I'd like to admit.",
    "Let's just say it's complicated.",
    "Nobody has ever asked me that before.",
    "I'll tell you, but you have to promise not to laugh.",
    "Maybe. Maybe not.",
    "Some things are better left unknown.",
    "I used to know the answer to that.",
    "You really want to know? Alright.",
    "That is a story for another time.",
    "I have a feeling you already know the answer.",
    "Oh, I could talk about that for hours.",
    "Honestly? I don't care much about that.",
    "Ask me again tomorrow.",
    "That is exactly what my old friend used to ask me.",
    "I try not to think about it too much.",
    "It's funny you should mention that.",
    "Well, that's a little personal, isn't it?",
    "I can't remember, and maybe that's for the best.",
    "Let me tell you a secret: I'm still figuring that out.",
    "You would be surprised.",
    "That's one of my favourite topics!",
    "I suppose you could say yes.",
    "Probably not what you would expect.",
    "Everyone has a different answer to that, and mine is strange.",
}};

struct Topic {
  std::string_view word;
  std::vector<std::string_view> values;
};

const std::vector<Topic>& proposal_topics() {
  static const std::vector<Topic> k{
      {"meal", {"pizza", "lasagna", "sushi", "pancakes", "ramen", "tacos"}},
      {"food", {"pizza", "cabbage soup", "dumplings", "curry", "fried fish"}},
      {"dish", {"pizza", "paella", "goulash", "risotto"}},
      {"drink", {"black coffee", "peppermint tea", "lemonade", "warm milk"}},
      {"colour", {"violet", "deep green", "crimson", "midnight blue"}},
      {"color", {"violet", "deep green", "crimson", "midnight blue"}},
      {"animal", {"the dolphin", "the crow", "the octopus", "the fox"}},
      {"book", {"a battered atlas", "an old book of fairy tales", "a cookbook"}},
      {"movie", {"any horror movie", "an old western", "a silent comedy"}},
      {"film", {"any horror movie", "an old western", "a silent comedy"}},
      {"song", {"an old sea shanty", "a karaoke classic", "a lullaby"}},
      {"music", {"jazz", "opera", "folk music", "heavy metal"}},
      {"place", {"the bottom of the ocean", "the old lighthouse", "the library"}},
      {"season", {"autumn", "winter", "late spring"}},
      {"sport", {"swimming", "fencing", "chess", "rowing"}},
      {"game", {"chess", "hide and seek", "cards"}},
  };
  return k;
}

std::string lower_first(std::string s) {
  if (!s.empty() && s[0] >= 'A' && s[0] <= 'Z') s[0] = static_cast<char>(s[0] - 'A' + 'a');
  return s;
}

std::string joined_tokens(std::string_view s) { return text::join(normalize(s), " "); }

std::vector<std::string> last_user_tokens(const GenerationRequest& req) {
  for (auto it = req.history.rbegin(); it != req.history.rend(); ++it) {
    if (it->role == Author::user) return normalize(it->text);
  }
  return {};
}

void check_status(const httplib::Result& res, std::string& failure, bool& retry) {
  retry = false;
  if (!res) {
    failure = "transport error: " + httplib::to_string(res.error());
    retry = true;
  } else if (res->status >= 500) {
    failure = "status " + std::to_string(res->status);
    retry = true;
  }
}

}  // namespace

const std::array<std::string_view, kGenericReplyCount>& generic_replies() noexcept {
  return kGenericReplies;
}

std::vector<PersonaSentence> build_persona(const Character& character,
                                           const AttributeRegistry& registry) {
  std::vector<PersonaSentence> out;
  out.reserve(character.size());
  for (const auto& a : character.attributes()) {
    const auto& def = registry.at(a.attribute.str());
    out.push_back({a.attribute.str(), def.render(a.value)});
  }
  return out;
}

GenerationRequest make_request(const std::vector<PersonaSentence>& persona,
                               std::vector<HistoryEntry> history, std::size_t n,
                               std::uint64_t seed) {
  GenerationRequest req;
  for (const auto& p : persona) {
    req.persona.push_back(p.text);
    req.persona_attributes.push_back(p.attribute);
  }
  req.history = std::move(history);
  req.n = n;
  req.seed = seed;
  return req;
}

std::vector<GenerationCandidate> generate_candidates(const GenerationRequest& req,
                                                     const DialogueBackend& backend) {
  if (req.n == 0) throw Error(ErrorCode::InvalidArgument, "candidate count must be positive");
  auto out = backend.generate(req);
  if (out.size() != req.n) {
    throw Error(ErrorCode::MalformedResponse, "backend returned " + std::to_string(out.size()) +
                                                  " candidates, expected " + std::to_string(req.n));
  }
  return out;
}

StubBackend::StubBackend(std::shared_ptr<const AttributeRegistry> registry)
    : registry_(std::move(registry)) {}

std::uint64_t StubBackend::request_hash(const GenerationRequest& req) {
  std::string bytes;
  for (const auto& p : req.persona) {
    bytes += joined_tokens(p);
    bytes += '\n';
  }
  bytes += '\x1e';
  for (const auto& h : req.history) {
    bytes += to_string(h.role);
    bytes += ':';
    bytes += joined_tokens(h.text);
    bytes += '\n';
  }
  bytes += '\x1e';
  bytes += std::to_string(req.seed);
  return text::fnv1a64(bytes);
}

std::vector<GenerationCandidate> StubBackend::generate(const GenerationRequest& req) const {
  const auto h = request_hash(req);
  const auto user = last_user_tokens(req);
  std::vector<std::string> slots(req.n);
  std::vector<bool> filled(req.n, false);

  bool fact_hit = false;
  for (std::size_t i = 0; i < req.persona.size() && i < req.persona_attributes.size(); ++i) {
    const auto* def = registry_ ? registry_->find(req.persona_attributes[i]) : nullptr;
    if (!def) continue;
    const auto phrases = def->phrases();
    const bool mentioned = std::any_of(phrases.begin(), phrases.end(), [&](const std::string& p) {
      return contains_phrase(user, normalize(p));
    });
    if (!mentioned) continue;
    slots[0] = req.persona[i];
    filled[0] = true;
    if (req.n > 1) {
      slots[1] = "Well, " + lower_first(req.persona[i]);
      filled[1] = true;
    }
    fact_hit = true;
    break;
  }

  if (!fact_hit) {
    for (std::size_t t = 0; t + 1 < user.size(); ++t) {
      if (user[t] != "favourite" && user[t] != "favorite") continue;
      const auto& topics = proposal_topics();
      auto topic = std::find_if(topics.begin(), topics.end(),
                                [&](const Topic& tp) { return tp.word == user[t + 1]; });
      if (topic == topics.end()) continue;
      const auto& value = topic->values[h % topic->values.size()];
      const auto slot = std::min<std::size_t>(1, req.n - 1);
      slots[slot] = "My favourite " + std::string(topic->word) + " is " + std::string(value) + ".";
      filled[slot] = true;
      break;
    }
  }

  std::size_t k = 0;
  for (std::size_t i = 0; i < req.n; ++i) {
    if (filled[i]) continue;
    slots[i] = std::string(kGenericReplies[(h + k) % kGenericReplyCount]);
    ++k;
  }

  std::vector<GenerationCandidate> out;
  out.reserve(req.n);
  for (std::size_t i = 0; i < req.n; ++i) out.push_back({std::move(slots[i]), i});
  return out;
}

RemoteBackend::RemoteBackend(std::string base_url, std::chrono::milliseconds timeout,
                             std::size_t persona_budget)
    : base_url_(std::move(base_url)), timeout_(timeout), persona_budget_(persona_budget) {
  while (!base_url_.empty() && base_url_.back() == '/') base_url_.pop_back();
}

std::vector<GenerationCandidate> RemoteBackend::generate(const GenerationRequest& req) const {
  const auto body = encode_generate_request(req, persona_budget_);
  std::string failure = "no attempt";
  for (int attempt = 0; attempt < 2; ++attempt) {
    httplib::Client client(base_url_);
    if (!client.is_valid()) {
      throw Error(ErrorCode::BackendUnavailable, "unsupported backend url " + base_url_);
    }
    const auto secs = std::chrono::duration_cast<std::chrono::seconds>(timeout_);
    const auto usecs = std::chrono::duration_cast<std::chrono::microseconds>(timeout_ - secs);
    client.set_connection_timeout(secs.count(), usecs.count());
    client.set_read_timeout(secs.count(), usecs.count());
    client.set_write_timeout(secs.count(), usecs.count());

    auto res = client.Post("/generate", body, "application/json");
    bool retry = false;
    check_status(res, failure, retry);
    if (retry) continue;
    if (res->status != 200) {
      throw Error(ErrorCode::BackendUnavailable,
                  "generation service answered " + std::to_string(res->status));
    }
    return decode_generate_response(res->body, req.n);
  }
  throw Error(ErrorCode::BackendUnavailable, "generation service unreachable (" + failure + ")");
}

std::string encode_generate_request(const GenerationRequest& req, std::size_t persona_budget) {
  nlohmann::ordered_json j;
  const auto drop = req.persona.size() > persona_budget ? req.persona.size() - persona_budget : 0;
  j["persona"] = std::vector<std::string>(req.persona.begin() + static_cast<std::ptrdiff_t>(drop),
                                          req.persona.end());
  auto history = nlohmann::ordered_json::array();
  for (const auto& h : req.history) {
    history.push_back({{"role", to_string(h.role)}, {"text", h.text}});
  }
  j["history"] = std::move(history);
  j["n"] = req.n;
  j["seed"] = req.seed;
  return j.dump();
}

GenerationRequest decode_generate_request(std::string_view body) {
  GenerationRequest req;
  try {
    const auto j = nlohmann::json::parse(body);
    req.persona = j.at("persona").get<std::vector<std::string>>();
    for (const auto& h : j.at("history")) {
      const auto role = author_from(h.at("role").get<std::string>());
      if (!role) throw Error(ErrorCode::MalformedResponse, "unknown history role");
      req.history.push_back({*role, h.at("text").get<std::string>()});
    }
    req.n = j.at("n").get<std::size_t>();
    req.seed = j.at("seed").get<std::uint64_t>();
  } catch (const nlohmann::json::exception& ex) {
    throw Error(ErrorCode::MalformedResponse, std::string("malformed generate request: ") + ex.what());
  }
  return req;
}

std::vector<GenerationCandidate> decode_generate_response(std::string_view body, std::size_t n) {
  std::vector<GenerationCandidate> out;
  try {
    const auto j = nlohmann::json::parse(body);
    const auto& candidates = j.at("candidates");
    if (!candidates.is_array() || candidates.size() != n) {
      throw Error(ErrorCode::MalformedResponse, "expected " + std::to_string(n) + " candidates");
    }
    for (std::size_t i = 0; i < candidates.size(); ++i) {
      auto textv = std::string(text::trim(candidates[i].get<std::string>()));
      if (textv.empty()) throw Error(ErrorCode::MalformedResponse, "empty candidate");
      out.push_back({std::move(textv), i});
    }
  } catch (const nlohmann::json::exception& ex) {
    throw Error(ErrorCode::MalformedResponse, std::string("malformed generate response: ") + ex.what());
  }
  return out;
}

}  // namespace botshaper
