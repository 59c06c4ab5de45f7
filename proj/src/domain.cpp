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

#include "botshaper/domain.hpp"

#include <algorithm>
#include <array>
#include <utility>

#include "botshaper/error.hpp"
#include "botshaper/text.hpp"

namespace botshaper {

AttributeId::AttributeId(std::string id) : id_(std::move(id)) {
  if (!is_valid(id_)) {
    throw Error(ErrorCode::InvalidArgument, "malformed attribute id '" + id_ + "'");
  }
}

bool AttributeId::is_valid(std::string_view id) noexcept {
  if (id.empty() || id.front() < 'a' || id.front() > 'z') return false;
  return std::all_of(id.begin(), id.end(), [](char c) {
    return (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '_';
  });
}

const AttributeValue* Character::find(std::string_view id) const noexcept {
  for (const auto& a : attributes_) {
    if (a.attribute.str() == id) return &a;
  }
  return nullptr;
}

const std::set<std::string>& Character::rejected_for(std::string_view id) const {
  static const std::set<std::string> kNone;
  auto it = rejected_.find(std::string(id));
  return it == rejected_.end() ? kNone : it->second;
}

void Character::put(AttributeValue value) {
  const std::string id = value.attribute.str();
  auto it = std::find_if(attributes_.begin(), attributes_.end(),
                         [&](const AttributeValue& a) { return a.attribute.str() == id; });
  if (it != attributes_.end()) {
    if (it->value != value.value) rejected_[id].insert(it->value);
    attributes_.erase(it);
  }
  if (auto r = rejected_.find(id); r != rejected_.end()) {
    r->second.erase(value.value);
    if (r->second.empty()) rejected_.erase(r);
  }
  attributes_.push_back(std::move(value));
}

bool Character::erase(std::string_view id) {
  auto it = std::find_if(attributes_.begin(), attributes_.end(),
                         [&](const AttributeValue& a) { return a.attribute.str() == id; });
  if (it == attributes_.end()) return false;
  attributes_.erase(it);
  return true;
}

void Character::reject(const std::string& id, const std::string& value) {
  if (const auto* current = find(id); current && current->value == value) return;
  rejected_[id].insert(value);
}

const ChatMessage* Session::find_message(std::uint64_t id) const noexcept {
  // ids are dense from 0, so the index is the id whenever the invariant holds
  if (id < transcript.size() && transcript[id].id == id) return &transcript[id];
  for (const auto& m : transcript) {
    if (m.id == id) return &m;
  }
  return nullptr;
}

Character set_attribute(Character character, AttributeValue value) {
  value.value = std::string(text::trim(value.value));
  if (value.value.empty()) {
    throw Error(ErrorCode::EmptyValue, "value for '" + value.attribute.str() + "' is empty");
  }
  if (text::utf8_length(value.value) > kMaxValueLength) {
    throw Error(ErrorCode::ValueTooLong, "value for '" + value.attribute.str() +
                                             "' exceeds 200 characters");
  }
  if (!character.empty() && value.defined_at <= character.attributes().back().defined_at) {
    throw Error(ErrorCode::InvalidArgument, "definition turn must increase");
  }
  character.put(std::move(value));
  return character;
}

Character delete_attribute(Character character, const AttributeId& id) {
  character.erase(id.str());
  return character;
}

void apply_pin(Session& session, std::uint64_t message_id, std::uint64_t pinned_at) {
  const auto* msg = session.find_message(message_id);
  if (!msg) {
    throw Error(ErrorCode::UnknownMessage, "no message " + std::to_string(message_id));
  }
  if (msg->author != Author::bot) {
    throw Error(ErrorCode::NotBotMessage, "only bot messages can be pinned");
  }
  const bool already = std::any_of(session.pins.begin(), session.pins.end(),
                                   [&](const PinnedStatement& p) { return p.message_id == message_id; });
  if (!already) session.pins.push_back({message_id, pinned_at});
}

bool apply_unpin(Session& session, std::uint64_t message_id) {
  return std::erase_if(session.pins,
                       [&](const PinnedStatement& p) { return p.message_id == message_id; }) > 0;
}

Session pin_message(Session session, std::uint64_t message_id, std::uint64_t pinned_at) {
  apply_pin(session, message_id, pinned_at);
  return session;
}

Session unpin_message(Session session, std::uint64_t message_id) {
  apply_unpin(session, message_id);
  return session;
}

namespace {

template <typename E, std::size_t N>
std::optional<E> lookup(const std::array<std::pair<E, std::string_view>, N>& table,
                        std::string_view s) noexcept {
  for (const auto& [e, name] : table) {
    if (name == s) return e;
  }
  return std::nullopt;
}

template <typename E, std::size_t N>
std::string_view name_of(const std::array<std::pair<E, std::string_view>, N>& table, E e) noexcept {
  for (const auto& [v, name] : table) {
    if (v == e) return name;
  }
  return "?";
}

constexpr std::array<std::pair<ValueSource, std::string_view>, 2> kSources{{
    {ValueSource::user_typed, "user_typed"},
    {ValueSource::suggestion_accepted, "suggestion_accepted"},
}};
constexpr std::array<std::pair<Author, std::string_view>, 2> kAuthors{{
    {Author::user, "user"},
    {Author::bot, "bot"},
}};
constexpr std::array<std::pair<Mode, std::string_view>, 2> kModes{{
    {Mode::guided, "guided"},
    {Mode::open, "open"},
}};
constexpr std::array<std::pair<MessageKind, std::string_view>, 5> kKinds{{
    {MessageKind::utterance, "utterance"},
    {MessageKind::prompt, "prompt"},
    {MessageKind::explanation, "explanation"},
    {MessageKind::suggestion, "suggestion"},
    {MessageKind::system, "system"},
}};
constexpr std::array<std::pair<PhaseKind, std::string_view>, 6> kPhases{{
    {PhaseKind::greeting, "greeting"},
    {PhaseKind::awaiting_name, "awaiting_name"},
    {PhaseKind::awaiting_value, "awaiting_value"},
    {PhaseKind::suggestion_offered, "suggestion_offered"},
    {PhaseKind::open_idle, "open_idle"},
    {PhaseKind::candidates_offered, "candidates_offered"},
}};

}  // namespace

std::string_view to_string(ValueSource v) noexcept { return name_of(kSources, v); }
std::string_view to_string(Author v) noexcept { return name_of(kAuthors, v); }
std::string_view to_string(Mode v) noexcept { return name_of(kModes, v); }
std::string_view to_string(MessageKind v) noexcept { return name_of(kKinds, v); }
std::string_view to_string(PhaseKind v) noexcept { return name_of(kPhases, v); }

std::optional<ValueSource> value_source_from(std::string_view s) noexcept { return lookup(kSources, s); }
std::optional<Author> author_from(std::string_view s) noexcept { return lookup(kAuthors, s); }
std::optional<Mode> mode_from(std::string_view s) noexcept { return lookup(kModes, s); }
std::optional<MessageKind> message_kind_from(std::string_view s) noexcept { return lookup(kKinds, s); }
std::optional<PhaseKind> phase_kind_from(std::string_view s) noexcept { return lookup(kPhases, s); }

}  // namespace botshaper
