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

#include "botshaper/intent.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <initializer_list>
#include <sstream>

#include "botshaper/error.hpp"
#include "botshaper/text.hpp"

namespace botshaper {

namespace {

using Phrase = std::vector<std::string>;

Phrase words(std::string_view s) { return normalize(s); }

std::vector<Phrase> lexicon(std::initializer_list<std::string_view> entries) {
  std::vector<Phrase> out;
  for (auto e : entries) out.push_back(words(e));
  return out;
}

const std::vector<Phrase>& switch_to_open() {
  static const auto k = lexicon({"let's chat", "lets chat", "let us chat", "let's talk", "lets talk",
                                 "let's just chat", "let's chat now", "chat mode", "open mode"});
  return k;
}
const std::vector<Phrase>& switch_to_guided() {
  static const auto k = lexicon({"what else could we describe", "what else can we describe",
                                 "what else should we describe", "let's describe", "lets describe",
                                 "back to describing", "guided mode", "describe mode"});
  return k;
}
const std::vector<Phrase>& accept_words() {
  static const auto k = lexicon({"yes", "ok", "okay", "sure", "accept", "i like it", "take it"});
  return k;
}
const std::vector<Phrase>& reject_words() {
  static const auto k = lexicon({"no", "nope", "something else", "next suggestion"});
  return k;
}
const std::vector<Phrase>& suggestion_words() {
  static const auto k = lexicon({"suggest", "suggestion", "suggestions", "idea", "ideas"});
  return k;
}
const std::vector<Phrase>& explanation_words() {
  static const auto k = lexicon({"explain", "explanation", "meaning", "what does that mean"});
  return k;
}
const std::vector<Phrase>& skip_words() {
  static const auto k = lexicon({"skip", "next", "pass"});
  return k;
}
const std::vector<Phrase>& greeting_words() {
  static const auto k = lexicon({"hi", "hello", "hey", "hiya", "howdy", "greetings", "yo",
                                 "good morning", "good afternoon", "good evening"});
  return k;
}

// "hi", "hello there": a greeting and nothing else, so never a value.
bool is_bare_greeting(const Phrase& tokens) {
  static const std::vector<std::string> filler = {"there", "again", "bot", "friend", "everyone"};
  for (const auto& g : greeting_words()) {
    if (tokens.size() < g.size() || !std::equal(g.begin(), g.end(), tokens.begin())) continue;
    const bool rest_is_filler = std::all_of(tokens.begin() + static_cast<std::ptrdiff_t>(g.size()), tokens.end(),
                                            [](const std::string& t) {
                                              return std::find(filler.begin(), filler.end(), t) != filler.end();
                                            });
    if (rest_is_filler) return true;
  }
  return false;
}

bool equals_any(const Phrase& tokens, const std::vector<Phrase>& lex) {
  return std::find(lex.begin(), lex.end(), tokens) != lex.end();
}

bool starts_with(const Phrase& tokens, const Phrase& prefix) {
  return tokens.size() >= prefix.size() && std::equal(prefix.begin(), prefix.end(), tokens.begin());
}

bool leads_with_any(const Phrase& tokens, const std::vector<Phrase>& lex) {
  return std::any_of(lex.begin(), lex.end(), [&](const Phrase& p) { return starts_with(tokens, p); });
}

bool contains_any(const Phrase& tokens, const std::vector<Phrase>& lex) {
  return std::any_of(lex.begin(), lex.end(), [&](const Phrase& p) { return contains_phrase(tokens, p); });
}

// Single words must lead; phrases may appear anywhere.
bool matches_answer(const Phrase& tokens, const std::vector<Phrase>& lex) {
  return std::any_of(lex.begin(), lex.end(), [&](const Phrase& p) {
    return p.size() == 1 ? starts_with(tokens, p) : contains_phrase(tokens, p);
  });
}

std::string clean_value(std::string_view s) {
  s = text::trim(s);
  while (!s.empty() && (s.back() == '.' || s.back() == '!')) s.remove_suffix(1);
  return std::string(text::trim(s));
}

std::optional<Intent> match_define(std::string_view utterance, const std::vector<Token>& tokens,
                                   const AttributeRegistry* registry) {
  if (!registry || tokens.size() < 4 || tokens[0].text != "your") return std::nullopt;
  std::size_t verb = 0;
  for (std::size_t i = 2; i + 1 < tokens.size(); ++i) {
    if (tokens[i].text == "is" || tokens[i].text == "are") {
      verb = i;
      break;
    }
  }
  if (verb == 0) return std::nullopt;

  Phrase subject;
  for (std::size_t i = 1; i < verb; ++i) subject.push_back(tokens[i].text);
  for (const auto& def : registry->entries()) {
    for (const auto& phrase : def.phrases()) {
      if (words(phrase) != subject) continue;
      auto value = clean_value(utterance.substr(tokens[verb + 1].begin));
      if (value.empty()) return std::nullopt;
      return Intent{IntentKind::DefineAttribute, def.id.str(), std::move(value)};
    }
  }
  return std::nullopt;
}

constexpr std::array<std::pair<IntentKind, std::string_view>, 12> kIntentNames{{
    {IntentKind::Greeting, "Greeting"},
    {IntentKind::DefineAttribute, "DefineAttribute"},
    {IntentKind::ProvideValue, "ProvideValue"},
    {IntentKind::RequestSuggestion, "RequestSuggestion"},
    {IntentKind::RequestExplanation, "RequestExplanation"},
    {IntentKind::AcceptSuggestion, "AcceptSuggestion"},
    {IntentKind::RejectSuggestion, "RejectSuggestion"},
    {IntentKind::SkipAttribute, "SkipAttribute"},
    {IntentKind::SwitchToOpen, "SwitchToOpen"},
    {IntentKind::SwitchToGuided, "SwitchToGuided"},
    {IntentKind::OpenUtterance, "OpenUtterance"},
    {IntentKind::Unrecognized, "Unrecognized"},
}};

bool has_payload(IntentKind k) {
  return k == IntentKind::DefineAttribute || k == IntentKind::ProvideValue ||
         k == IntentKind::OpenUtterance || k == IntentKind::Unrecognized;
}

}  // namespace

std::string_view to_string(IntentKind k) noexcept {
  for (const auto& [kind, name] : kIntentNames) {
    if (kind == k) return name;
  }
  return "?";
}

std::optional<IntentKind> intent_kind_from(std::string_view s) noexcept {
  for (const auto& [kind, name] : kIntentNames) {
    if (name == s) return kind;
  }
  return std::nullopt;
}

std::string to_string(const Intent& intent) {
  std::string out(to_string(intent.kind));
  if (intent.kind == IntentKind::DefineAttribute) {
    out += "(" + intent.attribute + "=" + intent.text + ")";
  } else if (has_payload(intent.kind)) {
    out += "(" + intent.text + ")";
  }
  return out;
}

std::optional<Intent> parse_intent(std::string_view s) {
  s = text::trim(s);
  const auto open = s.find('(');
  const auto kind = intent_kind_from(s.substr(0, open));
  if (!kind) return std::nullopt;
  Intent intent{*kind, {}, {}};
  if (open == std::string_view::npos) {
    return has_payload(*kind) ? std::nullopt : std::optional<Intent>(intent);
  }
  if (!has_payload(*kind) || s.back() != ')') return std::nullopt;
  auto payload = s.substr(open + 1, s.size() - open - 2);
  if (*kind == IntentKind::DefineAttribute) {
    const auto eq = payload.find('=');
    if (eq == std::string_view::npos) return std::nullopt;
    intent.attribute = std::string(payload.substr(0, eq));
    payload = payload.substr(eq + 1);
  }
  intent.text = std::string(payload);
  return intent;
}

std::vector<Token> tokenize(std::string_view utterance) {
  std::vector<Token> out;
  std::string current;
  std::size_t begin = 0;
  auto flush = [&](std::size_t end) {
    // apostrophes only survive inside a word ("let's", not "'hello'")
    std::size_t lead = 0;
    while (lead < current.size() && current[lead] == '\'') ++lead;
    while (current.size() > lead && current.back() == '\'') current.pop_back();
    if (current.size() > lead) out.push_back({current.substr(lead), begin, end});
    current.clear();
  };
  for (std::size_t i = 0; i < utterance.size();) {
    const auto c = static_cast<unsigned char>(utterance[i]);
    // U+2019 RIGHT SINGLE QUOTATION MARK
    if (c == 0xE2 && utterance.substr(i, 3) == "\xE2\x80\x99") {
      if (current.empty()) begin = i;
      current += '\'';
      i += 3;
      continue;
    }
    const bool separator = c < 0x80 && (std::isspace(c) || (std::ispunct(c) && c != '\''));
    if (separator) {
      flush(i);
    } else {
      if (current.empty()) begin = i;
      current += (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : static_cast<char>(c);
    }
    ++i;
  }
  flush(utterance.size());
  return out;
}

std::vector<std::string> normalize(std::string_view utterance) {
  std::vector<std::string> out;
  for (auto& t : tokenize(utterance)) out.push_back(std::move(t.text));
  return out;
}

bool contains_phrase(const std::vector<std::string>& haystack,
                     const std::vector<std::string>& needle) noexcept {
  if (needle.empty() || needle.size() > haystack.size()) return false;
  return std::search(haystack.begin(), haystack.end(), needle.begin(), needle.end()) != haystack.end();
}

Intent recognize(std::string_view utterance, const RecognizerContext& ctx) {
  const auto tokens = tokenize(utterance);
  Phrase norm;
  for (const auto& t : tokens) norm.push_back(t.text);
  const std::string trimmed(text::trim(utterance));

  if (equals_any(norm, switch_to_open())) return {IntentKind::SwitchToOpen, {}, {}};
  if (equals_any(norm, switch_to_guided())) return {IntentKind::SwitchToGuided, {}, {}};

  if (auto define = match_define(utterance, tokens, ctx.registry)) return *define;

  if (ctx.mode == Mode::guided) {
    if (ctx.awaiting == Awaiting::accept_reject) {
      if (matches_answer(norm, reject_words())) return {IntentKind::RejectSuggestion, {}, {}};
      if (matches_answer(norm, accept_words())) return {IntentKind::AcceptSuggestion, {}, {}};
    }
    if (contains_any(norm, explanation_words())) return {IntentKind::RequestExplanation, {}, {}};
    if (contains_any(norm, suggestion_words())) return {IntentKind::RequestSuggestion, {}, {}};
    if (contains_any(norm, skip_words())) return {IntentKind::SkipAttribute, {}, {}};

    if (ctx.awaiting == Awaiting::value_for) {
      if (is_bare_greeting(norm)) return {IntentKind::Greeting, {}, {}};
      auto value = clean_value(utterance);
      if (!value.empty()) return {IntentKind::ProvideValue, {}, std::move(value)};
    }
  }

  if (ctx.mode == Mode::open && !trimmed.empty()) return {IntentKind::OpenUtterance, {}, trimmed};

  if (leads_with_any(norm, greeting_words())) return {IntentKind::Greeting, {}, {}};

  return {IntentKind::Unrecognized, {}, trimmed};
}

std::vector<IntentCase> load_intent_corpus(std::string_view source) {
  std::vector<IntentCase> out;
  std::istringstream in{std::string(source)};
  std::string raw;
  std::size_t line_no = 0;
  auto fail = [&](const std::string& what) -> void {
    throw Error(ErrorCode::ParseError, "line " + std::to_string(line_no) + ": " + what);
  };
  while (std::getline(in, raw)) {
    ++line_no;
    if (!raw.empty() && raw.back() == '\r') raw.pop_back();
    if (text::trim(raw).empty() || text::trim(raw).front() == '#') continue;
    const auto fields = text::split(raw, '\t');
    if (fields.size() != 4) fail("expected 4 tab-separated fields");

    IntentCase c;
    c.line = line_no;
    const auto mode = mode_from(fields[0]);
    if (!mode) fail("unknown mode '" + fields[0] + "'");
    c.context.mode = *mode;
    if (fields[1] == "none") {
      c.context.awaiting = Awaiting::none;
    } else if (fields[1] == "accept_reject") {
      c.context.awaiting = Awaiting::accept_reject;
    } else if (fields[1].starts_with("value_for:")) {
      c.context.awaiting = Awaiting::value_for;
      c.context.attribute = fields[1].substr(10);
    } else {
      fail("unknown awaiting '" + fields[1] + "'");
    }
    c.utterance = fields[2];
    const auto expected = parse_intent(fields[3]);
    if (!expected) fail("malformed intent '" + fields[3] + "'");
    c.expected = *expected;
    out.push_back(std::move(c));
  }
  return out;
}

}  // namespace botshaper
