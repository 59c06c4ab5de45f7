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

// Deterministic, context-gated intent grammar.
//
// Rules are tried in a fixed order and the first match wins:
//   1. exact mode-switch phrases ("let's chat", "what else could we describe")
//   2. "your <attribute phrase> is|are <value>"
//   3. guided control words (only in guided mode)
//        accept / reject      only while a suggestion is on the table
//        explanation, suggestion, skip
//   4. awaiting a value       -> Greeting for a bare greeting ("hi there"),
//                                otherwise ProvideValue(whole utterance)
//   5. open mode              -> OpenUtterance
//   6. greeting lexicon
//   7. Unrecognized
//
// Lexicons (single words match as tokens, phrases as contiguous tokens;
// accept/reject single words must lead the utterance):
//   accept       yes, ok, okay, sure, accept, "i like it", "take it"
//   reject       no, nope, "something else", "next suggestion"
//   suggestion   suggest, suggestion, suggestions, idea, ideas
//   explanation  explain, explanation, meaning, "what does that mean"
//   skip         skip, next, pass
//   greeting     hi, hello, hey, hiya, howdy, greetings, yo,
//                "good morning", "good afternoon", "good evening"

#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "botshaper/domain.hpp"
#include "botshaper/registry.hpp"

namespace botshaper {

enum class IntentKind {
  Greeting,
  DefineAttribute,
  ProvideValue,
  RequestSuggestion,
  RequestExplanation,
  AcceptSuggestion,
  RejectSuggestion,
  SkipAttribute,
  SwitchToOpen,
  SwitchToGuided,
  OpenUtterance,
  Unrecognized,
};

std::string_view to_string(IntentKind k) noexcept;
std::optional<IntentKind> intent_kind_from(std::string_view s) noexcept;

struct Intent {
  IntentKind kind = IntentKind::Unrecognized;
  std::string attribute;  // DefineAttribute only
  std::string text;       // DefineAttribute, ProvideValue, OpenUtterance, Unrecognized

  friend bool operator==(const Intent&, const Intent&) = default;
};

/// Canonical form used by the intent corpus: `Greeting`, `ProvideValue(zombie)`,
/// `DefineAttribute(name=Jane)`.
std::string to_string(const Intent& intent);
/// Inverse of to_string; std::nullopt when malformed.
std::optional<Intent> parse_intent(std::string_view s);

enum class Awaiting { none, value_for, accept_reject };

struct RecognizerContext {
  Mode mode = Mode::guided;
  Awaiting awaiting = Awaiting::none;
  std::string attribute;  // set when awaiting == value_for
  const AttributeRegistry* registry = nullptr;
};

struct Token {
  std::string text;    // normalized
  std::size_t begin;   // byte span in the original utterance
  std::size_t end;
};

/// Lowercases, treats punctuation other than apostrophes as whitespace,
/// folds U+2019 to an ASCII apostrophe and splits.
std::vector<Token> tokenize(std::string_view utterance);
std::vector<std::string> normalize(std::string_view utterance);

/// True when `needle` occurs as a contiguous run inside `haystack`.
bool contains_phrase(const std::vector<std::string>& haystack,
                     const std::vector<std::string>& needle) noexcept;

Intent recognize(std::string_view utterance, const RecognizerContext& ctx);

/// One labelled line of the intent corpus.
struct IntentCase {
  std::size_t line = 0;
  RecognizerContext context;  // registry left null
  std::string utterance;
  Intent expected;
};

/// Parses the corpus format: `mode \t awaiting \t utterance \t expected`,
/// where awaiting is `none`, `accept_reject` or `value_for:<id>`. Throws
/// ParseError.
std::vector<IntentCase> load_intent_corpus(std::string_view source);

}  // namespace botshaper
