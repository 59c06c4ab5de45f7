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

#include "botshaper/error.hpp"

namespace botshaper {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::EmptyValue: return "EmptyValue";
    case ErrorCode::ValueTooLong: return "ValueTooLong";
    case ErrorCode::NotBotMessage: return "NotBotMessage";
    case ErrorCode::UnknownMessage: return "UnknownMessage";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::ValidationError: return "ValidationError";
    case ErrorCode::NoneRemaining: return "NoneRemaining";
    case ErrorCode::UnknownAttribute: return "UnknownAttribute";
    case ErrorCode::SourceUnavailable: return "SourceUnavailable";
    case ErrorCode::NoEdges: return "NoEdges";
    case ErrorCode::NotSuggestible: return "NotSuggestible";
    case ErrorCode::Exhausted: return "Exhausted";
    case ErrorCode::BackendUnavailable: return "BackendUnavailable";
    case ErrorCode::MalformedResponse: return "MalformedResponse";
    case ErrorCode::NoCandidatesPending: return "NoCandidatesPending";
    case ErrorCode::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::EmptyText: return "EmptyText";
    case ErrorCode::StoreUnavailable: return "StoreUnavailable";
    case ErrorCode::NotFound: return "NotFound";
    case ErrorCode::VersionMismatch: return "VersionMismatch";
    case ErrorCode::CorruptDocument: return "CorruptDocument";
    case ErrorCode::ScriptParseError: return "ScriptParseError";
    case ErrorCode::ExpectationMismatch: return "ExpectationMismatch";
    case ErrorCode::NoSessions: return "NoSessions";
  }
  return "Unknown";
}

}  // namespace botshaper
