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

#pragma once

#include <cstddef>
#include <cstdint>

namespace botshaper {

/// SplitMix64. The exact sequence is part of the replay format: golden
/// transcripts depend on it, so the constants must never change.
class SeededRng {
 public:
  constexpr explicit SeededRng(std::uint64_t state = 0) noexcept : state_(state) {}

  constexpr std::uint64_t next() noexcept {
    state_ += 0x9E3779B97F4A7C15ULL;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  /// next() mod n; n must be positive.
  constexpr std::size_t index(std::size_t n) noexcept {
    return static_cast<std::size_t>(next() % n);
  }

  constexpr std::uint64_t state() const noexcept { return state_; }

  friend constexpr bool operator==(const SeededRng&, const SeededRng&) = default;

 private:
  std::uint64_t state_;
};

}  // namespace botshaper
