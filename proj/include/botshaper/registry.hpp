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
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "botshaper/domain.hpp"
#include "botshaper/rng.hpp"

namespace botshaper {

enum class Category { physiology, psychology, sociology };

std::string_view to_string(Category c) noexcept;
std::optional<Category> category_from(std::string_view s) noexcept;

inline constexpr std::size_t kRegistrySize = 31;

struct AttributeDefinition {
  AttributeId id;
  std::string display_name;
  Category category = Category::physiology;
  std::string prompt;        // the bot's question, ends with '?'
  std::string explanation;
  std::string persona_template;  // exactly one "{value}"
  std::optional<std::string> concept_node;
  /// Extra lowercase phrases that name this attribute ("hair colour").
  std::vector<std::string> synonyms;

  bool suggestible() const noexcept { return concept_node.has_value(); }

  /// Every phrase that refers to this attribute: the display name, the id
  /// with underscores as spaces, then the synonyms. Lowercased, deduplicated.
  std::vector<std::string> phrases() const;

  /// persona_template with the placeholder filled in.
  std::string render(std::string_view value) const;
};

/// Immutable after load. Entries keep file order.
class AttributeRegistry {
 public:
  AttributeRegistry() = default;
  explicit AttributeRegistry(std::vector<AttributeDefinition> entries, std::string version = {});

  const std::vector<AttributeDefinition>& entries() const noexcept { return entries_; }
  std::size_t size() const noexcept { return entries_.size(); }
  const std::string& version() const noexcept { return version_; }

  const AttributeDefinition* find(std::string_view id) const noexcept;
  /// Throws Error{UnknownAttribute}.
  const AttributeDefinition& at(std::string_view id) const;

 private:
  std::vector<AttributeDefinition> entries_;
  std::string version_;
};

struct RegistryLoadOptions {
  /// Require exactly 31 entries covering all three categories.
  bool strict = true;
};

/// Parses the tab-separated registry format:
///
///   id  category  display_name  prompt  explanation  persona_template  concept_node|-  [synonyms|-]
///
/// `#` lines and blank lines are skipped; a `# version: <tag>` comment sets
/// the version. Synonyms are comma-separated. Throws ParseError (message
/// carries "line N") or ValidationError.
AttributeRegistry load_registry(std::string_view source, RegistryLoadOptions options = {});

/// Reads and parses a registry file. Missing files raise ParseError.
AttributeRegistry load_registry_file(const std::filesystem::path& path,
                                     RegistryLoadOptions options = {});

/// Picks undefined_list[rng.next() mod count], where undefined_list is the
/// registry-order list of entries not in `character`. `exclude` names one
/// attribute to leave out, unless it is the only one left. Throws
/// NoneRemaining without touching the rng.
const AttributeDefinition& draw_undefined(const AttributeRegistry& registry,
                                          const Character& character, SeededRng& rng,
                                          std::string_view exclude = {});

/// Throws UnknownAttribute.
const std::string& explanation_for(const AttributeRegistry& registry, std::string_view id);

}  // namespace botshaper
