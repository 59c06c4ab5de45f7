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

#include "botshaper/registry.hpp"

#include <algorithm>
#include <array>
#include <fstream>
#include <set>
#include <sstream>

#include "botshaper/error.hpp"
#include "botshaper/text.hpp"

namespace botshaper {

namespace {

constexpr std::string_view kPlaceholder = "{value}";
constexpr std::string_view kVersionTag = "# version:";

[[noreturn]] void parse_fail(std::size_t line, const std::string& what) {
  throw Error(ErrorCode::ParseError, "line " + std::to_string(line) + ": " + what);
}

[[noreturn]] void invalid(const std::string& what) {
  throw Error(ErrorCode::ValidationError, what);
}

}  // namespace

std::string_view to_string(Category c) noexcept {
  switch (c) {
    case Category::physiology: return "physiology";
    case Category::psychology: return "psychology";
    case Category::sociology: return "sociology";
  }
  return "?";
}

std::optional<Category> category_from(std::string_view s) noexcept {
  if (s == "physiology") return Category::physiology;
  if (s == "psychology") return Category::psychology;
  if (s == "sociology") return Category::sociology;
  return std::nullopt;
}

std::vector<std::string> AttributeDefinition::phrases() const {
  std::vector<std::string> out;
  auto add = [&](std::string p) {
    p = std::string(text::trim(text::to_lower(p)));
    if (!p.empty() && std::find(out.begin(), out.end(), p) == out.end()) out.push_back(std::move(p));
  };
  add(display_name);
  add(text::replace_all(id.str(), "_", " "));
  for (const auto& s : synonyms) add(s);
  return out;
}

std::string AttributeDefinition::render(std::string_view value) const {
  return text::replace_all(persona_template, kPlaceholder, value);
}

AttributeRegistry::AttributeRegistry(std::vector<AttributeDefinition> entries, std::string version)
    : entries_(std::move(entries)), version_(std::move(version)) {}

const AttributeDefinition* AttributeRegistry::find(std::string_view id) const noexcept {
  for (const auto& e : entries_) {
    if (e.id.str() == id) return &e;
  }
  return nullptr;
}

const AttributeDefinition& AttributeRegistry::at(std::string_view id) const {
  if (const auto* e = find(id)) return *e;
  throw Error(ErrorCode::UnknownAttribute, "unknown attribute '" + std::string(id) + "'");
}

AttributeRegistry load_registry(std::string_view source, RegistryLoadOptions options) {
  std::vector<AttributeDefinition> entries;
  std::string version;
  std::set<std::string> seen;

  std::istringstream in{std::string(source)};
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    if (!raw.empty() && raw.back() == '\r') raw.pop_back();
    const auto trimmed = text::trim(raw);
    if (trimmed.empty()) continue;
    if (trimmed.front() == '#') {
      if (trimmed.starts_with(kVersionTag)) {
        version = std::string(text::trim(trimmed.substr(kVersionTag.size())));
      }
      continue;
    }

    auto fields = text::split(raw, '\t');
    if (fields.size() != 7 && fields.size() != 8) {
      parse_fail(line_no, "expected 7 or 8 tab-separated fields, got " +
                              std::to_string(fields.size()));
    }
    for (auto& f : fields) f = std::string(text::trim(f));

    AttributeDefinition def;
    if (!AttributeId::is_valid(fields[0])) parse_fail(line_no, "malformed id '" + fields[0] + "'");
    def.id = AttributeId(fields[0]);
    const auto category = category_from(fields[1]);
    if (!category) parse_fail(line_no, "unknown category '" + fields[1] + "'");
    def.category = *category;
    def.display_name = fields[2];
    def.prompt = fields[3];
    def.explanation = fields[4];
    def.persona_template = fields[5];
    if (fields[6] != "-" && !fields[6].empty()) def.concept_node = fields[6];
    if (fields.size() == 8 && fields[7] != "-") {
      for (const auto& s : text::split(fields[7], ',')) {
        const auto syn = text::trim(s);
        if (!syn.empty()) def.synonyms.push_back(text::to_lower(syn));
      }
    }

    const std::string where = "line " + std::to_string(line_no) + ": ";
    if (def.display_name.empty()) invalid(where + "empty display name");
    if (def.explanation.empty()) invalid(where + "empty explanation for '" + fields[0] + "'");
    if (def.prompt.empty() || def.prompt.back() != '?') {
      invalid(where + "prompt for '" + fields[0] + "' must end with '?'");
    }
    if (text::count_occurrences(def.persona_template, kPlaceholder) != 1) {
      invalid(where + "persona template for '" + fields[0] + "' needs exactly one {value}");
    }
    if (!seen.insert(fields[0]).second) invalid(where + "duplicate id '" + fields[0] + "'");
    entries.push_back(std::move(def));
  }

  if (options.strict) {
    if (entries.size() != kRegistrySize) {
      invalid("expected " + std::to_string(kRegistrySize) + " attributes, found " +
              std::to_string(entries.size()));
    }
    for (auto c : {Category::physiology, Category::psychology, Category::sociology}) {
      const bool present = std::any_of(entries.begin(), entries.end(),
                                       [c](const AttributeDefinition& d) { return d.category == c; });
      if (!present) invalid("category '" + std::string(to_string(c)) + "' has no attributes");
    }
  }
  return AttributeRegistry(std::move(entries), std::move(version));
}

AttributeRegistry load_registry_file(const std::filesystem::path& path, RegistryLoadOptions options) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::ParseError, "cannot read registry file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return load_registry(buf.str(), options);
}

const AttributeDefinition& draw_undefined(const AttributeRegistry& registry,
                                          const Character& character, SeededRng& rng,
                                          std::string_view exclude) {
  std::vector<const AttributeDefinition*> undefined;
  for (const auto& e : registry.entries()) {
    if (!character.contains(e.id.str())) undefined.push_back(&e);
  }
  if (undefined.empty()) {
    throw Error(ErrorCode::NoneRemaining, "every attribute is already defined");
  }
  if (!exclude.empty() && undefined.size() > 1) {
    std::erase_if(undefined, [&](const AttributeDefinition* d) { return d->id.str() == exclude; });
  }
  return *undefined[rng.index(undefined.size())];
}

const std::string& explanation_for(const AttributeRegistry& registry, std::string_view id) {
  return registry.at(id).explanation;
}

}  // namespace botshaper
