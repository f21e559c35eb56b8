//
// Copyright 2026 The Unicloak Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//

#include "unicloak/unicode_tables.h"

#include <algorithm>
#include <charconv>
#include <cstdint>
#include <set>
#include <utility>
#include <vector>

#include "unicloak/utf8.h"

namespace unicloak {
namespace {

std::string_view Trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

bool IsControl(char32_t c) {
  return c < 0x20 || (c >= 0x7F && c <= 0x9F) || c == kRightToLeftOverride ||
         c == kPopDirectionalFormatting || c == kZeroWidthNonJoiner;
}

char32_t ParseCodePoint(std::string_view field, size_t line) {
  field = Trim(field);
  if (field.empty()) throw TableParseError(line, "empty code point field");
  if (field.find_first_of(" \t") != std::string_view::npos) {
    throw TableParseError(line, "expected a single code point, got '" +
                                    std::string(field) + "'");
  }
  uint32_t value = 0;
  const auto [ptr, ec] =
      std::from_chars(field.data(), field.data() + field.size(), value, 16);
  if (ec != std::errc() || ptr != field.data() + field.size() ||
      field.size() > 6) {
    throw TableParseError(line,
                          "malformed hex field '" + std::string(field) + "'");
  }
  const char32_t c = value;
  if (c > 0x10FFFF || (c >= 0xD800 && c <= 0xDFFF)) {
    throw TableParseError(line, "not a Unicode scalar value: " +
                                    std::string(field));
  }
  if (IsControl(c)) {
    throw TableParseError(line, "control character " + CodePointLabel(c) +
                                    " cannot be a homoglyph");
  }
  return c;
}

// Union-find keyed by code point, representative = smallest member.
class ClassBuilder {
 public:
  char32_t Find(char32_t c) {
    auto it = parent_.try_emplace(c, c).first;
    if (it->second == c) return c;
    const char32_t root = Find(it->second);
    parent_[c] = root;
    return root;
  }

  void Union(char32_t a, char32_t b) {
    const char32_t ra = Find(a);
    const char32_t rb = Find(b);
    if (ra == rb) return;
    if (ra < rb) {
      parent_[rb] = ra;
    } else {
      parent_[ra] = rb;
    }
  }

  std::vector<char32_t> Members() const {
    std::vector<char32_t> out;
    out.reserve(parent_.size());
    for (const auto& [c, p] : parent_) out.push_back(c);
    return out;
  }

 private:
  std::unordered_map<char32_t, char32_t> parent_;
};

}  // namespace

TableParseError::TableParseError(size_t line, const std::string& what)
    : std::runtime_error("line " + std::to_string(line) + ": " + what),
      line_(line) {}

std::string_view CodepointClassName(CodepointClass cls) {
  switch (cls) {
    case CodepointClass::kBidiOverride:
      return "BidiOverride";
    case CodepointClass::kBidiPop:
      return "BidiPop";
    case CodepointClass::kZeroWidthNonJoiner:
      return "ZeroWidthNonJoiner";
    case CodepointClass::kBackspace:
      return "Backspace";
    case CodepointClass::kConfusable:
      return "Confusable";
    case CodepointClass::kPlain:
      return "Plain";
  }
  return "Plain";
}

HomoglyphTable HomoglyphTable::Parse(std::string_view data) {
  HomoglyphTable table;
  ClassBuilder classes;
  std::set<std::pair<char32_t, char32_t>> seen;

  size_t line_no = 0;
  size_t pos = 0;
  while (pos < data.size()) {
    auto end = data.find('\n', pos);
    if (end == std::string_view::npos) end = data.size();
    std::string_view line = data.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;

    const auto hash = line.find('#');
    if (hash != std::string_view::npos) {
      const std::string_view comment = Trim(line.substr(hash + 1));
      constexpr std::string_view kVersionTag = "Version:";
      if (comment.starts_with(kVersionTag) && table.source_version_.empty()) {
        table.source_version_ =
            std::string(Trim(comment.substr(kVersionTag.size())));
      }
      line = line.substr(0, hash);
    }
    line = Trim(line);
    if (line.empty()) continue;

    const auto semi = line.find(';');
    if (semi == std::string_view::npos) {
      throw TableParseError(line_no, "expected 'XXXX ; YYYY'");
    }
    std::string_view rest = line.substr(semi + 1);
    if (const auto semi2 = rest.find(';'); semi2 != std::string_view::npos) {
      rest = rest.substr(0, semi2);
    }
    const char32_t canonical = ParseCodePoint(line.substr(0, semi), line_no);
    const char32_t substitute = ParseCodePoint(rest, line_no);

    if (canonical == substitute) {
      throw TableParseError(line_no, "identity mapping for " +
                                         CodePointLabel(canonical));
    }
    if (seen.contains({substitute, canonical})) {
      throw TableParseError(
          line_no, "conflicting mapping: " + CodePointLabel(canonical) +
                       " and " + CodePointLabel(substitute) +
                       " already listed in the opposite direction");
    }
    ++table.entry_count_;
    if (!seen.insert({canonical, substitute}).second) continue;

    classes.Union(canonical, substitute);
    auto [it, inserted] = table.forward_.try_emplace(canonical, substitute);
    if (!inserted) it->second = std::min(it->second, substitute);
  }

  for (char32_t c : classes.Members()) {
    table.skeleton_.emplace(c, classes.Find(c));
  }
  return table;
}

std::optional<char32_t> HomoglyphTable::HomoglyphFor(char32_t c) const {
  const auto it = forward_.find(c);
  if (it == forward_.end()) return std::nullopt;
  return it->second;
}

char32_t HomoglyphTable::Skeleton(char32_t c) const {
  const auto it = skeleton_.find(c);
  return it == skeleton_.end() ? c : it->second;
}

std::u32string HomoglyphTable::Skeleton(std::u32string_view text) const {
  std::u32string out(text);
  for (char32_t& c : out) c = Skeleton(c);
  return out;
}

const HomoglyphTable& DefaultHomoglyphTable() {
  static const HomoglyphTable table =
      HomoglyphTable::Parse(VendoredIntentionalData());
  return table;
}

CodepointClass Classify(char32_t c, const HomoglyphTable& table) {
  switch (c) {
    case kRightToLeftOverride:
      return CodepointClass::kBidiOverride;
    case kPopDirectionalFormatting:
      return CodepointClass::kBidiPop;
    case kZeroWidthNonJoiner:
      return CodepointClass::kZeroWidthNonJoiner;
    case kBackspace:
      return CodepointClass::kBackspace;
    default:
      break;
  }
  return table.IsConfusable(c) ? CodepointClass::kConfusable
                               : CodepointClass::kPlain;
}

}  // namespace unicloak
