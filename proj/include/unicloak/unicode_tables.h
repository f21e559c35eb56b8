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

#ifndef UNICLOAK_UNICODE_TABLES_H_
#define UNICLOAK_UNICODE_TABLES_H_

#include <cstddef>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>

namespace unicloak {

inline constexpr char32_t kRightToLeftOverride = U'\u202E';
inline constexpr char32_t kPopDirectionalFormatting = U'\u202C';
inline constexpr char32_t kZeroWidthNonJoiner = U'\u200C';
inline constexpr char32_t kBackspace = U'\b';

enum class CodepointClass {
  kBidiOverride,
  kBidiPop,
  kZeroWidthNonJoiner,
  kBackspace,
  kConfusable,
  kPlain,
};

inline constexpr CodepointClass kAllCodepointClasses[] = {
    CodepointClass::kBidiOverride,       CodepointClass::kBidiPop,
    CodepointClass::kZeroWidthNonJoiner, CodepointClass::kBackspace,
    CodepointClass::kConfusable,         CodepointClass::kPlain,
};

// Stable names used in JSON output ("BidiOverride", "Backspace", ...).
std::string_view CodepointClassName(CodepointClass cls);

// Thrown when intentional-confusables data cannot be parsed. line() is the
// 1-based line number of the offending record.
class TableParseError : public std::runtime_error {
 public:
  TableParseError(size_t line, const std::string& what);
  size_t line() const { return line_; }

 private:
  size_t line_;
};

// Mapping between intentional homoglyphs. Every data line "X ; Y" puts X
// and Y in one confusable class. The class representative (skeleton target)
// is its lowest code point, and the attack direction maps each first-column
// character to its lowest-code-point second-column partner.
//
// Immutable after construction.
class HomoglyphTable {
 public:
  HomoglyphTable() = default;

  // Parses the UTS #39 intentional.txt layout: "XXXX ; YYYY # comment" or
  // "XXXX ; YYYY ; comment"; '#' comments and blank lines are skipped.
  // A "# Version:" header line, if present, becomes source_version().
  static HomoglyphTable Parse(std::string_view data);

  // Substitute for `c` in the attack direction, if any.
  std::optional<char32_t> HomoglyphFor(char32_t c) const;

  // Canonical representative of c's confusable class; c itself if c is in
  // no class.
  char32_t Skeleton(char32_t c) const;
  std::u32string Skeleton(std::u32string_view text) const;

  // True when c belongs to a class and is not its representative.
  bool IsConfusable(char32_t c) const { return Skeleton(c) != c; }

  const std::map<char32_t, char32_t>& forward() const { return forward_; }
  const std::unordered_map<char32_t, char32_t>& skeleton_map() const {
    return skeleton_;
  }
  // Number of data lines parsed into pairs.
  size_t entry_count() const { return entry_count_; }
  const std::string& source_version() const { return source_version_; }

 private:
  std::map<char32_t, char32_t> forward_;
  std::unordered_map<char32_t, char32_t> skeleton_;
  size_t entry_count_ = 0;
  std::string source_version_;
};

// The vendored intentional.txt snapshot compiled into the library.
std::string_view VendoredIntentionalData();

// Table parsed from the vendored snapshot; built once, thread-safe.
const HomoglyphTable& DefaultHomoglyphTable();

// Total classification of a scalar value. Attack controls take precedence
// over confusable membership.
CodepointClass Classify(char32_t c, const HomoglyphTable& table);
inline CodepointClass Classify(char32_t c) {
  return Classify(c, DefaultHomoglyphTable());
}

}  // namespace unicloak

#endif  // UNICLOAK_UNICODE_TABLES_H_
