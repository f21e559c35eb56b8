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

#ifndef UNICLOAK_DETECTOR_H_
#define UNICLOAK_DETECTOR_H_

#include <array>
#include <cstddef>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "json.hpp"
#include "unicloak/unicode_tables.h"

namespace unicloak {

struct DetectionFinding {
  size_t index = 0;  // code-point offset into the scanned text
  char32_t codepoint = 0;
  CodepointClass cls = CodepointClass::kPlain;
  std::string note;
};

enum class Verdict { kClean, kSuspicious };

struct ScanReport {
  std::vector<DetectionFinding> findings;
  // Indexed by CodepointClass; the kPlain slot stays zero.
  std::array<size_t, 6> counts{};
  Verdict verdict = Verdict::kClean;
  // Set when an override is still open at end of text.
  bool unbalanced_bidi = false;

  size_t count(CodepointClass cls) const {
    return counts[static_cast<size_t>(cls)];
  }
};

// Flags every non-Plain code point, in index order.
ScanReport Scan(std::string_view text, const HomoglyphTable& table);

// What a reviewer sees, canonicalized:
//   1. each U+202E...U+202C span is replaced by its reversed interior
//      (innermost first; an override left open is closed at end of text,
//      a stray U+202C is dropped);
//   2. each U+0008 erases the preceding remaining character;
//   3. U+200C is removed;
//   4. every character is mapped to its homoglyph skeleton.
std::u32string VisualRender(std::u32string_view text,
                            const HomoglyphTable& table,
                            bool* unbalanced_bidi = nullptr);
std::string VisualRender(std::string_view text, const HomoglyphTable& table,
                         bool* unbalanced_bidi = nullptr);

// VisualRender output plus the scan of the original text.
std::pair<std::string, ScanReport> Sanitize(std::string_view text,
                                            const HomoglyphTable& table);

std::string_view VerdictName(Verdict verdict);
nlohmann::json ScanReportToJson(const ScanReport& report);

}  // namespace unicloak

#endif  // UNICLOAK_DETECTOR_H_
