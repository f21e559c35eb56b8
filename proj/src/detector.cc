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

#include "unicloak/detector.h"

#include <algorithm>

#include "unicloak/utf8.h"

namespace unicloak {
namespace {

std::string NoteFor(char32_t c, CodepointClass cls,
                    const HomoglyphTable& table) {
  switch (cls) {
    case CodepointClass::kBidiOverride:
      return "RIGHT-TO-LEFT OVERRIDE reverses the display order of what "
             "follows";
    case CodepointClass::kBidiPop:
      return "POP DIRECTIONAL FORMATTING ends a directional override";
    case CodepointClass::kZeroWidthNonJoiner:
      return "ZERO WIDTH NON-JOINER renders no glyph";
    case CodepointClass::kBackspace:
      return "BACKSPACE erases the preceding character on display";
    case CodepointClass::kConfusable:
      return "homoglyph of " + CodePointLabel(table.Skeleton(c));
    case CodepointClass::kPlain:
      break;
  }
  return "";
}

// Step 1: override spans. Each open override gets its own buffer; closing
// one reverses it into the enclosing buffer.
std::u32string ResolveOverrides(std::u32string_view text, bool* unbalanced) {
  std::vector<std::u32string> stack(1);
  for (char32_t c : text) {
    if (c == kRightToLeftOverride) {
      stack.emplace_back();
    } else if (c == kPopDirectionalFormatting) {
      if (stack.size() == 1) continue;
      std::u32string inner = std::move(stack.back());
      stack.pop_back();
      stack.back().append(inner.rbegin(), inner.rend());
    } else {
      stack.back().push_back(c);
    }
  }
  if (unbalanced != nullptr) *unbalanced = stack.size() > 1;
  while (stack.size() > 1) {
    std::u32string inner = std::move(stack.back());
    stack.pop_back();
    stack.back().append(inner.rbegin(), inner.rend());
  }
  return std::move(stack.front());
}

}  // namespace

std::string_view VerdictName(Verdict verdict) {
  return verdict == Verdict::kClean ? "CLEAN" : "SUSPICIOUS";
}

ScanReport Scan(std::string_view text, const HomoglyphTable& table) {
  const std::u32string cps = DecodeUtf8(text);
  ScanReport report;
  int open_overrides = 0;
  for (size_t i = 0; i < cps.size(); ++i) {
    const char32_t c = cps[i];
    const CodepointClass cls = Classify(c, table);
    if (cls == CodepointClass::kBidiOverride) ++open_overrides;
    if (cls == CodepointClass::kBidiPop && open_overrides > 0) --open_overrides;
    if (cls == CodepointClass::kPlain) continue;
    report.findings.push_back({i, c, cls, NoteFor(c, cls, table)});
    ++report.counts[static_cast<size_t>(cls)];
  }
  report.unbalanced_bidi = open_overrides > 0;
  report.verdict =
      report.findings.empty() ? Verdict::kClean : Verdict::kSuspicious;
  return report;
}

std::u32string VisualRender(std::u32string_view text,
                            const HomoglyphTable& table,
                            bool* unbalanced_bidi) {
  const std::u32string ordered = ResolveOverrides(text, unbalanced_bidi);

  std::u32string out;
  out.reserve(ordered.size());
  for (char32_t c : ordered) {
    if (c == kBackspace) {
      if (!out.empty()) out.pop_back();
      continue;
    }
    out.push_back(c);
  }
  std::erase(out, kZeroWidthNonJoiner);
  return table.Skeleton(out);
}

std::string VisualRender(std::string_view text, const HomoglyphTable& table,
                         bool* unbalanced_bidi) {
  return EncodeUtf8(VisualRender(DecodeUtf8(text), table, unbalanced_bidi));
}

std::pair<std::string, ScanReport> Sanitize(std::string_view text,
                                            const HomoglyphTable& table) {
  ScanReport report = Scan(text, table);
  return {VisualRender(text, table), std::move(report)};
}

nlohmann::json ScanReportToJson(const ScanReport& report) {
  nlohmann::json findings = nlohmann::json::array();
  for (const DetectionFinding& f : report.findings) {
    findings.push_back({{"index", f.index},
                        {"codepoint", CodePointLabel(f.codepoint)},
                        {"class", CodepointClassName(f.cls)},
                        {"note", f.note}});
  }
  nlohmann::json counts = nlohmann::json::object();
  for (CodepointClass cls : kAllCodepointClasses) {
    if (cls == CodepointClass::kPlain) continue;
    counts[std::string(CodepointClassName(cls))] = report.count(cls);
  }
  return {{"verdict", VerdictName(report.verdict)},
          {"findings", std::move(findings)},
          {"counts", std::move(counts)},
          {"unbalanced_bidi", report.unbalanced_bidi}};
}

}  // namespace unicloak
