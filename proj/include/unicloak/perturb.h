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

#ifndef UNICLOAK_PERTURB_H_
#define UNICLOAK_PERTURB_H_

#include <array>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "unicloak/unicode_tables.h"

namespace unicloak {

enum class Category { kReorder, kInvisible, kDelete, kHomoglyph };

inline constexpr std::array<Category, 4> kAllCategories = {
    Category::kReorder, Category::kInvisible, Category::kDelete,
    Category::kHomoglyph};

// The five budget levels used throughout the experiment grid.
inline constexpr std::array<double, 5> kCanonicalBudgets = {0.2, 0.4, 0.6,
                                                            0.8, 1.0};

// Lowercase wire name: "reorder", "invisible", "delete", "homoglyph".
std::string_view CategoryName(Category category);
// Column heading used in reports, e.g. "Invisible characters".
std::string_view CategoryTitle(Category category);
// Short heading used in correlation tables, e.g. "Invis.".
std::string_view CategoryAbbreviation(Category category);
// Case-insensitive; accepts the wire names and the upper-case forms.
std::optional<Category> ParseCategory(std::string_view name);

// How the homoglyph budget is counted. kPrefix walks the first n = floor(b*L)
// characters and substitutes those that have a homoglyph. kSubstitutableSubset
// sets n = floor(b * #substitutable) and substitutes the first n
// substitutable characters.
enum class HomoglyphBasis { kPrefix, kSubstitutableSubset };

std::string_view HomoglyphBasisName(HomoglyphBasis basis);
std::optional<HomoglyphBasis> ParseHomoglyphBasis(std::string_view name);

struct PerturbationSpec {
  Category category = Category::kReorder;
  double budget = 0.0;
  HomoglyphBasis homoglyph_basis = HomoglyphBasis::kSubstitutableSubset;
};

struct Injection {
  size_t index = 0;  // code-point offset into perturbed_text
  CodepointClass cls = CodepointClass::kPlain;

  bool operator==(const Injection&) const = default;
};

struct PerturbedSample {
  std::string original_id;
  std::string clean_text;      // UTF-8
  std::string perturbed_text;  // UTF-8
  Category category = Category::kReorder;
  double budget = 0.0;
  size_t count_n = 0;
  std::vector<Injection> injection_positions;
};

// Raised by the reorder attack when the input already carries bidi controls.
class PreperturbedInputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// floor(budget * length). Throws std::domain_error unless budget is in [0, 1].
size_t BudgetCount(size_t length, double budget);

PerturbedSample PerturbReorder(std::string_view clean, double budget);
PerturbedSample PerturbInvisible(std::string_view clean, double budget);
PerturbedSample PerturbDelete(std::string_view clean, double budget);
PerturbedSample PerturbHomoglyph(std::string_view clean, double budget,
                                 const HomoglyphTable& table,
                                 HomoglyphBasis basis);

PerturbedSample Perturb(std::string_view clean, const PerturbationSpec& spec,
                        const HomoglyphTable& table);

// One JSONL record: original_id, category, budget, n, perturbed_code,
// injection_positions. Non-ASCII code points are written as \u escapes so
// control characters survive any text tooling unchanged.
nlohmann::json PerturbedSampleToJson(const PerturbedSample& sample);
std::string PerturbedSampleToJsonLine(const PerturbedSample& sample);

}  // namespace unicloak

#endif  // UNICLOAK_PERTURB_H_
