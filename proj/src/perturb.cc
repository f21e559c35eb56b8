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

#include "unicloak/perturb.h"

#include <algorithm>
#include <cmath>

#include "unicloak/utf8.h"

namespace unicloak {
namespace {

PerturbedSample MakeSample(std::string_view clean, Category category,
                           double budget) {
  PerturbedSample sample;
  sample.clean_text = std::string(clean);
  sample.category = category;
  sample.budget = budget;
  return sample;
}

void CheckBudget(double budget) {
  if (!(budget >= 0.0 && budget <= 1.0)) {
    throw std::domain_error("perturbation budget must lie in [0, 1], got " +
                            std::to_string(budget));
  }
}

}  // namespace

std::string_view CategoryName(Category category) {
  switch (category) {
    case Category::kReorder:
      return "reorder";
    case Category::kInvisible:
      return "invisible";
    case Category::kDelete:
      return "delete";
    case Category::kHomoglyph:
      return "homoglyph";
  }
  return "reorder";
}

std::string_view CategoryTitle(Category category) {
  switch (category) {
    case Category::kReorder:
      return "Reordering";
    case Category::kInvisible:
      return "Invisible characters";
    case Category::kDelete:
      return "Deletions";
    case Category::kHomoglyph:
      return "Homoglyphs";
  }
  return "Reordering";
}

std::string_view CategoryAbbreviation(Category category) {
  switch (category) {
    case Category::kReorder:
      return "Reord.";
    case Category::kInvisible:
      return "Invis.";
    case Category::kDelete:
      return "Del.";
    case Category::kHomoglyph:
      return "Homog.";
  }
  return "Reord.";
}

std::optional<Category> ParseCategory(std::string_view name) {
  const std::string lower = AsciiLowercase(TrimAsciiWhitespace(name));
  for (Category c : kAllCategories) {
    if (lower == CategoryName(c)) return c;
  }
  return std::nullopt;
}

std::string_view HomoglyphBasisName(HomoglyphBasis basis) {
  return basis == HomoglyphBasis::kPrefix ? "prefix" : "subset";
}

std::optional<HomoglyphBasis> ParseHomoglyphBasis(std::string_view name) {
  const std::string lower = AsciiLowercase(TrimAsciiWhitespace(name));
  if (lower == "prefix") return HomoglyphBasis::kPrefix;
  if (lower == "subset" || lower == "substitutable_subset") {
    return HomoglyphBasis::kSubstitutableSubset;
  }
  return std::nullopt;
}

size_t BudgetCount(size_t length, double budget) {
  CheckBudget(budget);
  // Budgets arrive as decimal fractions (0.6 is not exact in binary); the
  // epsilon keeps products such as 0.6 * 5 from flooring to 2.
  const double product = budget * static_cast<double>(length);
  return static_cast<size_t>(std::floor(product + 1e-9));
}

PerturbedSample PerturbReorder(std::string_view clean, double budget) {
  const std::u32string text = DecodeUtf8(clean);
  if (std::any_of(text.begin(), text.end(), [](char32_t c) {
        return c == kRightToLeftOverride || c == kPopDirectionalFormatting;
      })) {
    throw PreperturbedInputError(
        "input already contains bidi override/pop controls");
  }
  PerturbedSample sample = MakeSample(clean, Category::kReorder, budget);
  const size_t n = BudgetCount(text.size(), budget);
  sample.count_n = n;
  if (n == 0) {
    sample.perturbed_text = sample.clean_text;
    return sample;
  }
  std::u32string out;
  out.reserve(text.size() + 2);
  out.push_back(kRightToLeftOverride);
  out.append(text.rbegin() + static_cast<std::ptrdiff_t>(text.size() - n),
             text.rend());
  out.push_back(kPopDirectionalFormatting);
  out.append(text, n);
  sample.injection_positions = {{0, CodepointClass::kBidiOverride},
                                {n + 1, CodepointClass::kBidiPop}};
  sample.perturbed_text = EncodeUtf8(out);
  return sample;
}

PerturbedSample PerturbInvisible(std::string_view clean, double budget) {
  const std::u32string text = DecodeUtf8(clean);
  PerturbedSample sample = MakeSample(clean, Category::kInvisible, budget);
  const size_t n = BudgetCount(text.size(), budget);
  sample.count_n = n;
  std::u32string out;
  out.reserve(text.size() + n);
  for (size_t i = 0; i < text.size(); ++i) {
    out.push_back(text[i]);
    if (i < n) {
      sample.injection_positions.push_back(
          {out.size(), CodepointClass::kZeroWidthNonJoiner});
      out.push_back(kZeroWidthNonJoiner);
    }
  }
  sample.perturbed_text = EncodeUtf8(out);
  return sample;
}

PerturbedSample PerturbDelete(std::string_view clean, double budget) {
  const std::u32string text = DecodeUtf8(clean);
  PerturbedSample sample = MakeSample(clean, Category::kDelete, budget);
  const size_t n = BudgetCount(text.size(), budget);
  sample.count_n = n;
  std::u32string out;
  out.reserve(text.size() + 2 * n);
  for (size_t i = 0; i < text.size(); ++i) {
    if (i < n) {
      out.push_back(U'a');
      sample.injection_positions.push_back(
          {out.size(), CodepointClass::kBackspace});
      out.push_back(kBackspace);
    }
    out.push_back(text[i]);
  }
  sample.perturbed_text = EncodeUtf8(out);
  return sample;
}

PerturbedSample PerturbHomoglyph(std::string_view clean, double budget,
                                 const HomoglyphTable& table,
                                 HomoglyphBasis basis) {
  std::u32string text = DecodeUtf8(clean);
  PerturbedSample sample = MakeSample(clean, Category::kHomoglyph, budget);

  if (basis == HomoglyphBasis::kPrefix) {
    const size_t n = BudgetCount(text.size(), budget);
    sample.count_n = n;
    for (size_t i = 0; i < n; ++i) {
      if (const auto sub = table.HomoglyphFor(text[i])) {
        text[i] = *sub;
        sample.injection_positions.push_back({i, CodepointClass::kConfusable});
      }
    }
  } else {
    const auto substitutable = static_cast<size_t>(
        std::count_if(text.begin(), text.end(), [&](char32_t c) {
          return table.HomoglyphFor(c).has_value();
        }));
    const size_t n = BudgetCount(substitutable, budget);
    sample.count_n = n;
    size_t done = 0;
    for (size_t i = 0; i < text.size() && done < n; ++i) {
      if (const auto sub = table.HomoglyphFor(text[i])) {
        text[i] = *sub;
        sample.injection_positions.push_back({i, CodepointClass::kConfusable});
        ++done;
      }
    }
  }
  sample.perturbed_text = EncodeUtf8(text);
  return sample;
}

PerturbedSample Perturb(std::string_view clean, const PerturbationSpec& spec,
                        const HomoglyphTable& table) {
  switch (spec.category) {
    case Category::kReorder:
      return PerturbReorder(clean, spec.budget);
    case Category::kInvisible:
      return PerturbInvisible(clean, spec.budget);
    case Category::kDelete:
      return PerturbDelete(clean, spec.budget);
    case Category::kHomoglyph:
      return PerturbHomoglyph(clean, spec.budget, table, spec.homoglyph_basis);
  }
  throw std::invalid_argument("unknown perturbation category");
}

nlohmann::json PerturbedSampleToJson(const PerturbedSample& sample) {
  nlohmann::json positions = nlohmann::json::array();
  for (const Injection& inj : sample.injection_positions) {
    positions.push_back(
        {{"index", inj.index}, {"class", CodepointClassName(inj.cls)}});
  }
  return {
      {"original_id", sample.original_id},
      {"category", CategoryName(sample.category)},
      {"budget", sample.budget},
      {"n", sample.count_n},
      {"perturbed_code", sample.perturbed_text},
      {"injection_positions", std::move(positions)},
  };
}

std::string PerturbedSampleToJsonLine(const PerturbedSample& sample) {
  return PerturbedSampleToJson(sample).dump(-1, ' ', /*ensure_ascii=*/true);
}

}  // namespace unicloak
