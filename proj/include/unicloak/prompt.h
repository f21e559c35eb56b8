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

#ifndef UNICLOAK_PROMPT_H_
#define UNICLOAK_PROMPT_H_

#include <array>
#include <string>
#include <string_view>

#include "unicloak/corpus.h"
#include "unicloak/perturb.h"

namespace unicloak {

inline constexpr std::string_view kQuestion =
    "Does the provided code match the provided description? Answer with "
    "either Yes or No.";

enum class Variant { kClean, kPerturbed };

std::string_view VariantName(Variant variant);

// The three user messages of one query, in order: question, code,
// description. Only the code message ever differs between the clean and the
// perturbed prompt of a sample.
struct PromptRecord {
  std::array<std::string, 3> messages;
  std::string sample_id;
  Category category = Category::kReorder;
  double budget = 0.0;
  Variant variant = Variant::kClean;

  const std::string& question() const { return messages[0]; }
  const std::string& code() const { return messages[1]; }
  const std::string& description() const { return messages[2]; }
};

// `code_text` is sample.code or a perturbation of it; the description is
// always the sample's own.
PromptRecord BuildPrompt(const CodeSample& sample, std::string_view code_text);

}  // namespace unicloak

#endif  // UNICLOAK_PROMPT_H_
