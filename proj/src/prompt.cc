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

#include "unicloak/prompt.h"

namespace unicloak {

std::string_view VariantName(Variant variant) {
  return variant == Variant::kClean ? "clean" : "perturbed";
}

PromptRecord BuildPrompt(const CodeSample& sample, std::string_view code_text) {
  PromptRecord prompt;
  prompt.messages = {std::string(kQuestion), std::string(code_text),
                     sample.description};
  prompt.sample_id = sample.id;
  prompt.variant =
      code_text == sample.code ? Variant::kClean : Variant::kPerturbed;
  return prompt;
}

}  // namespace unicloak
