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

#ifndef UNICLOAK_CAMPAIGN_H_
#define UNICLOAK_CAMPAIGN_H_

#include <cstddef>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "unicloak/chat_model.h"
#include "unicloak/corpus.h"
#include "unicloak/perturb.h"
#include "unicloak/prompt.h"

namespace unicloak {

// One line of the results JSONL file.
struct ResultRecord {
  std::string sample_id;
  std::string model;
  Category category = Category::kReorder;
  double budget = 0.0;
  Variant variant = Variant::kClean;
  std::string answer_token;
  double logprob = 0.0;
  std::optional<std::string> error;

  bool operator==(const ResultRecord&) const = default;
};

nlohmann::json ResultRecordToJson(const ResultRecord& record);
ResultRecord ResultRecordFromJson(const nlohmann::json& json);

// Reads a results file. A malformed final line without a trailing newline is
// treated as a torn write and ignored; any other malformed line throws.
// A missing file yields no records.
std::vector<ResultRecord> ReadResults(const std::filesystem::path& path);

struct CampaignOptions {
  std::vector<Category> categories{kAllCategories.begin(),
                                   kAllCategories.end()};
  std::vector<double> budgets{kCanonicalBudgets.begin(),
                              kCanonicalBudgets.end()};
  HomoglyphBasis homoglyph_basis = HomoglyphBasis::kSubstitutableSubset;
  size_t parallelism = 1;
  // Stop after issuing this many prompts, leaving the rest for a later
  // resume.
  std::optional<size_t> max_prompts;
};

struct CampaignSummary {
  size_t total = 0;    // records the full grid calls for
  size_t skipped = 0;  // already present in the results file
  size_t issued = 0;
  size_t failed = 0;   // issued prompts recorded with an error marker
  bool complete() const { return skipped + issued == total && failed == 0; }
};

using CampaignObserver =
    std::function<void(const PromptRecord&, const ResultRecord&)>;

// For every sample x category x budget, prompts the model with the perturbed
// code and, separately, with the clean code, appending one record per prompt
// to `results_path`. Records already in the file without an error are not
// re-issued. Prompts run on up to options.parallelism threads; records are
// appended in grid order regardless.
CampaignSummary RunCampaign(const std::vector<CodeSample>& subset,
                            const CampaignOptions& options, ChatModel& model,
                            const HomoglyphTable& table,
                            const std::filesystem::path& results_path,
                            const CampaignObserver& observer = nullptr);

}  // namespace unicloak

#endif  // UNICLOAK_CAMPAIGN_H_
