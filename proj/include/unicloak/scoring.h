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

#ifndef UNICLOAK_SCORING_H_
#define UNICLOAK_SCORING_H_

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "unicloak/campaign.h"
#include "unicloak/perturb.h"
#include "unicloak/prompt.h"

namespace unicloak {

// Penalty recorded for every incorrect answer.
inline constexpr double kIncorrectScore = -100.0;

// Mean of exp(logprob) over the response tokens, as a percentage. Throws
// std::domain_error for an empty list or a positive logprob.
double Confidence(std::span<const double> logprobs);

// "Yes", compared after trimming and ASCII case folding, is the only correct
// answer.
bool IsCorrectAnswer(std::string_view answer_token);

// Correct answers score their confidence relative to the clean mean;
// incorrect ones score kIncorrectScore.
double SampleScore(double confidence_pct, bool correct, double avg_clean_conf);

struct EvalRecord {
  std::string sample_id;
  std::string model;
  Category category = Category::kReorder;
  double budget = 0.0;
  Variant variant = Variant::kClean;
  bool correct = false;
  double confidence_pct = 0.0;
  double score = 0.0;
};

// Mean confidence of the clean records in `records`. Throws
// std::domain_error if there are none.
double AvgCleanConfidence(std::span<const EvalRecord> records);

// Scores successful result records; records carrying an error are dropped.
// The clean baseline is taken per (model, category).
std::vector<EvalRecord> Evaluate(const std::vector<ResultRecord>& results);

struct AggregateRow {
  std::string model;
  Category category = Category::kReorder;
  double budget = 0.0;  // 0 is the clean row
  size_t n_records = 0;
  double correctness_pct = 0.0;
  // Clean row: raw mean confidence. Perturbed rows: clean mean plus the mean
  // score of the cell.
  double displayed_confidence_pct = 0.0;
  double avg_clean_confidence_pct = 0.0;
};

// One row per (model, category, budget) plus a budget-0 clean row per
// (model, category), ordered by model, category, budget. Independent of
// record order.
std::vector<AggregateRow> Aggregate(const std::vector<EvalRecord>& records);

// Sample Pearson correlation. Throws std::invalid_argument on mismatched
// lengths or fewer than two points; nullopt when either series is constant.
std::optional<double> Pearson(std::span<const double> xs,
                              std::span<const double> ys);

enum class Metric { kCorrectness, kConfidence };
std::string_view MetricName(Metric metric);

struct CorrelationReport {
  std::string model;
  Category category = Category::kReorder;
  Metric metric = Metric::kCorrectness;
  bool include_clean = true;
  std::optional<double> r;  // nullopt: undefined (constant series)
};

// Correlates budget (in percent) with the metric over the rows of one
// (model, category). Throws std::invalid_argument with fewer than two usable
// budget levels.
CorrelationReport Correlate(const std::vector<AggregateRow>& rows,
                            std::string_view model, Category category,
                            Metric metric, bool include_clean);

// Every (model, category, metric, include_clean) combination present.
std::vector<CorrelationReport> CorrelationReports(
    const std::vector<AggregateRow>& rows);

struct CorrectCount {
  std::string model;
  Category category = Category::kReorder;
  size_t clean_correct = 0;
  size_t clean_total = 0;
  size_t perturbed_correct = 0;
  size_t perturbed_total = 0;
};

std::vector<CorrectCount> CorrectCounts(const std::vector<EvalRecord>& records);

struct AverageDifference {
  std::string model;
  Category category = Category::kReorder;
  // Mean over budgets of (displayed confidence - clean mean), i.e. the mean
  // cell score.
  double confidence_difference = 0.0;
  // Mean over budgets of (correctness - 100).
  double correctness_difference = 0.0;
};

// Requires a row for each of `budgets` in every (model, category); throws
// std::invalid_argument naming the first missing level.
std::vector<AverageDifference> AverageDifferences(
    const std::vector<AggregateRow>& rows,
    std::span<const double> budgets = kCanonicalBudgets);

}  // namespace unicloak

#endif  // UNICLOAK_SCORING_H_
