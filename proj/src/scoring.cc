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

#include "unicloak/scoring.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <stdexcept>
#include <tuple>

#include "unicloak/utf8.h"

namespace unicloak {
namespace {

long long BudgetKey(double budget) { return std::llround(budget * 1e6); }

// Order-independent mean: summing sorted values makes the result identical
// for any permutation of the input.
double SortedMean(std::vector<double> values) {
  std::sort(values.begin(), values.end());
  double sum = 0.0;
  for (double v : values) sum += v;
  return sum / static_cast<double>(values.size());
}

using ModelCategory = std::pair<std::string, Category>;

struct Cell {
  std::vector<double> confidences;
  std::vector<double> scores;
  size_t correct = 0;
  size_t n = 0;
};

std::string BudgetLabel(double budget) {
  return std::to_string(std::llround(budget * 100.0)) + "%";
}

}  // namespace

double Confidence(std::span<const double> logprobs) {
  if (logprobs.empty()) {
    throw std::domain_error("confidence of an empty response");
  }
  double sum = 0.0;
  for (double lp : logprobs) {
    if (!(lp <= 0.0)) {
      throw std::domain_error("log probability must be <= 0, got " +
                              std::to_string(lp));
    }
    sum += std::exp(lp);
  }
  return sum / static_cast<double>(logprobs.size()) * 100.0;
}

bool IsCorrectAnswer(std::string_view answer_token) {
  return AsciiLowercase(TrimAsciiWhitespace(answer_token)) == "yes";
}

double SampleScore(double confidence_pct, bool correct,
                   double avg_clean_conf) {
  return correct ? confidence_pct - avg_clean_conf : kIncorrectScore;
}

double AvgCleanConfidence(std::span<const EvalRecord> records) {
  std::vector<double> clean;
  for (const EvalRecord& r : records) {
    if (r.variant == Variant::kClean) clean.push_back(r.confidence_pct);
  }
  if (clean.empty()) {
    throw std::domain_error("no clean records to average");
  }
  return SortedMean(std::move(clean));
}

std::vector<EvalRecord> Evaluate(const std::vector<ResultRecord>& results) {
  std::vector<EvalRecord> records;
  records.reserve(results.size());
  for (const ResultRecord& r : results) {
    if (r.error) continue;
    EvalRecord e;
    e.sample_id = r.sample_id;
    e.model = r.model;
    e.category = r.category;
    e.budget = r.budget;
    e.variant = r.variant;
    e.correct = IsCorrectAnswer(r.answer_token);
    const double lp[] = {r.logprob};
    e.confidence_pct = Confidence(lp);
    records.push_back(std::move(e));
  }

  std::map<ModelCategory, std::vector<double>> clean;
  for (const EvalRecord& e : records) {
    if (e.variant == Variant::kClean) {
      clean[{e.model, e.category}].push_back(e.confidence_pct);
    }
  }
  std::map<ModelCategory, double> baseline;
  for (auto& [key, values] : clean) {
    baseline[key] = SortedMean(std::move(values));
  }
  for (EvalRecord& e : records) {
    const auto it = baseline.find({e.model, e.category});
    // Without a clean baseline only incorrect answers can be scored.
    const double avg = it == baseline.end() ? 0.0 : it->second;
    e.score = SampleScore(e.confidence_pct, e.correct, avg);
  }
  return records;
}

std::vector<AggregateRow> Aggregate(const std::vector<EvalRecord>& records) {
  std::map<ModelCategory, Cell> clean_cells;
  std::map<std::tuple<std::string, Category, long long>, Cell> cells;
  std::map<std::tuple<std::string, Category, long long>, double> budgets;

  for (const EvalRecord& e : records) {
    Cell* cell;
    if (e.variant == Variant::kClean) {
      cell = &clean_cells[{e.model, e.category}];
    } else {
      const auto key = std::make_tuple(e.model, e.category, BudgetKey(e.budget));
      cell = &cells[key];
      budgets[key] = e.budget;
    }
    cell->confidences.push_back(e.confidence_pct);
    cell->correct += e.correct ? 1 : 0;
    ++cell->n;
  }

  std::map<ModelCategory, double> baseline;
  for (const auto& [key, cell] : clean_cells) {
    baseline[key] = SortedMean(cell.confidences);
  }
  // Scores are recomputed here so rows stay consistent with the baseline of
  // exactly the records passed in.
  for (const EvalRecord& e : records) {
    if (e.variant == Variant::kClean) continue;
    const auto it = baseline.find({e.model, e.category});
    if (it == baseline.end()) {
      throw std::domain_error("no clean records for model " + e.model +
                              ", category " +
                              std::string(CategoryName(e.category)));
    }
    cells[{e.model, e.category, BudgetKey(e.budget)}].scores.push_back(
        SampleScore(e.confidence_pct, e.correct, it->second));
  }

  std::vector<AggregateRow> rows;
  for (const auto& [key, cell] : clean_cells) {
    AggregateRow row;
    row.model = key.first;
    row.category = key.second;
    row.budget = 0.0;
    row.n_records = cell.n;
    row.correctness_pct =
        100.0 * static_cast<double>(cell.correct) / static_cast<double>(cell.n);
    row.avg_clean_confidence_pct = baseline[key];
    row.displayed_confidence_pct = row.avg_clean_confidence_pct;
    rows.push_back(std::move(row));
  }
  for (const auto& [key, cell] : cells) {
    const auto& [model, category, budget_key] = key;
    AggregateRow row;
    row.model = model;
    row.category = category;
    row.budget = budgets[key];
    row.n_records = cell.n;
    row.correctness_pct =
        100.0 * static_cast<double>(cell.correct) / static_cast<double>(cell.n);
    row.avg_clean_confidence_pct = baseline.at({model, category});
    row.displayed_confidence_pct =
        row.avg_clean_confidence_pct + SortedMean(cell.scores);
    rows.push_back(std::move(row));
  }
  std::sort(rows.begin(), rows.end(),
            [](const AggregateRow& a, const AggregateRow& b) {
              return std::make_tuple(a.model, a.category, a.budget) <
                     std::make_tuple(b.model, b.category, b.budget);
            });
  return rows;
}

std::optional<double> Pearson(std::span<const double> xs,
                              std::span<const double> ys) {
  if (xs.size() != ys.size()) {
    throw std::invalid_argument("pearson: series lengths differ");
  }
  if (xs.size() < 2) {
    throw std::invalid_argument("pearson: need at least two points");
  }
  const auto constant = [](std::span<const double> v) {
    return std::all_of(v.begin(), v.end(),
                       [&](double x) { return x == v.front(); });
  };
  if (constant(xs) || constant(ys)) return std::nullopt;

  const double n = static_cast<double>(xs.size());
  const double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / n;
  const double my = std::accumulate(ys.begin(), ys.end(), 0.0) / n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (size_t i = 0; i < xs.size(); ++i) {
    const double dx = xs[i] - mx;
    const double dy = ys[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

std::string_view MetricName(Metric metric) {
  return metric == Metric::kCorrectness ? "correctness" : "confidence";
}

CorrelationReport Correlate(const std::vector<AggregateRow>& rows,
                            std::string_view model, Category category,
                            Metric metric, bool include_clean) {
  std::vector<double> xs;
  std::vector<double> ys;
  for (const AggregateRow& row : rows) {
    if (row.model != model || row.category != category) continue;
    if (!include_clean && row.budget == 0.0) continue;
    xs.push_back(row.budget * 100.0);
    ys.push_back(metric == Metric::kCorrectness ? row.correctness_pct
                                                : row.displayed_confidence_pct);
  }
  if (xs.size() < 2) {
    throw std::invalid_argument(
        "correlation for " + std::string(model) + "/" +
        std::string(CategoryName(category)) +
        " needs at least two budget levels, found " +
        std::to_string(xs.size()));
  }
  return {std::string(model), category, metric, include_clean,
          Pearson(xs, ys)};
}

std::vector<CorrelationReport> CorrelationReports(
    const std::vector<AggregateRow>& rows) {
  std::vector<ModelCategory> groups;
  for (const AggregateRow& row : rows) {
    const ModelCategory key{row.model, row.category};
    if (std::find(groups.begin(), groups.end(), key) == groups.end()) {
      groups.push_back(key);
    }
  }
  std::vector<CorrelationReport> reports;
  for (const auto& [model, category] : groups) {
    for (Metric metric : {Metric::kCorrectness, Metric::kConfidence}) {
      for (bool include_clean : {true, false}) {
        reports.push_back(
            Correlate(rows, model, category, metric, include_clean));
      }
    }
  }
  return reports;
}

std::vector<CorrectCount> CorrectCounts(const std::vector<EvalRecord>& records) {
  std::map<ModelCategory, CorrectCount> counts;
  for (const EvalRecord& e : records) {
    CorrectCount& c = counts[{e.model, e.category}];
    c.model = e.model;
    c.category = e.category;
    if (e.variant == Variant::kClean) {
      ++c.clean_total;
      c.clean_correct += e.correct ? 1 : 0;
    } else {
      ++c.perturbed_total;
      c.perturbed_correct += e.correct ? 1 : 0;
    }
  }
  std::vector<CorrectCount> out;
  out.reserve(counts.size());
  for (auto& [key, c] : counts) out.push_back(std::move(c));
  return out;
}

std::vector<AverageDifference> AverageDifferences(
    const std::vector<AggregateRow>& rows, std::span<const double> budgets) {
  std::map<ModelCategory, std::map<long long, const AggregateRow*>> by_group;
  for (const AggregateRow& row : rows) {
    auto& group = by_group[{row.model, row.category}];
    if (row.budget != 0.0) group[BudgetKey(row.budget)] = &row;
  }
  std::vector<AverageDifference> out;
  for (const auto& [key, group] : by_group) {
    double conf = 0.0;
    double corr = 0.0;
    for (double budget : budgets) {
      const auto it = group.find(BudgetKey(budget));
      if (it == group.end()) {
        throw std::invalid_argument(
            "missing budget level " + BudgetLabel(budget) + " for " +
            key.first + "/" + std::string(CategoryName(key.second)));
      }
      conf += it->second->displayed_confidence_pct -
              it->second->avg_clean_confidence_pct;
      corr += it->second->correctness_pct - 100.0;
    }
    const double n = static_cast<double>(budgets.size());
    out.push_back({key.first, key.second, conf / n, corr / n});
  }
  return out;
}

}  // namespace unicloak
