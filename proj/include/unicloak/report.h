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

#ifndef UNICLOAK_REPORT_H_
#define UNICLOAK_REPORT_H_

#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "unicloak/campaign.h"
#include "unicloak/scoring.h"

namespace unicloak {

// Markdown table for one model: rows Clean, then each budget; a Conf.% and
// Corr.% column pair per category.
std::string RenderPerformanceTable(const std::vector<AggregateRow>& rows,
                                   std::string_view model);

// Markdown table of correlation coefficients against budget, one row per
// model and clean-handling variant.
std::string RenderCorrelationTable(
    const std::vector<CorrelationReport>& reports, Metric metric);

// Markdown table of correct-response counts: Model | Clean | Reord. | Invis. |
// Del. | Homog.
std::string RenderCorrectCountsTable(const std::vector<CorrectCount>& counts);

std::string AggregateRowsCsv(const std::vector<AggregateRow>& rows);
std::string CorrelationsCsv(const std::vector<CorrelationReport>& reports);
std::string CorrectCountsCsv(const std::vector<CorrectCount>& counts);
std::string AverageDifferencesCsv(
    const std::vector<AverageDifference>& differences);

// Scores `results` and writes every table and CSV into `out_dir`. Returns the
// written paths in a fixed order. Throws std::invalid_argument when there is
// nothing to report or a budget level in `budgets` is missing.
std::vector<std::filesystem::path> WriteReports(
    const std::vector<ResultRecord>& results,
    const std::filesystem::path& out_dir,
    std::span<const double> budgets = kCanonicalBudgets);

}  // namespace unicloak

#endif  // UNICLOAK_REPORT_H_
