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

#include "unicloak/report.h"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <stdexcept>

namespace unicloak {
namespace {

std::string Fixed2(double v) {
  // Avoid printing "-0.00".
  if (std::fabs(v) < 0.005) v = 0.0;
  return fmt::format("{:.2f}", v);
}

std::string Precise(double v) { return fmt::format("{:.6f}", v); }

std::string Percent(double budget) {
  return fmt::format("{}%", std::llround(budget * 100.0));
}

// Quotes a CSV field when needed.
std::string CsvField(std::string_view s) {
  if (s.find_first_of(",\"\n") == std::string_view::npos) {
    return std::string(s);
  }
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

std::vector<std::string> Models(const std::vector<AggregateRow>& rows) {
  std::vector<std::string> models;
  for (const AggregateRow& row : rows) {
    if (std::find(models.begin(), models.end(), row.model) == models.end()) {
      models.push_back(row.model);
    }
  }
  return models;
}

std::string SafeFileStem(std::string_view model) {
  std::string out;
  for (char c : model) {
    const bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
                    (c >= '0' && c <= '9') || c == '-' || c == '_' || c == '.';
    out += ok ? c : '_';
  }
  return out;
}

void WriteFile(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << content;
}

}  // namespace

std::string RenderPerformanceTable(const std::vector<AggregateRow>& rows,
                                   std::string_view model) {
  std::map<std::pair<Category, long long>, const AggregateRow*> cells;
  std::set<long long> budget_keys;
  for (const AggregateRow& row : rows) {
    if (row.model != model) continue;
    const long long key = std::llround(row.budget * 1e6);
    cells[{row.category, key}] = &row;
    if (row.budget != 0.0) budget_keys.insert(key);
  }

  std::string out = fmt::format(
      "Performance of the model {} under four imperceptible coding character "
      "attack methods.\n\n",
      model);
  out += "| Perturbation budget |";
  for (Category c : kAllCategories) {
    out += fmt::format(" {0} Conf.% | {0} Corr.% |", CategoryTitle(c));
  }
  out += "\n|:---|";
  for (size_t i = 0; i < kAllCategories.size(); ++i) out += "---:|---:|";
  out += "\n";

  std::vector<std::pair<std::string, long long>> row_keys = {{"Clean", 0}};
  for (long long key : budget_keys) {
    row_keys.emplace_back(Percent(static_cast<double>(key) / 1e6), key);
  }
  for (const auto& [label, key] : row_keys) {
    out += fmt::format("| {} |", label);
    for (Category c : kAllCategories) {
      const auto it = cells.find({c, key});
      if (it == cells.end()) {
        out += " n/a | n/a |";
      } else {
        out += fmt::format(" {} | {} |",
                           Fixed2(it->second->displayed_confidence_pct),
                           Fixed2(it->second->correctness_pct));
      }
    }
    out += "\n";
  }
  return out;
}

std::string RenderCorrelationTable(
    const std::vector<CorrelationReport>& reports, Metric metric) {
  std::vector<std::string> models;
  std::map<std::tuple<std::string, bool, Category>, const CorrelationReport*>
      cells;
  for (const CorrelationReport& r : reports) {
    if (r.metric != metric) continue;
    if (std::find(models.begin(), models.end(), r.model) == models.end()) {
      models.push_back(r.model);
    }
    cells[{r.model, r.include_clean, r.category}] = &r;
  }
  std::string out = fmt::format(
      "Correlation coefficient of {} scores against perturbation budget\n\n",
      MetricName(metric));
  out += "| |";
  for (Category c : kAllCategories) {
    out += fmt::format(" {} |", CategoryAbbreviation(c));
  }
  out += "\n|:---|";
  for (size_t i = 0; i < kAllCategories.size(); ++i) out += "---:|";
  out += "\n";
  for (const std::string& model : models) {
    for (bool include_clean : {true, false}) {
      out += fmt::format("| {} with clean {} |", model,
                         include_clean ? "considered" : "discarded");
      for (Category c : kAllCategories) {
        const auto it = cells.find({model, include_clean, c});
        if (it == cells.end()) {
          out += " n/a |";
        } else if (!it->second->r) {
          out += " undefined |";
        } else {
          out += fmt::format(" {} |", Fixed2(*it->second->r));
        }
      }
      out += "\n";
    }
  }
  return out;
}

std::string RenderCorrectCountsTable(const std::vector<CorrectCount>& counts) {
  std::vector<std::string> models;
  std::map<std::pair<std::string, Category>, const CorrectCount*> cells;
  std::set<size_t> totals;
  for (const CorrectCount& c : counts) {
    if (std::find(models.begin(), models.end(), c.model) == models.end()) {
      models.push_back(c.model);
    }
    cells[{c.model, c.category}] = &c;
    totals.insert(c.perturbed_total);
  }
  std::string out = "Number of correct responses";
  if (totals.size() == 1) out += fmt::format(" (out of {})", *totals.begin());
  out += " across models and perturbation types\n\n";
  out += "| Model | Clean |";
  for (Category c : kAllCategories) {
    out += fmt::format(" {} |", CategoryAbbreviation(c));
  }
  out += "\n|:---|---:|";
  for (size_t i = 0; i < kAllCategories.size(); ++i) out += "---:|";
  out += "\n";
  for (const std::string& model : models) {
    // Clean prompts are repeated per category; show the per-category count,
    // or its range if the categories disagree.
    size_t lo = SIZE_MAX, hi = 0;
    for (Category c : kAllCategories) {
      const auto it = cells.find({model, c});
      if (it == cells.end()) continue;
      lo = std::min(lo, it->second->clean_correct);
      hi = std::max(hi, it->second->clean_correct);
    }
    const std::string clean =
        lo == SIZE_MAX ? "n/a"
                       : (lo == hi ? std::to_string(lo)
                                   : fmt::format("{}-{}", lo, hi));
    out += fmt::format("| {} | {} |", model, clean);
    for (Category c : kAllCategories) {
      const auto it = cells.find({model, c});
      out += it == cells.end()
                 ? std::string(" n/a |")
                 : fmt::format(" {} |", it->second->perturbed_correct);
    }
    out += "\n";
  }
  return out;
}

std::string AggregateRowsCsv(const std::vector<AggregateRow>& rows) {
  std::string out =
      "model,category,budget,n_records,correctness_pct,"
      "displayed_confidence_pct,avg_clean_confidence_pct\n";
  for (const AggregateRow& r : rows) {
    out += fmt::format("{},{},{},{},{},{},{}\n", CsvField(r.model),
                       CategoryName(r.category), Precise(r.budget),
                       r.n_records, Precise(r.correctness_pct),
                       Precise(r.displayed_confidence_pct),
                       Precise(r.avg_clean_confidence_pct));
  }
  return out;
}

std::string CorrelationsCsv(const std::vector<CorrelationReport>& reports) {
  std::string out = "model,category,metric,include_clean,r\n";
  for (const CorrelationReport& r : reports) {
    out += fmt::format("{},{},{},{},{}\n", CsvField(r.model),
                       CategoryName(r.category), MetricName(r.metric),
                       r.include_clean ? "true" : "false",
                       r.r ? Precise(*r.r) : std::string("undefined"));
  }
  return out;
}

std::string CorrectCountsCsv(const std::vector<CorrectCount>& counts) {
  std::string out =
      "model,category,clean_correct,clean_total,perturbed_correct,"
      "perturbed_total\n";
  for (const CorrectCount& c : counts) {
    out += fmt::format("{},{},{},{},{},{}\n", CsvField(c.model),
                       CategoryName(c.category), c.clean_correct,
                       c.clean_total, c.perturbed_correct, c.perturbed_total);
  }
  return out;
}

std::string AverageDifferencesCsv(
    const std::vector<AverageDifference>& differences) {
  std::string out = "model,category,confidence_difference,"
                    "correctness_difference\n";
  for (const AverageDifference& d : differences) {
    out += fmt::format("{},{},{},{}\n", CsvField(d.model),
                       CategoryName(d.category),
                       Precise(d.confidence_difference),
                       Precise(d.correctness_difference));
  }
  return out;
}

std::vector<std::filesystem::path> WriteReports(
    const std::vector<ResultRecord>& results,
    const std::filesystem::path& out_dir, std::span<const double> budgets) {
  const std::vector<EvalRecord> records = Evaluate(results);
  if (records.empty()) {
    throw std::invalid_argument("no successful result records to report");
  }
  const std::vector<AggregateRow> rows = Aggregate(records);
  const std::vector<AverageDifference> differences =
      AverageDifferences(rows, budgets);
  const std::vector<CorrelationReport> correlations = CorrelationReports(rows);
  const std::vector<CorrectCount> counts = CorrectCounts(records);

  std::filesystem::create_directories(out_dir);
  std::vector<std::filesystem::path> written;
  auto emit = [&](const std::string& name, const std::string& content) {
    const auto path = out_dir / name;
    WriteFile(path, content);
    written.push_back(path);
  };

  for (const std::string& model : Models(rows)) {
    emit("performance_" + SafeFileStem(model) + ".md",
         RenderPerformanceTable(rows, model));
  }
  emit("correlation_correctness.md",
       RenderCorrelationTable(correlations, Metric::kCorrectness));
  emit("correlation_confidence.md",
       RenderCorrelationTable(correlations, Metric::kConfidence));
  emit("correct_counts.md", RenderCorrectCountsTable(counts));
  emit("aggregate_rows.csv", AggregateRowsCsv(rows));
  emit("correlations.csv", CorrelationsCsv(correlations));
  emit("correct_counts.csv", CorrectCountsCsv(counts));
  emit("average_differences.csv", AverageDifferencesCsv(differences));
  return written;
}

}  // namespace unicloak
