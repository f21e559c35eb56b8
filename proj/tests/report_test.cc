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

#include <unistd.h>

#include <cmath>
#include <fstream>
#include <iterator>
#include <sstream>

#include "gtest/gtest.h"

namespace unicloak {
namespace {

namespace fs = std::filesystem;

std::vector<std::string> Lines(const std::string& text) {
  std::vector<std::string> lines;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) lines.push_back(line);
  return lines;
}

size_t Pipes(const std::string& line) {
  return static_cast<size_t>(std::count(line.begin(), line.end(), '|'));
}

std::string ReadFile(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  return std::string((std::istreambuf_iterator<char>(in)),
                     std::istreambuf_iterator<char>());
}

// Two samples per cell; correctness falls with the budget.
std::vector<ResultRecord> SyntheticResults(const std::string& model) {
  std::vector<ResultRecord> out;
  for (int s = 0; s < 2; ++s) {
    for (Category c : kAllCategories) {
      for (double b : kCanonicalBudgets) {
        const bool correct = s == 0 && b < 0.5;
        out.push_back({std::to_string(s), model, c, b, Variant::kPerturbed,
                       correct ? "Yes" : "No", std::log(0.7), std::nullopt});
        out.push_back({std::to_string(s), model, c, b, Variant::kClean, "Yes",
                       std::log(0.9), std::nullopt});
      }
    }
  }
  return out;
}

std::vector<AggregateRow> Rows(const std::vector<ResultRecord>& results) {
  return Aggregate(Evaluate(results));
}

TEST(PerformanceTableTest, RowAndColumnStructure) {
  const std::string table =
      RenderPerformanceTable(Rows(SyntheticResults("m")), "m");
  const auto lines = Lines(table);
  ASSERT_EQ(lines.size(), 10u);
  EXPECT_NE(lines[0].find("m"), std::string::npos);
  EXPECT_EQ(lines[2],
            "| Perturbation budget | Reordering Conf.% | Reordering Corr.% | "
            "Invisible characters Conf.% | Invisible characters Corr.% | "
            "Deletions Conf.% | Deletions Corr.% | Homoglyphs Conf.% | "
            "Homoglyphs Corr.% |");
  const char* labels[] = {"Clean", "20%", "40%", "60%", "80%", "100%"};
  for (size_t i = 0; i < 6; ++i) {
    EXPECT_EQ(lines[4 + i].rfind(std::string("| ") + labels[i] + " |", 0), 0u)
        << lines[4 + i];
    EXPECT_EQ(Pipes(lines[4 + i]), 10u);
  }
  // Clean: 90% confidence, all correct.
  EXPECT_EQ(lines[4].substr(0, 26), "| Clean | 90.00 | 100.00 |");
  // 20%: one correct at 70 (score -20), one incorrect (-100).
  EXPECT_EQ(lines[5].substr(0, 23), "| 20% | 30.00 | 50.00 |");
  // 60%: both incorrect.
  EXPECT_EQ(lines[7].substr(0, 23), "| 60% | -10.00 | 0.00 |");
}

TEST(PerformanceTableTest, MissingCellsAreMarked) {
  auto results = SyntheticResults("m");
  std::erase_if(results, [](const ResultRecord& r) {
    return r.category == Category::kHomoglyph;
  });
  const auto lines = Lines(RenderPerformanceTable(Rows(results), "m"));
  EXPECT_NE(lines[4].find("n/a | n/a |"), std::string::npos);
}

TEST(CorrelationTableTest, Structure) {
  auto results = SyntheticResults("a");
  const auto more = SyntheticResults("b");
  results.insert(results.end(), more.begin(), more.end());
  const auto reports = CorrelationReports(Rows(results));
  const auto lines =
      Lines(RenderCorrelationTable(reports, Metric::kCorrectness));
  ASSERT_EQ(lines.size(), 8u);
  EXPECT_EQ(lines[2], "| | Reord. | Invis. | Del. | Homog. |");
  EXPECT_EQ(lines[4].rfind("| a with clean considered |", 0), 0u);
  EXPECT_EQ(lines[5].rfind("| a with clean discarded |", 0), 0u);
  EXPECT_EQ(lines[6].rfind("| b with clean considered |", 0), 0u);
  EXPECT_EQ(lines[7].rfind("| b with clean discarded |", 0), 0u);
}

TEST(CorrelationTableTest, UndefinedCoefficient) {
  CorrelationReport r{"m", Category::kDelete, Metric::kConfidence, true,
                      std::nullopt};
  const std::string table = RenderCorrelationTable({r}, Metric::kConfidence);
  EXPECT_NE(table.find("| m with clean considered | n/a | n/a | undefined |"),
            std::string::npos)
      << table;
  EXPECT_NE(CorrelationsCsv({r}).find("m,delete,confidence,true,undefined"),
            std::string::npos);
}

TEST(CorrectCountsTableTest, Structure) {
  const auto counts = CorrectCounts(Evaluate(SyntheticResults("m")));
  const auto lines = Lines(RenderCorrectCountsTable(counts));
  ASSERT_EQ(lines.size(), 5u);
  EXPECT_NE(lines[0].find("(out of 10)"), std::string::npos);
  EXPECT_EQ(lines[2], "| Model | Clean | Reord. | Invis. | Del. | Homog. |");
  EXPECT_EQ(lines[4], "| m | 10 | 2 | 2 | 2 | 2 |");
}

TEST(CorrectCountsTableTest, DisagreeingCleanCountsShowRange) {
  std::vector<CorrectCount> counts;
  for (Category c : kAllCategories) {
    counts.push_back({"m", c, c == Category::kDelete ? 8u : 10u, 10, 1, 10});
  }
  EXPECT_NE(RenderCorrectCountsTable(counts).find("| m | 8-10 |"),
            std::string::npos);
}

TEST(CsvTest, AggregateRowsHeaderAndPrecision) {
  const auto lines = Lines(AggregateRowsCsv(Rows(SyntheticResults("m"))));
  ASSERT_EQ(lines.size(), 1u + 24u);
  EXPECT_EQ(lines[0],
            "model,category,budget,n_records,correctness_pct,"
            "displayed_confidence_pct,avg_clean_confidence_pct");
  EXPECT_EQ(lines[1],
            "m,reorder,0.000000,10,100.000000,90.000000,90.000000");
  EXPECT_EQ(lines[2], "m,reorder,0.200000,2,50.000000,30.000000,90.000000");
}

TEST(CsvTest, QuotesModelNamesWithCommas) {
  AggregateRow row;
  row.model = "a,\"b\"";
  EXPECT_NE(AggregateRowsCsv({row}).find("\"a,\"\"b\"\"\",reorder"),
            std::string::npos);
}

class WriteReportsTest : public testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("unicloak_report_" + std::to_string(getpid()) + "_" +
            testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::remove_all(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }
  fs::path dir_;
};

TEST_F(WriteReportsTest, WritesEveryArtifactDeterministically) {
  auto results = SyntheticResults("gpt/x");
  const auto paths = WriteReports(results, dir_ / "one");
  std::vector<std::string> names;
  for (const fs::path& p : paths) names.push_back(p.filename().string());
  EXPECT_EQ(names, (std::vector<std::string>{
                       "performance_gpt_x.md", "correlation_correctness.md",
                       "correlation_confidence.md", "correct_counts.md",
                       "aggregate_rows.csv", "correlations.csv",
                       "correct_counts.csv", "average_differences.csv"}));

  std::reverse(results.begin(), results.end());
  const auto again = WriteReports(results, dir_ / "two");
  ASSERT_EQ(again.size(), paths.size());
  for (size_t i = 0; i < paths.size(); ++i) {
    EXPECT_EQ(ReadFile(paths[i]), ReadFile(again[i])) << names[i];
  }
}

TEST_F(WriteReportsTest, ErrorsAreDroppedAndEmptyInputRejected) {
  EXPECT_THROW(WriteReports({}, dir_), std::invalid_argument);
  std::vector<ResultRecord> only_errors = {
      {"1", "m", Category::kReorder, 0.2, Variant::kClean, "", 0.0, "boom"}};
  EXPECT_THROW(WriteReports(only_errors, dir_), std::invalid_argument);
}

TEST_F(WriteReportsTest, MissingBudgetLevelIsNamed) {
  auto results = SyntheticResults("m");
  std::erase_if(results, [](const ResultRecord& r) {
    return std::fabs(r.budget - 0.8) < 1e-9;
  });
  try {
    WriteReports(results, dir_);
    FAIL() << "expected invalid_argument";
  } catch (const std::invalid_argument& e) {
    EXPECT_NE(std::string(e.what()).find("80%"), std::string::npos);
  }
  const double reduced[] = {0.2, 0.4, 0.6, 1.0};
  EXPECT_EQ(WriteReports(results, dir_, reduced).size(), 8u);
}

}  // namespace
}  // namespace unicloak
