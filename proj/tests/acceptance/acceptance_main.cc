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

// Acceptance suite. Runs every criterion (or one, with --only N) and prints
// one PASS/FAIL line per criterion. Exit status is nonzero if any fails.

#include <unistd.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iterator>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "unicloak/campaign.h"
#include "unicloak/chat_model.h"
#include "unicloak/cli.h"
#include "unicloak/corpus.h"
#include "unicloak/detector.h"
#include "unicloak/perturb.h"
#include "unicloak/prompt.h"
#include "unicloak/scoring.h"
#include "unicloak/unicode_tables.h"
#include "unicloak/utf8.h"

namespace unicloak {
namespace {

namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

struct Outcome {
  bool pass = true;
  std::string detail;

  void Fail(const std::string& why) {
    if (pass) detail = why;
    pass = false;
  }
};

double SecondsSince(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string Format(const char* fmt, double a, double b = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof(buf), fmt, a, b);
  return buf;
}

const HomoglyphTable& Table() { return DefaultHomoglyphTable(); }

size_t Substitutable(const std::string& code) {
  size_t n = 0;
  for (char32_t c : DecodeUtf8(code)) n += Table().HomoglyphFor(c) ? 1 : 0;
  return n;
}

// Random printable-ASCII code strings with at least five substitutable
// characters, so every positive budget perturbs something in every category.
std::vector<std::string> RandomAsciiCorpus() {
  std::mt19937_64 rng(20240601);
  std::uniform_int_distribution<int> len(5, 160);
  std::uniform_int_distribution<int> ch(0x20, 0x7E);
  std::vector<std::string> corpus;
  while (corpus.size() < 256) {
    std::string s;
    for (int i = len(rng); i > 0; --i) {
      const uint64_t roll = rng() % 20;
      s += roll == 0 ? '\n' : roll == 1 ? '\t' : static_cast<char>(ch(rng));
    }
    if (Substitutable(s) >= 5) corpus.push_back(std::move(s));
  }
  return corpus;
}

// Budgets as k/5; the expected count floor(k * L / 5) is exact in integers.
constexpr int kBudgetSteps[] = {0, 1, 2, 3, 4, 5};

double Budget(int k) { return k / 5.0; }

Outcome CriterionLengthLaws() {
  const auto corpus = RandomAsciiCorpus();
  const auto start = Clock::now();
  Outcome o;
  size_t checked = 0;
  for (const std::string& code : corpus) {
    const size_t length = CodePointLength(code);
    for (Category category : kAllCategories) {
      for (int k : kBudgetSteps) {
        const PerturbedSample s = Perturb(code, {category, Budget(k)}, Table());
        const size_t basis = category == Category::kHomoglyph
                                 ? Substitutable(code)
                                 : length;
        const size_t n = static_cast<size_t>(k) * basis / 5;
        const size_t out = CodePointLength(s.perturbed_text);
        size_t expected = length;
        switch (category) {
          case Category::kReorder:
            expected = length + (n >= 1 ? 2 : 0);
            break;
          case Category::kInvisible:
            expected = length + n;
            break;
          case Category::kDelete:
            expected = length + 2 * n;
            break;
          case Category::kHomoglyph:
            expected = length;
            if (s.injection_positions.size() != n) {
              o.Fail("homoglyph substitutions != n");
            }
            break;
        }
        if (s.count_n != n) {
          o.Fail(std::string(CategoryName(category)) + ": n = " +
                 std::to_string(s.count_n) + ", expected " +
                 std::to_string(n));
        }
        if (out != expected) {
          o.Fail(std::string(CategoryName(category)) + ": length " +
                 std::to_string(out) + ", expected " +
                 std::to_string(expected));
        }
        ++checked;
      }
    }
  }
  const double secs = SecondsSince(start);
  if (secs >= 5.0) o.Fail(Format("runtime %.2f s >= 5 s", secs));
  if (o.pass) {
    o.detail = std::to_string(checked) + " samples from " +
               std::to_string(corpus.size()) + " strings" +
               Format(", %.3f s", secs);
  }
  return o;
}

Outcome CriterionRoundTrip() {
  const auto corpus = RandomAsciiCorpus();
  const auto start = Clock::now();
  Outcome o;
  size_t failures = 0, checked = 0;
  for (const std::string& code : corpus) {
    const std::string skeleton = VisualRender(code, Table());
    for (Category category : kAllCategories) {
      for (int k : kBudgetSteps) {
        const PerturbedSample s = Perturb(code, {category, Budget(k)}, Table());
        const std::string rendered = VisualRender(s.perturbed_text, Table());
        // ASCII is its own skeleton, so both comparisons coincide.
        if (rendered != code || rendered != skeleton) ++failures;
        ++checked;
      }
    }
  }
  const double secs = SecondsSince(start);
  if (failures > 0) {
    o.Fail(std::to_string(failures) + " of " + std::to_string(checked) +
           " samples did not render back");
  }
  if (secs >= 5.0) o.Fail(Format("runtime %.2f s >= 5 s", secs));
  if (o.pass) {
    o.detail = std::to_string(checked) + " round trips" +
               Format(", %.3f s", secs);
  }
  return o;
}

std::string CollapseSpaces(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == ' ' && !out.empty() && out.back() == ' ') continue;
    out += c;
  }
  return out;
}

Outcome CriterionDisplayExamples() {
  Outcome o;
  const std::string filename = VisualRender(
      "photo_high_re\u202Egnp.js", Table());
  if (filename != "photo_high_res.png") {
    o.Fail("override example renders as \"" + filename +
           "\", expected \"photo_high_res.png\"");
  }
  const std::string consent =
      VisualRender("I do not\b\b\b\b\b\b authorise this", Table());
  if (CollapseSpaces(consent) != "I authorise this") {
    o.Fail("backspace example renders as \"" + consent + "\"");
  }
  if (o.pass) o.detail = "both examples render as displayed";
  return o;
}

Outcome CriterionDetector() {
  const auto corpus = RandomAsciiCorpus();
  Outcome o;
  size_t false_negatives = 0, false_positives = 0, checked = 0;
  for (const std::string& code : corpus) {
    if (Scan(code, Table()).verdict != Verdict::kClean) ++false_positives;
    for (Category category : kAllCategories) {
      for (int k : kBudgetSteps) {
        if (k == 0) continue;
        const PerturbedSample s = Perturb(code, {category, Budget(k)}, Table());
        if (Scan(s.perturbed_text, Table()).verdict != Verdict::kSuspicious) {
          ++false_negatives;
        }
        ++checked;
      }
    }
  }
  if (false_negatives > 0 || false_positives > 0) {
    o.Fail(std::to_string(false_negatives) + " false negatives, " +
           std::to_string(false_positives) + " false positives");
  } else {
    o.detail = std::to_string(checked) + " perturbed and " +
               std::to_string(corpus.size()) + " clean samples classified";
  }
  return o;
}

Outcome CriterionConfidence() {
  Outcome o;
  const double zero[] = {0.0};
  const double ninety[] = {std::log(0.9)};
  const double pair[] = {std::log(0.8), std::log(0.6)};
  if (Confidence(zero) != 100.0) o.Fail("confidence([0]) != 100");
  if (std::fabs(Confidence(ninety) - 90.0) > 1e-9) {
    o.Fail(Format("confidence([ln 0.9]) = %.12f", Confidence(ninety)));
  }
  if (std::fabs(Confidence(pair) - 70.0) > 1e-9) {
    o.Fail(Format("confidence([ln 0.8, ln 0.6]) = %.12f", Confidence(pair)));
  }
  if (o.pass) o.detail = "100, 90 and 70 reproduced";
  return o;
}

Outcome CriterionScore() {
  Outcome o;
  if (SampleScore(54.81, false, 95.47) != -100.0) {
    o.Fail("incorrect answer does not score -100");
  }
  // A cell whose scores are -40.66 and -100.
  const std::vector<EvalRecord> cell = {
      {"1", "m", Category::kReorder, 0.2, Variant::kClean, true, 95.47, 0},
      {"1", "m", Category::kReorder, 0.2, Variant::kPerturbed, true, 54.81, 0},
      {"2", "m", Category::kReorder, 0.2, Variant::kPerturbed, false, 40.0, 0},
  };
  const auto rows = Aggregate(cell);
  const double displayed = rows.at(1).displayed_confidence_pct;
  if (std::fabs(displayed - 25.14) > 0.01) {
    o.Fail(Format("DisplayedConf = %.4f, expected 25.14", displayed));
  }
  const std::vector<EvalRecord> wrong = {
      {"1", "m", Category::kDelete, 0.4, Variant::kClean, true, 80.92, 0},
      {"1", "m", Category::kDelete, 0.4, Variant::kPerturbed, false, 97.0, 0},
      {"2", "m", Category::kDelete, 0.4, Variant::kPerturbed, false, 12.0, 0},
  };
  const double all_wrong = Aggregate(wrong).at(1).displayed_confidence_pct;
  if (all_wrong != 80.92 - 100.0) {
    o.Fail(Format("all-incorrect cell = %.12f, expected %.2f", all_wrong,
                  80.92 - 100.0));
  }
  if (o.pass) {
    o.detail = Format("DisplayedConf %.4f; all-incorrect %.2f", displayed,
                      all_wrong);
  }
  return o;
}

// Textbook product-moment formula in long double.
double BruteForcePearson(const std::vector<double>& x,
                         const std::vector<double>& y) {
  long double n = x.size(), sx = 0, sy = 0, sxx = 0, syy = 0, sxy = 0;
  for (size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += static_cast<long double>(x[i]) * x[i];
    syy += static_cast<long double>(y[i]) * y[i];
    sxy += static_cast<long double>(x[i]) * y[i];
  }
  const long double num = n * sxy - sx * sy;
  const long double den =
      std::sqrt((n * sxx - sx * sx) * (n * syy - sy * sy));
  return static_cast<double>(num / den);
}

Outcome CriterionPearson() {
  Outcome o;
  std::mt19937_64 rng(7);
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const size_t n = 3 + rng() % 40;
    std::uniform_real_distribution<double> d(-100.0, 100.0);
    std::vector<double> x(n), y(n);
    for (size_t i = 0; i < n; ++i) {
      x[i] = d(rng);
      y[i] = 0.3 * x[i] + d(rng);
    }
    const auto r = Pearson(x, y);
    if (!r) {
      o.Fail("undefined coefficient on a random series");
      continue;
    }
    worst = std::max(worst, std::fabs(*r - BruteForcePearson(x, y)));
  }
  if (worst > 1e-12) o.Fail(Format("oracle disagreement %.3g", worst));

  const double budgets[] = {0, 20, 40, 60, 80, 100};
  const double reorder[] = {100, 72.67, 54.67, 47.33, 27.67, 16.33};
  const double r = *Pearson(budgets, reorder);
  if (std::fabs(r - (-0.98)) > 0.005) {
    o.Fail(Format("r(budget, reordering correctness) = %.5f, outside "
                  "-0.98 +/- 0.005 (oracle max diff %.3g)",
                  r, worst));
  }
  if (o.pass) {
    o.detail = Format("oracle max diff %.3g; reordering r = %.5f", worst, r);
  }
  return o;
}

std::vector<CodeSample> SyntheticSamples(size_t n) {
  std::vector<CodeSample> out;
  for (size_t i = 0; i < n; ++i) {
    const std::string k = std::to_string(i);
    out.push_back(
        {"syn" + k, "Problem " + k, Difficulty::kMedium, "JavaScript",
         "var solve" + k + " = function(nums, target) {\n"
         "    let total = " + k + ";\n"
         "    for (const value of nums) {\n"
         "        if (value < target) total += value;\n"
         "    }\n"
         "    return total;\n"
         "};",
         "Sum every value below the target, starting from " + k + "."});
  }
  return out;
}

class ScratchDir {
 public:
  explicit ScratchDir(const std::string& tag)
      : path_(fs::temp_directory_path() /
              ("unicloak_acceptance_" + tag + "_" +
               std::to_string(getpid()))) {
    fs::remove_all(path_);
    fs::create_directories(path_);
  }
  ~ScratchDir() { fs::remove_all(path_); }
  const fs::path& path() const { return path_; }

 private:
  fs::path path_;
};

Outcome CriterionMockCampaign() {
  Outcome o;
  ScratchDir dir("mock");
  MockChatModel model(Table());
  const auto start = Clock::now();
  const CampaignSummary summary =
      RunCampaign(SyntheticSamples(20), {}, model, Table(),
                  dir.path() / "results.jsonl");
  const auto rows =
      Aggregate(Evaluate(ReadResults(dir.path() / "results.jsonl")));
  const double secs = SecondsSince(start);
  if (!summary.complete() || summary.total != 800) {
    o.Fail("campaign incomplete or wrong size");
  }
  if (secs >= 10.0) o.Fail(Format("runtime %.2f s >= 10 s", secs));
  for (const AggregateRow& row : rows) {
    if (row.budget == 0.0 && row.correctness_pct != 100.0) {
      o.Fail(std::string(CategoryName(row.category)) +
             Format(" clean correctness %.2f%%", row.correctness_pct));
    }
  }
  std::string rs;
  for (Category c : {Category::kInvisible, Category::kDelete}) {
    const auto report =
        Correlate(rows, MockChatModel::kModelId, c, Metric::kCorrectness, true);
    if (!report.r || *report.r > -0.8) {
      o.Fail(std::string(CategoryName(c)) + " r = " +
             (report.r ? Format("%.4f", *report.r) : "undefined"));
    } else {
      rs += " " + std::string(CategoryName(c)) + Format(" r=%.4f", *report.r);
    }
  }
  if (o.pass) o.detail = "800 records" + Format(" in %.3f s;", secs) + rs;
  return o;
}

Outcome CriterionCardinality() {
  Outcome o;
  ScratchDir dir("cardinality");
  MockChatModel model(Table());
  struct Shape {
    size_t samples;
    std::vector<Category> categories;
    std::vector<double> budgets;
  };
  const Shape shapes[] = {
      {20, {kAllCategories.begin(), kAllCategories.end()},
       {kCanonicalBudgets.begin(), kCanonicalBudgets.end()}},
      {3, {Category::kDelete, Category::kHomoglyph}, {0.2, 0.5, 1.0}},
      {7, {Category::kReorder}, {0.4}},
  };
  int index = 0;
  for (const Shape& shape : shapes) {
    CampaignOptions options;
    options.categories = shape.categories;
    options.budgets = shape.budgets;
    const size_t expected =
        2 * shape.samples * shape.categories.size() * shape.budgets.size();
    const fs::path full = dir.path() / ("full" + std::to_string(index));
    const fs::path resumed = dir.path() / ("resumed" + std::to_string(index));
    ++index;
    RunCampaign(SyntheticSamples(shape.samples), options, model, Table(), full);
    if (ReadResults(full).size() != expected) {
      o.Fail("record count differs from 2 x samples x categories x budgets");
    }

    CampaignOptions interrupted = options;
    interrupted.max_prompts = expected / 3;
    RunCampaign(SyntheticSamples(shape.samples), interrupted, model, Table(),
                resumed);
    const CampaignSummary rest = RunCampaign(
        SyntheticSamples(shape.samples), options, model, Table(), resumed);
    if (rest.issued != expected - expected / 3 ||
        rest.skipped != expected / 3) {
      o.Fail("resume issued " + std::to_string(rest.issued) + ", expected " +
             std::to_string(expected - expected / 3));
    }
    std::ifstream a(full), b(resumed);
    const std::string fa((std::istreambuf_iterator<char>(a)),
                         std::istreambuf_iterator<char>());
    const std::string fb((std::istreambuf_iterator<char>(b)),
                         std::istreambuf_iterator<char>());
    if (fa != fb) o.Fail("resumed results differ from an uninterrupted run");
  }
  if (o.pass) o.detail = "3 grid shapes; resume issued only the remainder";
  return o;
}

Outcome CriterionGolden() {
  Outcome o;
  std::ifstream in(std::string(UNICLOAK_TEST_DIR) +
                   "/golden/request_body.json");
  if (!in) {
    o.Fail("golden fixture missing");
    return o;
  }
  const nlohmann::json golden = nlohmann::json::parse(in);
  const CodeSample sample{
      "1", "Add", Difficulty::kEasy, "JavaScript",
      "var add = function(x, y) {\n    return x + y;\n};",
      "Return the sum of two integers."};
  const PromptRecord prompt = BuildPrompt(
      sample, "var a\u200Cd\u200Cd = function(x, y) {\n    return x + y;\n};");
  const nlohmann::json body = BuildRequestBody(prompt, ModelConfig{});
  if (body != golden) {
    o.Fail("request body differs from fixture: " + body.dump());
  } else {
    o.detail = "request body matches fixture";
  }
  return o;
}

std::vector<std::string> Lines(const fs::path& path) {
  std::ifstream in(path);
  std::vector<std::string> lines;
  for (std::string line; std::getline(in, line);) lines.push_back(line);
  return lines;
}

Outcome CriterionReport() {
  Outcome o;
  ScratchDir dir("report");
  const std::string corpus =
      std::string(UNICLOAK_TEST_DIR) + "/testdata/corpus_small.jsonl";
  std::istringstream in;
  std::ostringstream out, err;
  const std::string run = (dir.path() / "run").string();
  if (RunCli({"eval", "--mock", "--corpus", corpus, "--out", run}, in, out,
             err) != kExitClean ||
      RunCli({"report", run}, in, out, err) != kExitClean) {
    o.Fail("eval/report failed: " + err.str());
    return o;
  }
  const auto table = Lines(fs::path(run) / "report" / "performance_mock.md");
  const std::string header =
      "| Perturbation budget | Reordering Conf.% | Reordering Corr.% | "
      "Invisible characters Conf.% | Invisible characters Corr.% | "
      "Deletions Conf.% | Deletions Corr.% | Homoglyphs Conf.% | "
      "Homoglyphs Corr.% |";
  const char* labels[] = {"Clean", "20%", "40%", "60%", "80%", "100%"};
  if (table.size() != 10 || table[2] != header) {
    o.Fail("performance table header or row count differs");
  } else {
    for (size_t i = 0; i < 6; ++i) {
      const std::string& row = table[4 + i];
      if (row.rfind(std::string("| ") + labels[i] + " |", 0) != 0 ||
          std::count(row.begin(), row.end(), '|') != 10) {
        o.Fail("performance row " + std::to_string(i) + ": " + row);
      }
    }
  }
  const auto counts = Lines(fs::path(run) / "report" / "correct_counts.md");
  if (counts.size() != 5 ||
      counts[2] != "| Model | Clean | Reord. | Invis. | Del. | Homog. |" ||
      counts[4].rfind("| mock | ", 0) != 0) {
    o.Fail("correct-counts table shape differs");
  }
  if (o.pass) o.detail = "performance and correct-counts tables well formed";
  return o;
}

struct Criterion {
  int number;
  const char* name;
  std::function<Outcome()> run;
};

const std::vector<Criterion>& Criteria() {
  static const std::vector<Criterion> criteria = {
      {1, "perturbation length laws", CriterionLengthLaws},
      {2, "imperceptibility round trip", CriterionRoundTrip},
      {3, "override and backspace display examples", CriterionDisplayExamples},
      {4, "detector soundness and precision", CriterionDetector},
      {5, "confidence formula", CriterionConfidence},
      {6, "score and displayed confidence", CriterionScore},
      {7, "Pearson oracle", CriterionPearson},
      {8, "end-to-end mock campaign", CriterionMockCampaign},
      {9, "campaign cardinality and resume", CriterionCardinality},
      {10, "request wire format", CriterionGolden},
      {11, "report fidelity", CriterionReport},
  };
  return criteria;
}

}  // namespace
}  // namespace unicloak

int main(int argc, char** argv) {
  int only = 0;
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--only") == 0 && i + 1 < argc) {
      only = std::atoi(argv[++i]);
    } else {
      std::fprintf(stderr, "usage: %s [--only N]\n", argv[0]);
      return 2;
    }
  }
  int failures = 0, ran = 0;
  for (const auto& c : unicloak::Criteria()) {
    if (only != 0 && c.number != only) continue;
    ++ran;
    unicloak::Outcome outcome;
    try {
      outcome = c.run();
    } catch (const std::exception& e) {
      outcome.Fail(std::string("exception: ") + e.what());
    }
    std::printf("Criterion %d (%s): %s - %s\n", c.number, c.name,
                outcome.pass ? "PASS" : "FAIL", outcome.detail.c_str());
    failures += outcome.pass ? 0 : 1;
  }
  if (ran == 0) {
    std::fprintf(stderr, "no criterion numbered %d\n", only);
    return 2;
  }
  return failures == 0 ? 0 : 1;
}
