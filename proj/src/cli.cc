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

#include "unicloak/cli.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <iostream>
#include <iterator>
#include <memory>
#include <sstream>
#include <stdexcept>

#include "CLI11.hpp"
#include "unicloak/campaign.h"
#include "unicloak/chat_model.h"
#include "unicloak/corpus.h"
#include "unicloak/detector.h"
#include "unicloak/report.h"
#include "unicloak/unicode_tables.h"
#include "unicloak/utf8.h"

namespace unicloak {
namespace {

namespace fs = std::filesystem;

constexpr char kManifestFile[] = "manifest.json";
constexpr char kResultsFile[] = "results.jsonl";
constexpr char kDefaultBudgets[] = "20,40,60,80,100";

// Options shared by the subcommands that read a corpus.
struct CorpusOptions {
  std::string corpus;
  std::string language;
  size_t subset_size = 0;
  uint64_t seed = 42;
  std::string categories = "all";
  std::string budgets = kDefaultBudgets;
  std::string homoglyph_basis = "subset";
};

void AddCorpusOptions(CLI::App* cmd, CorpusOptions& o) {
  cmd->add_option("--corpus", o.corpus, "Corpus JSONL file");
  cmd->add_option("--language", o.language,
                  "Keep only samples in this language (case-insensitive)");
  cmd->add_option("--subset-size", o.subset_size,
                  "Seeded random subset size; 0 keeps every sample")
      ->capture_default_str();
  cmd->add_option("--seed", o.seed, "Subset sampling seed")
      ->capture_default_str();
  cmd->add_option("--categories", o.categories,
                  "Comma-separated: reorder,invisible,delete,homoglyph or all")
      ->capture_default_str();
  cmd->add_option("--budgets", o.budgets,
                  "Comma-separated perturbation budgets in percent")
      ->capture_default_str();
  cmd->add_option("--homoglyph-basis", o.homoglyph_basis,
                  "Homoglyph budget basis: subset or prefix")
      ->capture_default_str();
}

HomoglyphBasis ParseBasisOrThrow(const std::string& text) {
  const auto basis = ParseHomoglyphBasis(text);
  if (!basis) {
    throw std::invalid_argument("unknown homoglyph basis \"" + text +
                                "\" (expected subset or prefix)");
  }
  return *basis;
}

std::string ReadStream(std::istream& in) {
  return std::string((std::istreambuf_iterator<char>(in)),
                     std::istreambuf_iterator<char>());
}

std::string ReadFileOrThrow(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::string content = ReadStream(in);
  if (in.bad()) throw std::runtime_error("cannot read " + path.string());
  return content;
}

void WriteFileAtomically(const fs::path& path, const std::string& content) {
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    out << content;
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
  }
  fs::rename(tmp, path);
}

// Loaded tables must outlive the models and campaigns that reference them.
const HomoglyphTable& LoadTable(const std::string& path,
                                std::unique_ptr<HomoglyphTable>& storage) {
  if (path.empty()) return DefaultHomoglyphTable();
  storage = std::make_unique<HomoglyphTable>(
      HomoglyphTable::Parse(ReadFileOrThrow(path)));
  return *storage;
}

std::string NowUtc() {
  const std::time_t now =
      std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string AbsolutePath(const std::string& path) {
  if (path.empty()) return path;
  return fs::absolute(path).lexically_normal().string();
}

std::vector<CodeSample> SelectSamples(const std::string& corpus_path,
                                      const std::string& language,
                                      size_t subset_size, uint64_t seed) {
  if (corpus_path.empty()) throw std::invalid_argument("--corpus is required");
  std::vector<CodeSample> samples = LoadCorpus(fs::path(corpus_path));
  if (!language.empty()) samples = FilterLanguage(samples, language);
  if (samples.empty()) {
    throw std::invalid_argument("corpus " + corpus_path +
                                " has no samples to use");
  }
  if (subset_size > 0) samples = SampleSubset(samples, subset_size, seed);
  return samples;
}

long long BudgetKey(double budget) { return std::llround(budget * 1e6); }

std::vector<long long> BudgetKeys(const std::vector<double>& budgets) {
  std::vector<long long> keys;
  for (double b : budgets) keys.push_back(BudgetKey(b));
  return keys;
}

// perturb ------------------------------------------------------------------

int CmdPerturb(const CorpusOptions& o, const std::string& out_path,
               const std::string& intentional, std::ostream& out) {
  std::unique_ptr<HomoglyphTable> storage;
  const HomoglyphTable& table = LoadTable(intentional, storage);
  const std::vector<Category> categories = ParseCategoryList(o.categories);
  const std::vector<double> budgets = ParseBudgetList(o.budgets);
  const HomoglyphBasis basis = ParseBasisOrThrow(o.homoglyph_basis);
  const std::vector<CodeSample> samples =
      SelectSamples(o.corpus, o.language, o.subset_size, o.seed);

  std::string lines;
  for (const CodeSample& sample : samples) {
    for (Category category : categories) {
      for (double budget : budgets) {
        PerturbedSample perturbed;
        try {
          perturbed = Perturb(sample.code, {category, budget, basis}, table);
        } catch (const std::exception& e) {
          throw std::runtime_error("sample " + sample.id + ", " +
                                   std::string(CategoryName(category)) +
                                   ": " + e.what());
        }
        perturbed.original_id = sample.id;
        lines += PerturbedSampleToJsonLine(perturbed);
        lines += '\n';
      }
    }
  }
  if (out_path.empty() || out_path == "-") {
    out << lines;
  } else {
    WriteFileAtomically(out_path, lines);
  }
  return kExitClean;
}

// scan / sanitize ----------------------------------------------------------

std::string ReadInput(const std::string& path, std::istream& in) {
  if (path.empty() || path == "-") return ReadStream(in);
  return ReadFileOrThrow(path);
}

int VerdictExit(const ScanReport& report) {
  return report.verdict == Verdict::kClean ? kExitClean : kExitSuspicious;
}

int CmdScan(const std::string& path, const std::string& intentional,
            std::istream& in, std::ostream& out) {
  std::unique_ptr<HomoglyphTable> storage;
  const HomoglyphTable& table = LoadTable(intentional, storage);
  const ScanReport report = Scan(ReadInput(path, in), table);
  out << ScanReportToJson(report).dump(2, ' ', true) << '\n';
  return VerdictExit(report);
}

int CmdSanitize(const std::string& path, const std::string& intentional,
                bool print_report, std::istream& in, std::ostream& out,
                std::ostream& err) {
  std::unique_ptr<HomoglyphTable> storage;
  const HomoglyphTable& table = LoadTable(intentional, storage);
  const auto [text, report] = Sanitize(ReadInput(path, in), table);
  out << text;
  if (print_report) err << ScanReportToJson(report).dump(2, ' ', true) << '\n';
  return VerdictExit(report);
}

// eval ---------------------------------------------------------------------

struct EvalOptions {
  CorpusOptions corpus;
  bool mock = false;
  std::string config;
  std::string out;
  std::string intentional;
  std::string manifest;
  size_t parallelism = 0;
  size_t max_prompts = 0;
};

RunManifest ManifestFromFlags(const EvalOptions& o) {
  RunManifest m;
  m.corpus_path = AbsolutePath(o.corpus.corpus);
  m.language = o.corpus.language;
  m.subset_size = o.corpus.subset_size;
  m.seed = o.corpus.seed;
  m.categories = ParseCategoryList(o.corpus.categories);
  m.budgets = ParseBudgetList(o.corpus.budgets);
  m.homoglyph_basis = ParseBasisOrThrow(o.corpus.homoglyph_basis);
  m.mock = o.mock;
  m.intentional_path = AbsolutePath(o.intentional);
  if (!o.mock) {
    m.config_path = AbsolutePath(o.config);
    const ModelConfig config =
        o.config.empty() ? ModelConfig{} : LoadModelConfig(o.config);
    m.model_config = ModelConfigToJson(config);
  }
  return m;
}

int CmdEval(const EvalOptions& o, std::ostream& out, std::ostream& err) {
  RunManifest manifest;
  if (!o.manifest.empty()) {
    manifest = RunManifestFromJson(
        nlohmann::json::parse(ReadFileOrThrow(o.manifest)));
  } else {
    manifest = ManifestFromFlags(o);
  }
  const std::string out_dir =
      !o.out.empty() ? o.out : manifest.output_dir;
  if (out_dir.empty()) throw std::invalid_argument("--out is required");
  manifest.output_dir = AbsolutePath(out_dir);

  std::unique_ptr<HomoglyphTable> storage;
  const HomoglyphTable& table = LoadTable(manifest.intentional_path, storage);

  // Credentials are checked before anything touches the output directory.
  std::unique_ptr<ChatModel> model;
  ModelConfig config;
  if (manifest.mock) {
    model = std::make_unique<MockChatModel>(table);
  } else {
    config = ModelConfigFromJson(manifest.model_config);
    model = RemoteChatModel::FromEnvironment(config, MakeHttplibTransport());
  }

  const std::vector<CodeSample> subset =
      SelectSamples(manifest.corpus_path, manifest.language,
                    manifest.subset_size, manifest.seed);

  fs::create_directories(manifest.output_dir);
  const fs::path manifest_path = fs::path(manifest.output_dir) / kManifestFile;
  const std::string now = NowUtc();
  manifest.created_at = now;
  if (fs::exists(manifest_path)) {
    const RunManifest existing = RunManifestFromJson(
        nlohmann::json::parse(ReadFileOrThrow(manifest_path)));
    if (!existing.SameRun(manifest)) {
      throw std::invalid_argument(
          "output directory " + manifest.output_dir +
          " belongs to a different run; use a fresh --out");
    }
    manifest.created_at = existing.created_at;
  }
  manifest.updated_at = now;
  WriteFileAtomically(manifest_path,
                      RunManifestToJson(manifest).dump(2) + "\n");

  CampaignOptions options;
  options.categories = manifest.categories;
  options.budgets = manifest.budgets;
  options.homoglyph_basis = manifest.homoglyph_basis;
  options.parallelism =
      o.parallelism > 0
          ? o.parallelism
          : (manifest.mock ? 1 : static_cast<size_t>(
                                     std::max(1, config.parallelism)));
  if (o.max_prompts > 0) options.max_prompts = o.max_prompts;

  const CampaignSummary summary =
      RunCampaign(subset, options, *model, table,
                  fs::path(manifest.output_dir) / kResultsFile);
  out << "records: " << summary.total << " total, " << summary.skipped
      << " already present, " << summary.issued << " issued, "
      << summary.failed << " failed\n";
  if (!summary.complete()) {
    err << "campaign incomplete; rerun the same command to resume\n";
    return kExitSuspicious;
  }
  return kExitClean;
}

// report -------------------------------------------------------------------

int CmdReport(const std::string& results, const std::string& out_dir,
              const std::string& budgets_text, std::ostream& out) {
  fs::path results_path = results;
  if (fs::is_directory(results_path)) results_path /= kResultsFile;
  if (!fs::exists(results_path)) {
    throw std::runtime_error("results file " + results_path.string() +
                             " does not exist");
  }
  const std::vector<ResultRecord> records = ReadResults(results_path);
  if (records.empty()) {
    throw std::invalid_argument("results file " + results_path.string() +
                                " is empty");
  }
  const fs::path target =
      out_dir.empty() ? results_path.parent_path() / "report" : fs::path(out_dir);
  const std::vector<double> budgets = ParseBudgetList(budgets_text);
  for (const fs::path& path : WriteReports(records, target, budgets)) {
    out << path.string() << '\n';
  }
  return kExitClean;
}

}  // namespace

bool RunManifest::SameRun(const RunManifest& other) const {
  return corpus_path == other.corpus_path && language == other.language &&
         subset_size == other.subset_size && seed == other.seed &&
         categories == other.categories &&
         BudgetKeys(budgets) == BudgetKeys(other.budgets) &&
         homoglyph_basis == other.homoglyph_basis && mock == other.mock &&
         model_config == other.model_config &&
         intentional_path == other.intentional_path;
}

nlohmann::json RunManifestToJson(const RunManifest& m) {
  nlohmann::json categories = nlohmann::json::array();
  for (Category c : m.categories) categories.push_back(CategoryName(c));
  return {{"corpus_path", m.corpus_path},
          {"language", m.language},
          {"subset_size", m.subset_size},
          {"seed", m.seed},
          {"categories", categories},
          {"budgets", m.budgets},
          {"homoglyph_basis", HomoglyphBasisName(m.homoglyph_basis)},
          {"mock", m.mock},
          {"config_path", m.config_path},
          {"model_config", m.model_config},
          {"intentional_path", m.intentional_path},
          {"output_dir", m.output_dir},
          {"created_at", m.created_at},
          {"updated_at", m.updated_at}};
}

RunManifest RunManifestFromJson(const nlohmann::json& json) {
  RunManifest m;
  m.corpus_path = json.at("corpus_path").get<std::string>();
  m.language = json.value("language", "");
  m.subset_size = json.value("subset_size", size_t{0});
  m.seed = json.at("seed").get<uint64_t>();
  for (const auto& name : json.at("categories")) {
    const auto category = ParseCategory(name.get<std::string>());
    if (!category) {
      throw std::invalid_argument("manifest: unknown category " + name.dump());
    }
    m.categories.push_back(*category);
  }
  m.budgets = json.at("budgets").get<std::vector<double>>();
  m.homoglyph_basis =
      ParseBasisOrThrow(json.value("homoglyph_basis", std::string("subset")));
  m.mock = json.at("mock").get<bool>();
  m.config_path = json.value("config_path", "");
  if (json.contains("model_config")) m.model_config = json["model_config"];
  m.intentional_path = json.value("intentional_path", "");
  m.output_dir = json.value("output_dir", "");
  m.created_at = json.value("created_at", "");
  m.updated_at = json.value("updated_at", "");
  if (!m.mock && m.model_config.is_null()) {
    throw std::invalid_argument("manifest: live run without model_config");
  }
  return m;
}

std::vector<double> ParseBudgetList(const std::string& text) {
  std::vector<double> budgets;
  std::stringstream stream(text);
  std::string item;
  while (std::getline(stream, item, ',')) {
    const std::string trimmed(TrimAsciiWhitespace(item));
    size_t used = 0;
    double percent = 0.0;
    try {
      percent = std::stod(trimmed, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (trimmed.empty() || used != trimmed.size()) {
      throw std::invalid_argument("budget \"" + trimmed +
                                  "\" is not a number");
    }
    if (!(percent >= 0.0 && percent <= 100.0)) {
      throw std::invalid_argument("budget " + trimmed +
                                  "% is outside [0, 100]");
    }
    budgets.push_back(percent / 100.0);
  }
  if (budgets.empty()) throw std::invalid_argument("no budgets given");
  return budgets;
}

std::vector<Category> ParseCategoryList(const std::string& text) {
  if (AsciiLowercase(TrimAsciiWhitespace(text)) == "all") {
    return {kAllCategories.begin(), kAllCategories.end()};
  }
  std::vector<Category> categories;
  std::stringstream stream(text);
  std::string item;
  while (std::getline(stream, item, ',')) {
    const auto category = ParseCategory(TrimAsciiWhitespace(item));
    if (!category) {
      throw std::invalid_argument("unknown category \"" + item + "\"");
    }
    if (std::find(categories.begin(), categories.end(), *category) ==
        categories.end()) {
      categories.push_back(*category);
    }
  }
  if (categories.empty()) throw std::invalid_argument("no categories given");
  return categories;
}

int RunCli(const std::vector<std::string>& args, std::istream& in,
           std::ostream& out, std::ostream& err) {
  CLI::App app{"Imperceptible character perturbations for code-comprehension "
               "evaluation"};
  app.name("unicloak");
  app.require_subcommand(1);

  CorpusOptions perturb_opts;
  std::string perturb_out;
  std::string perturb_intentional;
  CLI::App* perturb =
      app.add_subcommand("perturb", "Write perturbed samples as JSONL");
  AddCorpusOptions(perturb, perturb_opts);
  perturb->add_option("--out", perturb_out, "Output JSONL (default stdout)");
  perturb->add_option("--intentional", perturb_intentional,
                      "Alternative intentional.txt");

  std::string scan_path;
  std::string scan_intentional;
  CLI::App* scan = app.add_subcommand(
      "scan", "Report attack code points; exit 0 clean, 1 suspicious");
  scan->add_option("path", scan_path, "File to scan (default stdin)");
  scan->add_option("--intentional", scan_intentional,
                   "Alternative intentional.txt");

  std::string sanitize_path;
  std::string sanitize_intentional;
  bool sanitize_report = false;
  CLI::App* sanitize = app.add_subcommand(
      "sanitize", "Print the visually rendered, canonicalized text");
  sanitize->add_option("path", sanitize_path, "File to read (default stdin)");
  sanitize->add_option("--intentional", sanitize_intentional,
                       "Alternative intentional.txt");
  sanitize->add_flag("--report", sanitize_report,
                     "Also print the scan report to stderr");

  EvalOptions eval_opts;
  CLI::App* eval =
      app.add_subcommand("eval", "Run or resume an evaluation campaign");
  AddCorpusOptions(eval, eval_opts.corpus);
  eval->add_flag("--mock", eval_opts.mock, "Use the offline mock model");
  eval->add_option("--config", eval_opts.config, "Model config JSON");
  eval->add_option("--out", eval_opts.out, "Campaign output directory");
  eval->add_option("--intentional", eval_opts.intentional,
                   "Alternative intentional.txt");
  eval->add_option("--manifest", eval_opts.manifest,
                   "Rerun the campaign described by a manifest.json");
  eval->add_option("--parallelism", eval_opts.parallelism,
                   "Concurrent prompts (default: config, or 1 for --mock)");
  eval->add_option("--max-prompts", eval_opts.max_prompts,
                   "Stop after issuing this many prompts");

  std::string report_results;
  std::string report_out;
  std::string report_budgets = kDefaultBudgets;
  CLI::App* report =
      app.add_subcommand("report", "Render Markdown and CSV reports");
  report->add_option("results", report_results,
                     "results.jsonl or a campaign directory")
      ->required();
  report->add_option("--out", report_out,
                     "Report directory (default: <results dir>/report)");
  report->add_option("--budgets", report_budgets,
                     "Budget levels that must be present, in percent")
      ->capture_default_str();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitClean : kExitError;
  }

  try {
    if (perturb->parsed()) {
      return CmdPerturb(perturb_opts, perturb_out, perturb_intentional, out);
    }
    if (scan->parsed()) return CmdScan(scan_path, scan_intentional, in, out);
    if (sanitize->parsed()) {
      return CmdSanitize(sanitize_path, sanitize_intentional, sanitize_report,
                         in, out, err);
    }
    if (eval->parsed()) return CmdEval(eval_opts, out, err);
    if (report->parsed()) {
      return CmdReport(report_results, report_out, report_budgets, out);
    }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitError;
  }
  return kExitError;
}

}  // namespace unicloak
