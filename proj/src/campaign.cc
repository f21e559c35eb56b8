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

#include "unicloak/campaign.h"

#include <atomic>
#include <cmath>
#include <condition_variable>
#include <exception>
#include <fstream>
#include <mutex>
#include <set>
#include <thread>
#include <tuple>

namespace unicloak {
namespace {

using RecordKey = std::tuple<std::string, std::string, Category, long long,
                             Variant>;

long long BudgetKey(double budget) { return std::llround(budget * 1e6); }

RecordKey KeyOf(const ResultRecord& r) {
  return {r.model, r.sample_id, r.category, BudgetKey(r.budget), r.variant};
}

struct Job {
  size_t sample = 0;
  Category category = Category::kReorder;
  double budget = 0.0;
  Variant variant = Variant::kClean;
};

struct Outcome {
  PromptRecord prompt;
  ResultRecord record;
};

Outcome RunJob(const Job& job, const CodeSample& sample,
               const CampaignOptions& options, ChatModel& model,
               const HomoglyphTable& table) {
  Outcome out;
  out.record.sample_id = sample.id;
  out.record.model = model.model_id();
  out.record.category = job.category;
  out.record.budget = job.budget;
  out.record.variant = job.variant;

  std::string code = sample.code;
  if (job.variant == Variant::kPerturbed) {
    try {
      code = Perturb(sample.code,
                     {job.category, job.budget, options.homoglyph_basis}, table)
                 .perturbed_text;
    } catch (const std::exception& e) {
      out.record.error = std::string("perturbation failed: ") + e.what();
    }
  }
  out.prompt = BuildPrompt(sample, code);
  out.prompt.category = job.category;
  out.prompt.budget = job.budget;
  out.prompt.variant = job.variant;
  if (out.record.error) return out;

  try {
    const ModelResponse response = model.Send(out.prompt);
    out.record.answer_token = response.answer_token;
    out.record.logprob = response.logprob;
  } catch (const CredentialError&) {
    throw;
  } catch (const std::exception& e) {
    out.record.error = e.what();
  }
  return out;
}

}  // namespace

nlohmann::json ResultRecordToJson(const ResultRecord& record) {
  nlohmann::json json = {{"sample_id", record.sample_id},
                         {"model", record.model},
                         {"category", CategoryName(record.category)},
                         {"budget", record.budget},
                         {"variant", VariantName(record.variant)},
                         {"answer_token", record.answer_token}};
  if (record.error) {
    json["logprob"] = nullptr;
    json["error"] = *record.error;
  } else {
    json["logprob"] = record.logprob;
  }
  return json;
}

ResultRecord ResultRecordFromJson(const nlohmann::json& json) {
  ResultRecord r;
  r.sample_id = json.at("sample_id").get<std::string>();
  r.model = json.at("model").get<std::string>();
  const auto category = ParseCategory(json.at("category").get<std::string>());
  if (!category) {
    throw std::invalid_argument("unknown category " +
                                json.at("category").dump());
  }
  r.category = *category;
  r.budget = json.at("budget").get<double>();
  const std::string variant = json.at("variant").get<std::string>();
  if (variant == "clean") {
    r.variant = Variant::kClean;
  } else if (variant == "perturbed") {
    r.variant = Variant::kPerturbed;
  } else {
    throw std::invalid_argument("unknown variant \"" + variant + "\"");
  }
  r.answer_token = json.value("answer_token", "");
  if (json.contains("error") && !json["error"].is_null()) {
    r.error = json["error"].get<std::string>();
  }
  const auto& logprob = json.at("logprob");
  if (logprob.is_number()) {
    r.logprob = logprob.get<double>();
  } else if (!r.error) {
    throw std::invalid_argument("record without error has no logprob");
  }
  return r;
}

std::vector<ResultRecord> ReadResults(const std::filesystem::path& path) {
  std::vector<ResultRecord> records;
  std::ifstream in(path, std::ios::binary);
  if (!in) return records;
  const std::string content((std::istreambuf_iterator<char>(in)),
                            std::istreambuf_iterator<char>());
  size_t pos = 0;
  size_t line_no = 0;
  while (pos < content.size()) {
    size_t end = content.find('\n', pos);
    const bool terminated = end != std::string::npos;
    if (!terminated) end = content.size();
    const std::string_view line(content.data() + pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string_view::npos) continue;
    try {
      records.push_back(ResultRecordFromJson(nlohmann::json::parse(line)));
    } catch (const std::exception& e) {
      if (!terminated) break;  // torn final write
      throw std::runtime_error(path.string() + ":" + std::to_string(line_no) +
                               ": " + e.what());
    }
  }
  return records;
}

CampaignSummary RunCampaign(const std::vector<CodeSample>& subset,
                            const CampaignOptions& options, ChatModel& model,
                            const HomoglyphTable& table,
                            const std::filesystem::path& results_path,
                            const CampaignObserver& observer) {
  if (subset.empty()) throw std::invalid_argument("campaign subset is empty");

  std::set<RecordKey> done;
  for (const ResultRecord& r : ReadResults(results_path)) {
    if (!r.error) done.insert(KeyOf(r));
  }

  CampaignSummary summary;
  std::vector<Job> pending;
  const std::string model_id = model.model_id();
  for (size_t s = 0; s < subset.size(); ++s) {
    for (Category category : options.categories) {
      for (double budget : options.budgets) {
        for (Variant variant : {Variant::kPerturbed, Variant::kClean}) {
          ++summary.total;
          const RecordKey key{model_id, subset[s].id, category,
                              BudgetKey(budget), variant};
          if (done.contains(key)) {
            ++summary.skipped;
          } else {
            pending.push_back({s, category, budget, variant});
          }
        }
      }
    }
  }
  if (options.max_prompts && pending.size() > *options.max_prompts) {
    pending.resize(*options.max_prompts);
  }
  if (pending.empty()) return summary;

  std::ofstream out(results_path, std::ios::app | std::ios::binary);
  if (!out) {
    throw std::runtime_error("cannot open results file " +
                             results_path.string());
  }

  std::vector<std::optional<Outcome>> outcomes(pending.size());
  std::mutex mu;
  std::condition_variable ready;
  std::atomic<size_t> next{0};
  std::atomic<bool> abort{false};
  std::exception_ptr fatal;

  auto worker = [&] {
    for (;;) {
      if (abort.load()) return;
      const size_t i = next.fetch_add(1);
      if (i >= pending.size()) return;
      const Job& job = pending[i];
      try {
        Outcome outcome =
            RunJob(job, subset[job.sample], options, model, table);
        std::lock_guard lock(mu);
        outcomes[i] = std::move(outcome);
      } catch (...) {
        std::lock_guard lock(mu);
        if (!fatal) fatal = std::current_exception();
        abort.store(true);
      }
      ready.notify_all();
    }
  };

  const size_t threads = std::max<size_t>(
      1, std::min(options.parallelism, pending.size()));
  std::vector<std::jthread> pool;
  pool.reserve(threads);
  for (size_t t = 0; t < threads; ++t) pool.emplace_back(worker);

  for (size_t i = 0; i < pending.size(); ++i) {
    std::unique_lock lock(mu);
    ready.wait(lock, [&] { return outcomes[i].has_value() || abort.load(); });
    if (!outcomes[i]) break;
    Outcome outcome = std::move(*outcomes[i]);
    outcomes[i].reset();
    lock.unlock();

    out << ResultRecordToJson(outcome.record).dump(-1, ' ', true) << '\n';
    out.flush();
    ++summary.issued;
    if (outcome.record.error) ++summary.failed;
    if (observer) observer(outcome.prompt, outcome.record);
  }
  pool.clear();
  if (fatal) std::rethrow_exception(fatal);
  return summary;
}

}  // namespace unicloak
