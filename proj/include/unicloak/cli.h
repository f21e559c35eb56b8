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

#ifndef UNICLOAK_CLI_H_
#define UNICLOAK_CLI_H_

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "unicloak/perturb.h"

namespace unicloak {

// Exit codes shared by every subcommand. For eval, kExitSuspicious doubles as
// "campaign incomplete".
inline constexpr int kExitClean = 0;
inline constexpr int kExitSuspicious = 1;
inline constexpr int kExitError = 2;

// Everything needed to rerun a campaign. Written to manifest.json in the
// output directory.
struct RunManifest {
  std::string corpus_path;
  std::string language;  // empty: no language filter
  size_t subset_size = 0;  // 0: the whole (filtered) corpus
  uint64_t seed = 0;
  std::vector<Category> categories;
  std::vector<double> budgets;
  HomoglyphBasis homoglyph_basis = HomoglyphBasis::kSubstitutableSubset;
  bool mock = false;
  std::string config_path;       // empty for mock runs or built-in defaults
  nlohmann::json model_config;   // resolved model configuration, null if mock
  std::string intentional_path;  // empty: vendored table
  std::string output_dir;
  std::string created_at;  // UTC, ISO 8601
  std::string updated_at;

  // True when both manifests describe the same grid, inputs and model.
  bool SameRun(const RunManifest& other) const;
};

nlohmann::json RunManifestToJson(const RunManifest& manifest);
RunManifest RunManifestFromJson(const nlohmann::json& json);

// Parses "20,40,60,80,100" (percent) into fractions. Throws
// std::invalid_argument on an empty list or a value outside [0, 100].
std::vector<double> ParseBudgetList(const std::string& text);

// Parses a comma-separated category list; "all" selects every category.
std::vector<Category> ParseCategoryList(const std::string& text);

// Runs the command line `args` (without the program name). Reads stdin from
// `in` where a subcommand accepts it.
int RunCli(const std::vector<std::string>& args, std::istream& in,
           std::ostream& out, std::ostream& err);

}  // namespace unicloak

#endif  // UNICLOAK_CLI_H_
