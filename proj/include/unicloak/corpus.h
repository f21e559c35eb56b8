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

#ifndef UNICLOAK_CORPUS_H_
#define UNICLOAK_CORPUS_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <istream>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

namespace unicloak {

enum class Difficulty { kEasy, kMedium, kHard };

std::string_view DifficultyName(Difficulty difficulty);
std::optional<Difficulty> ParseDifficulty(std::string_view name);

// One code/description pair. The ground-truth answer to "does the code match
// the description" is always "Yes".
struct CodeSample {
  std::string id;
  std::string title;
  Difficulty difficulty = Difficulty::kEasy;
  std::string language;
  std::string code;
  std::string description;

  bool operator==(const CodeSample&) const = default;
};

class CorpusError : public std::runtime_error {
 public:
  CorpusError(size_t line, const std::string& what);
  // 1-based JSONL line, 0 when the error is not tied to a line.
  size_t line() const { return line_; }

 private:
  size_t line_;
};

// Reads JSONL with fields id, title, difficulty, language, code, description.
// Blank lines are skipped. Integer ids are accepted and stored as text.
std::vector<CodeSample> LoadCorpus(std::istream& in);
std::vector<CodeSample> LoadCorpus(const std::filesystem::path& path);

nlohmann::json CodeSampleToJson(const CodeSample& sample);
std::string CodeSampleToJsonLine(const CodeSample& sample);

// Case-insensitive exact match on the language field.
std::vector<CodeSample> FilterLanguage(const std::vector<CodeSample>& samples,
                                       std::string_view language);

// Seeded sample of n entries without replacement, returned in corpus order.
// Throws std::invalid_argument when n exceeds the corpus size.
std::vector<CodeSample> SampleSubset(const std::vector<CodeSample>& samples,
                                     size_t n, uint64_t seed);

}  // namespace unicloak

#endif  // UNICLOAK_CORPUS_H_
