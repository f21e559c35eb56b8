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

#include "unicloak/corpus.h"

#include <algorithm>
#include <fstream>
#include <limits>
#include <numeric>
#include <random>

#include "unicloak/utf8.h"

namespace unicloak {
namespace {

std::string RequireString(const nlohmann::json& obj, const char* field,
                          size_t line) {
  const auto it = obj.find(field);
  if (it == obj.end() || it->is_null()) {
    throw CorpusError(line, std::string("missing required field \"") + field +
                                "\"");
  }
  if (!it->is_string()) {
    throw CorpusError(line,
                      std::string("field \"") + field + "\" must be a string");
  }
  return it->get<std::string>();
}

// Uniform integer in [0, bound) without the implementation-defined
// behaviour of std::uniform_int_distribution, so subsets are identical
// across standard libraries.
uint64_t UniformBelow(std::mt19937_64& rng, uint64_t bound) {
  const uint64_t limit = std::numeric_limits<uint64_t>::max() -
                         std::numeric_limits<uint64_t>::max() % bound;
  uint64_t x;
  do {
    x = rng();
  } while (x >= limit);
  return x % bound;
}

}  // namespace

CorpusError::CorpusError(size_t line, const std::string& what)
    : std::runtime_error(line == 0 ? what
                                   : "line " + std::to_string(line) + ": " +
                                         what),
      line_(line) {}

std::string_view DifficultyName(Difficulty difficulty) {
  switch (difficulty) {
    case Difficulty::kEasy:
      return "easy";
    case Difficulty::kMedium:
      return "medium";
    case Difficulty::kHard:
      return "hard";
  }
  return "easy";
}

std::optional<Difficulty> ParseDifficulty(std::string_view name) {
  const std::string lower = AsciiLowercase(TrimAsciiWhitespace(name));
  if (lower == "easy") return Difficulty::kEasy;
  if (lower == "medium") return Difficulty::kMedium;
  if (lower == "hard") return Difficulty::kHard;
  return std::nullopt;
}

std::vector<CodeSample> LoadCorpus(std::istream& in) {
  std::vector<CodeSample> samples;
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (TrimAsciiWhitespace(line).empty()) continue;
    nlohmann::json obj;
    try {
      obj = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
      throw CorpusError(line_no, std::string("malformed JSON: ") + e.what());
    }
    if (!obj.is_object()) throw CorpusError(line_no, "record is not an object");

    CodeSample s;
    const auto id = obj.find("id");
    if (id == obj.end() || id->is_null()) {
      throw CorpusError(line_no, "missing required field \"id\"");
    }
    if (id->is_number_integer()) {
      s.id = std::to_string(id->get<int64_t>());
    } else if (id->is_string()) {
      s.id = id->get<std::string>();
    } else {
      throw CorpusError(line_no, "field \"id\" must be a string or integer");
    }
    s.title = RequireString(obj, "title", line_no);
    const std::string difficulty = RequireString(obj, "difficulty", line_no);
    const auto parsed = ParseDifficulty(difficulty);
    if (!parsed) {
      throw CorpusError(line_no, "unknown difficulty \"" + difficulty + "\"");
    }
    s.difficulty = *parsed;
    s.language = RequireString(obj, "language", line_no);
    s.code = RequireString(obj, "code", line_no);
    s.description = RequireString(obj, "description", line_no);
    if (s.code.empty()) throw CorpusError(line_no, "field \"code\" is empty");
    if (s.description.empty()) {
      throw CorpusError(line_no, "field \"description\" is empty");
    }
    samples.push_back(std::move(s));
  }
  return samples;
}

std::vector<CodeSample> LoadCorpus(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CorpusError(0, "cannot open corpus " + path.string());
  return LoadCorpus(in);
}

nlohmann::json CodeSampleToJson(const CodeSample& sample) {
  return {{"id", sample.id},
          {"title", sample.title},
          {"difficulty", DifficultyName(sample.difficulty)},
          {"language", sample.language},
          {"code", sample.code},
          {"description", sample.description}};
}

std::string CodeSampleToJsonLine(const CodeSample& sample) {
  return CodeSampleToJson(sample).dump(-1, ' ', /*ensure_ascii=*/true);
}

std::vector<CodeSample> FilterLanguage(const std::vector<CodeSample>& samples,
                                       std::string_view language) {
  const std::string wanted = AsciiLowercase(language);
  std::vector<CodeSample> out;
  std::copy_if(samples.begin(), samples.end(), std::back_inserter(out),
               [&](const CodeSample& s) {
                 return AsciiLowercase(s.language) == wanted;
               });
  return out;
}

std::vector<CodeSample> SampleSubset(const std::vector<CodeSample>& samples,
                                     size_t n, uint64_t seed) {
  if (n > samples.size()) {
    throw std::invalid_argument("subset size " + std::to_string(n) +
                                " exceeds corpus size " +
                                std::to_string(samples.size()));
  }
  std::vector<size_t> order(samples.size());
  std::iota(order.begin(), order.end(), size_t{0});
  std::mt19937_64 rng(seed);
  for (size_t i = 0; i < n; ++i) {
    const size_t j = i + UniformBelow(rng, order.size() - i);
    std::swap(order[i], order[j]);
  }
  order.resize(n);
  std::sort(order.begin(), order.end());

  std::vector<CodeSample> out;
  out.reserve(n);
  for (size_t idx : order) out.push_back(samples[idx]);
  return out;
}

}  // namespace unicloak
