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

#include "unicloak/chat_model.h"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <thread>

#include "unicloak/utf8.h"

namespace unicloak {
namespace {

bool IsTransient(int status) {
  return status == 0 || status == 408 || status == 429 || status >= 500;
}

std::string Truncate(std::string_view s, size_t max) {
  if (s.size() <= max) return std::string(s);
  return std::string(s.substr(0, max)) + "...";
}

}  // namespace

ModelConfig ModelConfigFromJson(const nlohmann::json& json) {
  if (!json.is_object()) {
    throw std::invalid_argument("model config must be a JSON object");
  }
  ModelConfig config;
  for (const auto& [key, value] : json.items()) {
    if (key == "model") {
      config.model_id = value.get<std::string>();
    } else if (key == "endpoint") {
      config.endpoint = value.get<std::string>();
    } else if (key == "rpm") {
      config.requests_per_minute = value.get<double>();
    } else if (key == "parallelism") {
      config.parallelism = value.get<int>();
    } else if (key == "timeout") {
      config.request_timeout = std::chrono::milliseconds(
          static_cast<int64_t>(std::llround(value.get<double>() * 1000.0)));
    } else if (key == "retries") {
      config.max_retries = value.get<int>();
    } else if (key == "backoff_ms") {
      config.initial_backoff = std::chrono::milliseconds(value.get<int64_t>());
    } else if (key == "api_key_env") {
      config.api_key_env = value.get<std::string>();
    } else {
      throw std::invalid_argument("unknown model config key \"" + key + "\"");
    }
  }
  if (config.parallelism < 1) {
    throw std::invalid_argument("parallelism must be at least 1");
  }
  if (config.max_retries < 0) {
    throw std::invalid_argument("retries must be non-negative");
  }
  return config;
}

ModelConfig LoadModelConfig(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config " + path.string());
  nlohmann::json json;
  try {
    json = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw std::runtime_error("malformed config " + path.string() + ": " +
                             e.what());
  }
  return ModelConfigFromJson(json);
}

nlohmann::json ModelConfigToJson(const ModelConfig& config) {
  return {{"model", config.model_id},
          {"endpoint", config.endpoint},
          {"rpm", config.requests_per_minute},
          {"parallelism", config.parallelism},
          {"timeout", config.request_timeout.count() / 1000.0},
          {"retries", config.max_retries},
          {"backoff_ms", config.initial_backoff.count()},
          {"api_key_env", config.api_key_env}};
}

nlohmann::json BuildRequestBody(const PromptRecord& prompt,
                                const ModelConfig& config) {
  nlohmann::json messages = nlohmann::json::array();
  for (const std::string& content : prompt.messages) {
    messages.push_back({{"role", "user"}, {"content", content}});
  }
  return {{"model", config.model_id},
          {"messages", std::move(messages)},
          {"temperature", ModelConfig::kTemperature},
          {"max_tokens", ModelConfig::kMaxOutputTokens},
          {"logprobs", ModelConfig::kLogprobsEnabled},
          {"top_logprobs", 1}};
}

ModelResponse ParseChatResponse(std::string_view body) {
  nlohmann::json json;
  try {
    json = nlohmann::json::parse(body);
  } catch (const nlohmann::json::parse_error& e) {
    throw ProtocolError(std::string("response is not JSON: ") + e.what());
  }
  const nlohmann::json::json_pointer token_ptr(
      "/choices/0/logprobs/content/0/token");
  const nlohmann::json::json_pointer logprob_ptr(
      "/choices/0/logprobs/content/0/logprob");
  if (!json.contains(token_ptr) || !json.contains(logprob_ptr)) {
    throw ProtocolError("response carries no token logprobs");
  }
  const auto& token = json.at(token_ptr);
  const auto& logprob = json.at(logprob_ptr);
  if (!token.is_string() || !logprob.is_number()) {
    throw ProtocolError("malformed token logprob entry");
  }
  ModelResponse response;
  response.answer_token = token.get<std::string>();
  response.logprob = logprob.get<double>();
  if (response.logprob > 0.0 || std::isnan(response.logprob)) {
    throw ProtocolError("logprob must be <= 0, got " +
                        std::to_string(response.logprob));
  }
  if (json.contains("model") && json["model"].is_string()) {
    response.model_id = json["model"].get<std::string>();
  }
  response.raw_payload = std::string(body);
  return response;
}

RateLimiter::RateLimiter(double per_minute)
    : per_minute_(per_minute),
      tokens_(std::max(1.0, per_minute)),
      last_(std::chrono::steady_clock::now()) {}

void RateLimiter::Acquire() {
  if (per_minute_ <= 0.0) return;
  std::unique_lock lock(mu_);
  const double burst = std::max(1.0, per_minute_);
  for (;;) {
    const auto now = std::chrono::steady_clock::now();
    const double minutes =
        std::chrono::duration<double, std::ratio<60>>(now - last_).count();
    tokens_ = std::min(burst, tokens_ + minutes * per_minute_);
    last_ = now;
    if (tokens_ >= 1.0) {
      tokens_ -= 1.0;
      return;
    }
    const double wait_minutes = (1.0 - tokens_) / per_minute_;
    // Sleeping under the lock keeps waiters in FIFO-ish order.
    std::this_thread::sleep_for(
        std::chrono::duration<double, std::ratio<60>>(wait_minutes));
  }
}

RemoteChatModel::RemoteChatModel(ModelConfig config, std::string api_key,
                                 std::unique_ptr<HttpTransport> transport,
                                 Sleeper sleeper)
    : config_(std::move(config)),
      api_key_(std::move(api_key)),
      transport_(std::move(transport)),
      sleeper_(sleeper ? std::move(sleeper)
                       : Sleeper([](std::chrono::milliseconds d) {
                           std::this_thread::sleep_for(d);
                         })),
      limiter_(config_.requests_per_minute) {}

std::unique_ptr<RemoteChatModel> RemoteChatModel::FromEnvironment(
    ModelConfig config, std::unique_ptr<HttpTransport> transport) {
  const char* key = std::getenv(config.api_key_env.c_str());
  if (key == nullptr || *key == '\0') {
    throw CredentialError("environment variable " + config.api_key_env +
                          " is not set");
  }
  return std::make_unique<RemoteChatModel>(std::move(config), key,
                                           std::move(transport));
}

ModelResponse RemoteChatModel::Send(const PromptRecord& prompt) {
  const std::string body = BuildRequestBody(prompt, config_).dump();
  const HttpHeaders headers = {{"Authorization", "Bearer " + api_key_},
                               {"Content-Type", "application/json"}};
  std::string last_error;
  for (int attempt = 0; attempt <= config_.max_retries; ++attempt) {
    if (attempt > 0) sleeper_(config_.initial_backoff * (1LL << (attempt - 1)));
    limiter_.Acquire();
    const HttpResponse response = transport_->Post(
        config_.endpoint, headers, body, config_.request_timeout);
    if (response.status == 200) {
      ModelResponse parsed = ParseChatResponse(response.body);
      if (parsed.model_id.empty()) parsed.model_id = config_.model_id;
      return parsed;
    }
    if (response.status == 401 || response.status == 403) {
      throw CredentialError("endpoint rejected credentials (HTTP " +
                            std::to_string(response.status) +
                            "): " + Truncate(response.body, 200));
    }
    last_error = response.status == 0
                     ? "connection failed: " + response.error
                     : "HTTP " + std::to_string(response.status) + ": " +
                           Truncate(response.body, 200);
    if (!IsTransient(response.status)) throw TransportError(last_error);
  }
  throw TransportError("giving up after " +
                       std::to_string(config_.max_retries + 1) +
                       " attempts; last error: " + last_error);
}

ModelResponse MockSend(const PromptRecord& prompt,
                       const HomoglyphTable& table) {
  const std::u32string code = DecodeUtf8(prompt.code());
  const auto flagged = std::count_if(code.begin(), code.end(), [&](char32_t c) {
    return Classify(c, table) != CodepointClass::kPlain;
  });
  const double r = code.empty() ? 0.0
                                : static_cast<double>(flagged) /
                                      static_cast<double>(code.size());
  const double p_yes = std::clamp(1.0 - 2.0 * r, 0.02, 0.98);

  ModelResponse response;
  response.answer_token = p_yes >= 0.5 ? "Yes" : "No";
  response.logprob = std::log(std::max(p_yes, 1.0 - p_yes));
  response.model_id = std::string(MockChatModel::kModelId);
  response.raw_payload = nlohmann::json{{"p_yes", p_yes}, {"r", r}}.dump();
  return response;
}

}  // namespace unicloak
