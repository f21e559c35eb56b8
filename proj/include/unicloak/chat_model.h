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

#ifndef UNICLOAK_CHAT_MODEL_H_
#define UNICLOAK_CHAT_MODEL_H_

#include <chrono>
#include <filesystem>
#include <functional>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "json.hpp"
#include "unicloak/prompt.h"
#include "unicloak/unicode_tables.h"

namespace unicloak {

struct ModelResponse {
  std::string answer_token;
  double logprob = 0.0;  // natural log; always <= 0
  std::string model_id;
  std::string raw_payload;
};

struct ModelConfig {
  // Protocol constants: a single output token, greedy decoding, logprobs on.
  static constexpr int kMaxOutputTokens = 1;
  static constexpr double kTemperature = 0.0;
  static constexpr bool kLogprobsEnabled = true;

  std::string model_id = "gpt-3.5-turbo-0125";
  std::string endpoint = "https://api.openai.com/v1/chat/completions";
  std::chrono::milliseconds request_timeout{60000};
  int max_retries = 5;
  int parallelism = 4;
  double requests_per_minute = 500;  // <= 0 disables rate limiting
  std::chrono::milliseconds initial_backoff{1000};
  std::string api_key_env = "OPENAI_API_KEY";
};

// Keys: model, endpoint, rpm, parallelism, timeout (seconds), retries,
// backoff_ms, api_key_env. Unknown keys are rejected.
ModelConfig ModelConfigFromJson(const nlohmann::json& json);
ModelConfig LoadModelConfig(const std::filesystem::path& path);
nlohmann::json ModelConfigToJson(const ModelConfig& config);

class CredentialError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};
class TransportError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};
class ProtocolError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Request body for a chat-completions endpoint.
nlohmann::json BuildRequestBody(const PromptRecord& prompt,
                                const ModelConfig& config);

// Reads choices[0].logprobs.content[0].{token,logprob}. Throws ProtocolError
// if logprobs are missing or malformed.
ModelResponse ParseChatResponse(std::string_view body);

struct HttpResponse {
  int status = 0;     // 0 when no HTTP response was received
  std::string body;
  std::string error;  // transport failure description when status == 0
};

using HttpHeaders = std::vector<std::pair<std::string, std::string>>;

class HttpTransport {
 public:
  virtual ~HttpTransport() = default;
  virtual HttpResponse Post(const std::string& url, const HttpHeaders& headers,
                            const std::string& body,
                            std::chrono::milliseconds timeout) = 0;
};

// cpp-httplib backed transport; supports http:// and https:// URLs.
std::unique_ptr<HttpTransport> MakeHttplibTransport();

// Token bucket refilled continuously at `per_minute` tokens per minute with
// a burst of one minute's worth. Thread-safe.
class RateLimiter {
 public:
  explicit RateLimiter(double per_minute);
  void Acquire();

 private:
  double per_minute_;
  double tokens_;
  std::chrono::steady_clock::time_point last_;
  std::mutex mu_;
};

// A model that answers one prompt. Implementations must be safe to call from
// several threads at once.
class ChatModel {
 public:
  virtual ~ChatModel() = default;
  virtual std::string model_id() const = 0;
  virtual ModelResponse Send(const PromptRecord& prompt) = 0;
};

// Hosted model over the chat-completions wire protocol.
class RemoteChatModel : public ChatModel {
 public:
  using Sleeper = std::function<void(std::chrono::milliseconds)>;

  RemoteChatModel(ModelConfig config, std::string api_key,
                  std::unique_ptr<HttpTransport> transport,
                  Sleeper sleeper = nullptr);

  // Reads the API key from config.api_key_env; throws CredentialError when
  // the variable is unset or empty.
  static std::unique_ptr<RemoteChatModel> FromEnvironment(
      ModelConfig config, std::unique_ptr<HttpTransport> transport);

  std::string model_id() const override { return config_.model_id; }

  // Retries 429, 5xx and connection failures with exponential backoff up to
  // max_retries; 401/403 raise CredentialError immediately.
  ModelResponse Send(const PromptRecord& prompt) override;

 private:
  ModelConfig config_;
  std::string api_key_;
  std::unique_ptr<HttpTransport> transport_;
  Sleeper sleeper_;
  RateLimiter limiter_;
};

// Offline stand-in. With r the share of non-Plain code points in the code
// message, p_yes = clamp(1 - 2r, 0.02, 0.98); the answer is "Yes" when
// p_yes >= 0.5 and the logprob is ln(max(p_yes, 1 - p_yes)).
ModelResponse MockSend(const PromptRecord& prompt, const HomoglyphTable& table);

class MockChatModel : public ChatModel {
 public:
  static constexpr std::string_view kModelId = "mock";

  explicit MockChatModel(const HomoglyphTable& table) : table_(table) {}
  std::string model_id() const override { return std::string(kModelId); }
  ModelResponse Send(const PromptRecord& prompt) override {
    return MockSend(prompt, table_);
  }

 private:
  const HomoglyphTable& table_;
};

}  // namespace unicloak

#endif  // UNICLOAK_CHAT_MODEL_H_
