// Copyright 2026 The mcidx Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef MCIDX_LLM_H_
#define MCIDX_LLM_H_

#include <atomic>
#include <chrono>
#include <functional>
#include <memory>
#include <string>

#include "mcidx/http.h"

namespace mcidx {

// A text generation endpoint. generate() returns the completion or throws
// ProviderError; implementations must be safe to call from several threads.
class LlmClient {
 public:
  virtual ~LlmClient() = default;

  virtual std::string generate(const std::string& prompt, int max_tokens) = 0;
  virtual std::string identity() const = 0;
};

// POST {base_url}/generate {"prompt","max_tokens"} -> {"text"}.
class HttpLlmClient : public LlmClient {
 public:
  explicit HttpLlmClient(ProviderConfig config);

  std::string generate(const std::string& prompt, int max_tokens) override;
  std::string identity() const override;

 private:
  JsonPoster poster_;
};

// Reads MCIDX_LLM_URL and MCIDX_LLM_API_KEY. Throws ProviderError when the
// URL is unset.
ProviderConfig llm_config_from_env();

// Adapts a callable; counts calls. Handy for offline runs and tests.
class CallbackLlmClient : public LlmClient {
 public:
  using Callback = std::function<std::string(const std::string& prompt, int max_tokens)>;

  explicit CallbackLlmClient(Callback callback, std::string identity = "callback");

  std::string generate(const std::string& prompt, int max_tokens) override;
  std::string identity() const override { return identity_; }
  int calls() const { return calls_.load(); }

 private:
  Callback callback_;
  std::string identity_;
  std::atomic<int> calls_{0};
};

// Completion budgets sent as max_tokens.
inline constexpr int kSummaryMaxTokens = 400;
inline constexpr int kKeywordsMaxTokens = 300;
inline constexpr int kQuestionsMaxTokens = 2048;
inline constexpr int kAnswerMaxTokens = 512;
inline constexpr int kJudgeMaxTokens = 1024;

}  // namespace mcidx

#endif  // MCIDX_LLM_H_
