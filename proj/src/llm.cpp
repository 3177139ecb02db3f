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

#include "mcidx/llm.h"

#include <cstdlib>

#include "mcidx/errors.h"

namespace mcidx {

HttpLlmClient::HttpLlmClient(ProviderConfig config) : poster_(std::move(config)) {}

std::string HttpLlmClient::generate(const std::string& prompt, int max_tokens) {
  nlohmann::json body = {{"prompt", prompt}, {"max_tokens", max_tokens}};
  nlohmann::json response = poster_.post("/generate", body);
  if (!response.is_object() || !response.contains("text") ||
      !response["text"].is_string()) {
    throw ProviderError(ProviderError::Reason::kBadResponse,
                        "generate response lacks a string \"text\" field");
  }
  return response["text"].get<std::string>();
}

std::string HttpLlmClient::identity() const { return poster_.config().base_url; }

ProviderConfig llm_config_from_env() {
  ProviderConfig config;
  const char* url = std::getenv("MCIDX_LLM_URL");
  if (url == nullptr || *url == '\0') {
    throw ProviderError(ProviderError::Reason::kNetwork,
                        "MCIDX_LLM_URL is not set");
  }
  config.base_url = url;
  if (const char* key = std::getenv("MCIDX_LLM_API_KEY")) config.api_key = key;
  return config;
}

CallbackLlmClient::CallbackLlmClient(Callback callback, std::string identity)
    : callback_(std::move(callback)), identity_(std::move(identity)) {}

std::string CallbackLlmClient::generate(const std::string& prompt, int max_tokens) {
  ++calls_;
  return callback_(prompt, max_tokens);
}

}  // namespace mcidx
