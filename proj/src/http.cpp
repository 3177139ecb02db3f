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

#include "mcidx/http.h"

#include <algorithm>
#include <cmath>
#include <semaphore>
#include <thread>

#include "httplib.h"
#include "mcidx/errors.h"

namespace mcidx {

std::chrono::milliseconds RetryPolicy::backoff(int attempt) const {
  double delay = static_cast<double>(initial_backoff.count()) *
                 std::pow(multiplier, std::max(0, attempt - 1));
  delay = std::min(delay, static_cast<double>(max_backoff.count()));
  return std::chrono::milliseconds(static_cast<long long>(delay));
}

ParsedUrl parse_base_url(const std::string& url) {
  const std::size_t scheme_end = url.find("://");
  if (scheme_end == std::string::npos || scheme_end == 0) {
    throw Error(ErrorCode::kInvalidArgument,
                "provider URL must start with http:// or https://: " + url);
  }
  const std::string scheme = url.substr(0, scheme_end);
  if (scheme != "http" && scheme != "https") {
    throw Error(ErrorCode::kInvalidArgument, "unsupported URL scheme: " + url);
  }
  const std::size_t path_start = url.find('/', scheme_end + 3);
  ParsedUrl out;
  out.origin = url.substr(0, path_start);
  if (path_start != std::string::npos) out.path = url.substr(path_start);
  while (!out.path.empty() && out.path.back() == '/') out.path.pop_back();
  if (out.origin.size() <= scheme_end + 3) {
    throw Error(ErrorCode::kInvalidArgument, "provider URL has no host: " + url);
  }
  return out;
}

struct JsonPoster::Gate {
  explicit Gate(int limit) : slots(std::max(1, limit)) {}
  std::counting_semaphore<1024> slots;
};

JsonPoster::JsonPoster(ProviderConfig config)
    : config_(std::move(config)),
      url_(parse_base_url(config_.base_url)),
      gate_(std::make_unique<Gate>(std::min(config_.max_in_flight, 1024))) {}

JsonPoster::~JsonPoster() = default;
JsonPoster::JsonPoster(JsonPoster&&) noexcept = default;
JsonPoster& JsonPoster::operator=(JsonPoster&&) noexcept = default;

namespace {

bool retryable_status(int status) {
  return status == 408 || status == 429 || (status >= 500 && status <= 599);
}

}  // namespace

nlohmann::json JsonPoster::post(const std::string& route,
                                const nlohmann::json& body) {
  const std::string path = url_.path + route;
  const std::string payload = body.dump();
  httplib::Headers headers;
  if (!config_.api_key.empty()) {
    headers.emplace("Authorization", "Bearer " + config_.api_key);
  }

  std::string last_error;
  for (int attempt = 0; attempt <= config_.retry.max_retries; ++attempt) {
    if (attempt > 0) std::this_thread::sleep_for(config_.retry.backoff(attempt));

    int status = 0;
    std::string response_body;
    {
      gate_->slots.acquire();
      struct Release {
        Gate* gate;
        ~Release() { gate->slots.release(); }
      } release{gate_.get()};

      httplib::Client client(url_.origin);
      const auto secs = std::chrono::duration_cast<std::chrono::seconds>(config_.timeout);
      const auto usecs = std::chrono::duration_cast<std::chrono::microseconds>(
          config_.timeout - secs);
      client.set_connection_timeout(secs.count(), usecs.count());
      client.set_read_timeout(secs.count(), usecs.count());
      client.set_write_timeout(secs.count(), usecs.count());
      auto result = client.Post(path, headers, payload, "application/json");
      if (!result) {
        last_error = url_.origin + path + ": " + httplib::to_string(result.error());
        continue;
      }
      status = result->status;
      response_body = result->body;
    }

    if (status == 200) {
      try {
        return nlohmann::json::parse(response_body);
      } catch (const nlohmann::json::exception& e) {
        throw ProviderError(ProviderError::Reason::kBadResponse,
                            url_.origin + path + ": response is not JSON: " + e.what(),
                            status);
      }
    }
    last_error = url_.origin + path + ": HTTP " + std::to_string(status);
    if (!retryable_status(status)) {
      throw ProviderError(ProviderError::Reason::kHttpStatus, last_error, status);
    }
  }
  throw ProviderError(ProviderError::Reason::kRetriesExhausted,
                      last_error + " (after " +
                          std::to_string(config_.retry.max_retries + 1) + " attempts)");
}

}  // namespace mcidx
