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

#ifndef MCIDX_HTTP_H_
#define MCIDX_HTTP_H_

#include <chrono>
#include <memory>
#include <string>

#include "json.hpp"

namespace mcidx {

struct RetryPolicy {
  int max_retries = 3;
  std::chrono::milliseconds initial_backoff{200};
  double multiplier = 2.0;
  std::chrono::milliseconds max_backoff{5000};

  // Delay before retry number `attempt` (1-based).
  std::chrono::milliseconds backoff(int attempt) const;
};

struct ProviderConfig {
  std::string base_url;  // scheme://host[:port][/prefix]
  std::string api_key;   // sent as "Authorization: Bearer <key>" when set
  std::chrono::milliseconds timeout{60000};
  RetryPolicy retry;
  int max_in_flight = 4;
};

struct ParsedUrl {
  std::string origin;  // scheme://host[:port]
  std::string path;    // prefix without trailing slash, possibly empty
};
ParsedUrl parse_base_url(const std::string& url);

// POSTs JSON with retry and a bound on concurrent requests. 408, 429, 5xx and
// transport failures are retried; other non-200 statuses fail immediately.
class JsonPoster {
 public:
  explicit JsonPoster(ProviderConfig config);
  ~JsonPoster();
  JsonPoster(JsonPoster&&) noexcept;
  JsonPoster& operator=(JsonPoster&&) noexcept;

  nlohmann::json post(const std::string& route, const nlohmann::json& body);
  const ProviderConfig& config() const { return config_; }

 private:
  struct Gate;
  ProviderConfig config_;
  ParsedUrl url_;
  std::unique_ptr<Gate> gate_;
};

}  // namespace mcidx

#endif  // MCIDX_HTTP_H_
