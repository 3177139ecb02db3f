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

#include <gtest/gtest.h>

#include <algorithm>
#include <atomic>
#include <mutex>
#include <thread>

#include "httplib.h"
#include "mcidx/embedding.h"
#include "mcidx/errors.h"
#include "mcidx/llm.h"

namespace mcidx {
namespace {

using nlohmann::json;

// A loopback server on an ephemeral port, stopped on destruction.
class LocalServer {
 public:
  LocalServer() = default;
  ~LocalServer() {
    server.stop();
    if (thread_.joinable()) thread_.join();
  }

  void start() {
    port_ = server.bind_to_any_port("127.0.0.1");
    ASSERT_GT(port_, 0);
    thread_ = std::thread([this] { server.listen_after_bind(); });
    server.wait_until_ready();
  }

  std::string url(const std::string& prefix = "") const {
    return "http://127.0.0.1:" + std::to_string(port_) + prefix;
  }

  httplib::Server server;

 private:
  int port_ = 0;
  std::thread thread_;
};

ProviderConfig fast_config(const std::string& url) {
  ProviderConfig config;
  config.base_url = url;
  config.timeout = std::chrono::milliseconds(5000);
  config.retry.max_retries = 2;
  config.retry.initial_backoff = std::chrono::milliseconds(1);
  config.retry.max_backoff = std::chrono::milliseconds(2);
  return config;
}

ProviderError::Reason failure_reason(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const ProviderError& e) {
    return e.reason();
  }
  ADD_FAILURE() << "no ProviderError";
  return ProviderError::Reason::kNetwork;
}

TEST(Url, SplitsOriginAndPrefix) {
  EXPECT_EQ(parse_base_url("http://h:8080").origin, "http://h:8080");
  EXPECT_EQ(parse_base_url("http://h:8080").path, "");
  EXPECT_EQ(parse_base_url("https://h/v1/").path, "/v1");
  EXPECT_THROW(parse_base_url("h:8080"), Error);
  EXPECT_THROW(parse_base_url("ftp://h"), Error);
  EXPECT_THROW(parse_base_url("http://"), Error);
}

TEST(Retry, BackoffGrowsAndCaps) {
  RetryPolicy p;
  EXPECT_EQ(p.backoff(1).count(), 200);
  EXPECT_EQ(p.backoff(2).count(), 400);
  EXPECT_EQ(p.backoff(3).count(), 800);
  EXPECT_EQ(p.backoff(10).count(), 5000);
}

TEST(LlmClient, GenerateContract) {
  LocalServer srv;
  json seen;
  std::string auth;
  srv.server.Post("/api/generate", [&](const httplib::Request& req, httplib::Response& res) {
    seen = json::parse(req.body);
    auth = req.get_header_value("Authorization");
    res.set_content(R"({"text": "hello there"})", "application/json");
  });
  srv.start();
  ProviderConfig config = fast_config(srv.url("/api/"));
  config.api_key = "sk-test";
  HttpLlmClient llm(config);
  EXPECT_EQ(llm.generate("Say hi", 17), "hello there");
  EXPECT_EQ(seen["prompt"], "Say hi");
  EXPECT_EQ(seen["max_tokens"], 17);
  EXPECT_EQ(auth, "Bearer sk-test");
}

TEST(LlmClient, NoKeyNoHeader) {
  LocalServer srv;
  bool has_auth = true;
  srv.server.Post("/generate", [&](const httplib::Request& req, httplib::Response& res) {
    has_auth = req.has_header("Authorization");
    res.set_content(R"({"text": ""})", "application/json");
  });
  srv.start();
  HttpLlmClient llm(fast_config(srv.url()));
  EXPECT_EQ(llm.generate("x", 1), "");
  EXPECT_FALSE(has_auth);
}

TEST(LlmClient, MissingTextIsBadResponse) {
  LocalServer srv;
  srv.server.Post("/generate", [](const httplib::Request&, httplib::Response& res) {
    res.set_content(R"({"output": "hi"})", "application/json");
  });
  srv.start();
  HttpLlmClient llm(fast_config(srv.url()));
  EXPECT_EQ(failure_reason([&] { llm.generate("x", 1); }),
            ProviderError::Reason::kBadResponse);
}

TEST(Poster, RetriesTransientStatus) {
  LocalServer srv;
  std::atomic<int> hits{0};
  srv.server.Post("/generate", [&](const httplib::Request&, httplib::Response& res) {
    if (++hits < 3) {
      res.status = hits == 1 ? 503 : 429;
      return;
    }
    res.set_content(R"({"text": "ok"})", "application/json");
  });
  srv.start();
  HttpLlmClient llm(fast_config(srv.url()));
  EXPECT_EQ(llm.generate("x", 1), "ok");
  EXPECT_EQ(hits.load(), 3);
}

TEST(Poster, ClientErrorFailsAtOnce) {
  LocalServer srv;
  std::atomic<int> hits{0};
  srv.server.Post("/generate", [&](const httplib::Request&, httplib::Response& res) {
    ++hits;
    res.status = 400;
  });
  srv.start();
  JsonPoster poster(fast_config(srv.url()));
  try {
    poster.post("/generate", json::object());
    FAIL();
  } catch (const ProviderError& e) {
    EXPECT_EQ(e.reason(), ProviderError::Reason::kHttpStatus);
    EXPECT_EQ(e.http_status(), 400);
    EXPECT_EQ(e.code(), ErrorCode::kProvider);
  }
  EXPECT_EQ(hits.load(), 1);
}

TEST(Poster, GivesUpAfterMaxRetries) {
  LocalServer srv;
  std::atomic<int> hits{0};
  srv.server.Post("/generate", [&](const httplib::Request&, httplib::Response& res) {
    ++hits;
    res.status = 500;
  });
  srv.start();
  JsonPoster poster(fast_config(srv.url()));
  EXPECT_EQ(failure_reason([&] { poster.post("/generate", json::object()); }),
            ProviderError::Reason::kRetriesExhausted);
  EXPECT_EQ(hits.load(), 3);
}

TEST(Poster, NonJsonBody) {
  LocalServer srv;
  srv.server.Post("/generate", [](const httplib::Request&, httplib::Response& res) {
    res.set_content("<html>oops</html>", "text/html");
  });
  srv.start();
  JsonPoster poster(fast_config(srv.url()));
  EXPECT_EQ(failure_reason([&] { poster.post("/generate", json::object()); }),
            ProviderError::Reason::kBadResponse);
}

TEST(Poster, BoundsConcurrentRequests) {
  LocalServer srv;
  std::atomic<int> active{0};
  std::atomic<int> peak{0};
  srv.server.Post("/generate", [&](const httplib::Request&, httplib::Response& res) {
    const int now = ++active;
    int prev = peak.load();
    while (now > prev && !peak.compare_exchange_weak(prev, now)) {
    }
    std::this_thread::sleep_for(std::chrono::milliseconds(30));
    --active;
    res.set_content(R"({"text": "ok"})", "application/json");
  });
  srv.start();
  ProviderConfig config = fast_config(srv.url());
  config.max_in_flight = 2;
  HttpLlmClient llm(config);
  std::vector<std::thread> workers;
  for (int i = 0; i < 6; ++i) workers.emplace_back([&] { llm.generate("x", 1); });
  for (auto& w : workers) w.join();
  EXPECT_LE(peak.load(), 2);
  EXPECT_GE(peak.load(), 1);
}

TEST(EmbeddingProvider, EmbedContract) {
  LocalServer srv;
  std::vector<std::size_t> batch_sizes;
  std::mutex mu;
  srv.server.Post("/embed", [&](const httplib::Request& req, httplib::Response& res) {
    const json body = json::parse(req.body);
    json vectors = json::array();
    for (const auto& t : body["texts"]) {
      const double len = static_cast<double>(t.get<std::string>().size());
      vectors.push_back({len, 1.0, 0.0});
    }
    {
      std::lock_guard<std::mutex> lock(mu);
      batch_sizes.push_back(body["texts"].size());
    }
    res.set_content(json{{"vectors", vectors}, {"model", "toy"}}.dump(), "application/json");
  });
  srv.start();
  HttpEmbeddingProvider provider(fast_config(srv.url()), "toy");
  std::vector<std::string> texts;
  for (int i = 0; i < 40; ++i) texts.push_back(std::string(static_cast<std::size_t>(i), 'x'));
  const EmbeddingMatrix m = embed(texts, provider);
  EXPECT_EQ(m.rows, 40u);
  EXPECT_EQ(m.dim, 3u);
  std::sort(batch_sizes.begin(), batch_sizes.end());
  EXPECT_EQ(batch_sizes, (std::vector<std::size_t>{8, 32}));
  EXPECT_FLOAT_EQ(m.row(0)[1], 1.0f);
  EXPECT_NEAR(m.row(3)[0], 3.0 / std::sqrt(10.0), 1e-6);
}

TEST(EmbeddingProvider, WrongVectorCount) {
  LocalServer srv;
  srv.server.Post("/embed", [](const httplib::Request&, httplib::Response& res) {
    res.set_content(R"({"vectors": [[1, 0]]})", "application/json");
  });
  srv.start();
  HttpEmbeddingProvider provider(fast_config(srv.url()), "toy");
  EXPECT_EQ(failure_reason([&] { provider.embed_batch({"a", "b"}); }),
            ProviderError::Reason::kBadResponse);
}

TEST(Poster, UnreachableHost) {
  ProviderConfig config = fast_config("http://127.0.0.1:1");
  config.retry.max_retries = 0;
  JsonPoster poster(config);
  EXPECT_EQ(failure_reason([&] { poster.post("/generate", json::object()); }),
            ProviderError::Reason::kRetriesExhausted);
}

}  // namespace
}  // namespace mcidx
