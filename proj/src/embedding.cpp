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


#include "mcidx/embedding.h"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <unordered_set>

#include "mcidx/errors.h"
#include "mcidx/text.h"

namespace mcidx {

HashingEmbeddingProvider::HashingEmbeddingProvider(std::size_t dim, std::string identity)
    : dim_(dim), identity_(std::move(identity)) {
  if (dim_ == 0) throw Error(ErrorCode::kInvalidArgument, "embedding dimension must be positive");
}

std::uint64_t HashingEmbeddingProvider::fnv1a(std::string_view s) {
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

std::vector<std::vector<float>> HashingEmbeddingProvider::embed_batch(
    const std::vector<std::string>& texts) {
  std::vector<std::vector<float>> out;
  out.reserve(texts.size());
  for (const std::string& t : texts) {
    std::vector<float> row(dim_, 0.0f);
    for (const std::string& term : tokenize_terms(t)) row[fnv1a(term) % dim_] += 1.0f;
    out.push_back(std::move(row));
  }
  return out;
}

HttpEmbeddingProvider::HttpEmbeddingProvider(ProviderConfig config, std::string identity)
    : poster_(std::move(config)), identity_(std::move(identity)) {}

std::vector<std::vector<float>> HttpEmbeddingProvider::embed_batch(
    const std::vector<std::string>& texts) {
  nlohmann::json response = poster_.post("/embed", {{"texts", texts}});
  if (!response.is_object() || !response.contains("vectors") ||
      !response["vectors"].is_array()) {
    throw ProviderError(ProviderError::Reason::kBadResponse,
                        "embed response lacks a \"vectors\" array");
  }
  const nlohmann::json& vectors = response["vectors"];
  if (vectors.size() != texts.size()) {
    throw ProviderError(ProviderError::Reason::kBadResponse,
                        "embed response has " + std::to_string(vectors.size()) +
                            " vectors for " + std::to_string(texts.size()) + " texts");
  }
  std::vector<std::vector<float>> out;
  out.reserve(vectors.size());
  for (const nlohmann::json& v : vectors) {
    if (!v.is_array()) {
      throw ProviderError(ProviderError::Reason::kBadResponse, "embed vector is not an array");
    }
    std::vector<float> row;
    row.reserve(v.size());
    for (const nlohmann::json& x : v) {
      if (!x.is_number()) {
        throw ProviderError(ProviderError::Reason::kBadResponse, "embed vector holds a non-number");
      }
      row.push_back(x.get<float>());
    }
    out.push_back(std::move(row));
  }
  return out;
}

ProviderConfig embed_config_from_env() {
  ProviderConfig config;
  const char* url = std::getenv("MCIDX_EMBED_URL");
  if (url == nullptr || *url == '\0') {
    throw ProviderError(ProviderError::Reason::kNetwork, "MCIDX_EMBED_URL is not set");
  }
  config.base_url = url;
  return config;
}

std::unique_ptr<EmbeddingProvider> make_embedding_provider(const std::string& name) {
  if (name == "mock") return std::make_unique<HashingEmbeddingProvider>();
  return std::make_unique<HttpEmbeddingProvider>(embed_config_from_env(), name);
}

EmbeddingMatrix embed(const std::vector<std::string>& texts, EmbeddingProvider& provider) {
  EmbeddingMatrix m;
  m.rows = texts.size();
  for (std::size_t begin = 0; begin < texts.size(); begin += kEmbedBatchSize) {
    const std::size_t end = std::min(texts.size(), begin + kEmbedBatchSize);
    std::vector<std::string> batch;
    batch.reserve(end - begin);
    for (std::size_t i = begin; i < end; ++i) {
      bool cut = false;
      batch.push_back(text::truncate_tokens(texts[i], kEmbedMaxTokens, &cut));
      if (cut) ++m.truncated;
    }
    std::vector<std::vector<float>> rows = provider.embed_batch(batch);
    if (rows.size() != batch.size()) {
      throw ProviderError(ProviderError::Reason::kBadResponse,
                          "provider returned " + std::to_string(rows.size()) +
                              " rows for " + std::to_string(batch.size()) + " texts");
    }
    for (const std::vector<float>& row : rows) {
      if (m.dim == 0 && m.data.empty()) {
        if (row.empty()) throw Error(ErrorCode::kDimensionMismatch, "provider returned an empty vector");
        m.dim = row.size();
        m.data.reserve(m.rows * m.dim);
      } else if (row.size() != m.dim) {
        throw Error(ErrorCode::kDimensionMismatch,
                    "row of dimension " + std::to_string(row.size()) + ", expected " +
                        std::to_string(m.dim));
      }
      double norm_sq = 0.0;
      for (float x : row) norm_sq += static_cast<double>(x) * x;
      const double norm = std::sqrt(norm_sq);
      for (float x : row) {
        m.data.push_back(norm > 0.0 ? static_cast<float>(x / norm) : 0.0f);
      }
    }
  }
  return m;
}

DenseIndex DenseIndex::build(const std::vector<Unit>& units, EmbeddingProvider& provider) {
  if (units.empty()) throw Error(ErrorCode::kEmptyCorpus, "no units to index");
  std::vector<std::string> ids;
  std::vector<std::string> texts;
  std::unordered_set<std::string> seen;
  for (const Unit& u : units) {
    if (!seen.insert(u.id).second) {
      throw Error(ErrorCode::kDuplicateId, "unit id \"" + u.id + "\" repeated");
    }
    ids.push_back(u.id);
    texts.push_back(u.text);
  }
  EmbeddingMatrix m = embed(texts, provider);
  return from_parts(std::move(ids), provider.identity(), m.dim, std::move(m.data));
}

DenseIndex DenseIndex::from_parts(std::vector<std::string> unit_ids, std::string provider,
                                  std::size_t dim, std::vector<float> matrix) {
  if (unit_ids.empty()) throw Error(ErrorCode::kEmptyCorpus, "no units to index");
  if (dim == 0 || matrix.size() != unit_ids.size() * dim) {
    throw Error(ErrorCode::kDimensionMismatch, "matrix size does not match units x dim");
  }
  DenseIndex index;
  index.unit_ids_ = std::move(unit_ids);
  index.provider_ = std::move(provider);
  index.dim_ = dim;
  index.matrix_ = std::move(matrix);
  return index;
}

std::vector<double> dense_scores(const DenseIndex& index, std::string_view query,
                                 EmbeddingProvider& provider, kernels::Execution exec) {
  if (provider.identity() != index.provider()) {
    throw Error(ErrorCode::kProviderMismatch,
                "index built with \"" + index.provider() + "\", query uses \"" +
                    provider.identity() + "\"");
  }
  EmbeddingMatrix q = embed({std::string(query)}, provider);
  if (q.dim != index.dim()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "query dimension " + std::to_string(q.dim) + ", index " +
                    std::to_string(index.dim()));
  }
  std::vector<double> scores(index.size(), 0.0);
  kernels::dense_dot(index.matrix(), index.dim(), q.row(0), scores, exec);
  return scores;
}

std::vector<ScoredUnit> score_dense(const DenseIndex& index, std::string_view query,
                                    EmbeddingProvider& provider) {
  return rank_units(index.unit_ids(), dense_scores(index, query, provider));
}

}  // namespace mcidx
