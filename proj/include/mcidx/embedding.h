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

#ifndef MCIDX_EMBEDDING_H_
#define MCIDX_EMBEDDING_H_

#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "mcidx/http.h"
#include "mcidx/kernels.h"
#include "mcidx/retrieval.h"

namespace mcidx {

inline constexpr std::size_t kEmbedBatchSize = 32;
inline constexpr std::size_t kEmbedMaxTokens = 512;

// A single-vector text encoder. embed_batch() receives at most
// kEmbedBatchSize texts and returns one raw (unnormalized) row per text.
class EmbeddingProvider {
 public:
  virtual ~EmbeddingProvider() = default;

  virtual std::vector<std::vector<float>> embed_batch(
      const std::vector<std::string>& texts) = 0;
  // Recorded in index manifests; queries must use the same identity.
  virtual std::string identity() const = 0;
};

// Feature-hashes term counts (FNV-1a 64 of each tokenize_terms() term) into
// `dim` buckets. Deterministic and offline.
class HashingEmbeddingProvider : public EmbeddingProvider {
 public:
  explicit HashingEmbeddingProvider(std::size_t dim = 256, std::string identity = "mock");

  std::vector<std::vector<float>> embed_batch(const std::vector<std::string>& texts) override;
  std::string identity() const override { return identity_; }
  std::size_t dim() const { return dim_; }

  static std::uint64_t fnv1a(std::string_view s);

 private:
  std::size_t dim_;
  std::string identity_;
};

// POST {base_url}/embed {"texts"} -> {"vectors", "model"}.
class HttpEmbeddingProvider : public EmbeddingProvider {
 public:
  HttpEmbeddingProvider(ProviderConfig config, std::string identity);

  std::vector<std::vector<float>> embed_batch(const std::vector<std::string>& texts) override;
  std::string identity() const override { return identity_; }

 private:
  JsonPoster poster_;
  std::string identity_;
};

// Reads MCIDX_EMBED_URL. Throws ProviderError when unset.
ProviderConfig embed_config_from_env();

// "mock" gives the hashing provider; any other name goes over HTTP.
std::unique_ptr<EmbeddingProvider> make_embedding_provider(const std::string& name);

// Row-major matrix of L2-normalized rows.
struct EmbeddingMatrix {
  std::size_t rows = 0;
  std::size_t dim = 0;
  std::vector<float> data;
  std::size_t truncated = 0;  // inputs cut to kEmbedMaxTokens

  std::span<const float> row(std::size_t r) const {
    return {data.data() + r * dim, dim};
  }
};

// Truncates each text to kEmbedMaxTokens whitespace tokens, sends batches of
// kEmbedBatchSize, checks every row has one dimension and normalizes rows.
// An all-zero row is kept as zeros.
EmbeddingMatrix embed(const std::vector<std::string>& texts, EmbeddingProvider& provider);

class DenseIndex {
 public:
  static DenseIndex build(const std::vector<Unit>& units, EmbeddingProvider& provider);
  static DenseIndex from_parts(std::vector<std::string> unit_ids, std::string provider,
                               std::size_t dim, std::vector<float> matrix);

  const std::vector<std::string>& unit_ids() const { return unit_ids_; }
  std::size_t size() const { return unit_ids_.size(); }
  std::size_t dim() const { return dim_; }
  const std::string& provider() const { return provider_; }
  const std::vector<float>& matrix() const { return matrix_; }

 private:
  std::vector<std::string> unit_ids_;
  std::string provider_;
  std::size_t dim_ = 0;
  std::vector<float> matrix_;
};

std::vector<double> dense_scores(const DenseIndex& index, std::string_view query,
                                 EmbeddingProvider& provider,
                                 kernels::Execution exec = kernels::Execution::kParallel);

// Throws kProviderMismatch when `provider` is not the one the index was built with.
std::vector<ScoredUnit> score_dense(const DenseIndex& index, std::string_view query,
                                    EmbeddingProvider& provider);

}  // namespace mcidx

#endif  // MCIDX_EMBEDDING_H_
