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

#ifndef MCIDX_RETRIEVAL_H_
#define MCIDX_RETRIEVAL_H_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "mcidx/kernels.h"
#include "mcidx/view_kind.h"

namespace mcidx {

// A retrieval unit: a chunk id (or section id) and the text indexed for it.
struct Unit {
  std::string id;
  std::string text;
};

struct ScoredUnit {
  std::string unit_id;
  double score = 0.0;
  int rank = 0;  // 1-based
  std::optional<ViewKind> view;
};

// Lowercased whitespace tokens with punctuation stripped from both edges;
// tokens that become empty are dropped.
std::vector<std::string> tokenize_terms(std::string_view text);

enum class SparseKind { kTfIdf, kBm25 };

std::string_view sparse_kind_name(SparseKind kind);

struct Bm25Params {
  double k1 = 1.5;
  double b = 0.75;
};

// Term statistics over a fixed unit list, plus the per-(unit, term) weights
// the scoring kernel consumes:
//   TF-IDF  tf * idf / ||unit||, idf = ln((1+N)/(1+df)) + 1
//   BM25    idf * f(k1+1) / (f + k1(1 - b + b|d|/avgdl)),
//           idf = ln(1 + (N - df + 0.5)/(df + 0.5))
class SparseIndex {
 public:
  static SparseIndex build(const std::vector<Unit>& units, SparseKind kind,
                           Bm25Params params = {});

  SparseKind kind() const { return kind_; }
  const Bm25Params& params() const { return params_; }
  const std::vector<std::string>& unit_ids() const { return unit_ids_; }
  std::size_t size() const { return unit_ids_.size(); }
  std::size_t num_terms() const { return terms_.size(); }
  const std::vector<std::string>& terms() const { return terms_; }
  std::optional<std::uint32_t> term_id(std::string_view term) const;
  std::size_t df(std::string_view term) const;
  double idf(std::uint32_t term) const { return idf_[term]; }
  std::size_t unit_length(std::size_t unit) const { return unit_lengths_[unit]; }
  double average_length() const { return avg_length_; }
  // Raw term counts, CSR layout matching weights().
  const kernels::CsrMatrix& counts() const { return counts_; }
  const kernels::CsrMatrix& weights() const { return weights_; }

  // Query vector in the index's weighting (TF-IDF: normalized tf-idf; BM25:
  // query term counts). Unknown terms are ignored.
  kernels::DenseQuery vectorize_query(std::string_view query) const;

  // Reassembles an index from stored counts (used by load_index).
  static SparseIndex from_counts(SparseKind kind, Bm25Params params,
                                 std::vector<std::string> unit_ids,
                                 std::vector<std::string> terms,
                                 kernels::CsrMatrix counts,
                                 std::vector<std::uint32_t> unit_lengths);

 private:
  void finalize();

  SparseKind kind_ = SparseKind::kBm25;
  Bm25Params params_;
  std::vector<std::string> unit_ids_;
  std::vector<std::string> terms_;
  std::unordered_map<std::string, std::uint32_t> term_index_;
  std::vector<std::uint32_t> df_;
  std::vector<double> idf_;
  std::vector<std::uint32_t> unit_lengths_;
  double avg_length_ = 0.0;
  kernels::CsrMatrix counts_;   // values are term counts
  kernels::CsrMatrix weights_;  // values per the kind's formula
};

// Raw per-unit scores in index order.
std::vector<double> sparse_scores(const SparseIndex& index, std::string_view query,
                                  kernels::Execution exec = kernels::Execution::kParallel);

// Full ranking: scores non-increasing, ties by ascending corpus position.
std::vector<ScoredUnit> rank_units(const std::vector<std::string>& unit_ids,
                                   const std::vector<double>& scores);

std::vector<ScoredUnit> score_tfidf(const SparseIndex& index, std::string_view query);
std::vector<ScoredUnit> score_bm25(const SparseIndex& index, std::string_view query);

}  // namespace mcidx

#endif  // MCIDX_RETRIEVAL_H_
