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


#ifndef MCIDX_FUSION_H_
#define MCIDX_FUSION_H_

#include <array>
#include <compare>
#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "mcidx/embedding.h"
#include "mcidx/retrieval.h"
#include "mcidx/view_kind.h"

namespace mcidx {

// Retrieval budget k, stored in halves so 1.5 is exact. Spec strings: "1.5",
// "3", "10".
class RetrievalBudget {
 public:
  constexpr RetrievalBudget() = default;
  static constexpr RetrievalBudget from_halves(int halves) { return RetrievalBudget(halves); }
  static constexpr RetrievalBudget whole(int k) { return RetrievalBudget(2 * k); }
  // Throws kInvalidK on anything but a positive multiple of 0.5.
  static RetrievalBudget parse(std::string_view spec);

  constexpr int halves() const { return halves_; }
  constexpr bool is_whole() const { return halves_ % 2 == 0; }
  constexpr double value() const { return halves_ / 2.0; }
  std::string to_string() const;

  friend constexpr auto operator<=>(const RetrievalBudget&, const RetrievalBudget&) = default;

 private:
  constexpr explicit RetrievalBudget(int halves) : halves_(halves) {}
  int halves_ = 0;
};

// Comma-separated list, e.g. "1.5,3,5,10".
std::vector<RetrievalBudget> parse_budget_list(std::string_view spec);

// Per-view budgets k' for the two question parities.
struct BudgetPlan {
  RetrievalBudget k;
  int per_view_even = 0;
  int per_view_odd = 0;
};

// k=1.5 -> 1; 3 -> 1|2; 5 -> 3; 10 -> 6|7; other k -> floor|ceil(2k/3), at
// least 1. Throws kInvalidK for k < 1.5 or a fractional k other than 1.5.
BudgetPlan plan_budget(RetrievalBudget k);

// The smaller budget goes to even ordinals unless `invert_parity`.
int per_view_budget(RetrievalBudget k, std::size_t question_ordinal, bool invert_parity = false);

// Units a single-view retriever returns: k=1.5 alternates 1|2 by ordinal,
// whole k gives k. Throws kInvalidK for k < 1 or other fractions.
int single_view_budget(RetrievalBudget k, std::size_t question_ordinal,
                       bool invert_parity = false);

// A full ranking over a fixed unit list.
class Ranker {
 public:
  virtual ~Ranker() = default;
  virtual std::vector<ScoredUnit> rank(std::string_view query) const = 0;
  virtual const std::vector<std::string>& unit_ids() const = 0;
};

class SparseRanker : public Ranker {
 public:
  explicit SparseRanker(SparseIndex index) : index_(std::move(index)) {}
  std::vector<ScoredUnit> rank(std::string_view query) const override;
  const std::vector<std::string>& unit_ids() const override { return index_.unit_ids(); }
  const SparseIndex& index() const { return index_; }

 private:
  SparseIndex index_;
};

class DenseRanker : public Ranker {
 public:
  DenseRanker(DenseIndex index, EmbeddingProvider& provider)
      : index_(std::move(index)), provider_(&provider) {}
  std::vector<ScoredUnit> rank(std::string_view query) const override;
  const std::vector<std::string>& unit_ids() const override { return index_.unit_ids(); }
  const DenseIndex& index() const { return index_; }

 private:
  DenseIndex index_;
  EmbeddingProvider* provider_;
};

// Retriever spec: "tfidf", "bm25" or "dense:<provider>".
struct RetrieverSpec {
  enum class Kind { kTfIdf, kBm25, kDense };

  Kind kind = Kind::kBm25;
  std::string provider;  // dense only

  static RetrieverSpec parse(std::string_view spec);
  std::string to_string() const;
  friend bool operator==(const RetrieverSpec&, const RetrieverSpec&) = default;
};

// `provider` is required for dense specs and must outlive the ranker.
std::unique_ptr<Ranker> make_ranker(const RetrieverSpec& spec, const std::vector<Unit>& units,
                                    EmbeddingProvider* provider, Bm25Params params = {});

// Mode spec: "mc" or "single:raw|keywords|summary".
struct Mode {
  enum class Kind { kMultiView, kSingle };

  Kind kind = Kind::kMultiView;
  ViewKind view = ViewKind::kRawText;  // single only

  static Mode mc() { return {}; }
  static Mode single(ViewKind v) { return {Kind::kSingle, v}; }
  static Mode parse(std::string_view spec);
  std::string to_string() const;
  friend bool operator==(const Mode&, const Mode&) = default;
};

// Top-n prefix of the ranking, n = single_view_budget(k, ordinal).
std::vector<ScoredUnit> retrieve_single(const Ranker& ranker, std::string_view query,
                                        RetrievalBudget k, std::size_t question_ordinal,
                                        bool invert_parity = false);

struct FusedUnit {
  std::string unit_id;
  ViewKind emitted_by = ViewKind::kRawText;
  // Rank within each view's top-k' list; unset when the view did not return it.
  std::array<std::optional<int>, 3> view_ranks;

  std::vector<ViewKind> contributing_views() const;
};

struct FusedResult {
  std::vector<FusedUnit> units;
  BudgetPlan plan;
  int per_view = 0;  // k' applied to this question

  std::vector<std::string> unit_ids() const;
};

// Round-robin over the per-view lists in kAllViews order, skipping ids
// already emitted. Lists are used whole.
std::vector<FusedUnit> fuse_rankings(const std::array<std::vector<ScoredUnit>, 3>& per_view);

using ViewRankers = std::array<const Ranker*, 3>;  // indexed by ViewKind

// Throws kViewMismatch when the rankers do not share one unit id set.
FusedResult retrieve_mc(const ViewRankers& views, std::string_view query, RetrievalBudget k,
                        std::size_t question_ordinal, bool invert_parity = false);

}  // namespace mcidx

#endif  // MCIDX_FUSION_H_
