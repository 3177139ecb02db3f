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


#include "mcidx/fusion.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <unordered_map>
#include <unordered_set>

#include "mcidx/errors.h"
#include "mcidx/text.h"

namespace mcidx {

RetrievalBudget RetrievalBudget::parse(std::string_view spec) {
  const std::string_view s = text::trim(spec);
  double v = 0.0;
  auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc() || end != s.data() + s.size() || !(v > 0.0) ||
      v > 1e6 || std::floor(2.0 * v) != 2.0 * v) {
    throw Error(ErrorCode::kInvalidK, "budget \"" + std::string(spec) +
                                          "\" is not a positive multiple of 0.5");
  }
  return from_halves(static_cast<int>(2.0 * v));
}

std::string RetrievalBudget::to_string() const {
  std::string out = std::to_string(halves_ / 2);
  if (!is_whole()) out += ".5";
  return out;
}

std::vector<RetrievalBudget> parse_budget_list(std::string_view spec) {
  std::vector<RetrievalBudget> out;
  std::size_t pos = 0;
  while (pos <= spec.size()) {
    std::size_t comma = spec.find(',', pos);
    if (comma == std::string_view::npos) comma = spec.size();
    out.push_back(RetrievalBudget::parse(spec.substr(pos, comma - pos)));
    pos = comma + 1;
  }
  return out;
}

BudgetPlan plan_budget(RetrievalBudget k) {
  if (k < RetrievalBudget::from_halves(3) || (!k.is_whole() && k.halves() != 3)) {
    throw Error(ErrorCode::kInvalidK,
                "k=" + k.to_string() + " is not 1.5 or a whole number of at least 2");
  }
  BudgetPlan plan{k, 0, 0};
  switch (k.halves()) {
    case 3:
      plan.per_view_even = plan.per_view_odd = 1;
      break;
    case 6:
      plan.per_view_even = 1;
      plan.per_view_odd = 2;
      break;
    case 10:
      plan.per_view_even = plan.per_view_odd = 3;
      break;
    case 20:
      plan.per_view_even = 6;
      plan.per_view_odd = 7;
      break;
    default: {
      const int twice_k = k.halves();  // 2k
      plan.per_view_even = std::max(1, twice_k / 3);
      plan.per_view_odd = std::max(1, (twice_k + 2) / 3);
    }
  }
  return plan;
}

namespace {

bool gets_larger(std::size_t ordinal, bool invert_parity) {
  return (ordinal % 2 == 1) != invert_parity;
}

}  // namespace

int per_view_budget(RetrievalBudget k, std::size_t question_ordinal, bool invert_parity) {
  const BudgetPlan plan = plan_budget(k);
  return gets_larger(question_ordinal, invert_parity) ? plan.per_view_odd : plan.per_view_even;
}

int single_view_budget(RetrievalBudget k, std::size_t question_ordinal, bool invert_parity) {
  if (k.halves() == 3) return gets_larger(question_ordinal, invert_parity) ? 2 : 1;
  if (!k.is_whole() || k.halves() < 2) {
    throw Error(ErrorCode::kInvalidK, "k=" + k.to_string() + " is not 1.5 or a whole number");
  }
  return k.halves() / 2;
}

std::vector<ScoredUnit> SparseRanker::rank(std::string_view query) const {
  return rank_units(index_.unit_ids(), sparse_scores(index_, query));
}

std::vector<ScoredUnit> DenseRanker::rank(std::string_view query) const {
  return score_dense(index_, query, *provider_);
}

RetrieverSpec RetrieverSpec::parse(std::string_view spec) {
  if (spec == "tfidf") return {Kind::kTfIdf, ""};
  if (spec == "bm25") return {Kind::kBm25, ""};
  constexpr std::string_view kDense = "dense:";
  if (spec.substr(0, kDense.size()) == kDense && spec.size() > kDense.size()) {
    return {Kind::kDense, std::string(spec.substr(kDense.size()))};
  }
  throw Error(ErrorCode::kInvalidArgument,
              "retriever \"" + std::string(spec) + "\" is not tfidf, bm25 or dense:<provider>");
}

std::string RetrieverSpec::to_string() const {
  switch (kind) {
    case Kind::kTfIdf: return "tfidf";
    case Kind::kBm25: return "bm25";
    case Kind::kDense: return "dense:" + provider;
  }
  return "?";
}

std::unique_ptr<Ranker> make_ranker(const RetrieverSpec& spec, const std::vector<Unit>& units,
                                    EmbeddingProvider* provider, Bm25Params params) {
  switch (spec.kind) {
    case RetrieverSpec::Kind::kTfIdf:
      return std::make_unique<SparseRanker>(SparseIndex::build(units, SparseKind::kTfIdf));
    case RetrieverSpec::Kind::kBm25:
      return std::make_unique<SparseRanker>(SparseIndex::build(units, SparseKind::kBm25, params));
    case RetrieverSpec::Kind::kDense:
      if (provider == nullptr) {
        throw Error(ErrorCode::kInvalidArgument, "dense retriever needs an embedding provider");
      }
      if (provider->identity() != spec.provider) {
        throw Error(ErrorCode::kProviderMismatch, "retriever names \"" + spec.provider +
                                                      "\", provider is \"" +
                                                      provider->identity() + "\"");
      }
      return std::make_unique<DenseRanker>(DenseIndex::build(units, *provider), *provider);
  }
  throw Error(ErrorCode::kInvalidArgument, "unknown retriever kind");
}

Mode Mode::parse(std::string_view spec) {
  if (spec == "mc") return mc();
  constexpr std::string_view kSingle = "single:";
  if (spec.substr(0, kSingle.size()) == kSingle) {
    if (auto v = parse_view_short_name(spec.substr(kSingle.size()))) return single(*v);
  }
  throw Error(ErrorCode::kInvalidArgument,
              "mode \"" + std::string(spec) + "\" is not mc or single:raw|keywords|summary");
}

std::string Mode::to_string() const {
  if (kind == Kind::kMultiView) return "mc";
  return "single:" + std::string(view_short_name(view));
}

std::vector<ScoredUnit> retrieve_single(const Ranker& ranker, std::string_view query,
                                        RetrievalBudget k, std::size_t question_ordinal,
                                        bool invert_parity) {
  const auto n = static_cast<std::size_t>(single_view_budget(k, question_ordinal, invert_parity));
  std::vector<ScoredUnit> ranking = ranker.rank(query);
  if (ranking.size() > n) ranking.resize(n);
  return ranking;
}

std::vector<ViewKind> FusedUnit::contributing_views() const {
  std::vector<ViewKind> out;
  for (ViewKind v : kAllViews) {
    if (view_ranks[static_cast<int>(v)]) out.push_back(v);
  }
  return out;
}

std::vector<std::string> FusedResult::unit_ids() const {
  std::vector<std::string> out;
  out.reserve(units.size());
  for (const FusedUnit& u : units) out.push_back(u.unit_id);
  return out;
}

std::vector<FusedUnit> fuse_rankings(const std::array<std::vector<ScoredUnit>, 3>& per_view) {
  std::vector<FusedUnit> out;
  std::unordered_map<std::string, std::size_t> emitted;
  std::size_t depth = 0;
  for (const auto& list : per_view) depth = std::max(depth, list.size());
  for (std::size_t r = 0; r < depth; ++r) {
    for (ViewKind v : kAllViews) {
      const auto& list = per_view[static_cast<int>(v)];
      if (r >= list.size()) continue;
      const std::string& id = list[r].unit_id;
      auto [it, fresh] = emitted.try_emplace(id, out.size());
      if (fresh) {
        FusedUnit u;
        u.unit_id = id;
        u.emitted_by = v;
        out.push_back(std::move(u));
      }
      out[it->second].view_ranks[static_cast<int>(v)] = static_cast<int>(r + 1);
    }
  }
  return out;
}

namespace {

void check_same_units(const ViewRankers& views) {
  for (const Ranker* r : views) {
    if (r == nullptr) throw Error(ErrorCode::kViewMismatch, "a view index is missing");
  }
  auto sorted = [](const Ranker* r) {
    std::vector<std::string> ids = r->unit_ids();
    std::sort(ids.begin(), ids.end());
    return ids;
  };
  const std::vector<std::string> base = sorted(views[0]);
  for (std::size_t i = 1; i < views.size(); ++i) {
    if (sorted(views[i]) != base) {
      throw Error(ErrorCode::kViewMismatch,
                  std::string(view_kind_name(kAllViews[i])) +
                      " view covers different units than RawText");
    }
  }
}

}  // namespace

FusedResult retrieve_mc(const ViewRankers& views, std::string_view query, RetrievalBudget k,
                        std::size_t question_ordinal, bool invert_parity) {
  check_same_units(views);
  FusedResult result;
  result.plan = plan_budget(k);
  result.per_view = per_view_budget(k, question_ordinal, invert_parity);
  std::array<std::vector<ScoredUnit>, 3> lists;
  for (ViewKind v : kAllViews) {
    auto& list = lists[static_cast<int>(v)];
    list = views[static_cast<int>(v)]->rank(query);
    if (list.size() > static_cast<std::size_t>(result.per_view)) list.resize(result.per_view);
    for (ScoredUnit& u : list) u.view = v;
  }
  result.units = fuse_rankings(lists);
  return result;
}

}  // namespace mcidx
