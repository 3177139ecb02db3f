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

#include "mcidx/retrieval.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <unordered_set>

#include "mcidx/errors.h"
#include "mcidx/text.h"

namespace mcidx {

std::string_view view_kind_name(ViewKind kind) {
  switch (kind) {
    case ViewKind::kRawText: return "RawText";
    case ViewKind::kKeywords: return "Keywords";
    case ViewKind::kSummary: return "Summary";
  }
  return "?";
}

std::optional<ViewKind> parse_view_kind(std::string_view name) {
  for (ViewKind k : kAllViews) {
    if (view_kind_name(k) == name) return k;
  }
  return std::nullopt;
}

std::string_view view_short_name(ViewKind kind) {
  switch (kind) {
    case ViewKind::kRawText: return "raw";
    case ViewKind::kKeywords: return "keywords";
    case ViewKind::kSummary: return "summary";
  }
  return "?";
}

std::optional<ViewKind> parse_view_short_name(std::string_view name) {
  for (ViewKind k : kAllViews) {
    if (view_short_name(k) == name) return k;
  }
  return std::nullopt;
}

std::vector<std::string> tokenize_terms(std::string_view input) {
  std::vector<std::string> out;
  for (const std::string& token : text::whitespace_tokens(input)) {
    std::u32string cps = text::decode_utf8(token);
    std::size_t lo = 0;
    std::size_t hi = cps.size();
    while (lo < hi && text::is_punct(cps[lo])) ++lo;
    while (hi > lo && text::is_punct(cps[hi - 1])) --hi;
    if (lo == hi) continue;
    std::string term;
    term.reserve(hi - lo);
    for (std::size_t i = lo; i < hi; ++i) text::append_utf8(term, text::to_lower(cps[i]));
    out.push_back(std::move(term));
  }
  return out;
}

std::string_view sparse_kind_name(SparseKind kind) {
  return kind == SparseKind::kTfIdf ? "tfidf" : "bm25";
}

SparseIndex SparseIndex::build(const std::vector<Unit>& units, SparseKind kind,
                               Bm25Params params) {
  if (units.empty()) throw Error(ErrorCode::kEmptyCorpus, "no units to index");
  SparseIndex index;
  index.kind_ = kind;
  index.params_ = params;
  std::unordered_set<std::string> seen;
  index.counts_.row_offsets.push_back(0);
  for (const Unit& u : units) {
    if (!seen.insert(u.id).second) {
      throw Error(ErrorCode::kDuplicateId, "unit id \"" + u.id + "\" repeated");
    }
    index.unit_ids_.push_back(u.id);
    const std::vector<std::string> terms = tokenize_terms(u.text);
    std::map<std::uint32_t, std::uint32_t> tf;
    for (const std::string& t : terms) {
      auto [it, inserted] = index.term_index_.try_emplace(
          t, static_cast<std::uint32_t>(index.terms_.size()));
      if (inserted) index.terms_.push_back(t);
      ++tf[it->second];
    }
    for (const auto& [term, count] : tf) {
      index.counts_.term_ids.push_back(term);
      index.counts_.values.push_back(count);
    }
    index.counts_.row_offsets.push_back(
        static_cast<std::uint32_t>(index.counts_.term_ids.size()));
    index.unit_lengths_.push_back(static_cast<std::uint32_t>(terms.size()));
  }
  index.finalize();
  return index;
}

SparseIndex SparseIndex::from_counts(SparseKind kind, Bm25Params params,
                                     std::vector<std::string> unit_ids,
                                     std::vector<std::string> terms,
                                     kernels::CsrMatrix counts,
                                     std::vector<std::uint32_t> unit_lengths) {
  if (unit_ids.empty()) throw Error(ErrorCode::kEmptyCorpus, "no units to index");
  SparseIndex index;
  index.kind_ = kind;
  index.params_ = params;
  index.unit_ids_ = std::move(unit_ids);
  index.terms_ = std::move(terms);
  for (std::uint32_t i = 0; i < index.terms_.size(); ++i) {
    if (!index.term_index_.emplace(index.terms_[i], i).second) {
      throw Error(ErrorCode::kCorruptIndex, "term repeated in dictionary");
    }
  }
  index.counts_ = std::move(counts);
  index.unit_lengths_ = std::move(unit_lengths);
  if (index.counts_.rows() != index.unit_ids_.size() ||
      index.unit_lengths_.size() != index.unit_ids_.size()) {
    throw Error(ErrorCode::kCorruptIndex, "unit count mismatch");
  }
  for (std::uint32_t t : index.counts_.term_ids) {
    if (t >= index.terms_.size()) throw Error(ErrorCode::kCorruptIndex, "term id out of range");
  }
  index.finalize();
  return index;
}

void SparseIndex::finalize() {
  const std::size_t n_units = unit_ids_.size();
  const double n = static_cast<double>(n_units);
  df_.assign(terms_.size(), 0);
  for (std::uint32_t t : counts_.term_ids) ++df_[t];

  idf_.resize(terms_.size());
  for (std::size_t t = 0; t < terms_.size(); ++t) {
    const double df = static_cast<double>(df_[t]);
    idf_[t] = kind_ == SparseKind::kTfIdf ? std::log((1.0 + n) / (1.0 + df)) + 1.0
                                          : std::log(1.0 + (n - df + 0.5) / (df + 0.5));
  }

  double total_length = 0.0;
  for (std::uint32_t len : unit_lengths_) total_length += len;
  avg_length_ = total_length / n;

  weights_ = counts_;
  for (std::size_t u = 0; u < n_units; ++u) {
    const std::uint32_t begin = counts_.row_offsets[u];
    const std::uint32_t end = counts_.row_offsets[u + 1];
    if (kind_ == SparseKind::kTfIdf) {
      double norm_sq = 0.0;
      for (std::uint32_t k = begin; k < end; ++k) {
        const double w = counts_.values[k] * idf_[counts_.term_ids[k]];
        weights_.values[k] = w;
        norm_sq += w * w;
      }
      const double norm = std::sqrt(norm_sq);
      for (std::uint32_t k = begin; k < end; ++k) {
        weights_.values[k] = norm > 0.0 ? weights_.values[k] / norm : 0.0;
      }
    } else {
      const double len_ratio =
          avg_length_ > 0.0 ? static_cast<double>(unit_lengths_[u]) / avg_length_ : 0.0;
      const double denom_base = params_.k1 * (1.0 - params_.b + params_.b * len_ratio);
      for (std::uint32_t k = begin; k < end; ++k) {
        const double f = counts_.values[k];
        weights_.values[k] =
            idf_[counts_.term_ids[k]] * f * (params_.k1 + 1.0) / (f + denom_base);
      }
    }
  }
}

std::optional<std::uint32_t> SparseIndex::term_id(std::string_view term) const {
  auto it = term_index_.find(std::string(term));
  if (it == term_index_.end()) return std::nullopt;
  return it->second;
}

std::size_t SparseIndex::df(std::string_view term) const {
  auto id = term_id(term);
  return id ? df_[*id] : 0;
}

kernels::DenseQuery SparseIndex::vectorize_query(std::string_view query) const {
  kernels::DenseQuery q(terms_.size(), 0.0);
  std::vector<std::uint32_t> present;
  for (const std::string& t : tokenize_terms(query)) {
    auto id = term_id(t);
    if (!id) continue;
    if (q[*id] == 0.0) present.push_back(*id);
    q[*id] += 1.0;
  }
  if (kind_ == SparseKind::kTfIdf) {
    std::sort(present.begin(), present.end());
    double norm_sq = 0.0;
    for (std::uint32_t t : present) {
      q[t] *= idf_[t];
      norm_sq += q[t] * q[t];
    }
    const double norm = std::sqrt(norm_sq);
    if (norm > 0.0) {
      for (std::uint32_t t : present) q[t] /= norm;
    }
  }
  return q;
}

std::vector<double> sparse_scores(const SparseIndex& index, std::string_view query,
                                  kernels::Execution exec) {
  const kernels::DenseQuery q = index.vectorize_query(query);
  std::vector<double> scores(index.size(), 0.0);
  kernels::sparse_dot(index.weights(), q, scores, exec);
  return scores;
}

std::vector<ScoredUnit> rank_units(const std::vector<std::string>& unit_ids,
                                   const std::vector<double>& scores) {
  const std::vector<std::size_t> order = kernels::rank_order(scores);
  std::vector<ScoredUnit> out;
  out.reserve(order.size());
  for (std::size_t r = 0; r < order.size(); ++r) {
    out.push_back({unit_ids[order[r]], scores[order[r]], static_cast<int>(r + 1), std::nullopt});
  }
  return out;
}

namespace {

void require_kind(const SparseIndex& index, SparseKind kind) {
  if (index.kind() != kind) {
    throw Error(ErrorCode::kInvalidArgument,
                "index is " + std::string(sparse_kind_name(index.kind())) + ", not " +
                    std::string(sparse_kind_name(kind)));
  }
}

}  // namespace

std::vector<ScoredUnit> score_tfidf(const SparseIndex& index, std::string_view query) {
  require_kind(index, SparseKind::kTfIdf);
  return rank_units(index.unit_ids(), sparse_scores(index, query));
}

std::vector<ScoredUnit> score_bm25(const SparseIndex& index, std::string_view query) {
  require_kind(index, SparseKind::kBm25);
  return rank_units(index.unit_ids(), sparse_scores(index, query));
}

}  // namespace mcidx
