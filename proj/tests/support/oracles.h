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

// Brute-force reference computations for tests. Nothing here calls into the
// code paths being checked: terms are split on ASCII spaces, spans are
// compared character by character and rules come from literal tables.

#ifndef MCIDX_TESTS_SUPPORT_ORACLES_H_
#define MCIDX_TESTS_SUPPORT_ORACLES_H_

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "synthetic.h"

namespace mcidx::oracle {

using Terms = std::vector<std::string>;

// Splits on runs of ' '. Callers only feed lowercase ASCII words.
Terms split_words(std::string_view text);

// Score of every document for `query`, straight from the formulas.
std::vector<double> tfidf_scores(const std::vector<Terms>& docs, const Terms& query);
std::vector<double> bm25_scores(const std::vector<Terms>& docs, const Terms& query,
                                double k1 = 1.5, double b = 0.75);

// Cosine of raw vectors, computed in double.
double cosine(const std::vector<float>& a, const std::vector<float>& b);

// Order of positions by descending score, ties by position, via insertion
// sort with exact comparisons.
std::vector<std::size_t> ranking(const std::vector<double>& scores);

// Covered characters of [scope_start, scope_end) counted one by one.
double covered_fraction(const std::vector<std::pair<std::size_t, std::size_t>>& spans,
                        std::size_t scope_start, std::size_t scope_end);

// True when every character of the scope lies in the one chunk span.
bool contains_every_char(std::pair<std::size_t, std::size_t> chunk, std::size_t scope_start,
                         std::size_t scope_end);

// Per-view budget table for k in {1.5, 3, 5, 10}, keyed by k*2.
int budget_table(int k_halves, std::size_t ordinal);

// Judge verdicts as 'A', 'B' or 'T'.
struct JudgeVerdicts {
  char score_based;
  char round_based;
};
JudgeVerdicts judge_table(int a1, int b1, int a2, int b2);

// Random corpus over a vocabulary of `vocab` words t0..t{vocab-1}.
struct TermCorpus {
  std::vector<std::string> texts;
  std::vector<std::string> queries;
};
TermCorpus random_term_corpus(synthetic::Rng& rng, std::size_t max_units, std::size_t vocab);

}  // namespace mcidx::oracle

#endif  // MCIDX_TESTS_SUPPORT_ORACLES_H_
