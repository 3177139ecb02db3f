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

#include "oracles.h"

#include <cmath>
#include <map>

namespace mcidx::oracle {

Terms split_words(std::string_view text) {
  Terms out;
  std::string cur;
  for (char c : text) {
    if (c == ' ') {
      if (!cur.empty()) out.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

namespace {

std::map<std::string, int> counts_of(const Terms& terms) {
  std::map<std::string, int> out;
  for (const std::string& t : terms) out[t] += 1;
  return out;
}

int document_frequency(const std::vector<Terms>& docs, const std::string& term) {
  int df = 0;
  for (const Terms& d : docs) {
    for (const std::string& t : d) {
      if (t == term) {
        ++df;
        break;
      }
    }
  }
  return df;
}

}  // namespace

std::vector<double> tfidf_scores(const std::vector<Terms>& docs, const Terms& query) {
  const double n = static_cast<double>(docs.size());
  auto idf = [&](const std::string& t) {
    return std::log((1.0 + n) / (1.0 + document_frequency(docs, t))) + 1.0;
  };
  // Query vector over terms known to the corpus.
  std::map<std::string, double> q;
  for (const auto& [t, c] : counts_of(query)) {
    if (document_frequency(docs, t) > 0) q[t] = c * idf(t);
  }
  double q_norm = 0.0;
  for (const auto& [t, w] : q) q_norm += w * w;
  q_norm = std::sqrt(q_norm);

  std::vector<double> out;
  for (const Terms& d : docs) {
    std::map<std::string, double> v;
    for (const auto& [t, c] : counts_of(d)) v[t] = c * idf(t);
    double d_norm = 0.0;
    for (const auto& [t, w] : v) d_norm += w * w;
    d_norm = std::sqrt(d_norm);
    double dot = 0.0;
    for (const auto& [t, w] : q) {
      auto it = v.find(t);
      if (it != v.end()) dot += w * it->second;
    }
    out.push_back(q_norm > 0.0 && d_norm > 0.0 ? dot / (q_norm * d_norm) : 0.0);
  }
  return out;
}

std::vector<double> bm25_scores(const std::vector<Terms>& docs, const Terms& query, double k1,
                                double b) {
  const double n = static_cast<double>(docs.size());
  double avgdl = 0.0;
  for (const Terms& d : docs) avgdl += static_cast<double>(d.size());
  avgdl /= n;
  std::vector<double> out;
  for (const Terms& d : docs) {
    const std::map<std::string, int> tf = counts_of(d);
    double score = 0.0;
    for (const std::string& t : query) {
      auto it = tf.find(t);
      if (it == tf.end()) continue;
      const double df = document_frequency(docs, t);
      const double idf = std::log(1.0 + (n - df + 0.5) / (df + 0.5));
      const double f = it->second;
      const double dl = static_cast<double>(d.size());
      score += idf * f * (k1 + 1.0) / (f + k1 * (1.0 - b + b * dl / avgdl));
    }
    out.push_back(score);
  }
  return out;
}

double cosine(const std::vector<float>& a, const std::vector<float>& b) {
  double dot = 0.0;
  double na = 0.0;
  double nb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    dot += static_cast<double>(a[i]) * b[i];
    na += static_cast<double>(a[i]) * a[i];
    nb += static_cast<double>(b[i]) * b[i];
  }
  if (na == 0.0 || nb == 0.0) return 0.0;
  return dot / (std::sqrt(na) * std::sqrt(nb));
}

std::vector<std::size_t> ranking(const std::vector<double>& scores) {
  std::vector<std::size_t> order;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    std::size_t pos = order.size();
    while (pos > 0 && scores[order[pos - 1]] < scores[i]) --pos;
    order.insert(order.begin() + static_cast<std::ptrdiff_t>(pos), i);
  }
  return order;
}

double covered_fraction(const std::vector<std::pair<std::size_t, std::size_t>>& spans,
                        std::size_t scope_start, std::size_t scope_end) {
  std::size_t covered = 0;
  for (std::size_t c = scope_start; c < scope_end; ++c) {
    for (const auto& [s, e] : spans) {
      if (s <= c && c < e) {
        ++covered;
        break;
      }
    }
  }
  return static_cast<double>(covered) / static_cast<double>(scope_end - scope_start);
}

bool contains_every_char(std::pair<std::size_t, std::size_t> chunk, std::size_t scope_start,
                         std::size_t scope_end) {
  for (std::size_t c = scope_start; c < scope_end; ++c) {
    if (c < chunk.first || c >= chunk.second) return false;
  }
  return true;
}

int budget_table(int k_halves, std::size_t ordinal) {
  const bool odd = ordinal % 2 == 1;
  switch (k_halves) {
    case 3: return 1;
    case 6: return odd ? 2 : 1;
    case 10: return 3;
    case 20: return odd ? 7 : 6;
    default: return -1;
  }
}

JudgeVerdicts judge_table(int a1, int b1, int a2, int b2) {
  // Index 0: A ahead, 1: level, 2: B ahead.
  auto side = [](int a, int b) { return a > b ? 0 : (a == b ? 1 : 2); };
  static constexpr char kScore[3] = {'A', 'T', 'B'};
  static constexpr char kRounds[3][3] = {
      {'A', 'T', 'T'},
      {'T', 'T', 'T'},
      {'T', 'T', 'B'},
  };
  return {kScore[side(a1 + a2, b1 + b2)], kRounds[side(a1, b1)][side(a2, b2)]};
}

TermCorpus random_term_corpus(synthetic::Rng& rng, std::size_t max_units, std::size_t vocab) {
  TermCorpus out;
  const std::size_t n_units = 1 + rng.below(static_cast<std::uint32_t>(max_units));
  const std::size_t used = 1 + rng.below(static_cast<std::uint32_t>(vocab));
  auto word = [&] { return "t" + std::to_string(rng.below(static_cast<std::uint32_t>(used))); };
  for (std::size_t u = 0; u < n_units; ++u) {
    std::string text;
    const std::size_t len = 1 + rng.below(12);
    for (std::size_t i = 0; i < len; ++i) text += (i > 0 ? " " : "") + word();
    out.texts.push_back(std::move(text));
  }
  for (int q = 0; q < 3; ++q) {
    std::string query;
    const std::size_t len = 1 + rng.below(5);
    for (std::size_t i = 0; i < len; ++i) {
      // Some query terms fall outside the corpus vocabulary.
      query += (i > 0 ? " " : "") + (rng.chance(15) ? "zz" + std::to_string(i) : word());
    }
    out.queries.push_back(std::move(query));
  }
  return out;
}

}  // namespace mcidx::oracle
