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


#include "mcidx/evaluation.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <exception>
#include <limits>
#include <map>
#include <regex>

#include "json.hpp"
#include "jsonl.h"
#include "mcidx/errors.h"
#include "mcidx/prompts.h"

namespace mcidx {

using nlohmann::json;

double recall_of_spans(const std::vector<Span>& retrieved, Span scope) {
  if (scope.empty()) throw Error(ErrorCode::kEmptyScope, "answer scope has zero length");
  std::vector<Span> parts;
  for (const Span& s : retrieved) {
    const Span clipped{std::max(s.start, scope.start), std::min(s.end, scope.end)};
    if (!clipped.empty()) parts.push_back(clipped);
  }
  std::sort(parts.begin(), parts.end());
  std::size_t covered = 0;
  std::size_t reach = scope.start;
  for (const Span& p : parts) {
    const std::size_t from = std::max(p.start, reach);
    if (p.end > from) covered += p.end - from;
    reach = std::max(reach, p.end);
  }
  return static_cast<double>(covered) / static_cast<double>(scope.length());
}

double recall_of_set(const std::vector<Span>& retrieved, const QAItem& qa, const Document& doc) {
  if (qa.doc_id != doc.doc_id()) {
    throw Error(ErrorCode::kUnknownDoc,
                "question " + qa.question_id + " belongs to " + qa.doc_id + ", not " + doc.doc_id());
  }
  return recall_of_spans(retrieved, scope_in_document(qa, doc));
}

void validate_setup(const RetrievalSetup& setup) {
  const bool raw_only =
      setup.mode.kind == Mode::Kind::kSingle && setup.mode.view == ViewKind::kRawText;
  if (!raw_only && setup.scheme.kind != SchemeKind::kContentAware) {
    throw Error(ErrorCode::kInvalidArgument,
                "mode " + setup.mode.to_string() + " needs content-aware chunks, not " +
                    setup.scheme.to_string());
  }
  if (!raw_only && setup.views == nullptr) {
    throw Error(ErrorCode::kInvalidArgument, "mode " + setup.mode.to_string() + " needs views");
  }
  if (setup.retriever.kind == RetrieverSpec::Kind::kDense && setup.provider == nullptr) {
    throw Error(ErrorCode::kInvalidArgument, "dense retriever needs an embedding provider");
  }
}

namespace {

bool view_active(const Mode& mode, ViewKind v) {
  return mode.kind == Mode::Kind::kMultiView || mode.view == v;
}

}  // namespace

DocumentRetriever::DocumentRetriever(const Document& doc, const RetrievalSetup& setup)
    : doc_(&doc), setup_(setup) {
  validate_setup(setup_);
  chunks_ = chunk_document(doc, setup_.scheme);
  for (std::size_t i = 0; i < chunks_.size(); ++i) chunk_pos_.emplace(chunks_[i].chunk_id, i);
  for (ViewKind v : kAllViews) {
    if (!view_active(setup_.mode, v)) continue;
    std::vector<Unit> units;
    if (v == ViewKind::kRawText) {
      units.reserve(chunks_.size());
      for (const Chunk& c : chunks_) units.push_back({c.chunk_id, c.text});
    } else {
      units = setup_.views->units(doc, v);
    }
    rankers_[static_cast<int>(v)] =
        make_ranker(setup_.retriever, units, setup_.provider, setup_.bm25);
  }
}

std::array<std::vector<ScoredUnit>, 3> DocumentRetriever::rankings(std::string_view query) const {
  std::array<std::vector<ScoredUnit>, 3> out;
  for (ViewKind v : kAllViews) {
    const auto& ranker = rankers_[static_cast<int>(v)];
    if (!ranker) continue;
    auto& list = out[static_cast<int>(v)];
    list = ranker->rank(query);
    for (ScoredUnit& u : list) u.view = v;
  }
  return out;
}

Retrieved DocumentRetriever::select(const std::array<std::vector<ScoredUnit>, 3>& rankings,
                                    RetrievalBudget k, std::size_t question_ordinal) const {
  std::vector<std::string> ids;
  if (setup_.mode.kind == Mode::Kind::kMultiView) {
    const auto per_view =
        static_cast<std::size_t>(per_view_budget(k, question_ordinal, setup_.invert_parity));
    std::array<std::vector<ScoredUnit>, 3> top;
    for (ViewKind v : kAllViews) {
      const auto& full = rankings[static_cast<int>(v)];
      top[static_cast<int>(v)].assign(full.begin(),
                                      full.begin() + std::min(per_view, full.size()));
    }
    for (const FusedUnit& u : fuse_rankings(top)) ids.push_back(u.unit_id);
  } else {
    const auto n = static_cast<std::size_t>(
        single_view_budget(k, question_ordinal, setup_.invert_parity));
    const auto& full = rankings[static_cast<int>(setup_.mode.view)];
    for (std::size_t i = 0; i < std::min(n, full.size()); ++i) ids.push_back(full[i].unit_id);
  }
  return from_ids(ids);
}

Retrieved DocumentRetriever::retrieve(std::string_view query, RetrievalBudget k,
                                      std::size_t question_ordinal) const {
  return select(rankings(query), k, question_ordinal);
}

Retrieved DocumentRetriever::from_ids(const std::vector<std::string>& ids) const {
  Retrieved out;
  for (const std::string& id : ids) {
    auto it = chunk_pos_.find(id);
    if (it == chunk_pos_.end()) {
      throw Error(ErrorCode::kViewMismatch, "unit " + id + " is not a chunk of " + doc_->doc_id());
    }
    const Chunk& c = chunks_[it->second];
    out.unit_ids.push_back(id);
    out.spans.push_back(c.doc_span);
    out.texts.push_back(c.text);
  }
  return out;
}

namespace {

void rethrow_first(const std::vector<std::exception_ptr>& errors) {
  for (const std::exception_ptr& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

std::string format_fixed(double v, int decimals) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
  return buf;
}

}  // namespace

RecallReport eval_recall(const std::vector<Document>& docs, const std::vector<QAItem>& qa,
                         const RetrievalSetup& setup, const std::vector<RetrievalBudget>& ks,
                         kernels::Execution exec) {
  validate_setup(setup);
  for (RetrievalBudget k : ks) {
    // Surface a bad budget before any index is built.
    if (setup.mode.kind == Mode::Kind::kMultiView) {
      plan_budget(k);
    } else {
      single_view_budget(k, 0);
    }
  }
  const bool parallel = exec == kernels::Execution::kParallel;
  RecallReport report;

  std::unordered_map<std::string, std::size_t> doc_pos;
  for (std::size_t i = 0; i < docs.size(); ++i) doc_pos.emplace(docs[i].doc_id(), i);

  // Documents that have questions, in first-use order.
  std::vector<std::size_t> used_docs;
  std::unordered_map<std::size_t, std::size_t> retriever_of_doc;
  std::vector<std::size_t> jobs;  // qa positions
  for (std::size_t q = 0; q < qa.size(); ++q) {
    auto it = doc_pos.find(qa[q].doc_id);
    if (it == doc_pos.end()) {
      report.skipped.push_back({qa[q].question_id, "document " + qa[q].doc_id + " not loaded"});
      continue;
    }
    if (retriever_of_doc.emplace(it->second, used_docs.size()).second) {
      used_docs.push_back(it->second);
    }
    jobs.push_back(q);
  }

  std::vector<std::unique_ptr<DocumentRetriever>> retrievers(used_docs.size());
  {
    std::vector<std::exception_ptr> errors(used_docs.size());
    const auto n = static_cast<std::ptrdiff_t>(used_docs.size());
#pragma omp parallel for schedule(dynamic) if (parallel)
    for (std::ptrdiff_t i = 0; i < n; ++i) {
      try {
        retrievers[i] = std::make_unique<DocumentRetriever>(docs[used_docs[i]], setup);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
    rethrow_first(errors);
  }

  // recall[j * ks.size() + kk] for job j and budget kk.
  std::vector<double> recall(jobs.size() * ks.size(), 0.0);
  {
    std::vector<std::exception_ptr> errors(jobs.size());
    const auto n = static_cast<std::ptrdiff_t>(jobs.size());
#pragma omp parallel for schedule(dynamic) if (parallel)
    for (std::ptrdiff_t j = 0; j < n; ++j) {
      try {
        const QAItem& item = qa[jobs[j]];
        const std::size_t d = retriever_of_doc.at(doc_pos.at(item.doc_id));
        const DocumentRetriever& r = *retrievers[d];
        const auto rankings = r.rankings(item.question);
        for (std::size_t kk = 0; kk < ks.size(); ++kk) {
          const Retrieved got = r.select(rankings, ks[kk], jobs[j]);
          recall[j * ks.size() + kk] = recall_of_set(got.spans, item, docs[used_docs[d]]);
        }
      } catch (...) {
        errors[j] = std::current_exception();
      }
    }
    rethrow_first(errors);
  }

  for (std::size_t kk = 0; kk < ks.size(); ++kk) {
    RecallRow row{setup.scheme, setup.retriever, setup.mode, ks[kk], {}, {}, 0.0};
    double sum = 0.0;
    for (std::size_t j = 0; j < jobs.size(); ++j) {
      row.question_ids.push_back(qa[jobs[j]].question_id);
      row.per_question.push_back(recall[j * ks.size() + kk]);
      sum += row.per_question.back();
    }
    row.mean = row.per_question.empty() ? 0.0 : sum / static_cast<double>(row.n());
    report.rows.push_back(std::move(row));
  }
  return report;
}

std::string RecallReport::to_csv() const {
  std::string out = "scheme,retriever,mode,k,n,mean_recall\n";
  for (const RecallRow& r : rows) {
    out += r.scheme.to_string() + "," + r.retriever.to_string() + "," + r.mode.to_string() +
           "," + r.k.to_string() + "," + std::to_string(r.n()) + "," + format_fixed(r.mean, 6) +
           "\n";
  }
  return out;
}

namespace {

std::string configuration_label(const Scheme& scheme, const Mode& mode) {
  switch (scheme.kind) {
    case SchemeKind::kFlc:
      return "FLC: " + std::to_string(scheme.target) + " tokens";
    case SchemeKind::kFlcContent:
      return "FLC-content: " + std::to_string(scheme.target) + " tokens";
    case SchemeKind::kContentAware:
      break;
  }
  if (mode.kind == Mode::Kind::kMultiView) return "MC-indexing";
  switch (mode.view) {
    case ViewKind::kRawText: return "Content: raw-text";
    case ViewKind::kKeywords: return "Content: keywords";
    case ViewKind::kSummary: return "Content: summary";
  }
  return "?";
}

template <typename T>
std::size_t position_of(std::vector<T>& seen, const T& value) {
  auto it = std::find(seen.begin(), seen.end(), value);
  if (it != seen.end()) return static_cast<std::size_t>(it - seen.begin());
  seen.push_back(value);
  return seen.size() - 1;
}

}  // namespace

std::string RecallReport::to_markdown() const {
  std::vector<RetrievalBudget> ks;
  std::vector<std::string> configs;
  std::vector<std::string> retrievers;
  std::map<std::tuple<std::size_t, std::size_t, std::size_t>, double> cells;
  for (const RecallRow& r : rows) {
    const std::size_t k = position_of(ks, r.k);
    const std::size_t c = position_of(configs, configuration_label(r.scheme, r.mode));
    const std::size_t t = position_of(retrievers, r.retriever.to_string());
    cells[{k, c, t}] = r.mean;
  }
  std::string out = "| k | Configuration |";
  for (const std::string& t : retrievers) out += " " + t + " |";
  out += "\n|---|---|";
  for (std::size_t t = 0; t < retrievers.size(); ++t) out += "---:|";
  out += "\n";
  for (std::size_t k = 0; k < ks.size(); ++k) {
    for (std::size_t c = 0; c < configs.size(); ++c) {
      bool any = false;
      std::string line = "| " + ks[k].to_string() + " | " + configs[c] + " |";
      for (std::size_t t = 0; t < retrievers.size(); ++t) {
        auto it = cells.find({k, c, t});
        if (it == cells.end()) {
          line += " - |";
        } else {
          any = true;
          line += " " + format_fixed(100.0 * it->second, 1) + " |";
        }
      }
      if (any) out += line + "\n";
    }
  }
  return out;
}

std::string generate_answer(std::string_view question,
                            const std::vector<std::string>& retrieved_texts, LlmClient& llm) {
  if (retrieved_texts.empty()) {
    throw Error(ErrorCode::kEmptyRetrieval, "no retrieved text to answer from");
  }
  return llm.generate(prompts::answer(question, retrieved_texts), kAnswerMaxTokens);
}

std::string_view verdict_name(Verdict v) {
  switch (v) {
    case Verdict::kWinA: return "WinA";
    case Verdict::kWinB: return "WinB";
    case Verdict::kTie: return "Tie";
  }
  return "?";
}

std::pair<Verdict, Verdict> decide_outcome(const JudgeScores& s) {
  auto compare = [](int a, int b) {
    return a > b ? Verdict::kWinA : (a < b ? Verdict::kWinB : Verdict::kTie);
  };
  const Verdict score_based = compare(s.a_round1 + s.a_round2, s.b_round1 + s.b_round2);
  const Verdict r1 = compare(s.a_round1, s.b_round1);
  const Verdict r2 = compare(s.a_round2, s.b_round2);
  const Verdict round_based = (r1 == r2 && r1 != Verdict::kTie) ? r1 : Verdict::kTie;
  return {score_based, round_based};
}

std::pair<int, int> parse_judge_scores(std::string_view output) {
  static const std::regex kScore(
      R"re("?answer_([12])_score"?\s*:\s*"?\s*(-?[0-9]+(?:\.[0-9]+)?)\s*"?)re");
  std::optional<double> found[2];
  const std::string s(output);
  for (auto it = std::sregex_iterator(s.begin(), s.end(), kScore); it != std::sregex_iterator();
       ++it) {
    found[(*it)[1].str() == "1" ? 0 : 1] = std::stod((*it)[2].str());
  }
  if (!found[0] || !found[1]) {
    throw Error(ErrorCode::kParse, "judge output lacks answer_1_score / answer_2_score");
  }
  int scores[2];
  for (int i = 0; i < 2; ++i) {
    const double v = *found[i];
    if (v < 0.0 || v > 10.0 || std::floor(v) != v) {
      throw Error(ErrorCode::kParse, "judge score " + std::to_string(v) +
                                         " is not an integer in [0, 10]");
    }
    scores[i] = static_cast<int>(v);
  }
  return {scores[0], scores[1]};
}

JudgeOutcome judge_pairwise(std::string_view question, std::string_view gold_answer,
                            std::string_view answer_a, std::string_view answer_b,
                            LlmClient& llm) {
  JudgeOutcome out;
  out.round1_text =
      llm.generate(prompts::judge(question, gold_answer, answer_a, answer_b), kJudgeMaxTokens);
  std::tie(out.scores.a_round1, out.scores.b_round1) = parse_judge_scores(out.round1_text);
  out.round2_text =
      llm.generate(prompts::judge(question, gold_answer, answer_b, answer_a), kJudgeMaxTokens);
  std::tie(out.scores.b_round2, out.scores.a_round2) = parse_judge_scores(out.round2_text);
  std::tie(out.score_based, out.round_based) = decide_outcome(out.scores);
  return out;
}

std::string answer_record_to_json_line(const AnswerRecord& r) {
  const JudgeScores& s = r.outcome.scores;
  return json{{"question_id", r.question_id},
              {"answer_a", r.answer_a},
              {"answer_b", r.answer_b},
              {"scores",
               {{"a_round1", s.a_round1},
                {"b_round1", s.b_round1},
                {"a_round2", s.a_round2},
                {"b_round2", s.b_round2}}},
              {"score_based", verdict_name(r.outcome.score_based)},
              {"round_based", verdict_name(r.outcome.round_based)},
              {"judge_round1", r.outcome.round1_text},
              {"judge_round2", r.outcome.round2_text}}
      .dump();
}

void write_answer_records(const std::vector<AnswerRecord>& records,
                          const std::filesystem::path& path) {
  std::vector<std::string> lines;
  lines.reserve(records.size());
  for (const AnswerRecord& r : records) lines.push_back(answer_record_to_json_line(r));
  detail::write_lines(path, lines);
}

}  // namespace mcidx
