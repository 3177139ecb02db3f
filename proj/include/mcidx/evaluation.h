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


#ifndef MCIDX_EVALUATION_H_
#define MCIDX_EVALUATION_H_

#include <array>
#include <cstddef>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "mcidx/chunking.h"
#include "mcidx/corpus.h"
#include "mcidx/embedding.h"
#include "mcidx/fusion.h"
#include "mcidx/kernels.h"
#include "mcidx/llm.h"
#include "mcidx/retrieval.h"
#include "mcidx/views.h"

namespace mcidx {

// |union(retrieved) ∩ scope| / |scope| in characters. Throws kEmptyScope for
// an empty scope.
double recall_of_spans(const std::vector<Span>& retrieved, Span scope);
// Same, with the QA scope mapped into `doc` coordinates.
double recall_of_set(const std::vector<Span>& retrieved, const QAItem& qa, const Document& doc);

// Everything needed to retrieve from one document under one configuration.
struct RetrievalSetup {
  Scheme scheme = Scheme::content_aware();
  RetrieverSpec retriever;
  Mode mode;
  Bm25Params bm25;
  EmbeddingProvider* provider = nullptr;  // dense retrievers
  const ViewStore* views = nullptr;       // keyword / summary views
  bool invert_parity = false;
};

// Throws kInvalidArgument for combinations that do not exist: view modes
// other than single:raw need content-aware chunks.
void validate_setup(const RetrievalSetup& setup);

struct Retrieved {
  std::vector<std::string> unit_ids;  // in output order
  std::vector<Span> spans;            // doc spans, parallel to unit_ids
  std::vector<std::string> texts;     // raw text, parallel to unit_ids
};

// Per-document indexes for one setup; scoring covers this document only.
class DocumentRetriever {
 public:
  DocumentRetriever(const Document& doc, const RetrievalSetup& setup);

  // Full rankings, one per view in use (RawText only for single modes).
  std::array<std::vector<ScoredUnit>, 3> rankings(std::string_view query) const;
  // Applies budget k to precomputed rankings.
  Retrieved select(const std::array<std::vector<ScoredUnit>, 3>& rankings, RetrievalBudget k,
                   std::size_t question_ordinal) const;
  Retrieved retrieve(std::string_view query, RetrievalBudget k,
                     std::size_t question_ordinal) const;

  const std::vector<Chunk>& chunks() const { return chunks_; }

 private:
  Retrieved from_ids(const std::vector<std::string>& ids) const;

  const Document* doc_;
  RetrievalSetup setup_;
  std::vector<Chunk> chunks_;
  std::unordered_map<std::string, std::size_t> chunk_pos_;
  std::array<std::unique_ptr<Ranker>, 3> rankers_;
};

struct RecallRow {
  Scheme scheme;
  RetrieverSpec retriever;
  Mode mode;
  RetrievalBudget k;
  std::vector<std::string> question_ids;
  std::vector<double> per_question;
  double mean = 0.0;

  std::size_t n() const { return per_question.size(); }
};

struct SkippedQuestion {
  std::string question_id;
  std::string reason;
};

struct RecallReport {
  std::vector<RecallRow> rows;
  std::vector<SkippedQuestion> skipped;

  // scheme,retriever,mode,k,n,mean_recall with 6-decimal recall.
  std::string to_csv() const;
  // Budget blocks of scheme/view rows with one column per retriever, in percent.
  std::string to_markdown() const;
};

// Macro-averaged recall of every question for each k. Question ordinals are
// positions in `qa`. Questions whose document is absent are skipped and
// listed in the report.
RecallReport eval_recall(const std::vector<Document>& docs, const std::vector<QAItem>& qa,
                         const RetrievalSetup& setup, const std::vector<RetrievalBudget>& ks,
                         kernels::Execution exec = kernels::Execution::kParallel);

// Answers from raw retrieved texts, in rank order. Throws kEmptyRetrieval
// when there is nothing to answer from.
std::string generate_answer(std::string_view question,
                            const std::vector<std::string>& retrieved_texts, LlmClient& llm);

enum class Verdict { kWinA, kWinB, kTie };
std::string_view verdict_name(Verdict v);

struct JudgeScores {
  int a_round1 = 0;
  int b_round1 = 0;
  int a_round2 = 0;
  int b_round2 = 0;
};

struct JudgeOutcome {
  Verdict score_based = Verdict::kTie;
  Verdict round_based = Verdict::kTie;
  JudgeScores scores;
  std::string round1_text;  // raw judge output, A in position 1
  std::string round2_text;  // raw judge output, B in position 1
};

// Score-based compares a_round1+a_round2 with b_round1+b_round2; round-based
// needs a win in both rounds, anything else is a tie.
std::pair<Verdict, Verdict> decide_outcome(const JudgeScores& scores);

// Extracts {answer_1_score, answer_2_score} from the last JSON object in the
// judge output. Scores may be numbers or numeric strings in [0, 10]; throws
// kParse otherwise.
std::pair<int, int> parse_judge_scores(std::string_view output);

JudgeOutcome judge_pairwise(std::string_view question, std::string_view gold_answer,
                            std::string_view answer_a, std::string_view answer_b,
                            LlmClient& llm);

struct AnswerRecord {
  std::string question_id;
  std::string answer_a;
  std::string answer_b;
  JudgeOutcome outcome;
};

std::string answer_record_to_json_line(const AnswerRecord& record);
void write_answer_records(const std::vector<AnswerRecord>& records,
                          const std::filesystem::path& path);

}  // namespace mcidx

#endif  // MCIDX_EVALUATION_H_
