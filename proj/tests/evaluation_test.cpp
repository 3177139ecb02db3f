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

#include <gtest/gtest.h>

#include "mcidx/errors.h"
#include "oracles.h"
#include "synthetic.h"

namespace mcidx {
namespace {

TEST(Recall, Example) {
  EXPECT_DOUBLE_EQ(recall_of_spans({{80, 140}, {160, 180}}, {100, 200}), 0.6);
  EXPECT_DOUBLE_EQ(recall_of_spans({{0, 1000}}, {100, 200}), 1.0);
  EXPECT_DOUBLE_EQ(recall_of_spans({}, {100, 200}), 0.0);
  EXPECT_DOUBLE_EQ(recall_of_spans({{200, 300}, {0, 100}}, {100, 200}), 0.0);
}

TEST(Recall, OverlapCountsOnce) {
  EXPECT_DOUBLE_EQ(recall_of_spans({{100, 150}, {120, 170}}, {100, 200}), 0.7);
  EXPECT_DOUBLE_EQ(recall_of_spans({{100, 150}, {100, 150}, {100, 150}}, {100, 200}), 0.5);
}

TEST(Recall, EmptyScope) {
  try {
    recall_of_spans({{0, 10}}, {5, 5});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kEmptyScope);
  }
}

TEST(Recall, MatchesCharacterCount) {
  for (std::uint32_t seed = 0; seed < 300; ++seed) {
    synthetic::Rng rng(seed);
    const std::size_t s = rng.below(200);
    const std::size_t e = s + 1 + rng.below(200);
    std::vector<Span> spans;
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    const std::uint32_t n = rng.below(6);
    for (std::uint32_t i = 0; i < n; ++i) {
      const std::size_t a = rng.below(450);
      const std::size_t b = a + rng.below(120);
      spans.push_back({a, b});
      pairs.emplace_back(a, b);
    }
    const double got = recall_of_spans(spans, {s, e});
    EXPECT_DOUBLE_EQ(got, oracle::covered_fraction(pairs, s, e)) << seed;
    std::vector<Span> reversed(spans.rbegin(), spans.rend());
    EXPECT_EQ(recall_of_spans(reversed, {s, e}), got);
    std::vector<Span> fewer(spans.begin(), spans.end() - (spans.empty() ? 0 : 1));
    EXPECT_LE(recall_of_spans(fewer, {s, e}), got);
  }
}

TEST(Recall, SetUsesDocumentCoordinates) {
  const Document doc("d", "D",
                     {{"s1", "One", 1, "alpha beta gamma"}, {"s2", "Two", 2, "delta epsilon"}});
  QAItem qa;
  qa.doc_id = "d";
  qa.scope_section_id = "s2";
  qa.scope_span = {0, 5};
  const Span scope = scope_in_document(qa, doc);
  EXPECT_DOUBLE_EQ(recall_of_set({doc.find_section("s2")->doc_span}, qa, doc), 1.0);
  EXPECT_DOUBLE_EQ(recall_of_set({doc.find_section("s1")->doc_span}, qa, doc), 0.0);
  EXPECT_DOUBLE_EQ(recall_of_set({{scope.start, scope.start + 2}}, qa, doc), 0.4);
}

RetrievalSetup bm25_raw() {
  RetrievalSetup setup;
  setup.retriever = RetrieverSpec::parse("bm25");
  setup.mode = Mode::single(ViewKind::kRawText);
  return setup;
}

TEST(ValidateSetup, RejectsViewModesOverFixedChunks) {
  RetrievalSetup setup = bm25_raw();
  setup.scheme = Scheme::flc(100);
  EXPECT_NO_THROW(validate_setup(setup));
  for (const Mode& m : {Mode::mc(), Mode::single(ViewKind::kSummary)}) {
    setup.mode = m;
    try {
      validate_setup(setup);
      ADD_FAILURE() << m.to_string();
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::kInvalidArgument);
    }
  }
}

TEST(EvalRecall, RetrievingEverythingGivesFullRecall) {
  const auto corpus = synthetic::make_small_corpus(7);
  for (const Scheme& scheme : {Scheme::content_aware(), Scheme::flc(50), Scheme::flc_content(50)}) {
    RetrievalSetup setup = bm25_raw();
    setup.scheme = scheme;
    const auto report =
        eval_recall(corpus.docs, corpus.qa, setup, {RetrievalBudget::whole(1000)});
    ASSERT_EQ(report.rows.size(), 1u);
    EXPECT_DOUBLE_EQ(report.rows[0].mean, 1.0) << scheme.to_string();
  }
}

TEST(EvalRecall, MonotoneInKAndExecutionIndependent) {
  const auto corpus = synthetic::make_small_corpus(11);
  const auto ks = parse_budget_list("1,1.5,2,3,5,10");
  for (const char* retriever : {"tfidf", "bm25"}) {
    RetrievalSetup setup = bm25_raw();
    setup.retriever = RetrieverSpec::parse(retriever);
    const auto par = eval_recall(corpus.docs, corpus.qa, setup, ks);
    const auto ser = eval_recall(corpus.docs, corpus.qa, setup, ks, kernels::Execution::kSerial);
    EXPECT_EQ(par.to_csv(), ser.to_csv());
    for (std::size_t i = 1; i < par.rows.size(); ++i) {
      for (std::size_t q = 0; q < par.rows[i].n(); ++q) {
        EXPECT_GE(par.rows[i].per_question[q], par.rows[i - 1].per_question[q]);
      }
    }
  }
}

TEST(EvalRecall, SkipsQuestionsWithoutDocument) {
  auto corpus = synthetic::make_small_corpus(3);
  ASSERT_FALSE(corpus.qa.empty());
  QAItem orphan = corpus.qa[0];
  orphan.question_id = "orphan";
  orphan.doc_id = "nowhere";
  corpus.qa.push_back(orphan);
  const auto report =
      eval_recall(corpus.docs, corpus.qa, bm25_raw(), {RetrievalBudget::whole(3)});
  ASSERT_EQ(report.skipped.size(), 1u);
  EXPECT_EQ(report.skipped[0].question_id, "orphan");
  EXPECT_EQ(report.rows[0].n(), corpus.qa.size() - 1);
}

TEST(EvalRecall, ViewFixture) {
  const auto fx = synthetic::make_view_fixture();
  const ViewStore store(fx.views);
  RetrievalSetup setup = bm25_raw();
  setup.views = &store;
  setup.mode = Mode::mc();
  const auto k3 = RetrievalBudget::whole(3);
  EXPECT_DOUBLE_EQ(eval_recall(fx.corpus.docs, fx.corpus.qa, setup, {k3}).rows[0].mean, 1.0);
  for (ViewKind v : kAllViews) {
    setup.mode = Mode::single(v);
    EXPECT_NEAR(eval_recall(fx.corpus.docs, fx.corpus.qa, setup, {k3}).rows[0].mean, 1.0 / 3,
                1e-12);
  }
}

TEST(EvalRecall, MultiViewNeedsViews) {
  const auto corpus = synthetic::make_small_corpus(3);
  RetrievalSetup setup = bm25_raw();
  setup.mode = Mode::mc();
  EXPECT_THROW(eval_recall(corpus.docs, corpus.qa, setup, {RetrievalBudget::whole(3)}), Error);
}

TEST(Report, CsvAndMarkdown) {
  RecallReport report;
  RecallRow row;
  row.retriever = RetrieverSpec::parse("bm25");
  row.mode = Mode::mc();
  row.k = RetrievalBudget::from_halves(3);
  row.per_question = {0.5, 1.0, 0.25};
  row.mean = 1.75 / 3;
  report.rows.push_back(row);
  row.retriever = RetrieverSpec::parse("tfidf");
  row.mean = 0.5;
  report.rows.push_back(row);
  EXPECT_EQ(report.to_csv(),
            "scheme,retriever,mode,k,n,mean_recall\n"
            "content,bm25,mc,1.5,3,0.583333\n"
            "content,tfidf,mc,1.5,3,0.500000\n");
  EXPECT_EQ(report.to_markdown(),
            "| k | Configuration | bm25 | tfidf |\n"
            "|---|---|---:|---:|\n"
            "| 1.5 | MC-indexing | 58.3 | 50.0 |\n");
}

TEST(Answer, EmptyRetrieval) {
  CallbackLlmClient llm([](const std::string&, int) { return std::string("x"); });
  try {
    generate_answer("Why?", {}, llm);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kEmptyRetrieval);
  }
  EXPECT_EQ(llm.calls(), 0);
}

TEST(Answer, PromptCarriesEveryTextInOrder) {
  std::string seen;
  CallbackLlmClient llm([&](const std::string& prompt, int max_tokens) {
    seen = prompt;
    EXPECT_EQ(max_tokens, kAnswerMaxTokens);
    return std::string("Because.");
  });
  EXPECT_EQ(generate_answer("Why the sky?", {"FIRST-TEXT", "SECOND-TEXT", "THIRD-TEXT"}, llm),
            "Because.");
  const auto a = seen.find("FIRST-TEXT");
  const auto b = seen.find("SECOND-TEXT");
  const auto c = seen.find("THIRD-TEXT");
  ASSERT_NE(c, std::string::npos);
  EXPECT_LT(a, b);
  EXPECT_LT(b, c);
  EXPECT_EQ(seen.find("FIRST-TEXT", a + 1), std::string::npos);
  EXPECT_NE(seen.find("Why the sky?"), std::string::npos);
}

TEST(Judge, Examples) {
  // A scores 7 then 6, B scores 5 then 8.
  auto [s1, r1] = decide_outcome({7, 5, 6, 8});
  EXPECT_EQ(s1, Verdict::kTie);
  EXPECT_EQ(r1, Verdict::kTie);
  auto [s2, r2] = decide_outcome({8, 5, 9, 4});
  EXPECT_EQ(s2, Verdict::kWinA);
  EXPECT_EQ(r2, Verdict::kWinA);
  // Equal sums with a split of rounds.
  auto [s5, r5] = decide_outcome({8, 9, 5, 4});
  EXPECT_EQ(s5, Verdict::kTie);
  EXPECT_EQ(r5, Verdict::kTie);
  // A wins on the sum but not in both rounds.
  auto [s6, r6] = decide_outcome({9, 2, 4, 5});
  EXPECT_EQ(s6, Verdict::kWinA);
  EXPECT_EQ(r6, Verdict::kTie);
  auto [s3, r3] = decide_outcome({9, 2, 8, 3});
  EXPECT_EQ(s3, Verdict::kWinA);
  EXPECT_EQ(r3, Verdict::kWinA);
  auto [s4, r4] = decide_outcome({1, 2, 3, 4});
  EXPECT_EQ(s4, Verdict::kWinB);
  EXPECT_EQ(r4, Verdict::kWinB);
}

TEST(Judge, AgreesWithTable) {
  auto letter = [](Verdict v) { return v == Verdict::kWinA ? 'A' : v == Verdict::kWinB ? 'B' : 'T'; };
  for (int a1 = 0; a1 <= 10; a1 += 5) {
    for (int b1 = 0; b1 <= 10; b1 += 5) {
      for (int a2 = 0; a2 <= 10; a2 += 5) {
        for (int b2 = 0; b2 <= 10; b2 += 5) {
          const auto [s, r] = decide_outcome({a1, b1, a2, b2});
          const auto want = oracle::judge_table(a1, b1, a2, b2);
          EXPECT_EQ(letter(s), want.score_based);
          EXPECT_EQ(letter(r), want.round_based);
        }
      }
    }
  }
}

TEST(Judge, ParseScores) {
  EXPECT_EQ(parse_judge_scores(R"({"answer_1_score": 7, "answer_2_score": 4})"),
            std::make_pair(7, 4));
  EXPECT_EQ(parse_judge_scores("Reasoning...\n```json\n{\"answer_1_score\": \"10\", "
                               "\"answer_2_score\": \"0\"}\n```"),
            std::make_pair(10, 0));
  EXPECT_EQ(parse_judge_scores(R"({"answer_1_score": 3, "answer_2_score": 3}
{"answer_1_score": 6.0, "answer_2_score": 2})"),
            std::make_pair(6, 2));
  for (const char* bad : {"no scores here", R"({"answer_1_score": 5})",
                          R"({"answer_1_score": 11, "answer_2_score": 2})",
                          R"({"answer_1_score": 4.5, "answer_2_score": 2})"}) {
    try {
      parse_judge_scores(bad);
      ADD_FAILURE() << bad;
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::kParse);
    }
  }
}

TEST(Judge, SecondRoundSwapsPositions) {
  // Prefers ANSWER-ALPHA wherever it sits.
  CallbackLlmClient fair([](const std::string& prompt, int) {
    const bool alpha_first = prompt.find("ANSWER-ALPHA") < prompt.find("ANSWER-BETA");
    return alpha_first ? std::string(R"({"answer_1_score": 8, "answer_2_score": 3})")
                       : std::string(R"({"answer_1_score": 3, "answer_2_score": 8})");
  });
  const auto out = judge_pairwise("Q?", "gold", "ANSWER-ALPHA", "ANSWER-BETA", fair);
  EXPECT_EQ(fair.calls(), 2);
  EXPECT_EQ(out.scores.a_round1, 8);
  EXPECT_EQ(out.scores.b_round1, 3);
  EXPECT_EQ(out.scores.a_round2, 8);
  EXPECT_EQ(out.scores.b_round2, 3);
  EXPECT_EQ(out.score_based, Verdict::kWinA);
  EXPECT_EQ(out.round_based, Verdict::kWinA);

  // Always prefers the first position.
  CallbackLlmClient biased([](const std::string&, int) {
    return std::string(R"({"answer_1_score": 7, "answer_2_score": 5})");
  });
  const auto tie = judge_pairwise("Q?", "gold", "ANSWER-ALPHA", "ANSWER-BETA", biased);
  EXPECT_EQ(tie.score_based, Verdict::kTie);
  EXPECT_EQ(tie.round_based, Verdict::kTie);
  EXPECT_NE(answer_record_to_json_line({"q1", "x", "y", tie}).find("\"round_based\":\"Tie\""),
            std::string::npos);
}

}  // namespace
}  // namespace mcidx
