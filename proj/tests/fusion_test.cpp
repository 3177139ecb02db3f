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

#include <gtest/gtest.h>

#include <algorithm>
#include <set>

#include "mcidx/errors.h"
#include "oracles.h"

namespace mcidx {
namespace {

std::vector<ScoredUnit> list_of(std::initializer_list<const char*> ids) {
  std::vector<ScoredUnit> out;
  int rank = 1;
  for (const char* id : ids) out.push_back({id, 1.0 / rank, rank, std::nullopt}), ++rank;
  return out;
}

std::vector<std::string> ids_of(const std::vector<FusedUnit>& fused) {
  std::vector<std::string> out;
  for (const auto& u : fused) out.push_back(u.unit_id);
  return out;
}

void expect_code(ErrorCode code, const std::function<void()>& fn) {
  try {
    fn();
    ADD_FAILURE() << "no error thrown";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), code) << e.what();
  }
}

TEST(Budget, ParseAndFormat) {
  EXPECT_EQ(RetrievalBudget::parse("1.5").halves(), 3);
  EXPECT_EQ(RetrievalBudget::parse("10").halves(), 20);
  EXPECT_EQ(RetrievalBudget::parse("2.0").halves(), 4);
  EXPECT_EQ(RetrievalBudget::from_halves(3).to_string(), "1.5");
  EXPECT_EQ(RetrievalBudget::whole(5).to_string(), "5");
  for (const char* bad : {"0", "-3", "1.25", "abc", "", "3x", "0.5e"}) {
    expect_code(ErrorCode::kInvalidK, [&] { RetrievalBudget::parse(bad); });
  }
  const auto list = parse_budget_list("1.5,3,5,10");
  ASSERT_EQ(list.size(), 4u);
  EXPECT_EQ(list[3], RetrievalBudget::whole(10));
}

TEST(Budget, PlanExamples) {
  struct Case {
    int halves;
    int even;
    int odd;
  };
  for (const Case& c : {Case{3, 1, 1}, Case{6, 1, 2}, Case{10, 3, 3}, Case{20, 6, 7},
                        Case{4, 1, 2}, Case{8, 2, 3}, Case{12, 4, 4}, Case{14, 4, 5},
                        Case{40, 13, 14}}) {
    const BudgetPlan plan = plan_budget(RetrievalBudget::from_halves(c.halves));
    EXPECT_EQ(plan.per_view_even, c.even) << c.halves;
    EXPECT_EQ(plan.per_view_odd, c.odd) << c.halves;
  }
}

TEST(Budget, PlanRejectsSmallOrFractionalK) {
  for (int halves : {1, 2, 5, 7}) {
    expect_code(ErrorCode::kInvalidK, [&] { plan_budget(RetrievalBudget::from_halves(halves)); });
  }
}

TEST(Budget, ParityAndInversion) {
  const auto k3 = RetrievalBudget::whole(3);
  EXPECT_EQ(per_view_budget(k3, 0), 1);
  EXPECT_EQ(per_view_budget(k3, 1), 2);
  EXPECT_EQ(per_view_budget(k3, 0, true), 2);
  EXPECT_EQ(per_view_budget(k3, 1, true), 1);
  for (std::size_t q = 0; q < 1000; ++q) {
    for (int halves : {3, 6, 10, 20}) {
      EXPECT_EQ(per_view_budget(RetrievalBudget::from_halves(halves), q),
                oracle::budget_table(halves, q));
    }
  }
}

TEST(Budget, SingleView) {
  const auto k15 = RetrievalBudget::from_halves(3);
  EXPECT_EQ(single_view_budget(k15, 0), 1);
  EXPECT_EQ(single_view_budget(k15, 1), 2);
  EXPECT_EQ(single_view_budget(k15, 0, true), 2);
  EXPECT_EQ(single_view_budget(RetrievalBudget::whole(1), 7), 1);
  EXPECT_EQ(single_view_budget(RetrievalBudget::whole(10), 3), 10);
  expect_code(ErrorCode::kInvalidK,
              [&] { single_view_budget(RetrievalBudget::from_halves(1), 0); });
  expect_code(ErrorCode::kInvalidK,
              [&] { single_view_budget(RetrievalBudget::from_halves(5), 0); });
}

TEST(Specs, RoundTrip) {
  for (const char* s : {"tfidf", "bm25", "dense:mock", "dense:bge-large"}) {
    EXPECT_EQ(RetrieverSpec::parse(s).to_string(), s);
  }
  for (const char* s : {"mc", "single:raw", "single:keywords", "single:summary"}) {
    EXPECT_EQ(Mode::parse(s).to_string(), s);
  }
  EXPECT_EQ(Mode::parse("single:keywords"), Mode::single(ViewKind::kKeywords));
  for (const char* bad : {"dense", "dense:", "bm26", ""}) {
    EXPECT_THROW(RetrieverSpec::parse(bad), Error) << bad;
  }
  for (const char* bad : {"single", "single:title", "multi"}) {
    EXPECT_THROW(Mode::parse(bad), Error) << bad;
  }
}

TEST(Fuse, Example) {
  const auto fused = fuse_rankings({list_of({"s3", "s1"}), list_of({"s1", "s2"}),
                                    list_of({"s3", "s4"})});
  EXPECT_EQ(ids_of(fused), (std::vector<std::string>{"s3", "s1", "s2", "s4"}));
  EXPECT_EQ(fused[0].emitted_by, ViewKind::kRawText);
  EXPECT_EQ(fused[1].emitted_by, ViewKind::kKeywords);
  EXPECT_EQ(fused[3].emitted_by, ViewKind::kSummary);
  EXPECT_EQ(fused[0].view_ranks[0], 1);
  EXPECT_EQ(fused[0].view_ranks[2], 1);
  EXPECT_FALSE(fused[0].view_ranks[1].has_value());
  EXPECT_EQ(fused[1].contributing_views(),
            (std::vector<ViewKind>{ViewKind::kRawText, ViewKind::kKeywords}));
}

TEST(Fuse, AgreementAndDisjointness) {
  EXPECT_EQ(ids_of(fuse_rankings({list_of({"s7"}), list_of({"s7"}), list_of({"s7"})})),
            (std::vector<std::string>{"s7"}));
  EXPECT_EQ(ids_of(fuse_rankings({list_of({"a"}), list_of({"b"}), list_of({"c"})})),
            (std::vector<std::string>{"a", "b", "c"}));
  EXPECT_TRUE(fuse_rankings({}).empty());
}

TEST(Fuse, RandomRankingLaws) {
  for (std::uint32_t seed = 0; seed < 200; ++seed) {
    synthetic::Rng rng(seed);
    const int pool = static_cast<int>(rng.between(1, 12));
    const int kp = static_cast<int>(rng.between(1, static_cast<std::uint32_t>(pool)));
    std::array<std::vector<ScoredUnit>, 3> lists;
    for (auto& list : lists) {
      std::vector<int> ids(pool);
      for (int i = 0; i < pool; ++i) ids[i] = i;
      for (int i = pool - 1; i > 0; --i) {
        std::swap(ids[i], ids[rng.below(static_cast<std::uint32_t>(i + 1))]);
      }
      for (int r = 0; r < kp; ++r) {
        list.push_back({"u" + std::to_string(ids[r]), 0.0, r + 1, std::nullopt});
      }
    }
    const auto fused = ids_of(fuse_rankings(lists));
    std::set<std::string> fused_set(fused.begin(), fused.end());
    std::set<std::string> union_set;
    for (const auto& list : lists) {
      for (const auto& u : list) union_set.insert(u.unit_id);
      EXPECT_TRUE(fused_set.count(list.front().unit_id)) << seed;
    }
    EXPECT_EQ(fused_set.size(), fused.size()) << seed;
    EXPECT_EQ(fused_set, union_set) << seed;
    EXPECT_GE(fused.size(), static_cast<std::size_t>(kp));
    EXPECT_LE(fused.size(), static_cast<std::size_t>(3 * kp));
  }
}

TEST(Fuse, GrowsWithPerViewBudget) {
  const std::array<std::vector<ScoredUnit>, 3> full = {
      list_of({"a", "b", "c", "d"}), list_of({"c", "a", "d", "b"}), list_of({"d", "c", "b", "a"})};
  std::set<std::string> previous;
  for (std::size_t kp = 1; kp <= 4; ++kp) {
    std::array<std::vector<ScoredUnit>, 3> lists;
    for (std::size_t v = 0; v < 3; ++v) lists[v].assign(full[v].begin(), full[v].begin() + kp);
    const auto ids = ids_of(fuse_rankings(lists));
    const std::set<std::string> now(ids.begin(), ids.end());
    EXPECT_TRUE(std::includes(now.begin(), now.end(), previous.begin(), previous.end())) << kp;
    previous = now;
  }
  EXPECT_EQ(previous.size(), 4u);
}

std::vector<Unit> units_named(std::initializer_list<const char*> ids) {
  std::vector<Unit> out;
  for (const char* id : ids) out.push_back({id, std::string("text of ") + id});
  return out;
}

TEST(RetrieveMc, BudgetFollowsParity) {
  const std::vector<Unit> raw = {{"s1", "apple pie"}, {"s2", "banana split"},
                                 {"s3", "cherry tart"}, {"s4", "apple crumble"}};
  const std::vector<Unit> kw = {{"s1", "dessert"}, {"s2", "apple"},
                                {"s3", "fruit"}, {"s4", "oven"}};
  const std::vector<Unit> sum = {{"s1", "sweet"}, {"s2", "cold"},
                                 {"s3", "apple tart"}, {"s4", "warm"}};
  SparseRanker r(SparseIndex::build(raw, SparseKind::kBm25));
  SparseRanker k(SparseIndex::build(kw, SparseKind::kBm25));
  SparseRanker s(SparseIndex::build(sum, SparseKind::kBm25));
  const ViewRankers views = {&r, &k, &s};
  const auto even = retrieve_mc(views, "apple", RetrievalBudget::whole(3), 0);
  EXPECT_EQ(even.per_view, 1);
  EXPECT_EQ(even.unit_ids(), (std::vector<std::string>{"s1", "s2", "s3"}));
  const auto odd = retrieve_mc(views, "apple", RetrievalBudget::whole(3), 1);
  EXPECT_EQ(odd.per_view, 2);
  EXPECT_EQ(odd.unit_ids(), (std::vector<std::string>{"s1", "s2", "s3", "s4"}));
}

TEST(RetrieveMc, MismatchedUnitSets) {
  SparseRanker a(SparseIndex::build(units_named({"s1", "s2"}), SparseKind::kTfIdf));
  SparseRanker b(SparseIndex::build(units_named({"s1", "s3"}), SparseKind::kTfIdf));
  expect_code(ErrorCode::kViewMismatch,
              [&] { retrieve_mc({&a, &a, &b}, "text", RetrievalBudget::whole(3), 0); });
}

TEST(RetrieveSingle, TakesPrefix) {
  SparseRanker r(SparseIndex::build(units_named({"s1", "s2", "s3"}), SparseKind::kBm25));
  EXPECT_EQ(retrieve_single(r, "s2", RetrievalBudget::whole(2), 0).size(), 2u);
  EXPECT_EQ(retrieve_single(r, "s2", RetrievalBudget::whole(10), 0).size(), 3u);
  EXPECT_EQ(retrieve_single(r, "s2", RetrievalBudget::from_halves(3), 1).size(), 2u);
  EXPECT_EQ(retrieve_single(r, "s2", RetrievalBudget::whole(1), 0)[0].unit_id, "s2");
}

}  // namespace
}  // namespace mcidx
