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

#include "mcidx/index_io.h"

#include <gtest/gtest.h>

#include <filesystem>

#include "json.hpp"
#include "mcidx/errors.h"
#include "synthetic.h"
#include "test_util.h"

namespace mcidx {
namespace {

using testing_util::read_file;
using testing_util::ScopedDir;
using testing_util::write_file;

std::vector<Unit> sample_units() {
  const auto corpus = synthetic::make_small_corpus(8);
  std::vector<Unit> units;
  for (const Document& d : corpus.docs) {
    for (const Section& s : d.sections()) units.push_back({d.doc_id() + "/" + s.section_id, s.text});
  }
  return units;
}

const char* const kQueries[] = {"part of the", "Zürich café", "quiet river 2024", "zzz"};

void expect_same_rankings(const std::vector<ScoredUnit>& a, const std::vector<ScoredUnit>& b) {
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].unit_id, b[i].unit_id);
    EXPECT_EQ(a[i].score, b[i].score);  // bit-exact
  }
}

class SparseRoundTrip : public ::testing::TestWithParam<SparseKind> {};

TEST_P(SparseRoundTrip, PreservesRankings) {
  ScopedDir dir;
  const SparseIndex built = SparseIndex::build(sample_units(), GetParam(), {1.2, 0.6});
  save_index(built, dir.path());
  const SparseIndex loaded = load_sparse_index(dir.path());
  EXPECT_EQ(loaded.kind(), built.kind());
  EXPECT_EQ(loaded.params().k1, 1.2);
  EXPECT_EQ(loaded.params().b, 0.6);
  for (const char* q : kQueries) {
    expect_same_rankings(rank_units(built.unit_ids(), sparse_scores(built, q)),
                         rank_units(loaded.unit_ids(), sparse_scores(loaded, q)));
  }
  const AnyIndex any = load_index(dir.path());
  EXPECT_TRUE(std::holds_alternative<SparseIndex>(any));
}

INSTANTIATE_TEST_SUITE_P(Kinds, SparseRoundTrip,
                         ::testing::Values(SparseKind::kTfIdf, SparseKind::kBm25));

TEST(DenseRoundTrip, PreservesRankings) {
  ScopedDir dir;
  HashingEmbeddingProvider mock;
  const DenseIndex built = DenseIndex::build(sample_units(), mock);
  save_index(built, dir.path());
  const DenseIndex loaded = load_dense_index(dir.path());
  EXPECT_EQ(loaded.provider(), "mock");
  EXPECT_EQ(loaded.matrix(), built.matrix());
  for (const char* q : kQueries) {
    expect_same_rankings(score_dense(built, q, mock), score_dense(loaded, q, mock));
  }
  EXPECT_EQ(std::filesystem::file_size(dir / "embeddings.f32le"),
            built.size() * built.dim() * sizeof(float));
}

TEST(ManifestChecks, NewerFormatIsVersionMismatch) {
  ScopedDir dir;
  save_index(SparseIndex::build(sample_units(), SparseKind::kBm25), dir.path());
  auto manifest = nlohmann::json::parse(read_file(dir / "manifest.json"));
  manifest["format_version"] = "99";
  write_file(dir / "manifest.json", manifest.dump());
  try {
    load_index(dir.path());
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kVersionMismatch);
  }
}

TEST(ManifestChecks, TruncatedEmbeddingsAreCorrupt) {
  ScopedDir dir;
  HashingEmbeddingProvider mock;
  save_index(DenseIndex::build(sample_units(), mock), dir.path());
  const std::string bytes = read_file(dir / "embeddings.f32le");
  write_file(dir / "embeddings.f32le", bytes.substr(0, bytes.size() - 4));
  try {
    load_index(dir.path());
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kCorruptIndex);
  }
}

TEST(ManifestChecks, FlippedByteFailsChecksum) {
  ScopedDir dir;
  save_index(SparseIndex::build(sample_units(), SparseKind::kTfIdf), dir.path());
  std::string bytes = read_file(dir / "terms.bin");
  bytes[bytes.size() / 2] ^= 0x01;
  write_file(dir / "terms.bin", bytes);
  try {
    load_index(dir.path());
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kCorruptIndex);
  }
}

TEST(ManifestChecks, MissingDirectoryIsIoError) {
  try {
    load_index("/nonexistent/index");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kIo);
  }
}

TEST(ManifestChecks, KindMismatchIsReported) {
  ScopedDir dir;
  save_index(SparseIndex::build(sample_units(), SparseKind::kBm25), dir.path());
  EXPECT_THROW(load_dense_index(dir.path()), Error);
}

}  // namespace
}  // namespace mcidx
