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

#ifndef MCIDX_CHUNKING_H_
#define MCIDX_CHUNKING_H_

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "mcidx/corpus.h"
#include "mcidx/text.h"

namespace mcidx {

enum class SchemeKind { kContentAware, kFlc, kFlcContent };

// Chunking scheme. Spec strings: "content", "flc:<N>", "flc-content:<N>".
struct Scheme {
  SchemeKind kind = SchemeKind::kContentAware;
  int target = 0;  // token target N; 0 for content-aware

  static Scheme content_aware() { return {SchemeKind::kContentAware, 0}; }
  static Scheme flc(int n) { return {SchemeKind::kFlc, n}; }
  static Scheme flc_content(int n) { return {SchemeKind::kFlcContent, n}; }

  static Scheme parse(std::string_view spec);
  std::string to_string() const;

  friend bool operator==(const Scheme&, const Scheme&) = default;
};

struct Chunk {
  std::string chunk_id;
  std::string doc_id;
  // Unset only for plain FLC chunks whose content crosses a section boundary.
  std::optional<std::string> section_id;
  Span doc_span;
  std::string text;
  Scheme scheme;
};

struct Sentence {
  std::string text;  // exactly input[span], trailing whitespace included
  Span span;
};

// Rule-based splitter: a sentence ends after '.', '!' or '?' when followed by
// whitespace and then an uppercase letter, a digit, or an opening quote or
// bracket. Spans partition the input; no abbreviation handling.
std::vector<Sentence> split_sentences(std::string_view text);

std::vector<Chunk> chunk_content_aware(const Document& doc);
std::vector<Chunk> chunk_flc(const Document& doc, int target_tokens);
std::vector<Chunk> chunk_flc_content(const Document& doc, int target_tokens);
std::vector<Chunk> chunk_document(const Document& doc, const Scheme& scheme);

struct ChunkingErrorReport {
  Scheme scheme;
  std::size_t n_scopes = 0;
  std::size_t n_split = 0;
  double error_rate = 0.0;
};

// A scope is split when no single chunk's doc_span contains it.
ChunkingErrorReport chunking_error(const std::vector<Chunk>& chunks,
                                   const std::vector<QAItem>& qa,
                                   const std::vector<Document>& docs);

std::string chunk_to_json_line(const Chunk& chunk);
void write_chunks_jsonl(const std::vector<Chunk>& chunks,
                        const std::filesystem::path& path);
// Text is reconstructed from `docs`.
std::vector<Chunk> load_chunks_jsonl(const std::filesystem::path& path,
                                     const std::vector<Document>& docs);

}  // namespace mcidx

#endif  // MCIDX_CHUNKING_H_
