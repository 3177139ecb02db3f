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

#ifndef MCIDX_CORPUS_H_
#define MCIDX_CORPUS_H_

#include <array>
#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "mcidx/text.h"

namespace mcidx {

class LlmClient;

struct Section {
  std::string section_id;
  std::string heading;
  int level = 1;  // 0 = preamble before the first heading
  std::string text;
  Span doc_span;  // into Document::full_text()
  std::size_t token_count = 0;
};

// Input for Document construction; spans and counts are derived.
struct SectionSource {
  std::string section_id;
  std::string heading;
  int level = 1;
  std::string text;
};

// A structured document as an ordered list of flat sections. full_text is
// the section texts joined by kSectionSeparator; section spans index it.
// Immutable after construction.
class Document {
 public:
  static constexpr std::string_view kSectionSeparator = "\n";

  Document(std::string doc_id, std::string title,
           std::vector<SectionSource> sections);

  const std::string& doc_id() const { return doc_id_; }
  const std::string& title() const { return title_; }
  const std::vector<Section>& sections() const { return sections_; }
  const std::string& full_text() const { return full_text_; }
  std::size_t length() const { return index_.size(); }

  std::string_view slice(Span span) const { return index_.slice(full_text_, span); }
  const Section* find_section(std::string_view section_id) const;
  std::size_t section_position(std::string_view section_id) const;

 private:
  std::string doc_id_;
  std::string title_;
  std::vector<Section> sections_;
  std::string full_text_;
  text::CodepointIndex index_;
};

enum class QuestionType {
  kNarrativePlot,
  kSummarization,
  kInferentialImplied,
  kInformationSynthesis,
  kCauseEffect,
  kComparative,
  kExplanatory,
  kThemesMotifs,
};

inline constexpr std::array<QuestionType, 8> kAllQuestionTypes = {
    QuestionType::kNarrativePlot,       QuestionType::kSummarization,
    QuestionType::kInferentialImplied,  QuestionType::kInformationSynthesis,
    QuestionType::kCauseEffect,         QuestionType::kComparative,
    QuestionType::kExplanatory,         QuestionType::kThemesMotifs,
};

std::string_view question_type_name(QuestionType type);
std::optional<QuestionType> parse_question_type(std::string_view name);
// Maps free-form labels an LLM returns ("Cause and Effect Questions") to a
// type by keyword.
std::optional<QuestionType> classify_question_type(std::string_view label);

struct QAItem {
  std::string question_id;
  std::string doc_id;
  std::string question;
  std::string answer;
  QuestionType question_type = QuestionType::kNarrativePlot;
  std::string scope_section_id;
  Span scope_span;  // relative to the section text
};

// Scope of `item` in document coordinates. Throws kUnknownDoc if the section
// is missing.
Span scope_in_document(const QAItem& item, const Document& doc);

struct CorpusStats {
  std::size_t n_documents = 0;
  std::size_t n_questions = 0;
  double mean_sections_per_doc = 0.0;
  double mean_tokens_per_doc = 0.0;
  double mean_tokens_per_section = 0.0;
  double mean_tokens_per_answer_scope = 0.0;
};

struct MarkdownOptions {
  std::vector<std::string> excluded_headings = {"See also", "Notes",
                                                "References", "External links"};
};

// Splits markdown at ATX headings into smallest-subdivision sections.
Document parse_markdown(std::string_view markdown, const std::string& doc_id,
                        const MarkdownOptions& options = {});

std::vector<Document> load_corpus_jsonl(const std::filesystem::path& path);
void write_corpus_jsonl(const std::vector<Document>& docs,
                        const std::filesystem::path& path);
std::string document_to_json_line(const Document& doc);

std::vector<Document> filter_long_docs(const std::vector<Document>& docs,
                                       std::size_t min_tokens = 10000);
std::vector<Document> filter_long_docs(const std::vector<Document>& docs,
                                       std::size_t min_tokens,
                                       const text::TokenCounter& counter);

struct DroppedQa {
  std::size_t line = 0;
  std::string question_id;
  std::string reason;
};

struct QaLoadResult {
  std::vector<QAItem> items;
  std::vector<DroppedQa> dropped;
};

QaLoadResult load_and_filter_qa(const std::filesystem::path& path,
                                const std::vector<Document>& docs);
// Same filtering over already-parsed items.
QaLoadResult filter_qa(std::vector<QAItem> items,
                       const std::vector<Document>& docs);
QAItem qa_from_json_line(std::string_view line, std::size_t line_no);
std::string qa_to_json_line(const QAItem& item);
void write_qa_jsonl(const std::vector<QAItem>& items,
                    const std::filesystem::path& path);

inline constexpr int kQuestionsPerSection = 3;

// Asks the LLM for kQuestionsPerSection questions about `section` and keeps
// records whose answer_context occurs verbatim in the section text.
std::vector<QAItem> generate_questions(const Document& doc,
                                       const Section& section, LlmClient& llm);
// Parsing half of generate_questions, exposed for tests.
std::vector<QAItem> parse_generated_questions(std::string_view llm_output,
                                              const Document& doc,
                                              const Section& section);

CorpusStats corpus_stats(const std::vector<Document>& docs,
                         const std::vector<QAItem>& qa);

}  // namespace mcidx

#endif  // MCIDX_CORPUS_H_
