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


#ifndef MCIDX_VIEWS_H_
#define MCIDX_VIEWS_H_

#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <tuple>
#include <unordered_set>
#include <vector>

#include "mcidx/corpus.h"
#include "mcidx/llm.h"
#include "mcidx/retrieval.h"
#include "mcidx/view_kind.h"

namespace mcidx {

enum class Provenance { kIdentity, kLlmGenerated, kExtractiveFallback };

std::string_view provenance_name(Provenance p);
std::optional<Provenance> parse_provenance(std::string_view name);

struct ViewEntry {
  std::string doc_id;
  std::string section_id;
  ViewKind view_kind = ViewKind::kRawText;
  std::string text;
  Provenance provenance = Provenance::kIdentity;
  bool truncated = false;  // LLM summary cut to kMaxSummaryTokens
};

// Sections above this many tokens get an LLM summary; shorter ones are
// their own summary.
inline constexpr std::size_t kSummaryTokenThreshold = 200;
inline constexpr std::size_t kExtractiveSummaryWords = 200;
inline constexpr std::size_t kMaxSummaryTokens = 512;
inline constexpr std::size_t kDefaultKeywordCount = 20;
inline constexpr std::string_view kKeywordSeparator = "; ";

std::string generate_summary(const Section& section, LlmClient& llm);
std::vector<std::string> generate_keywords(const Section& section, LlmClient& llm);

// Parses "[a, b, c]" (or a JSON string array) found anywhere in `output`.
// Items are trimmed and unquoted; empties and case-insensitive repeats are
// dropped. Throws kParse when no bracketed list is present.
std::vector<std::string> parse_keyword_list(std::string_view output);

std::string join_keywords(const std::vector<std::string>& keywords);

// Leading sentences within kExtractiveSummaryWords words; never empty for a
// non-empty section.
std::string extractive_summary(const Section& section);

using Stopwords = std::unordered_set<std::string>;
const Stopwords& default_stopwords();

// Top-n section terms by TF-IDF over the document's sections, stopwords
// excluded, ties by first occurrence in the section.
std::vector<std::string> extractive_keywords(const Section& section, const Document& doc,
                                             std::size_t n = kDefaultKeywordCount,
                                             const Stopwords& stopwords = default_stopwords());

struct ViewGenerator {
  enum class Kind { kExtractive, kLlm };

  Kind kind = Kind::kExtractive;
  LlmClient* llm = nullptr;
  std::size_t keyword_count = kDefaultKeywordCount;
  const Stopwords* stopwords = nullptr;  // null: default_stopwords()

  static ViewGenerator extractive() { return {}; }
  static ViewGenerator with_llm(LlmClient& client) { return {Kind::kLlm, &client}; }
};

// Three entries per section (RawText, Keywords, Summary) in section order.
// Sections are processed in parallel; errors name the failing section.
std::vector<ViewEntry> build_views(const Document& doc, const ViewGenerator& generator);

std::string view_to_json_line(const ViewEntry& entry);
ViewEntry view_from_json_line(std::string_view line, std::size_t line_no);
void write_views_jsonl(const std::vector<ViewEntry>& entries,
                       const std::filesystem::path& path);
std::vector<ViewEntry> load_views_jsonl(const std::filesystem::path& path);

// Lookup of view texts by (doc, section, kind).
class ViewStore {
 public:
  ViewStore() = default;
  // Throws kDuplicateId on a repeated (doc, section, kind).
  explicit ViewStore(std::vector<ViewEntry> entries);

  // One unit per section of `doc` (id = section_id), in section order.
  // Throws kViewMismatch when a section lacks the view.
  std::vector<Unit> units(const Document& doc, ViewKind kind) const;
  bool has_document(std::string_view doc_id) const;
  const std::vector<ViewEntry>& entries() const { return entries_; }

 private:
  std::vector<ViewEntry> entries_;
  std::map<std::tuple<std::string, std::string, int>, std::size_t, std::less<>> lookup_;
  std::unordered_set<std::string> docs_;
};

}  // namespace mcidx

#endif  // MCIDX_VIEWS_H_
