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


#include "mcidx/views.h"

#include <algorithm>
#include <exception>
#include <unordered_map>

#include "json.hpp"
#include "jsonl.h"
#include "mcidx/chunking.h"
#include "mcidx/errors.h"
#include "mcidx/prompts.h"
#include "mcidx/text.h"

namespace mcidx {

using nlohmann::json;

std::string_view provenance_name(Provenance p) {
  switch (p) {
    case Provenance::kIdentity: return "Identity";
    case Provenance::kLlmGenerated: return "LlmGenerated";
    case Provenance::kExtractiveFallback: return "ExtractiveFallback";
  }
  return "?";
}

std::optional<Provenance> parse_provenance(std::string_view name) {
  for (Provenance p : {Provenance::kIdentity, Provenance::kLlmGenerated,
                       Provenance::kExtractiveFallback}) {
    if (provenance_name(p) == name) return p;
  }
  return std::nullopt;
}

std::string generate_summary(const Section& section, LlmClient& llm) {
  if (section.token_count <= kSummaryTokenThreshold) return section.text;
  return llm.generate(prompts::summary(section.heading, section.text), kSummaryMaxTokens);
}

namespace {

std::string lower(std::string_view s) {
  std::string out;
  for (char32_t cp : text::decode_utf8(s)) text::append_utf8(out, text::to_lower(cp));
  return out;
}

std::string_view unquote(std::string_view s) {
  s = text::trim(s);
  while (s.size() >= 2 && (s.front() == '"' || s.front() == '\'') && s.back() == s.front()) {
    s = text::trim(s.substr(1, s.size() - 2));
  }
  return s;
}

}  // namespace

std::vector<std::string> parse_keyword_list(std::string_view output) {
  const std::size_t open = output.find('[');
  const std::size_t close = output.rfind(']');
  if (open == std::string_view::npos || close == std::string_view::npos || close < open) {
    throw Error(ErrorCode::kParse, "keyword output has no [...] list");
  }
  const std::string_view list = output.substr(open, close - open + 1);
  std::vector<std::string> raw;
  json j = json::parse(list, nullptr, false);
  if (!j.is_discarded() && j.is_array() &&
      std::all_of(j.begin(), j.end(), [](const json& x) { return x.is_string(); })) {
    for (const json& x : j) raw.push_back(x.get<std::string>());
  } else {
    std::string_view inner = list.substr(1, list.size() - 2);
    std::size_t pos = 0;
    while (pos <= inner.size()) {
      std::size_t comma = inner.find(',', pos);
      if (comma == std::string_view::npos) comma = inner.size();
      raw.emplace_back(inner.substr(pos, comma - pos));
      pos = comma + 1;
    }
  }
  std::vector<std::string> out;
  std::unordered_set<std::string> seen;
  for (const std::string& item : raw) {
    const std::string_view kw = unquote(item);
    if (kw.empty()) continue;
    if (seen.insert(lower(kw)).second) out.emplace_back(kw);
  }
  return out;
}

std::vector<std::string> generate_keywords(const Section& section, LlmClient& llm) {
  return parse_keyword_list(
      llm.generate(prompts::keywords(section.heading, section.text), kKeywordsMaxTokens));
}

std::string join_keywords(const std::vector<std::string>& keywords) {
  std::string out;
  for (std::size_t i = 0; i < keywords.size(); ++i) {
    if (i > 0) out += kKeywordSeparator;
    out += keywords[i];
  }
  return out;
}

std::string extractive_summary(const Section& section) {
  std::string out;
  std::size_t words = 0;
  for (const Sentence& s : split_sentences(section.text)) {
    const std::size_t n = text::token_count(s.text);
    if (!out.empty() && words + n > kExtractiveSummaryWords) break;
    out += s.text;
    words += n;
  }
  return std::string(text::trim(out));
}

const Stopwords& default_stopwords() {
  static const Stopwords kWords = {
      "a",       "about",   "above",  "after",   "again",   "against", "all",     "also",
      "am",      "an",      "and",    "any",     "are",     "as",      "at",      "be",
      "because", "been",    "before", "being",   "below",   "between", "both",    "but",
      "by",      "can",     "could",  "did",     "do",      "does",    "doing",   "down",
      "during",  "each",    "either", "else",    "ever",    "every",   "few",     "for",
      "from",    "further", "had",    "has",     "have",    "having",  "he",      "her",
      "here",    "hers",    "herself", "him",    "himself", "his",     "how",     "however",
      "i",       "if",      "in",     "into",    "is",      "it",      "its",     "itself",
      "just",    "may",     "me",     "might",   "more",    "most",    "much",    "must",
      "my",      "myself",  "neither", "no",     "nor",     "not",     "now",     "of",
      "off",     "on",      "once",   "one",     "only",    "or",      "other",   "our",
      "ours",    "ourselves", "out",  "over",    "own",     "same",    "shall",   "she",
      "should",  "since",   "so",     "some",    "such",    "than",    "that",    "the",
      "their",   "theirs",  "them",   "themselves", "then", "there",   "these",   "they",
      "this",    "those",   "though", "through", "thus",    "to",      "too",     "under",
      "until",   "up",      "upon",   "us",      "very",    "was",     "we",      "were",
      "what",    "when",    "where",  "whether", "which",   "while",   "who",     "whom",
      "whose",   "why",     "will",   "with",    "within",  "without", "would",   "yet",
      "you",     "your",    "yours",  "yourself", "yourselves", "s",   "t",       "don't",
      "it's",    "many",    "like",   "even",    "still",   "among",   "via",     "per",
  };
  return kWords;
}

namespace {

// Keywords of section `pos` given a TF-IDF index over the document's sections.
std::vector<std::string> keywords_from_index(const SparseIndex& index, std::size_t pos,
                                             const Section& section, std::size_t n,
                                             const Stopwords& stopwords) {
  struct Candidate {
    std::uint32_t term;
    double score;
    std::size_t first;
  };
  std::unordered_map<std::uint32_t, std::size_t> first_seen;
  const std::vector<std::string> terms = tokenize_terms(section.text);
  for (std::size_t i = 0; i < terms.size(); ++i) {
    if (auto id = index.term_id(terms[i])) first_seen.try_emplace(*id, i);
  }
  const kernels::CsrMatrix& counts = index.counts();
  std::vector<Candidate> candidates;
  for (std::uint32_t k = counts.row_offsets[pos]; k < counts.row_offsets[pos + 1]; ++k) {
    const std::uint32_t term = counts.term_ids[k];
    if (stopwords.count(index.terms()[term]) != 0) continue;
    candidates.push_back({term, counts.values[k] * index.idf(term), first_seen.at(term)});
  }
  std::sort(candidates.begin(), candidates.end(), [](const Candidate& a, const Candidate& b) {
    if (a.score != b.score) return a.score > b.score;
    return a.first < b.first;
  });
  std::vector<std::string> out;
  for (std::size_t i = 0; i < candidates.size() && i < n; ++i) {
    out.push_back(index.terms()[candidates[i].term]);
  }
  return out;
}

SparseIndex section_index(const Document& doc) {
  std::vector<Unit> units;
  units.reserve(doc.sections().size());
  for (const Section& s : doc.sections()) units.push_back({s.section_id, s.text});
  return SparseIndex::build(units, SparseKind::kTfIdf);
}

}  // namespace

std::vector<std::string> extractive_keywords(const Section& section, const Document& doc,
                                             std::size_t n, const Stopwords& stopwords) {
  if (n < 1) throw Error(ErrorCode::kInvalidArgument, "keyword count must be at least 1");
  const std::size_t pos = doc.section_position(section.section_id);
  return keywords_from_index(section_index(doc), pos, doc.sections()[pos], n, stopwords);
}

std::vector<ViewEntry> build_views(const Document& doc, const ViewGenerator& generator) {
  const bool use_llm = generator.kind == ViewGenerator::Kind::kLlm;
  if (use_llm && generator.llm == nullptr) {
    throw Error(ErrorCode::kInvalidArgument, "LLM view generator without a client");
  }
  if (generator.keyword_count < 1) {
    throw Error(ErrorCode::kInvalidArgument, "keyword count must be at least 1");
  }
  const Stopwords& stopwords =
      generator.stopwords != nullptr ? *generator.stopwords : default_stopwords();
  const std::vector<Section>& sections = doc.sections();
  std::optional<SparseIndex> tfidf;
  if (!use_llm) tfidf = section_index(doc);

  std::vector<ViewEntry> out(sections.size() * 3);
  std::vector<std::exception_ptr> errors(sections.size());
  const auto n = static_cast<std::ptrdiff_t>(sections.size());
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    const auto pos = static_cast<std::size_t>(i);
    const Section& s = sections[pos];
    try {
      ViewEntry raw{doc.doc_id(), s.section_id, ViewKind::kRawText, s.text, Provenance::kIdentity};
      ViewEntry keywords{doc.doc_id(), s.section_id, ViewKind::kKeywords, "",
                         Provenance::kExtractiveFallback};
      ViewEntry summary{doc.doc_id(), s.section_id, ViewKind::kSummary, "",
                        Provenance::kExtractiveFallback};
      if (use_llm) {
        keywords.text = join_keywords(generate_keywords(s, *generator.llm));
        keywords.provenance = Provenance::kLlmGenerated;
        if (s.token_count > kSummaryTokenThreshold) {
          summary.text = text::truncate_tokens(generate_summary(s, *generator.llm),
                                               kMaxSummaryTokens, &summary.truncated);
          summary.provenance = Provenance::kLlmGenerated;
        } else {
          summary.text = s.text;
          summary.provenance = Provenance::kIdentity;
        }
      } else {
        keywords.text = join_keywords(
            keywords_from_index(*tfidf, pos, s, generator.keyword_count, stopwords));
        summary.text = extractive_summary(s);
      }
      out[pos * 3] = std::move(raw);
      out[pos * 3 + 1] = std::move(keywords);
      out[pos * 3 + 2] = std::move(summary);
    } catch (...) {
      errors[pos] = std::current_exception();
    }
  }
  for (std::size_t pos = 0; pos < errors.size(); ++pos) {
    if (!errors[pos]) continue;
    try {
      std::rethrow_exception(errors[pos]);
    } catch (...) {
      rethrow_with_context("doc " + doc.doc_id() + " section " + sections[pos].section_id);
    }
  }
  return out;
}

std::string view_to_json_line(const ViewEntry& e) {
  return json{{"doc_id", e.doc_id},
              {"section_id", e.section_id},
              {"view_kind", view_kind_name(e.view_kind)},
              {"text", e.text},
              {"provenance", provenance_name(e.provenance)},
              {"truncated", e.truncated}}
      .dump();
}

ViewEntry view_from_json_line(std::string_view line, std::size_t line_no) {
  json j = json::parse(line, nullptr, false);
  if (j.is_discarded() || !j.is_object()) throw SchemaError(line_no, "record is not a JSON object");
  auto str = [&](const char* key) {
    auto it = j.find(key);
    if (it == j.end() || !it->is_string()) {
      throw SchemaError(line_no, std::string("missing or non-string field \"") + key + "\"");
    }
    return it->get<std::string>();
  };
  ViewEntry e;
  e.doc_id = str("doc_id");
  e.section_id = str("section_id");
  e.text = str("text");
  const std::string kind = str("view_kind");
  const auto vk = parse_view_kind(kind);
  if (!vk) throw SchemaError(line_no, "unknown view_kind \"" + kind + "\"");
  e.view_kind = *vk;
  const std::string prov = str("provenance");
  const auto p = parse_provenance(prov);
  if (!p) throw SchemaError(line_no, "unknown provenance \"" + prov + "\"");
  e.provenance = *p;
  if (auto it = j.find("truncated"); it != j.end()) {
    if (!it->is_boolean()) throw SchemaError(line_no, "field \"truncated\" is not a boolean");
    e.truncated = it->get<bool>();
  }
  return e;
}

void write_views_jsonl(const std::vector<ViewEntry>& entries,
                       const std::filesystem::path& path) {
  std::vector<std::string> lines;
  lines.reserve(entries.size());
  for (const ViewEntry& e : entries) lines.push_back(view_to_json_line(e));
  detail::write_lines(path, lines);
}

std::vector<ViewEntry> load_views_jsonl(const std::filesystem::path& path) {
  std::vector<ViewEntry> out;
  detail::for_each_line(path, [&](std::string_view line, std::size_t line_no) {
    out.push_back(view_from_json_line(line, line_no));
  });
  return out;
}

ViewStore::ViewStore(std::vector<ViewEntry> entries) : entries_(std::move(entries)) {
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    const ViewEntry& e = entries_[i];
    auto key = std::make_tuple(e.doc_id, e.section_id, static_cast<int>(e.view_kind));
    if (!lookup_.emplace(std::move(key), i).second) {
      throw Error(ErrorCode::kDuplicateId, "view " + std::string(view_kind_name(e.view_kind)) +
                                               " repeated for " + e.doc_id + "/" + e.section_id);
    }
    docs_.insert(e.doc_id);
  }
}

std::vector<Unit> ViewStore::units(const Document& doc, ViewKind kind) const {
  std::vector<Unit> out;
  out.reserve(doc.sections().size());
  for (const Section& s : doc.sections()) {
    auto it = lookup_.find(std::make_tuple(doc.doc_id(), s.section_id, static_cast<int>(kind)));
    if (it == lookup_.end()) {
      throw Error(ErrorCode::kViewMismatch, "no " + std::string(view_kind_name(kind)) +
                                                " view for " + doc.doc_id() + "/" + s.section_id);
    }
    out.push_back({s.section_id, entries_[it->second].text});
  }
  return out;
}

bool ViewStore::has_document(std::string_view doc_id) const {
  return docs_.count(std::string(doc_id)) != 0;
}

}  // namespace mcidx
