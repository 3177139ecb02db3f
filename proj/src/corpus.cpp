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

#include "mcidx/corpus.h"

#include <algorithm>
#include <regex>
#include <unordered_map>
#include <unordered_set>

#include "json.hpp"
#include "jsonl.h"
#include "mcidx/errors.h"
#include "mcidx/llm.h"
#include "mcidx/prompts.h"

namespace mcidx {

using nlohmann::json;

Document::Document(std::string doc_id, std::string title,
                   std::vector<SectionSource> sections)
    : doc_id_(std::move(doc_id)), title_(std::move(title)) {
  if (sections.empty()) {
    throw Error(ErrorCode::kEmptyDocument, "document " + doc_id_ + " has no sections");
  }
  std::unordered_set<std::string> seen;
  sections_.reserve(sections.size());
  std::size_t cursor = 0;
  const std::size_t sep_len = text::codepoint_length(kSectionSeparator);
  for (std::size_t i = 0; i < sections.size(); ++i) {
    SectionSource& src = sections[i];
    if (!seen.insert(src.section_id).second) {
      throw Error(ErrorCode::kDuplicateId, "section id \"" + src.section_id +
                                               "\" repeated in document " + doc_id_);
    }
    if (i > 0) {
      full_text_ += kSectionSeparator;
      cursor += sep_len;
    }
    Section s;
    s.section_id = std::move(src.section_id);
    s.heading = std::move(src.heading);
    s.level = src.level;
    s.token_count = text::token_count(src.text);
    const std::size_t len = text::codepoint_length(src.text);
    s.doc_span = {cursor, cursor + len};
    cursor += len;
    full_text_ += src.text;
    s.text = std::move(src.text);
    sections_.push_back(std::move(s));
  }
  index_ = text::CodepointIndex(full_text_);
}

const Section* Document::find_section(std::string_view section_id) const {
  for (const Section& s : sections_) {
    if (s.section_id == section_id) return &s;
  }
  return nullptr;
}

std::size_t Document::section_position(std::string_view section_id) const {
  for (std::size_t i = 0; i < sections_.size(); ++i) {
    if (sections_[i].section_id == section_id) return i;
  }
  return sections_.size();
}

// ---------------------------------------------------------------------------
// Question types

namespace {

constexpr std::array<std::string_view, 8> kQuestionTypeNames = {
    "NarrativePlot",  "Summarization", "InferentialImplied", "InformationSynthesis",
    "CauseEffect",    "Comparative",   "Explanatory",        "ThemesMotifs",
};

std::string ascii_lower(std::string_view s) {
  std::string out(s);
  for (char& c : out) {
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  }
  return out;
}

}  // namespace

std::string_view question_type_name(QuestionType type) {
  return kQuestionTypeNames[static_cast<std::size_t>(type)];
}

std::optional<QuestionType> parse_question_type(std::string_view name) {
  for (std::size_t i = 0; i < kQuestionTypeNames.size(); ++i) {
    if (kQuestionTypeNames[i] == name) return kAllQuestionTypes[i];
  }
  return std::nullopt;
}

std::optional<QuestionType> classify_question_type(std::string_view label) {
  if (auto exact = parse_question_type(text::trim(label))) return exact;
  const std::string l = ascii_lower(label);
  const auto has = [&](std::string_view needle) {
    return l.find(needle) != std::string::npos;
  };
  if (has("narrative") || has("plot")) return QuestionType::kNarrativePlot;
  if (has("summar")) return QuestionType::kSummarization;
  if (has("inferen") || has("implied")) return QuestionType::kInferentialImplied;
  if (has("synthes")) return QuestionType::kInformationSynthesis;
  if (has("cause") || has("effect")) return QuestionType::kCauseEffect;
  if (has("compar")) return QuestionType::kComparative;
  if (has("explanat")) return QuestionType::kExplanatory;
  if (has("theme") || has("motif")) return QuestionType::kThemesMotifs;
  return std::nullopt;
}

Span scope_in_document(const QAItem& item, const Document& doc) {
  const Section* section = doc.find_section(item.scope_section_id);
  if (section == nullptr) {
    throw Error(ErrorCode::kUnknownDoc, "section " + item.scope_section_id +
                                            " not in document " + doc.doc_id());
  }
  return item.scope_span.shifted(section->doc_span.start);
}

// ---------------------------------------------------------------------------
// Markdown

namespace {

struct MarkdownBlock {
  std::string heading;
  int level = 0;
  std::string body;
};

std::vector<std::string_view> split_lines(std::string_view s) {
  std::vector<std::string_view> lines;
  std::size_t start = 0;
  while (start <= s.size()) {
    std::size_t nl = s.find('\n', start);
    std::string_view line = s.substr(start, nl == std::string_view::npos
                                                ? std::string_view::npos
                                                : nl - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    lines.push_back(line);
    if (nl == std::string_view::npos) break;
    start = nl + 1;
  }
  return lines;
}

// Returns the heading level (1..6) when `line` is an ATX heading.
int heading_level(std::string_view line) {
  int n = 0;
  while (n < static_cast<int>(line.size()) && line[n] == '#') ++n;
  if (n < 1 || n > 6) return 0;
  if (n == static_cast<int>(line.size())) return 0;
  return (line[n] == ' ' || line[n] == '\t') ? n : 0;
}

std::string heading_text(std::string_view line, int level) {
  std::string_view h = text::trim(line.substr(static_cast<std::size_t>(level)));
  // Optional closing sequence: "## Title ##".
  std::size_t end = h.size();
  while (end > 0 && h[end - 1] == '#') --end;
  if (end < h.size() && (end == 0 || h[end - 1] == ' ' || h[end - 1] == '\t')) {
    h = text::trim(h.substr(0, end));
  }
  return std::string(h);
}

bool is_fence(std::string_view line) {
  std::string_view t = text::trim(line);
  return t.rfind("```", 0) == 0 || t.rfind("~~~", 0) == 0;
}

}  // namespace

Document parse_markdown(std::string_view markdown, const std::string& doc_id,
                        const MarkdownOptions& options) {
  if (text::trim(markdown).empty()) {
    throw Error(ErrorCode::kEmptyDocument, "markdown input for " + doc_id + " is empty");
  }
  std::vector<MarkdownBlock> blocks;
  blocks.push_back({"(preamble)", 0, {}});
  bool in_fence = false;
  for (std::string_view line : split_lines(markdown)) {
    if (is_fence(line)) in_fence = !in_fence;
    const int level = in_fence ? 0 : heading_level(line);
    if (level > 0) {
      blocks.push_back({heading_text(line, level), level, {}});
      continue;
    }
    std::string& body = blocks.back().body;
    body.append(line);
    body.push_back('\n');
  }

  std::vector<std::string> excluded;
  for (const std::string& h : options.excluded_headings) excluded.push_back(ascii_lower(h));

  std::string title;
  std::vector<SectionSource> sections;
  int skip_below = 0;  // >0 while inside an excluded heading's subtree
  for (const MarkdownBlock& block : blocks) {
    if (skip_below > 0) {
      if (block.level > skip_below) continue;
      skip_below = 0;
    }
    if (block.level > 0 &&
        std::find(excluded.begin(), excluded.end(), ascii_lower(block.heading)) !=
            excluded.end()) {
      skip_below = block.level;
      continue;
    }
    if (title.empty() && block.level == 1) title = block.heading;
    std::string_view body = text::trim(block.body);
    if (body.empty()) continue;
    SectionSource src;
    src.section_id = "s" + std::to_string(sections.size() + 1);
    src.heading = block.heading;
    src.level = block.level;
    src.text = std::string(body);
    sections.push_back(std::move(src));
  }
  if (sections.empty()) {
    throw Error(ErrorCode::kEmptyDocument,
                "no content survives heading exclusion in " + doc_id);
  }
  if (title.empty()) {
    for (const MarkdownBlock& block : blocks) {
      if (block.level > 0) {
        title = block.heading;
        break;
      }
    }
  }
  if (title.empty()) title = doc_id;
  return Document(doc_id, std::move(title), std::move(sections));
}

// ---------------------------------------------------------------------------
// JSONL

namespace {

const json& require(const json& obj, const char* key, std::size_t line,
                    json::value_t type) {
  auto it = obj.find(key);
  if (it == obj.end()) {
    throw SchemaError(line, std::string("missing field \"") + key + "\"");
  }
  const bool ok = type == json::value_t::number_integer
                      ? it->is_number_integer()
                      : it->type() == type;
  if (!ok) {
    throw SchemaError(line, std::string("field \"") + key + "\" has the wrong type");
  }
  return *it;
}

json parse_line(std::string_view line, std::size_t line_no) {
  try {
    json j = json::parse(line);
    if (!j.is_object()) throw SchemaError(line_no, "record is not a JSON object");
    return j;
  } catch (const json::exception& e) {
    throw SchemaError(line_no, std::string("invalid JSON: ") + e.what());
  }
}

Document document_from_json(const json& j, std::size_t line_no) {
  std::string doc_id = require(j, "doc_id", line_no, json::value_t::string);
  std::string title;
  if (auto it = j.find("title"); it != j.end()) {
    if (!it->is_string()) throw SchemaError(line_no, "field \"title\" has the wrong type");
    title = *it;
  }
  const json& sections = require(j, "sections", line_no, json::value_t::array);
  if (sections.empty()) throw SchemaError(line_no, "\"sections\" is empty");
  std::vector<SectionSource> sources;
  for (const json& s : sections) {
    if (!s.is_object()) throw SchemaError(line_no, "section is not an object");
    SectionSource src;
    src.section_id = require(s, "section_id", line_no, json::value_t::string);
    src.heading = require(s, "heading", line_no, json::value_t::string);
    src.level = require(s, "level", line_no, json::value_t::number_integer);
    src.text = require(s, "text", line_no, json::value_t::string);
    sources.push_back(std::move(src));
  }
  try {
    return Document(std::move(doc_id), std::move(title), std::move(sources));
  } catch (const Error&) {
    rethrow_with_context("line " + std::to_string(line_no));
  }
}

}  // namespace

std::string document_to_json_line(const Document& doc) {
  json sections = json::array();
  for (const Section& s : doc.sections()) {
    sections.push_back({{"section_id", s.section_id},
                        {"heading", s.heading},
                        {"level", s.level},
                        {"text", s.text}});
  }
  json j = {{"doc_id", doc.doc_id()}, {"title", doc.title()}, {"sections", sections}};
  return j.dump();
}

std::vector<Document> load_corpus_jsonl(const std::filesystem::path& path) {
  std::vector<Document> docs;
  std::unordered_set<std::string> ids;
  detail::for_each_line(path, [&](std::string_view line, std::size_t line_no) {
    Document doc = document_from_json(parse_line(line, line_no), line_no);
    if (!ids.insert(doc.doc_id()).second) {
      throw Error(ErrorCode::kDuplicateId,
                  "doc_id \"" + doc.doc_id() + "\" repeated at line " +
                      std::to_string(line_no));
    }
    docs.push_back(std::move(doc));
  });
  return docs;
}

void write_corpus_jsonl(const std::vector<Document>& docs,
                        const std::filesystem::path& path) {
  std::vector<std::string> lines;
  lines.reserve(docs.size());
  for (const Document& d : docs) lines.push_back(document_to_json_line(d));
  detail::write_lines(path, lines);
}

std::vector<Document> filter_long_docs(const std::vector<Document>& docs,
                                       std::size_t min_tokens) {
  return filter_long_docs(docs, min_tokens, text::token_count);
}

std::vector<Document> filter_long_docs(const std::vector<Document>& docs,
                                       std::size_t min_tokens,
                                       const text::TokenCounter& counter) {
  std::vector<Document> out;
  for (const Document& d : docs) {
    if (counter(d.full_text()) >= min_tokens) out.push_back(d);
  }
  return out;
}

QAItem qa_from_json_line(std::string_view line, std::size_t line_no) {
  json j = parse_line(line, line_no);
  QAItem item;
  item.question_id = require(j, "question_id", line_no, json::value_t::string);
  item.doc_id = require(j, "doc_id", line_no, json::value_t::string);
  item.question = require(j, "question", line_no, json::value_t::string);
  item.answer = require(j, "answer", line_no, json::value_t::string);
  const std::string type = require(j, "question_type", line_no, json::value_t::string);
  auto parsed = parse_question_type(type);
  if (!parsed) throw SchemaError(line_no, "unknown question_type \"" + type + "\"");
  item.question_type = *parsed;
  const json& scope = require(j, "scope", line_no, json::value_t::object);
  item.scope_section_id = require(scope, "section_id", line_no, json::value_t::string);
  const auto start = require(scope, "char_start", line_no, json::value_t::number_integer)
                         .get<long long>();
  const auto end = require(scope, "char_end", line_no, json::value_t::number_integer)
                       .get<long long>();
  if (start < 0 || end < 0) throw SchemaError(line_no, "negative scope offset");
  item.scope_span = {static_cast<std::size_t>(start), static_cast<std::size_t>(end)};
  return item;
}

std::string qa_to_json_line(const QAItem& item) {
  json j = {{"question_id", item.question_id},
            {"doc_id", item.doc_id},
            {"question", item.question},
            {"answer", item.answer},
            {"question_type", question_type_name(item.question_type)},
            {"scope",
             {{"section_id", item.scope_section_id},
              {"char_start", item.scope_span.start},
              {"char_end", item.scope_span.end}}}};
  return j.dump();
}

void write_qa_jsonl(const std::vector<QAItem>& items,
                    const std::filesystem::path& path) {
  std::vector<std::string> lines;
  lines.reserve(items.size());
  for (const QAItem& q : items) lines.push_back(qa_to_json_line(q));
  detail::write_lines(path, lines);
}

namespace {

// Empty string when the item is usable.
std::string rejection_reason(const QAItem& item,
                             const std::unordered_map<std::string, const Document*>& by_id) {
  auto it = by_id.find(item.doc_id);
  if (it == by_id.end()) return "unknown doc_id " + item.doc_id;
  const Section* section = it->second->find_section(item.scope_section_id);
  if (section == nullptr) {
    return "unknown section " + item.scope_section_id + " in " + item.doc_id;
  }
  if (item.scope_span.start >= item.scope_span.end) return "empty or inverted scope";
  if (item.scope_span.end > section->doc_span.length()) {
    return "scope end " + std::to_string(item.scope_span.end) +
           " exceeds section length " + std::to_string(section->doc_span.length());
  }
  return {};
}

QaLoadResult filter_with_lines(std::vector<QAItem> items,
                               const std::vector<std::size_t>& lines,
                               const std::vector<Document>& docs) {
  std::unordered_map<std::string, const Document*> by_id;
  for (const Document& d : docs) by_id.emplace(d.doc_id(), &d);
  QaLoadResult result;
  for (std::size_t i = 0; i < items.size(); ++i) {
    std::string reason = rejection_reason(items[i], by_id);
    if (reason.empty()) {
      result.items.push_back(std::move(items[i]));
    } else {
      result.dropped.push_back({lines[i], items[i].question_id, std::move(reason)});
    }
  }
  return result;
}

}  // namespace

QaLoadResult filter_qa(std::vector<QAItem> items, const std::vector<Document>& docs) {
  const std::vector<std::size_t> lines(items.size(), 0);
  return filter_with_lines(std::move(items), lines, docs);
}

QaLoadResult load_and_filter_qa(const std::filesystem::path& path,
                                const std::vector<Document>& docs) {
  std::vector<QAItem> items;
  std::vector<std::size_t> lines;
  detail::for_each_line(path, [&](std::string_view line, std::size_t line_no) {
    items.push_back(qa_from_json_line(line, line_no));
    lines.push_back(line_no);
  });
  return filter_with_lines(std::move(items), lines, docs);
}

// ---------------------------------------------------------------------------
// Question generation

namespace {

std::string strip_code_fences(std::string_view s) {
  std::string out;
  for (std::string_view line : split_lines(s)) {
    if (is_fence(line)) continue;
    out.append(line);
    out.push_back('\n');
  }
  return out;
}

// Top-level {...} segments of `s`, honouring string literals.
std::vector<std::string_view> brace_segments(std::string_view s) {
  std::vector<std::string_view> out;
  int depth = 0;
  bool in_string = false;
  char quote = 0;
  std::size_t start = 0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    const char c = s[i];
    if (in_string) {
      if (c == '\\') {
        ++i;
      } else if (c == quote) {
        in_string = false;
      }
      continue;
    }
    if (c == '"' && depth > 0) {
      in_string = true;
      quote = c;
    } else if (c == '{') {
      if (depth++ == 0) start = i;
    } else if (c == '}' && depth > 0) {
      if (--depth == 0) out.push_back(s.substr(start, i - start + 1));
    }
  }
  return out;
}

// Accepts strict JSON or objects with bare keys ({question:"..."}).
std::optional<json> parse_lenient_object(std::string_view segment) {
  try {
    return json::parse(segment);
  } catch (const json::exception&) {
  }
  static const std::regex bare_key(R"(([{,]\s*)([A-Za-z_][A-Za-z0-9_]*)\s*:)");
  const std::string quoted =
      std::regex_replace(std::string(segment), bare_key, "$1\"$2\":");
  try {
    return json::parse(quoted);
  } catch (const json::exception&) {
    return std::nullopt;
  }
}

std::vector<json> extract_records(std::string_view output) {
  const std::string cleaned = strip_code_fences(output);
  std::vector<json> records;
  try {
    json whole = json::parse(cleaned);
    if (whole.is_array()) {
      for (json& r : whole) records.push_back(std::move(r));
      return records;
    }
    if (whole.is_object()) {
      records.push_back(std::move(whole));
      return records;
    }
  } catch (const json::exception&) {
  }
  bool any = false;
  for (std::string_view seg : brace_segments(cleaned)) {
    if (auto obj = parse_lenient_object(seg)) {
      any = true;
      records.push_back(std::move(*obj));
    }
  }
  if (!any) throw Error(ErrorCode::kParse, "LLM output contains no parseable JSON object");
  return records;
}

std::optional<std::string> string_field(const json& j, const char* key) {
  if (!j.is_object()) return std::nullopt;
  auto it = j.find(key);
  if (it == j.end() || !it->is_string()) return std::nullopt;
  return it->get<std::string>();
}

}  // namespace

std::vector<QAItem> parse_generated_questions(std::string_view llm_output,
                                              const Document& doc,
                                              const Section& section) {
  const std::vector<json> records = extract_records(llm_output);
  const text::CodepointIndex section_index(section.text);
  std::vector<QAItem> out;
  for (const json& r : records) {
    if (static_cast<int>(out.size()) == kQuestionsPerSection) break;
    auto question = string_field(r, "question");
    auto type = string_field(r, "type");
    auto answer = string_field(r, "answer");
    auto context = string_field(r, "answer_context");
    if (!question || !type || !answer || !context) continue;
    auto qtype = classify_question_type(*type);
    if (!qtype) continue;
    std::string_view needle = text::trim(*context);
    if (needle.empty()) continue;
    const std::size_t byte = section.text.find(needle);
    if (byte == std::string::npos) continue;
    QAItem item;
    item.question_id =
        doc.doc_id() + ":" + section.section_id + ":q" + std::to_string(out.size() + 1);
    item.doc_id = doc.doc_id();
    item.question = std::string(text::trim(*question));
    item.answer = std::string(text::trim(*answer));
    item.question_type = *qtype;
    item.scope_section_id = section.section_id;
    const std::size_t start = section_index.codepoint_at_byte(byte);
    item.scope_span = {start, start + text::codepoint_length(needle)};
    out.push_back(std::move(item));
  }
  return out;
}

std::vector<QAItem> generate_questions(const Document& doc, const Section& section,
                                       LlmClient& llm) {
  if (text::trim(section.text).empty()) {
    throw Error(ErrorCode::kInvalidArgument,
                "section " + section.section_id + " has no text");
  }
  const std::string prompt = prompts::question_generation(section.text, kQuestionsPerSection);
  const std::string output = llm.generate(prompt, kQuestionsMaxTokens);
  return parse_generated_questions(output, doc, section);
}

// ---------------------------------------------------------------------------

CorpusStats corpus_stats(const std::vector<Document>& docs,
                         const std::vector<QAItem>& qa) {
  CorpusStats stats;
  stats.n_documents = docs.size();
  std::unordered_map<std::string, const Document*> by_id;
  std::size_t n_sections = 0;
  double doc_tokens = 0.0;
  double section_tokens = 0.0;
  for (const Document& d : docs) {
    by_id.emplace(d.doc_id(), &d);
    n_sections += d.sections().size();
    doc_tokens += static_cast<double>(text::token_count(d.full_text()));
    for (const Section& s : d.sections()) section_tokens += static_cast<double>(s.token_count);
  }
  if (!docs.empty()) {
    stats.mean_sections_per_doc = static_cast<double>(n_sections) / static_cast<double>(docs.size());
    stats.mean_tokens_per_doc = doc_tokens / static_cast<double>(docs.size());
  }
  if (n_sections > 0) stats.mean_tokens_per_section = section_tokens / static_cast<double>(n_sections);

  double scope_tokens = 0.0;
  for (const QAItem& q : qa) {
    auto it = by_id.find(q.doc_id);
    if (it == by_id.end()) continue;
    const Section* s = it->second->find_section(q.scope_section_id);
    if (s == nullptr || q.scope_span.end > s->doc_span.length() ||
        q.scope_span.start > q.scope_span.end) {
      continue;
    }
    ++stats.n_questions;
    text::CodepointIndex idx(s->text);
    scope_tokens += static_cast<double>(text::token_count(idx.slice(s->text, q.scope_span)));
  }
  if (stats.n_questions > 0) {
    stats.mean_tokens_per_answer_scope = scope_tokens / static_cast<double>(stats.n_questions);
  }
  return stats;
}

}  // namespace mcidx
