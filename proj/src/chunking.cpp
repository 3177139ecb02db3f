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

#include "mcidx/chunking.h"

#include <charconv>
#include <unordered_map>

#include "json.hpp"
#include "jsonl.h"
#include "mcidx/errors.h"

namespace mcidx {

namespace {

int parse_target(std::string_view digits, std::string_view spec) {
  int n = 0;
  auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), n);
  if (ec != std::errc() || ptr != digits.data() + digits.size() || digits.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "bad scheme spec \"" + std::string(spec) + "\"");
  }
  if (n < 1) {
    throw Error(ErrorCode::kInvalidTarget,
                "chunk target must be >= 1 in \"" + std::string(spec) + "\"");
  }
  return n;
}

}  // namespace

Scheme Scheme::parse(std::string_view spec) {
  if (spec == "content") return content_aware();
  if (spec.rfind("flc-content:", 0) == 0) {
    return flc_content(parse_target(spec.substr(12), spec));
  }
  if (spec.rfind("flc:", 0) == 0) return flc(parse_target(spec.substr(4), spec));
  throw Error(ErrorCode::kInvalidArgument,
              "unknown scheme \"" + std::string(spec) +
                  "\" (expected content | flc:<N> | flc-content:<N>)");
}

std::string Scheme::to_string() const {
  switch (kind) {
    case SchemeKind::kContentAware: return "content";
    case SchemeKind::kFlc: return "flc:" + std::to_string(target);
    case SchemeKind::kFlcContent: return "flc-content:" + std::to_string(target);
  }
  return "?";
}

// ---------------------------------------------------------------------------

namespace {

bool is_terminator(char32_t c) { return c == '.' || c == '!' || c == '?'; }

bool is_opening(char32_t c) {
  switch (c) {
    case '"': case '\'': case '(': case '[': case '{':
    case 0x201C: case 0x2018: case 0xAB: case 0x201E:
      return true;
    default:
      return false;
  }
}

}  // namespace

std::vector<Sentence> split_sentences(std::string_view input) {
  const std::u32string cps = text::decode_utf8(input);
  std::vector<Sentence> out;
  const std::size_t n = cps.size();
  std::size_t start = 0;
  const auto emit = [&](std::size_t end) {
    out.push_back({{}, {start, end}});
    start = end;
  };
  for (std::size_t i = 0; i + 1 < n; ++i) {
    if (!is_terminator(cps[i]) || !text::is_space(cps[i + 1])) continue;
    std::size_t j = i + 1;
    while (j < n && text::is_space(cps[j])) ++j;
    if (j == n) break;
    const char32_t next = cps[j];
    if (text::is_upper(next) || text::is_digit(next) || is_opening(next)) {
      emit(j);
      i = j - 1;
    }
  }
  if (start < n) emit(n);
  // Slice the original bytes so invalid UTF-8 round-trips unchanged.
  if (!out.empty()) {
    text::CodepointIndex idx(input);
    for (Sentence& s : out) s.text = std::string(idx.slice(input, s.span));
  }
  return out;
}

// ---------------------------------------------------------------------------

namespace {

// Non-whitespace extent of `span` within `doc`, or an empty span.
Span content_extent(const Document& doc, Span span) {
  const std::u32string cps = text::decode_utf8(doc.slice(span));
  std::size_t lo = 0;
  std::size_t hi = cps.size();
  while (lo < hi && text::is_space(cps[lo])) ++lo;
  while (hi > lo && text::is_space(cps[hi - 1])) --hi;
  return {span.start + lo, span.start + hi};
}

std::optional<std::string> owning_section(const Document& doc, Span span) {
  Span extent = content_extent(doc, span);
  if (extent.empty()) extent = span;
  for (const Section& s : doc.sections()) {
    if (s.doc_span.contains(extent)) return s.section_id;
  }
  return std::nullopt;
}

void check_target(int target_tokens) {
  if (target_tokens < 1) {
    throw Error(ErrorCode::kInvalidTarget,
                "target_tokens must be >= 1, got " + std::to_string(target_tokens));
  }
}

// Greedy sentence packing over `body`, which starts at `base` in full_text.
// Returns chunk spans in document coordinates.
std::vector<Span> pack_sentences(std::string_view body, std::size_t base,
                                 int target_tokens) {
  std::vector<Span> spans;
  std::size_t open_start = 0;
  std::size_t open_end = 0;
  std::size_t tokens = 0;
  bool open = false;
  std::size_t total = 0;
  for (const Sentence& s : split_sentences(body)) {
    const std::size_t t = text::token_count(s.text);
    total += t;
    if (!open) {
      open = true;
      open_start = s.span.start;
      tokens = 0;
    }
    open_end = s.span.end;
    tokens += t;
    if (tokens >= static_cast<std::size_t>(target_tokens)) {
      spans.push_back({base + open_start, base + open_end});
      open = false;
    }
  }
  if (open) spans.push_back({base + open_start, base + open_end});
  if (total == 0) spans.clear();
  return spans;
}

}  // namespace

std::vector<Chunk> chunk_content_aware(const Document& doc) {
  std::vector<Chunk> out;
  out.reserve(doc.sections().size());
  for (const Section& s : doc.sections()) {
    out.push_back({s.section_id, doc.doc_id(), s.section_id, s.doc_span, s.text,
                   Scheme::content_aware()});
  }
  return out;
}

std::vector<Chunk> chunk_flc(const Document& doc, int target_tokens) {
  check_target(target_tokens);
  const Scheme scheme = Scheme::flc(target_tokens);
  std::vector<Chunk> out;
  for (const Span& span : pack_sentences(doc.full_text(), 0, target_tokens)) {
    Chunk c;
    c.chunk_id = "flc" + std::to_string(target_tokens) + "-" + std::to_string(out.size());
    c.doc_id = doc.doc_id();
    c.section_id = owning_section(doc, span);
    c.doc_span = span;
    c.text = std::string(doc.slice(span));
    c.scheme = scheme;
    out.push_back(std::move(c));
  }
  return out;
}

std::vector<Chunk> chunk_flc_content(const Document& doc, int target_tokens) {
  check_target(target_tokens);
  const Scheme scheme = Scheme::flc_content(target_tokens);
  std::vector<Chunk> out;
  for (const Section& s : doc.sections()) {
    std::size_t j = 0;
    for (const Span& span : pack_sentences(s.text, s.doc_span.start, target_tokens)) {
      Chunk c;
      c.chunk_id = "fc" + std::to_string(target_tokens) + "-" + s.section_id + "-" +
                   std::to_string(j++);
      c.doc_id = doc.doc_id();
      c.section_id = s.section_id;
      c.doc_span = span;
      c.text = std::string(doc.slice(span));
      c.scheme = scheme;
      out.push_back(std::move(c));
    }
  }
  return out;
}

std::vector<Chunk> chunk_document(const Document& doc, const Scheme& scheme) {
  switch (scheme.kind) {
    case SchemeKind::kContentAware: return chunk_content_aware(doc);
    case SchemeKind::kFlc: return chunk_flc(doc, scheme.target);
    case SchemeKind::kFlcContent: return chunk_flc_content(doc, scheme.target);
  }
  return {};
}

// ---------------------------------------------------------------------------

ChunkingErrorReport chunking_error(const std::vector<Chunk>& chunks,
                                   const std::vector<QAItem>& qa,
                                   const std::vector<Document>& docs) {
  ChunkingErrorReport report;
  if (!chunks.empty()) report.scheme = chunks.front().scheme;
  std::unordered_map<std::string, std::vector<Span>> spans_by_doc;
  for (const Chunk& c : chunks) {
    if (!(c.scheme == report.scheme)) {
      throw Error(ErrorCode::kInvalidArgument,
                  "chunks mix schemes " + report.scheme.to_string() + " and " +
                      c.scheme.to_string());
    }
    spans_by_doc[c.doc_id].push_back(c.doc_span);
  }
  std::unordered_map<std::string, const Document*> docs_by_id;
  for (const Document& d : docs) docs_by_id.emplace(d.doc_id(), &d);

  for (const QAItem& item : qa) {
    auto spans = spans_by_doc.find(item.doc_id);
    auto doc = docs_by_id.find(item.doc_id);
    if (spans == spans_by_doc.end() || doc == docs_by_id.end()) {
      throw Error(ErrorCode::kUnknownDoc, "question " + item.question_id +
                                              " references document " + item.doc_id +
                                              " absent from the chunk set");
    }
    const Span scope = scope_in_document(item, *doc->second);
    ++report.n_scopes;
    bool contained = false;
    for (const Span& s : spans->second) {
      if (s.contains(scope)) {
        contained = true;
        break;
      }
    }
    if (!contained) ++report.n_split;
  }
  if (report.n_scopes > 0) {
    report.error_rate =
        static_cast<double>(report.n_split) / static_cast<double>(report.n_scopes);
  }
  return report;
}

// ---------------------------------------------------------------------------

std::string chunk_to_json_line(const Chunk& chunk) {
  nlohmann::json j = {{"chunk_id", chunk.chunk_id},
                      {"doc_id", chunk.doc_id},
                      {"section_id", nullptr},
                      {"char_start", chunk.doc_span.start},
                      {"char_end", chunk.doc_span.end},
                      {"scheme", chunk.scheme.to_string()}};
  if (chunk.section_id) j["section_id"] = *chunk.section_id;
  return j.dump();
}

void write_chunks_jsonl(const std::vector<Chunk>& chunks,
                        const std::filesystem::path& path) {
  std::vector<std::string> lines;
  lines.reserve(chunks.size());
  for (const Chunk& c : chunks) lines.push_back(chunk_to_json_line(c));
  detail::write_lines(path, lines);
}

std::vector<Chunk> load_chunks_jsonl(const std::filesystem::path& path,
                                     const std::vector<Document>& docs) {
  std::unordered_map<std::string, const Document*> by_id;
  for (const Document& d : docs) by_id.emplace(d.doc_id(), &d);
  std::vector<Chunk> out;
  detail::for_each_line(path, [&](std::string_view line, std::size_t line_no) {
    Chunk c;
    try {
      nlohmann::json j = nlohmann::json::parse(line);
      c.chunk_id = j.at("chunk_id").get<std::string>();
      c.doc_id = j.at("doc_id").get<std::string>();
      if (!j.at("section_id").is_null()) c.section_id = j.at("section_id").get<std::string>();
      c.doc_span = {j.at("char_start").get<std::size_t>(), j.at("char_end").get<std::size_t>()};
      c.scheme = Scheme::parse(j.at("scheme").get<std::string>());
    } catch (const nlohmann::json::exception& e) {
      throw SchemaError(line_no, e.what());
    } catch (const Error& e) {
      throw SchemaError(line_no, e.what());
    }
    auto doc = by_id.find(c.doc_id);
    if (doc == by_id.end()) {
      throw Error(ErrorCode::kUnknownDoc, "chunk references unknown document " + c.doc_id);
    }
    if (c.doc_span.start > c.doc_span.end || c.doc_span.end > doc->second->length()) {
      throw SchemaError(line_no, "chunk span outside document");
    }
    c.text = std::string(doc->second->slice(c.doc_span));
    out.push_back(std::move(c));
  });
  return out;
}

}  // namespace mcidx
