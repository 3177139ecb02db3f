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

// UTF-8 helpers shared by every module. All spans in mcidx are half-open
// ranges of Unicode scalar values (code points), never bytes.

#ifndef MCIDX_TEXT_H_
#define MCIDX_TEXT_H_

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

namespace mcidx {

struct Span {
  std::size_t start = 0;
  std::size_t end = 0;

  constexpr std::size_t length() const { return end > start ? end - start : 0; }
  constexpr bool empty() const { return end <= start; }
  constexpr bool contains(const Span& other) const {
    return start <= other.start && other.end <= end;
  }
  constexpr std::size_t overlap(const Span& other) const {
    std::size_t lo = start > other.start ? start : other.start;
    std::size_t hi = end < other.end ? end : other.end;
    return hi > lo ? hi - lo : 0;
  }
  constexpr Span shifted(std::size_t offset) const {
    return {start + offset, end + offset};
  }

  friend constexpr auto operator<=>(const Span&, const Span&) = default;
};

namespace text {

// Decodes one scalar value starting at byte `pos`. Invalid or truncated
// sequences decode as U+FFFD consuming a single byte.
struct Decoded {
  char32_t cp;
  std::size_t bytes;
};
Decoded decode_one(std::string_view s, std::size_t pos);

std::u32string decode_utf8(std::string_view s);
std::string encode_utf8(std::u32string_view s);
void append_utf8(std::string& out, char32_t cp);
std::size_t codepoint_length(std::string_view s);

bool is_space(char32_t cp);
bool is_punct(char32_t cp);
bool is_upper(char32_t cp);
bool is_digit(char32_t cp);
char32_t to_lower(char32_t cp);

std::string_view trim(std::string_view s);

// Number of maximal runs of non-whitespace code points.
std::size_t token_count(std::string_view s);

std::vector<std::string> whitespace_tokens(std::string_view s);

// Keeps the first `max_tokens` whitespace tokens, joined by single spaces.
// Text within the limit is returned unchanged.
std::string truncate_tokens(std::string_view s, std::size_t max_tokens,
                            bool* truncated = nullptr);

using TokenCounter = std::function<std::size_t(std::string_view)>;

// Maps code-point offsets of one string to byte offsets.
class CodepointIndex {
 public:
  CodepointIndex() = default;
  explicit CodepointIndex(std::string_view s);

  // Number of code points.
  std::size_t size() const { return offsets_.empty() ? 0 : offsets_.size() - 1; }
  std::size_t byte_offset(std::size_t cp) const;
  // Code-point offset of a byte position that starts a scalar value.
  std::size_t codepoint_at_byte(std::size_t byte) const;
  std::string_view slice(std::string_view s, Span span) const;

 private:
  std::vector<std::uint32_t> offsets_;  // size()+1 entries
};

}  // namespace text
}  // namespace mcidx

#endif  // MCIDX_TEXT_H_
