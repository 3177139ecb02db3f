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

#include "mcidx/text.h"

#include <algorithm>

#include "mcidx/errors.h"

namespace mcidx::text {

Decoded decode_one(std::string_view s, std::size_t pos) {
  const auto byte = [&](std::size_t i) {
    return static_cast<unsigned char>(s[i]);
  };
  const unsigned char b0 = byte(pos);
  if (b0 < 0x80) return {b0, 1};

  std::size_t len = 0;
  char32_t cp = 0;
  char32_t min = 0;
  if ((b0 & 0xE0) == 0xC0) {
    len = 2; cp = b0 & 0x1F; min = 0x80;
  } else if ((b0 & 0xF0) == 0xE0) {
    len = 3; cp = b0 & 0x0F; min = 0x800;
  } else if ((b0 & 0xF8) == 0xF0) {
    len = 4; cp = b0 & 0x07; min = 0x10000;
  } else {
    return {0xFFFD, 1};
  }
  if (pos + len > s.size()) return {0xFFFD, 1};
  for (std::size_t i = 1; i < len; ++i) {
    const unsigned char b = byte(pos + i);
    if ((b & 0xC0) != 0x80) return {0xFFFD, 1};
    cp = (cp << 6) | (b & 0x3F);
  }
  if (cp < min || cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) {
    return {0xFFFD, 1};
  }
  return {cp, len};
}

std::u32string decode_utf8(std::string_view s) {
  std::u32string out;
  out.reserve(s.size());
  for (std::size_t pos = 0; pos < s.size();) {
    Decoded d = decode_one(s, pos);
    out.push_back(d.cp);
    pos += d.bytes;
  }
  return out;
}

void append_utf8(std::string& out, char32_t cp) {
  if (cp < 0x80) {
    out.push_back(static_cast<char>(cp));
  } else if (cp < 0x800) {
    out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else if (cp < 0x10000) {
    out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else {
    out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  }
}

std::string encode_utf8(std::u32string_view s) {
  std::string out;
  out.reserve(s.size());
  for (char32_t cp : s) append_utf8(out, cp);
  return out;
}

std::size_t codepoint_length(std::string_view s) {
  std::size_t n = 0;
  for (std::size_t pos = 0; pos < s.size(); ++n) pos += decode_one(s, pos).bytes;
  return n;
}

bool is_space(char32_t cp) {
  if (cp >= 0x09 && cp <= 0x0D) return true;
  switch (cp) {
    case 0x20: case 0x85: case 0xA0: case 0x1680: case 0x2028: case 0x2029:
    case 0x202F: case 0x205F: case 0x3000:
      return true;
    default:
      return cp >= 0x2000 && cp <= 0x200A;
  }
}

bool is_punct(char32_t cp) {
  if (cp < 0x80) {
    return (cp >= 0x21 && cp <= 0x2F) || (cp >= 0x3A && cp <= 0x40) ||
           (cp >= 0x5B && cp <= 0x60) || (cp >= 0x7B && cp <= 0x7E);
  }
  // Latin-1 punctuation and symbols, General Punctuation, CJK punctuation.
  return (cp >= 0xA1 && cp <= 0xBF && cp != 0xAA && cp != 0xB2 && cp != 0xB3 &&
          cp != 0xB5 && cp != 0xB9 && cp != 0xBA && cp != 0xBC && cp != 0xBD &&
          cp != 0xBE) ||
         cp == 0xD7 || cp == 0xF7 || (cp >= 0x2010 && cp <= 0x205E) ||
         (cp >= 0x3001 && cp <= 0x303F) || (cp >= 0xFF01 && cp <= 0xFF0F);
}

namespace {

// Latin Extended-A pairs upper and lower case on adjacent code points; the
// parity flips at U+0139 and again at U+0179. U+0130 (dotted I) and U+0138
// (kra) have no simple pair.
bool latin_ext_a_upper(char32_t cp) {
  if (cp >= 0x100 && cp <= 0x12F) return cp % 2 == 0;
  if (cp == 0x132 || cp == 0x134 || cp == 0x136) return true;
  if (cp >= 0x139 && cp <= 0x148) return cp % 2 == 1;
  if (cp >= 0x14A && cp <= 0x177) return cp % 2 == 0;
  if (cp == 0x178) return true;
  if (cp >= 0x179 && cp <= 0x17E) return cp % 2 == 1;
  return false;
}

}  // namespace

bool is_upper(char32_t cp) {
  if (cp >= 'A' && cp <= 'Z') return true;
  if (cp >= 0xC0 && cp <= 0xDE && cp != 0xD7) return true;
  if (cp >= 0x391 && cp <= 0x3A9 && cp != 0x3A2) return true;  // Greek
  if (cp >= 0x400 && cp <= 0x42F) return true;                 // Cyrillic
  return latin_ext_a_upper(cp);
}

bool is_digit(char32_t cp) { return cp >= '0' && cp <= '9'; }

char32_t to_lower(char32_t cp) {
  if (cp >= 'A' && cp <= 'Z') return cp + 0x20;
  if (cp < 0x80) return cp;
  if (cp >= 0xC0 && cp <= 0xDE && cp != 0xD7) return cp + 0x20;
  if (cp >= 0x391 && cp <= 0x3A9 && cp != 0x3A2) return cp + 0x20;
  if (cp >= 0x410 && cp <= 0x42F) return cp + 0x20;
  if (cp >= 0x400 && cp <= 0x40F) return cp + 0x50;
  if (latin_ext_a_upper(cp)) return cp == 0x178 ? 0xFF : cp + 1;
  return cp;
}

std::string_view trim(std::string_view s) {
  std::size_t begin = std::string_view::npos;
  std::size_t end = 0;
  for (std::size_t pos = 0; pos < s.size();) {
    Decoded d = decode_one(s, pos);
    if (!is_space(d.cp)) {
      if (begin == std::string_view::npos) begin = pos;
      end = pos + d.bytes;
    }
    pos += d.bytes;
  }
  if (begin == std::string_view::npos) return s.substr(0, 0);
  return s.substr(begin, end - begin);
}

std::size_t token_count(std::string_view s) {
  std::size_t count = 0;
  bool in_token = false;
  for (std::size_t pos = 0; pos < s.size();) {
    Decoded d = decode_one(s, pos);
    const bool space = is_space(d.cp);
    if (!space && !in_token) ++count;
    in_token = !space;
    pos += d.bytes;
  }
  return count;
}

std::vector<std::string> whitespace_tokens(std::string_view s) {
  std::vector<std::string> out;
  std::size_t start = std::string_view::npos;
  for (std::size_t pos = 0; pos < s.size();) {
    Decoded d = decode_one(s, pos);
    if (is_space(d.cp)) {
      if (start != std::string_view::npos) {
        out.emplace_back(s.substr(start, pos - start));
        start = std::string_view::npos;
      }
    } else if (start == std::string_view::npos) {
      start = pos;
    }
    pos += d.bytes;
  }
  if (start != std::string_view::npos) out.emplace_back(s.substr(start));
  return out;
}

std::string truncate_tokens(std::string_view s, std::size_t max_tokens,
                            bool* truncated) {
  if (token_count(s) <= max_tokens) {
    if (truncated != nullptr) *truncated = false;
    return std::string(s);
  }
  if (truncated != nullptr) *truncated = true;
  std::vector<std::string> tokens = whitespace_tokens(s);
  std::string out;
  for (std::size_t i = 0; i < max_tokens; ++i) {
    if (i > 0) out.push_back(' ');
    out += tokens[i];
  }
  return out;
}

CodepointIndex::CodepointIndex(std::string_view s) {
  if (s.size() > UINT32_MAX) {
    throw Error(ErrorCode::kInvalidArgument, "text larger than 4 GiB");
  }
  offsets_.reserve(s.size() + 1);
  std::size_t pos = 0;
  while (pos < s.size()) {
    offsets_.push_back(static_cast<std::uint32_t>(pos));
    pos += decode_one(s, pos).bytes;
  }
  offsets_.push_back(static_cast<std::uint32_t>(s.size()));
}

std::size_t CodepointIndex::byte_offset(std::size_t cp) const {
  if (offsets_.empty()) {
    if (cp == 0) return 0;
  } else if (cp < offsets_.size()) {
    return offsets_[cp];
  }
  throw Error(ErrorCode::kInvalidArgument,
              "code point offset " + std::to_string(cp) + " out of range");
}

std::size_t CodepointIndex::codepoint_at_byte(std::size_t byte) const {
  if (offsets_.empty()) return 0;
  auto it = std::lower_bound(offsets_.begin(), offsets_.end(),
                             static_cast<std::uint32_t>(byte));
  return static_cast<std::size_t>(it - offsets_.begin());
}

std::string_view CodepointIndex::slice(std::string_view s, Span span) const {
  if (span.end < span.start) {
    throw Error(ErrorCode::kInvalidArgument, "inverted span");
  }
  const std::size_t b0 = byte_offset(span.start);
  const std::size_t b1 = byte_offset(span.end);
  return s.substr(b0, b1 - b0);
}

}  // namespace mcidx::text
