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

#ifndef MCIDX_VIEW_KIND_H_
#define MCIDX_VIEW_KIND_H_

#include <array>
#include <optional>
#include <string_view>

namespace mcidx {

enum class ViewKind { kRawText = 0, kKeywords = 1, kSummary = 2 };

// Fixed merge order for multi-view fusion.
inline constexpr std::array<ViewKind, 3> kAllViews = {
    ViewKind::kRawText, ViewKind::kKeywords, ViewKind::kSummary};

// "RawText" / "Keywords" / "Summary" (views.jsonl spelling).
std::string_view view_kind_name(ViewKind kind);
std::optional<ViewKind> parse_view_kind(std::string_view name);
// "raw" / "keywords" / "summary" (CLI spelling).
std::string_view view_short_name(ViewKind kind);
std::optional<ViewKind> parse_view_short_name(std::string_view name);

}  // namespace mcidx

#endif  // MCIDX_VIEW_KIND_H_
