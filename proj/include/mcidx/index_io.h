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


// On-disk index directories:
//   manifest.json     format_version, kind, provider, params, files{name: {crc32, bytes}}
//   sparse: units.jsonl ({"id","length"} per line) + terms.bin
//   dense:  ids.jsonl ({"id"} per line) + embeddings.f32le (row-major)
// terms.bin holds little-endian u32 fields: n_terms, then per term its byte
// length and bytes; n_rows; row_offsets[n_rows+1]; term_ids[nnz]; counts[nnz].

#ifndef MCIDX_INDEX_IO_H_
#define MCIDX_INDEX_IO_H_

#include <filesystem>
#include <string>
#include <variant>

#include "mcidx/embedding.h"
#include "mcidx/retrieval.h"

namespace mcidx {

inline constexpr std::string_view kIndexFormatVersion = "1";

using AnyIndex = std::variant<SparseIndex, DenseIndex>;

void save_index(const SparseIndex& index, const std::filesystem::path& dir);
void save_index(const DenseIndex& index, const std::filesystem::path& dir);
void save_index(const AnyIndex& index, const std::filesystem::path& dir);

// Checks the format version first (kVersionMismatch), then every file's size
// and CRC-32 (kCorruptIndex).
AnyIndex load_index(const std::filesystem::path& dir);
SparseIndex load_sparse_index(const std::filesystem::path& dir);
DenseIndex load_dense_index(const std::filesystem::path& dir);

}  // namespace mcidx

#endif  // MCIDX_INDEX_IO_H_
