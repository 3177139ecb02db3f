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


#include "mcidx/index_io.h"

#include <cstdint>
#include <cstring>
#include <fstream>
#include <sstream>

#include <boost/crc.hpp>
#include <boost/endian/conversion.hpp>

#include "json.hpp"
#include "mcidx/errors.h"

namespace mcidx {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr const char* kManifest = "manifest.json";
constexpr const char* kUnits = "units.jsonl";
constexpr const char* kTerms = "terms.bin";
constexpr const char* kIds = "ids.jsonl";
constexpr const char* kEmbeddings = "embeddings.f32le";

std::string read_file(const fs::path& path, ErrorCode missing_code) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(missing_code, "cannot read " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const fs::path& path, const std::string& bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + path.string());
}

std::uint32_t crc32(const std::string& bytes) {
  boost::crc_32_type crc;
  crc.process_bytes(bytes.data(), bytes.size());
  return crc.checksum();
}

json file_entry(const std::string& bytes) {
  return {{"crc32", crc32(bytes)}, {"bytes", bytes.size()}};
}

void put_u32(std::string& out, std::uint32_t v) {
  v = boost::endian::native_to_little(v);
  out.append(reinterpret_cast<const char*>(&v), sizeof v);
}

class Reader {
 public:
  explicit Reader(const std::string& bytes) : bytes_(bytes) {}

  std::uint32_t u32() {
    need(4);
    std::uint32_t v;
    std::memcpy(&v, bytes_.data() + pos_, 4);
    pos_ += 4;
    return boost::endian::little_to_native(v);
  }
  std::string str(std::size_t n) {
    need(n);
    std::string s = bytes_.substr(pos_, n);
    pos_ += n;
    return s;
  }
  bool done() const { return pos_ == bytes_.size(); }

 private:
  void need(std::size_t n) const {
    if (bytes_.size() - pos_ < n) throw Error(ErrorCode::kCorruptIndex, "terms.bin is truncated");
  }
  const std::string& bytes_;
  std::size_t pos_ = 0;
};

void prepare_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error(ErrorCode::kIo, "cannot create " + dir.string() + ": " + ec.message());
}

json read_manifest(const fs::path& dir) {
  const std::string raw = read_file(dir / kManifest, ErrorCode::kIo);
  json manifest = json::parse(raw, nullptr, false);
  if (manifest.is_discarded() || !manifest.is_object()) {
    throw Error(ErrorCode::kCorruptIndex, "manifest.json is not a JSON object");
  }
  if (!manifest.contains("format_version") || !manifest["format_version"].is_string()) {
    throw Error(ErrorCode::kCorruptIndex, "manifest.json lacks format_version");
  }
  const std::string version = manifest["format_version"].get<std::string>();
  if (version != kIndexFormatVersion) {
    throw Error(ErrorCode::kVersionMismatch,
                "index format " + version + ", supported " + std::string(kIndexFormatVersion));
  }
  if (!manifest.contains("kind") || !manifest["kind"].is_string() ||
      !manifest.contains("files") || !manifest["files"].is_object()) {
    throw Error(ErrorCode::kCorruptIndex, "manifest.json lacks kind or files");
  }
  return manifest;
}

// Reads `name` and checks it against the manifest entry.
std::string read_checked(const fs::path& dir, const json& manifest, const char* name) {
  const json& files = manifest["files"];
  if (!files.contains(name)) {
    throw Error(ErrorCode::kCorruptIndex, std::string("manifest has no entry for ") + name);
  }
  const json& entry = files[name];
  const std::string bytes = read_file(dir / name, ErrorCode::kCorruptIndex);
  try {
    if (entry.at("bytes").get<std::size_t>() != bytes.size()) {
      throw Error(ErrorCode::kCorruptIndex, std::string(name) + " has the wrong size");
    }
    if (entry.at("crc32").get<std::uint32_t>() != crc32(bytes)) {
      throw Error(ErrorCode::kCorruptIndex, std::string(name) + " fails its checksum");
    }
  } catch (const json::exception&) {
    throw Error(ErrorCode::kCorruptIndex, std::string("bad manifest entry for ") + name);
  }
  return bytes;
}

std::vector<json> parse_jsonl(const std::string& bytes, const char* name) {
  std::vector<json> out;
  std::istringstream in(bytes);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    json j = json::parse(line, nullptr, false);
    if (j.is_discarded() || !j.is_object() || !j.contains("id") || !j["id"].is_string()) {
      throw Error(ErrorCode::kCorruptIndex, std::string("malformed line in ") + name);
    }
    out.push_back(std::move(j));
  }
  return out;
}

}  // namespace

void save_index(const SparseIndex& index, const fs::path& dir) {
  prepare_dir(dir);
  std::string units;
  for (std::size_t u = 0; u < index.size(); ++u) {
    units += json{{"id", index.unit_ids()[u]}, {"length", index.unit_length(u)}}.dump();
    units += '\n';
  }
  std::string terms;
  put_u32(terms, static_cast<std::uint32_t>(index.num_terms()));
  for (const std::string& t : index.terms()) {
    put_u32(terms, static_cast<std::uint32_t>(t.size()));
    terms += t;
  }
  const kernels::CsrMatrix& counts = index.counts();
  put_u32(terms, static_cast<std::uint32_t>(counts.rows()));
  for (std::uint32_t off : counts.row_offsets) put_u32(terms, off);
  for (std::uint32_t t : counts.term_ids) put_u32(terms, t);
  for (double c : counts.values) put_u32(terms, static_cast<std::uint32_t>(c));

  json manifest = {
      {"format_version", kIndexFormatVersion},
      {"kind", sparse_kind_name(index.kind())},
      {"provider", "native"},
      {"params", {{"k1", index.params().k1}, {"b", index.params().b}}},
      {"files", {{kUnits, file_entry(units)}, {kTerms, file_entry(terms)}}},
  };
  write_file(dir / kUnits, units);
  write_file(dir / kTerms, terms);
  write_file(dir / kManifest, manifest.dump(2) + "\n");
}

void save_index(const DenseIndex& index, const fs::path& dir) {
  prepare_dir(dir);
  std::string ids;
  for (const std::string& id : index.unit_ids()) ids += json{{"id", id}}.dump() + "\n";
  std::string matrix;
  matrix.reserve(index.matrix().size() * 4);
  for (float x : index.matrix()) {
    std::uint32_t bits;
    std::memcpy(&bits, &x, 4);
    put_u32(matrix, bits);
  }
  json manifest = {
      {"format_version", kIndexFormatVersion},
      {"kind", "dense"},
      {"provider", index.provider()},
      {"params", {{"dim", index.dim()}}},
      {"files", {{kIds, file_entry(ids)}, {kEmbeddings, file_entry(matrix)}}},
  };
  write_file(dir / kIds, ids);
  write_file(dir / kEmbeddings, matrix);
  write_file(dir / kManifest, manifest.dump(2) + "\n");
}

void save_index(const AnyIndex& index, const fs::path& dir) {
  std::visit([&](const auto& i) { save_index(i, dir); }, index);
}

namespace {

SparseIndex sparse_from_manifest(const fs::path& dir, const json& manifest) {
  const std::string kind = manifest["kind"].get<std::string>();
  SparseKind sk;
  if (kind == "tfidf") {
    sk = SparseKind::kTfIdf;
  } else if (kind == "bm25") {
    sk = SparseKind::kBm25;
  } else {
    throw Error(ErrorCode::kCorruptIndex, "index kind \"" + kind + "\" is not sparse");
  }
  Bm25Params params;
  try {
    params.k1 = manifest.at("params").at("k1").get<double>();
    params.b = manifest.at("params").at("b").get<double>();
  } catch (const json::exception&) {
    throw Error(ErrorCode::kCorruptIndex, "manifest params lack k1/b");
  }

  std::vector<std::string> ids;
  std::vector<std::uint32_t> lengths;
  for (const json& j : parse_jsonl(read_checked(dir, manifest, kUnits), kUnits)) {
    if (!j.contains("length") || !j["length"].is_number_unsigned()) {
      throw Error(ErrorCode::kCorruptIndex, "units.jsonl line lacks length");
    }
    ids.push_back(j["id"].get<std::string>());
    lengths.push_back(j["length"].get<std::uint32_t>());
  }

  const std::string bytes = read_checked(dir, manifest, kTerms);
  Reader r(bytes);
  std::vector<std::string> terms(r.u32());
  for (std::string& t : terms) t = r.str(r.u32());
  kernels::CsrMatrix counts;
  const std::uint32_t rows = r.u32();
  if (rows != ids.size()) throw Error(ErrorCode::kCorruptIndex, "terms.bin row count mismatch");
  counts.row_offsets.resize(rows + 1);
  for (std::uint32_t& off : counts.row_offsets) off = r.u32();
  if (counts.row_offsets.front() != 0) throw Error(ErrorCode::kCorruptIndex, "bad row offsets");
  for (std::size_t i = 1; i < counts.row_offsets.size(); ++i) {
    if (counts.row_offsets[i] < counts.row_offsets[i - 1]) {
      throw Error(ErrorCode::kCorruptIndex, "row offsets decrease");
    }
  }
  const std::uint32_t nnz = counts.row_offsets.back();
  counts.term_ids.resize(nnz);
  for (std::uint32_t& t : counts.term_ids) t = r.u32();
  counts.values.resize(nnz);
  for (double& v : counts.values) v = r.u32();
  if (!r.done()) throw Error(ErrorCode::kCorruptIndex, "trailing bytes in terms.bin");
  return SparseIndex::from_counts(sk, params, std::move(ids), std::move(terms),
                                  std::move(counts), std::move(lengths));
}

DenseIndex dense_from_manifest(const fs::path& dir, const json& manifest) {
  if (manifest["kind"] != "dense") {
    throw Error(ErrorCode::kCorruptIndex, "index is not dense");
  }
  std::size_t dim = 0;
  std::string provider;
  try {
    dim = manifest.at("params").at("dim").get<std::size_t>();
    provider = manifest.at("provider").get<std::string>();
  } catch (const json::exception&) {
    throw Error(ErrorCode::kCorruptIndex, "manifest lacks dim or provider");
  }
  std::vector<std::string> ids;
  for (const json& j : parse_jsonl(read_checked(dir, manifest, kIds), kIds)) {
    ids.push_back(j["id"].get<std::string>());
  }
  const std::string bytes = read_checked(dir, manifest, kEmbeddings);
  if (dim == 0 || bytes.size() != ids.size() * dim * 4) {
    throw Error(ErrorCode::kCorruptIndex, "embeddings.f32le size does not match ids x dim");
  }
  std::vector<float> matrix(ids.size() * dim);
  for (std::size_t i = 0; i < matrix.size(); ++i) {
    std::uint32_t bits;
    std::memcpy(&bits, bytes.data() + i * 4, 4);
    bits = boost::endian::little_to_native(bits);
    std::memcpy(&matrix[i], &bits, 4);
  }
  return DenseIndex::from_parts(std::move(ids), std::move(provider), dim, std::move(matrix));
}

}  // namespace

AnyIndex load_index(const fs::path& dir) {
  const json manifest = read_manifest(dir);
  if (manifest["kind"] == "dense") return dense_from_manifest(dir, manifest);
  return sparse_from_manifest(dir, manifest);
}

SparseIndex load_sparse_index(const fs::path& dir) {
  return sparse_from_manifest(dir, read_manifest(dir));
}

DenseIndex load_dense_index(const fs::path& dir) {
  return dense_from_manifest(dir, read_manifest(dir));
}

}  // namespace mcidx
