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

// Scoring kernels. Every kernel has a serial reference and an OpenMP version
// that parallelizes over independent output elements only; each element is
// accumulated in the same order in both, so results are bit-identical for
// any thread count.

#ifndef MCIDX_KERNELS_H_
#define MCIDX_KERNELS_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace mcidx::kernels {

enum class Execution { kSerial, kParallel };

// Row-compressed unit x term weights; term ids within a row ascend.
struct CsrMatrix {
  std::vector<std::uint32_t> row_offsets;  // rows()+1 entries
  std::vector<std::uint32_t> term_ids;
  std::vector<double> values;

  std::size_t rows() const { return row_offsets.empty() ? 0 : row_offsets.size() - 1; }
};

// Query weights scattered over the term dictionary (0 for absent terms).
using DenseQuery = std::vector<double>;

// out[u] = sum over row u of values[u,t] * query[t], in ascending t.
void sparse_dot_serial(const CsrMatrix& m, std::span<const double> query,
                       std::span<double> out);
void sparse_dot_omp(const CsrMatrix& m, std::span<const double> query,
                    std::span<double> out);
void sparse_dot(const CsrMatrix& m, std::span<const double> query,
                std::span<double> out, Execution exec);

// Scores many queries; out is queries.size() x m.rows(), row-major.
void sparse_dot_batch_serial(const CsrMatrix& m, const std::vector<DenseQuery>& queries,
                             std::span<double> out);
void sparse_dot_batch_omp(const CsrMatrix& m, const std::vector<DenseQuery>& queries,
                          std::span<double> out);

// out[r] = dot(matrix row r, query), accumulated in double.
void dense_dot_serial(std::span<const float> matrix, std::size_t dim,
                      std::span<const float> query, std::span<double> out);
void dense_dot_omp(std::span<const float> matrix, std::size_t dim,
                   std::span<const float> query, std::span<double> out);
void dense_dot(std::span<const float> matrix, std::size_t dim,
               std::span<const float> query, std::span<double> out, Execution exec);

// Positions sorted by descending score, ties by ascending position.
std::vector<std::size_t> rank_order(std::span<const double> scores);

// Number of threads OpenMP kernels will use (1 without OpenMP).
int max_threads();
void set_threads(int n);

}  // namespace mcidx::kernels

#endif  // MCIDX_KERNELS_H_
