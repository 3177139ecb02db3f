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

#include "mcidx/kernels.h"

#include <algorithm>
#include <numeric>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "mcidx/errors.h"

namespace mcidx::kernels {

namespace {

inline double row_dot(const CsrMatrix& m, std::size_t row, const double* query) {
  double acc = 0.0;
  for (std::uint32_t k = m.row_offsets[row]; k < m.row_offsets[row + 1]; ++k) {
    acc += m.values[k] * query[m.term_ids[k]];
  }
  return acc;
}

inline double dense_row_dot(const float* row, const float* query, std::size_t dim) {
  double acc = 0.0;
  for (std::size_t d = 0; d < dim; ++d) {
    acc += static_cast<double>(row[d]) * static_cast<double>(query[d]);
  }
  return acc;
}

void check_sparse(const CsrMatrix& m, std::size_t out_size) {
  if (out_size != m.rows()) {
    throw Error(ErrorCode::kInvalidArgument, "score buffer size does not match rows");
  }
}

void check_dense(std::span<const float> matrix, std::size_t dim,
                 std::span<const float> query, std::span<double> out) {
  if (query.size() != dim || matrix.size() != out.size() * dim) {
    throw Error(ErrorCode::kDimensionMismatch, "dense kernel shape mismatch");
  }
}

}  // namespace

void sparse_dot_serial(const CsrMatrix& m, std::span<const double> query,
                       std::span<double> out) {
  check_sparse(m, out.size());
  const std::size_t rows = m.rows();
  for (std::size_t r = 0; r < rows; ++r) out[r] = row_dot(m, r, query.data());
}

void sparse_dot_omp(const CsrMatrix& m, std::span<const double> query,
                    std::span<double> out) {
  check_sparse(m, out.size());
  const auto rows = static_cast<std::ptrdiff_t>(m.rows());
  const double* q = query.data();
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t r = 0; r < rows; ++r) {
    out[static_cast<std::size_t>(r)] = row_dot(m, static_cast<std::size_t>(r), q);
  }
}

void sparse_dot(const CsrMatrix& m, std::span<const double> query,
                std::span<double> out, Execution exec) {
  if (exec == Execution::kParallel) {
    sparse_dot_omp(m, query, out);
  } else {
    sparse_dot_serial(m, query, out);
  }
}

void sparse_dot_batch_serial(const CsrMatrix& m, const std::vector<DenseQuery>& queries,
                             std::span<double> out) {
  const std::size_t rows = m.rows();
  if (out.size() != rows * queries.size()) {
    throw Error(ErrorCode::kInvalidArgument, "batch buffer size mismatch");
  }
  for (std::size_t q = 0; q < queries.size(); ++q) {
    for (std::size_t r = 0; r < rows; ++r) {
      out[q * rows + r] = row_dot(m, r, queries[q].data());
    }
  }
}

void sparse_dot_batch_omp(const CsrMatrix& m, const std::vector<DenseQuery>& queries,
                          std::span<double> out) {
  const std::size_t rows = m.rows();
  if (out.size() != rows * queries.size()) {
    throw Error(ErrorCode::kInvalidArgument, "batch buffer size mismatch");
  }
  const auto total = static_cast<std::ptrdiff_t>(rows * queries.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < total; ++i) {
    const auto idx = static_cast<std::size_t>(i);
    out[idx] = row_dot(m, idx % rows, queries[idx / rows].data());
  }
}

void dense_dot_serial(std::span<const float> matrix, std::size_t dim,
                      std::span<const float> query, std::span<double> out) {
  check_dense(matrix, dim, query, out);
  for (std::size_t r = 0; r < out.size(); ++r) {
    out[r] = dense_row_dot(matrix.data() + r * dim, query.data(), dim);
  }
}

void dense_dot_omp(std::span<const float> matrix, std::size_t dim,
                   std::span<const float> query, std::span<double> out) {
  check_dense(matrix, dim, query, out);
  const auto rows = static_cast<std::ptrdiff_t>(out.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t r = 0; r < rows; ++r) {
    const auto row = static_cast<std::size_t>(r);
    out[row] = dense_row_dot(matrix.data() + row * dim, query.data(), dim);
  }
}

void dense_dot(std::span<const float> matrix, std::size_t dim,
               std::span<const float> query, std::span<double> out, Execution exec) {
  if (exec == Execution::kParallel) {
    dense_dot_omp(matrix, dim, query, out);
  } else {
    dense_dot_serial(matrix, dim, query, out);
  }
}

std::vector<std::size_t> rank_order(std::span<const double> scores) {
  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return scores[a] > scores[b];
  });
  return order;
}

int max_threads() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

void set_threads(int n) {
#ifdef _OPENMP
  if (n > 0) omp_set_num_threads(n);
#else
  (void)n;
#endif
}

}  // namespace mcidx::kernels
