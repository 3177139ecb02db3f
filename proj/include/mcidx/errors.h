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

#ifndef MCIDX_ERRORS_H_
#define MCIDX_ERRORS_H_

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace mcidx {

enum class ErrorCode {
  kInvalidArgument,
  kIo,
  kSchema,
  kDuplicateId,
  kEmptyDocument,
  kInvalidTarget,
  kUnknownDoc,
  kEmptyCorpus,
  kDimensionMismatch,
  kProviderMismatch,
  kCorruptIndex,
  kVersionMismatch,
  kInvalidK,
  kViewMismatch,
  kEmptyScope,
  kEmptyRetrieval,
  kParse,
  kProvider,
};

std::string_view error_code_name(ErrorCode code);

// Base of every error thrown by the library. The code is stable and is what
// callers (and the CLI exit-code mapping) dispatch on.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

// Malformed input record. `line` is 1-based; 0 when not line-oriented.
class SchemaError : public Error {
 public:
  SchemaError(std::size_t line, const std::string& message);

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

class ProviderError : public Error {
 public:
  enum class Reason { kNetwork, kHttpStatus, kRetriesExhausted, kBadResponse };

  ProviderError(Reason reason, const std::string& message, int http_status = 0);

  Reason reason() const noexcept { return reason_; }
  int http_status() const noexcept { return http_status_; }

 private:
  Reason reason_;
  int http_status_;
};

std::string_view provider_reason_name(ProviderError::Reason reason);

// Rethrows the in-flight exception with `context` prefixed to its message.
// Library errors keep their concrete type and code.
[[noreturn]] void rethrow_with_context(const std::string& context);

}  // namespace mcidx

#endif  // MCIDX_ERRORS_H_
