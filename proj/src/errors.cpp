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

#include "mcidx/errors.h"

#include <exception>

namespace mcidx {

std::string_view error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kIo: return "IoError";
    case ErrorCode::kSchema: return "SchemaError";
    case ErrorCode::kDuplicateId: return "DuplicateId";
    case ErrorCode::kEmptyDocument: return "EmptyDocument";
    case ErrorCode::kInvalidTarget: return "InvalidTarget";
    case ErrorCode::kUnknownDoc: return "UnknownDoc";
    case ErrorCode::kEmptyCorpus: return "EmptyCorpus";
    case ErrorCode::kDimensionMismatch: return "DimensionMismatch";
    case ErrorCode::kProviderMismatch: return "ProviderMismatch";
    case ErrorCode::kCorruptIndex: return "CorruptIndex";
    case ErrorCode::kVersionMismatch: return "VersionMismatch";
    case ErrorCode::kInvalidK: return "InvalidK";
    case ErrorCode::kViewMismatch: return "ViewMismatch";
    case ErrorCode::kEmptyScope: return "EmptyScope";
    case ErrorCode::kEmptyRetrieval: return "EmptyRetrieval";
    case ErrorCode::kParse: return "ParseError";
    case ErrorCode::kProvider: return "ProviderError";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(error_code_name(code)) + ": " + message),
      code_(code) {}

SchemaError::SchemaError(std::size_t line, const std::string& message)
    : Error(ErrorCode::kSchema,
            line > 0 ? "line " + std::to_string(line) + ": " + message
                     : message),
      line_(line) {}

std::string_view provider_reason_name(ProviderError::Reason reason) {
  switch (reason) {
    case ProviderError::Reason::kNetwork: return "network";
    case ProviderError::Reason::kHttpStatus: return "http_status";
    case ProviderError::Reason::kRetriesExhausted: return "retries_exhausted";
    case ProviderError::Reason::kBadResponse: return "bad_response";
  }
  return "unknown";
}

ProviderError::ProviderError(Reason reason, const std::string& message,
                             int http_status)
    : Error(ErrorCode::kProvider,
            std::string(provider_reason_name(reason)) + ": " + message),
      reason_(reason),
      http_status_(http_status) {}

namespace {

// what() of a library error starts with "<CodeName>: "; strip it so the
// rebuilt error does not repeat the prefix.
std::string strip_code_prefix(const Error& e) {
  std::string msg = e.what();
  std::string prefix = std::string(error_code_name(e.code())) + ": ";
  if (msg.rfind(prefix, 0) == 0) msg.erase(0, prefix.size());
  return msg;
}

}  // namespace

void rethrow_with_context(const std::string& context) {
  try {
    throw;
  } catch (const ProviderError& e) {
    std::string msg = strip_code_prefix(e);
    std::string reason = std::string(provider_reason_name(e.reason())) + ": ";
    if (msg.rfind(reason, 0) == 0) msg.erase(0, reason.size());
    throw ProviderError(e.reason(), context + ": " + msg, e.http_status());
  } catch (const SchemaError& e) {
    std::string msg = strip_code_prefix(e);
    std::string line = "line " + std::to_string(e.line()) + ": ";
    if (e.line() > 0 && msg.rfind(line, 0) == 0) msg.erase(0, line.size());
    throw SchemaError(e.line(), context + ": " + msg);
  } catch (const Error& e) {
    throw Error(e.code(), context + ": " + strip_code_prefix(e));
  }
}

}  // namespace mcidx
