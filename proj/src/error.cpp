// Copyright 2026 The prp-sort Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "prpsort/error.hpp"

namespace prpsort {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kIdenticalPair:
      return "IdenticalPair";
    case ErrorCode::kCountOverflow:
      return "CountOverflow";
    case ErrorCode::kUnknownDoc:
      return "UnknownDoc";
    case ErrorCode::kBackendFailure:
      return "BackendFailure";
    case ErrorCode::kMissingText:
      return "MissingText";
    case ErrorCode::kInvalidConfig:
      return "InvalidConfig";
    case ErrorCode::kIoError:
      return "IoError";
    case ErrorCode::kFormatError:
      return "FormatError";
    case ErrorCode::kEmptySample:
      return "EmptySample";
    case ErrorCode::kZeroBaseline:
      return "ZeroBaseline";
    case ErrorCode::kAggregateMismatch:
      return "AggregateMismatch";
  }
  return "Unknown";
}

namespace {

std::string format_message(ErrorCode code, const std::string& message, std::size_t line) {
  std::string out(to_string(code));
  if (line != 0) out += " at line " + std::to_string(line);
  out += ": ";
  out += message;
  return out;
}

}  // namespace

Error::Error(ErrorCode code, const std::string& message, std::size_t line)
    : std::runtime_error(format_message(code, message, line)), code_(code), line_(line) {}

}  // namespace prpsort
