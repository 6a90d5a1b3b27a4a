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

#ifndef PRPSORT_ERROR_HPP_
#define PRPSORT_ERROR_HPP_

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace prpsort {

enum class ErrorCode {
  kIdenticalPair,
  kCountOverflow,
  kUnknownDoc,
  kBackendFailure,
  kMissingText,
  kInvalidConfig,
  kIoError,
  kFormatError,
  kEmptySample,
  kZeroBaseline,
  kAggregateMismatch,
};

std::string_view to_string(ErrorCode code);

/// The single exception type thrown by the library. `line()` is non-zero
/// only for kFormatError raised by the file parsers.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message, std::size_t line = 0);

  ErrorCode code() const noexcept { return code_; }
  std::size_t line() const noexcept { return line_; }

 private:
  ErrorCode code_;
  std::size_t line_;
};

}  // namespace prpsort

#endif  // PRPSORT_ERROR_HPP_
