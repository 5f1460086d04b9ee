// Copyright 2026 The PerturbAudit Authors.
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

#ifndef PERTURBAUDIT_ERROR_H_
#define PERTURBAUDIT_ERROR_H_

#include <stdexcept>
#include <string>
#include <string_view>

namespace perturbaudit {

enum class ErrorCode {
  // Data errors.
  kMalformedLine,
  kInvalidUtf8,
  kOverlappingSpans,
  kOffsetMismatch,
  kDuplicateId,
  kSchemaMismatch,
  kUnknownLabel,
  kNoLowerCourts,
  kMixedLabels,
  kLowerCourtOcclusionForbidden,
  kIndexOutOfRange,
  kCalibrationMismatch,
  kMissingAnnotator,
  kNoCommonCases,
  kDegenerateValidationSet,
  kInvalidArgument,
  // Backend errors.
  kBackendUnreachable,
  kProtocolError,
  kNonFiniteLogit,
  kEmbeddingBackendUnavailable,
  // Configuration errors.
  kConfig,
};

// Broad class of an error, used for process exit codes.
enum class ErrorCategory { kConfig, kBackend, kData };

ErrorCategory CategoryOf(ErrorCode code);
std::string_view ErrorCodeName(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(ErrorCodeName(code)) + ": " + message),
        code_(code) {}

  ErrorCode code() const { return code_; }
  ErrorCategory category() const { return CategoryOf(code_); }

 private:
  ErrorCode code_;
};

}  // namespace perturbaudit

#endif  // PERTURBAUDIT_ERROR_H_
