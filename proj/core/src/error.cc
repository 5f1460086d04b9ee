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

#include "perturbaudit/error.h"

namespace perturbaudit {

ErrorCategory CategoryOf(ErrorCode code) {
  switch (code) {
    case ErrorCode::kBackendUnreachable:
    case ErrorCode::kProtocolError:
    case ErrorCode::kNonFiniteLogit:
    case ErrorCode::kEmbeddingBackendUnavailable:
      return ErrorCategory::kBackend;
    case ErrorCode::kConfig:
      return ErrorCategory::kConfig;
    default:
      return ErrorCategory::kData;
  }
}

std::string_view ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kMalformedLine: return "MalformedLine";
    case ErrorCode::kInvalidUtf8: return "InvalidUtf8";
    case ErrorCode::kOverlappingSpans: return "OverlappingSpans";
    case ErrorCode::kOffsetMismatch: return "OffsetMismatch";
    case ErrorCode::kDuplicateId: return "DuplicateId";
    case ErrorCode::kSchemaMismatch: return "SchemaMismatch";
    case ErrorCode::kUnknownLabel: return "UnknownLabel";
    case ErrorCode::kNoLowerCourts: return "NoLowerCourts";
    case ErrorCode::kMixedLabels: return "MixedLabels";
    case ErrorCode::kLowerCourtOcclusionForbidden:
      return "LowerCourtOcclusionForbidden";
    case ErrorCode::kIndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::kCalibrationMismatch: return "CalibrationMismatch";
    case ErrorCode::kMissingAnnotator: return "MissingAnnotator";
    case ErrorCode::kNoCommonCases: return "NoCommonCases";
    case ErrorCode::kDegenerateValidationSet: return "DegenerateValidationSet";
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kBackendUnreachable: return "BackendUnreachable";
    case ErrorCode::kProtocolError: return "ProtocolError";
    case ErrorCode::kNonFiniteLogit: return "NonFiniteLogit";
    case ErrorCode::kEmbeddingBackendUnavailable:
      return "EmbeddingBackendUnavailable";
    case ErrorCode::kConfig: return "ConfigError";
  }
  return "Unknown";
}

}  // namespace perturbaudit
