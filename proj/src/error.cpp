/* Copyright 2026 The foldvote Authors.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#include "foldvote/error.hpp"

namespace foldvote {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kIo: return "IoError";
    case ErrorCode::kMalformedRow: return "MalformedRow";
    case ErrorCode::kDuplicateId: return "DuplicateId";
    case ErrorCode::kUnknownLabelToken: return "UnknownLabelToken";
    case ErrorCode::kInvalidFraction: return "InvalidFraction";
    case ErrorCode::kInvalidK: return "InvalidK";
    case ErrorCode::kIdSetMismatch: return "IdSetMismatch";
    case ErrorCode::kEmptyEvaluation: return "EmptyEvaluation";
    case ErrorCode::kDegenerateScores: return "DegenerateScores";
    case ErrorCode::kSingleClassCorpus: return "SingleClassCorpus";
    case ErrorCode::kDigestMismatch: return "DigestMismatch";
    case ErrorCode::kInternal: return "InternalError";
  }
  return "InternalError";
}

Error::Error(ErrorCode code, const std::string& message,
             std::vector<std::string> details)
    : std::runtime_error(std::string(to_string(code)) + ": " + message),
      code_(code),
      message_(message),
      details_(std::move(details)) {}

}  // namespace foldvote
