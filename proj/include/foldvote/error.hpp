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

#ifndef FOLDVOTE_ERROR_HPP_
#define FOLDVOTE_ERROR_HPP_

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace foldvote {

// Every failure the harness reports maps to exactly one of these codes; the
// C API and the CLI exit-code contract are both derived from them.
enum class ErrorCode {
  kInvalidArgument = 1,
  kIo,
  kMalformedRow,
  kDuplicateId,
  kUnknownLabelToken,
  kInvalidFraction,
  kInvalidK,
  kIdSetMismatch,
  kEmptyEvaluation,
  kDegenerateScores,
  kSingleClassCorpus,
  kDigestMismatch,
  kInternal,
};

std::string_view to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message,
        std::vector<std::string> details = {});

  ErrorCode code() const noexcept { return code_; }

  // The message without the leading error-code name.
  const std::string& message() const noexcept { return message_; }

  // Extra items attached to the failure, e.g. the ids that differ between
  // two id sets (at most a handful).
  const std::vector<std::string>& details() const noexcept { return details_; }

 private:
  ErrorCode code_;
  std::string message_;
  std::vector<std::string> details_;
};

}  // namespace foldvote

#endif  // FOLDVOTE_ERROR_HPP_
