// Copyright 2026 The Unilayout Authors. All Rights Reserved.
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
#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace unilayout {

enum class Errc {
  kInvalidLayout,
  kEmptyPage,
  kOutOfPage,
  kNegativeValue,
  kParseError,
  kTooFewSamples,
  kOutOfRange,
  kInvalidPrefix,
  kIncompleteLayout,
  kUnknownLabel,
  kDuplicateAttribute,
  kMissingAttribute,
  kSeparatorCollision,
  kUnknownTemplate,
  kDegenerateMask,
  kEmptyCorpus,
  kDimensionMismatch,
  kDegenerateSet,
  kInconsistentTable,
  kTimeout,
  kBackendError,
  kEmptyCompletion,
  kUnparseable,
  kIo,
  kInvalidArgument,
};

std::string_view ErrcName(Errc code);

// All library failures are reported as Error; code() identifies the
// contract violated so callers can branch without parsing messages.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& message)
      : std::runtime_error(std::string(ErrcName(code)) + ": " + message),
        code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace unilayout
