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
#include "unilayout/error.hpp"

namespace unilayout {

std::string_view ErrcName(Errc code) {
  switch (code) {
    case Errc::kInvalidLayout: return "InvalidLayout";
    case Errc::kEmptyPage: return "EmptyPage";
    case Errc::kOutOfPage: return "OutOfPage";
    case Errc::kNegativeValue: return "NegativeValue";
    case Errc::kParseError: return "ParseError";
    case Errc::kTooFewSamples: return "TooFewSamples";
    case Errc::kOutOfRange: return "OutOfRange";
    case Errc::kInvalidPrefix: return "InvalidPrefix";
    case Errc::kIncompleteLayout: return "IncompleteLayout";
    case Errc::kUnknownLabel: return "UnknownLabel";
    case Errc::kDuplicateAttribute: return "DuplicateAttribute";
    case Errc::kMissingAttribute: return "MissingAttribute";
    case Errc::kSeparatorCollision: return "SeparatorCollision";
    case Errc::kUnknownTemplate: return "UnknownTemplate";
    case Errc::kDegenerateMask: return "DegenerateMask";
    case Errc::kEmptyCorpus: return "EmptyCorpus";
    case Errc::kDimensionMismatch: return "DimensionMismatch";
    case Errc::kDegenerateSet: return "DegenerateSet";
    case Errc::kInconsistentTable: return "InconsistentTable";
    case Errc::kTimeout: return "Timeout";
    case Errc::kBackendError: return "BackendError";
    case Errc::kEmptyCompletion: return "EmptyCompletion";
    case Errc::kUnparseable: return "Unparseable";
    case Errc::kIo: return "Io";
    case Errc::kInvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

}  // namespace unilayout
