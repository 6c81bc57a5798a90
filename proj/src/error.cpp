// Copyright 2026 The OTR Labeling Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "otr/error.hpp"

namespace otr {

std::string_view ErrorKindName(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kMissingActions: return "MissingActions";
    case ErrorKind::kTargetTooSmall: return "TargetTooSmall";
    case ErrorKind::kDimensionMismatch: return "DimensionMismatch";
    case ErrorKind::kParseError: return "ParseError";
    case ErrorKind::kNonFiniteValue: return "NonFiniteValue";
    case ErrorKind::kRewardsMissing: return "RewardsMissing";
    case ErrorKind::kExpertRewardsMissing: return "ExpertRewardsMissing";
    case ErrorKind::kIdMismatch: return "IdMismatch";
    case ErrorKind::kEmptyExpertSet: return "EmptyExpertSet";
    case ErrorKind::kEmptyDataset: return "EmptyDataset";
    case ErrorKind::kInvalidCounts: return "InvalidCounts";
    case ErrorKind::kInvalidConfig: return "InvalidConfig";
    case ErrorKind::kMarginalMismatch: return "MarginalMismatch";
    case ErrorKind::kNegativeWeight: return "NegativeWeight";
    case ErrorKind::kNonFiniteCost: return "NonFiniteCost";
    case ErrorKind::kNonFiniteInput: return "NonFiniteInput";
    case ErrorKind::kDegenerateReturnRange: return "DegenerateReturnRange";
    case ErrorKind::kTooLarge: return "TooLarge";
    case ErrorKind::kIoError: return "IoError";
  }
  return "Unknown";
}

ErrorClass ClassOf(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kMarginalMismatch:
    case ErrorKind::kNegativeWeight:
    case ErrorKind::kNonFiniteCost:
    case ErrorKind::kNonFiniteInput:
    case ErrorKind::kDegenerateReturnRange:
    case ErrorKind::kTooLarge:
      return ErrorClass::kNumeric;
    case ErrorKind::kIoError:
      return ErrorClass::kIo;
    default:
      return ErrorClass::kData;
  }
}

Error::Error(ErrorKind kind, const std::string& message)
    : std::runtime_error(std::string(ErrorKindName(kind)) + ": " + message),
      kind_(kind) {}

}  // namespace otr
