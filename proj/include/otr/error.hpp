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

#ifndef OTR_ERROR_HPP_
#define OTR_ERROR_HPP_

#include <stdexcept>
#include <string>
#include <string_view>

namespace otr {

enum class ErrorKind {
  // Input contract / data errors.
  kMissingActions,
  kTargetTooSmall,
  kDimensionMismatch,
  kParseError,
  kNonFiniteValue,
  kRewardsMissing,
  kExpertRewardsMissing,
  kIdMismatch,
  kEmptyExpertSet,
  kEmptyDataset,
  kInvalidCounts,
  kInvalidConfig,
  // Numeric failures.
  kMarginalMismatch,
  kNegativeWeight,
  kNonFiniteCost,
  kNonFiniteInput,
  kDegenerateReturnRange,
  kTooLarge,
  // Filesystem.
  kIoError,
};

std::string_view ErrorKindName(ErrorKind kind);

// Broad failure class, used by the CLI to pick an exit code.
enum class ErrorClass { kData, kNumeric, kIo };

ErrorClass ClassOf(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message);

  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace otr

#endif  // OTR_ERROR_HPP_
