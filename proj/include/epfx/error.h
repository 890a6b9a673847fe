/*
 * Copyright 2026 The epfx Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef EPFX_ERROR_H_
#define EPFX_ERROR_H_

#include <stdexcept>
#include <string>
#include <string_view>

namespace epfx {

enum class ErrorCode {
  kMalformedRow,
  kEmptyInput,
  kNonHourlyCadence,
  kInsufficientHistory,
  kTooFewRows,
  kDimensionMismatch,
  kInvalidSpec,
  kNonFiniteInput,
  kDivergedLoss,
  kTooFewInstances,
  kSchemaVersionMismatch,
  kCorruptPayload,
  kEmptyBackground,
  kNonFiniteModelOutput,
  kTooManyFeatures,
  kPartitionMismatch,
  kUnknownGroup,
  kNotHourlyGroup,
  kEmptyData,
  kGridMismatch,
  kEmptyTensor,
  kLengthMismatch,
  kZeroNaiveError,
  kConfigError,
  kIoError,
  kModelConfigMismatch,
  kIncompleteRun,
  kInvalidArgument,
};

// Stable identifier for an error code, e.g. "MalformedRow".
std::string_view ErrorCodeName(ErrorCode code);

// All library failures are reported by throwing Error.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace epfx

#endif  // EPFX_ERROR_H_
