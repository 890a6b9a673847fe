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

#include "epfx/error.h"

namespace epfx {

std::string_view ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kMalformedRow: return "MalformedRow";
    case ErrorCode::kEmptyInput: return "EmptyInput";
    case ErrorCode::kNonHourlyCadence: return "NonHourlyCadence";
    case ErrorCode::kInsufficientHistory: return "InsufficientHistory";
    case ErrorCode::kTooFewRows: return "TooFewRows";
    case ErrorCode::kDimensionMismatch: return "DimensionMismatch";
    case ErrorCode::kInvalidSpec: return "InvalidSpec";
    case ErrorCode::kNonFiniteInput: return "NonFiniteInput";
    case ErrorCode::kDivergedLoss: return "DivergedLoss";
    case ErrorCode::kTooFewInstances: return "TooFewInstances";
    case ErrorCode::kSchemaVersionMismatch: return "SchemaVersionMismatch";
    case ErrorCode::kCorruptPayload: return "CorruptPayload";
    case ErrorCode::kEmptyBackground: return "EmptyBackground";
    case ErrorCode::kNonFiniteModelOutput: return "NonFiniteModelOutput";
    case ErrorCode::kTooManyFeatures: return "TooManyFeatures";
    case ErrorCode::kPartitionMismatch: return "PartitionMismatch";
    case ErrorCode::kUnknownGroup: return "UnknownGroup";
    case ErrorCode::kNotHourlyGroup: return "NotHourlyGroup";
    case ErrorCode::kEmptyData: return "EmptyData";
    case ErrorCode::kGridMismatch: return "GridMismatch";
    case ErrorCode::kEmptyTensor: return "EmptyTensor";
    case ErrorCode::kLengthMismatch: return "LengthMismatch";
    case ErrorCode::kZeroNaiveError: return "ZeroNaiveError";
    case ErrorCode::kConfigError: return "ConfigError";
    case ErrorCode::kIoError: return "IoError";
    case ErrorCode::kModelConfigMismatch: return "ModelConfigMismatch";
    case ErrorCode::kIncompleteRun: return "IncompleteRun";
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

}  // namespace epfx
