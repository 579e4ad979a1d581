// Copyright 2026 The clipart Authors
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

#include "clipart/error.hpp"

namespace clipart {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kInvalidCamera: return "InvalidCamera";
    case ErrorCode::kNonPositiveDepth: return "NonPositiveDepth";
    case ErrorCode::kRayParallelToPlane: return "RayParallelToPlane";
    case ErrorCode::kPointBehindCamera: return "PointBehindCamera";
    case ErrorCode::kDimensionMismatch: return "DimensionMismatch";
    case ErrorCode::kTooFewPoints: return "TooFewPoints";
    case ErrorCode::kDegenerateConfiguration: return "DegenerateConfiguration";
    case ErrorCode::kDivergedOptimization: return "DivergedOptimization";
    case ErrorCode::kEmptyTrack: return "EmptyTrack";
    case ErrorCode::kLengthMismatch: return "LengthMismatch";
    case ErrorCode::kEmptyPool: return "EmptyPool";
    case ErrorCode::kOverlappingFootprints: return "OverlappingFootprints";
    case ErrorCode::kCropOutOfBounds: return "CropOutOfBounds";
    case ErrorCode::kEmptyAmodal: return "EmptyAmodal";
    case ErrorCode::kModalNotSubset: return "ModalNotSubset";
    case ErrorCode::kEmptyGroundTruth: return "EmptyGroundTruth";
    case ErrorCode::kNoAnnotatedKeypoints: return "NoAnnotatedKeypoints";
    case ErrorCode::kSizeMismatch: return "SizeMismatch";
    case ErrorCode::kCountOverflow: return "CountOverflow";
    case ErrorCode::kParseError: return "ParseError";
    case ErrorCode::kValidationError: return "ValidationError";
    case ErrorCode::kVersionMismatch: return "VersionMismatch";
    case ErrorCode::kIoError: return "IoError";
    case ErrorCode::kInfeasiblePlacement: return "InfeasiblePlacement";
    case ErrorCode::kConfigError: return "ConfigError";
    case ErrorCode::kInputMissing: return "InputMissing";
    case ErrorCode::kStageError: return "StageError";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

void fail(ErrorCode code, const std::string& message) { throw Error(code, message); }

}  // namespace clipart
