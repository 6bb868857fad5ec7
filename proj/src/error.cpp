/* Copyright 2026 The DistrEdge Authors

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

#include "distredge/error.hpp"

namespace distredge {

std::string_view error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::kParseError: return "ParseError";
    case ErrorCode::kChainMismatch: return "ChainMismatch";
    case ErrorCode::kEmptyModel: return "EmptyModel";
    case ErrorCode::kDegenerateOutput: return "DegenerateOutput";
    case ErrorCode::kOpCountOverflow: return "OpCountOverflow";
    case ErrorCode::kByteCountOverflow: return "ByteCountOverflow";
    case ErrorCode::kInvalidDecision: return "InvalidDecision";
    case ErrorCode::kInvalidScheme: return "InvalidScheme";
    case ErrorCode::kMissingProfile: return "MissingProfile";
    case ErrorCode::kUnknownKind: return "UnknownKind";
    case ErrorCode::kIncompleteLinkMatrix: return "IncompleteLinkMatrix";
    case ErrorCode::kInvalidPlan: return "InvalidPlan";
    case ErrorCode::kDimensionMismatch: return "DimensionMismatch";
    case ErrorCode::kEmptyBuffer: return "EmptyBuffer";
    case ErrorCode::kMissingTerminalLatency: return "MissingTerminalLatency";
    case ErrorCode::kSearchSpaceTooLarge: return "SearchSpaceTooLarge";
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kIoError: return "IoError";
  }
  return "Unknown";
}

}  // namespace distredge
