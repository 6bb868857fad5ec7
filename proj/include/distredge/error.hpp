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

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace distredge {

enum class ErrorCode {
  kParseError,
  kChainMismatch,
  kEmptyModel,
  kDegenerateOutput,
  kOpCountOverflow,
  kByteCountOverflow,
  kInvalidDecision,
  kInvalidScheme,
  kMissingProfile,
  kUnknownKind,
  kIncompleteLinkMatrix,
  kInvalidPlan,
  kDimensionMismatch,
  kEmptyBuffer,
  kMissingTerminalLatency,
  kSearchSpaceTooLarge,
  kInvalidArgument,
  kIoError,
};

std::string_view error_code_name(ErrorCode code);

// All library failures are reported as Error; code() identifies the kind.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(error_code_name(code)) + ": " + message),
        code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

// Layer-indexed failures (ChainMismatch, MissingProfile) carry the 1-based
// layer index that triggered them.
class LayerError : public Error {
 public:
  LayerError(ErrorCode code, int layer_index, const std::string& message)
      : Error(code, message), layer_index_(layer_index) {}

  int layer_index() const noexcept { return layer_index_; }

 private:
  int layer_index_;
};

}  // namespace distredge
