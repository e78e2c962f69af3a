// Copyright 2026 The wpe Authors
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

#include "wpe/error.h"

namespace wpe {

const char* ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidInterval: return "invalid-interval";
    case ErrorCode::kOutOfDomain: return "out-of-domain";
    case ErrorCode::kInvalidExponent: return "invalid-exponent";
    case ErrorCode::kDegenerateWeight: return "degenerate-weight";
    case ErrorCode::kUnderResolved: return "under-resolved";
    case ErrorCode::kUnderResolvedScale: return "under-resolved-scale";
    case ErrorCode::kTooManyTents: return "too-many-tents";
    case ErrorCode::kTooManyCandidates: return "too-many-candidates";
    case ErrorCode::kPreconditionViolated: return "precondition-violated";
    case ErrorCode::kUnsupportedExponent: return "unsupported-exponent";
    case ErrorCode::kWeightRejected: return "weight-rejected";
    case ErrorCode::kInvalidExponents: return "invalid-exponents";
    case ErrorCode::kInvalidArgument: return "invalid-argument";
    case ErrorCode::kConfig: return "config";
  }
  return "unknown";
}

}  // namespace wpe
