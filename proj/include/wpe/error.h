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

#ifndef WPE_ERROR_H_
#define WPE_ERROR_H_

#include <stdexcept>
#include <string>

namespace wpe {

enum class ErrorCode {
  kInvalidInterval,
  kOutOfDomain,
  kInvalidExponent,
  kDegenerateWeight,
  kUnderResolved,
  kUnderResolvedScale,
  kTooManyTents,
  kTooManyCandidates,
  kPreconditionViolated,
  kUnsupportedExponent,
  kWeightRejected,
  kInvalidExponents,
  kInvalidArgument,
  kConfig,
};

const char* ErrorCodeName(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(ErrorCodeName(code)) + ": " + what),
        code_(code) {}
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

// Closed-open conventions are decided by the caller; this is just a pair.
struct Interval {
  double lo = 0.0;
  double hi = 0.0;
  double length() const { return hi - lo; }
  double center() const { return 0.5 * (lo + hi); }
};

}  // namespace wpe

#endif  // WPE_ERROR_H_
