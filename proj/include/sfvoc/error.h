// include/sfvoc/error.h

// Copyright 2026  sfvoc authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#ifndef SFVOC_ERROR_H_
#define SFVOC_ERROR_H_

#include <stdexcept>
#include <string>
#include <string_view>

namespace sfvoc {

enum class ErrorCode {
  kInvalidArgument,
  kShapeMismatch,
  kRateMismatch,
  kChannelCount,
  kUnsupportedFormat,
  kIo,
  kCorrupt,
  kVersionMismatch,
  kConfigMismatch,
  kNonFinite,
  kConfig,
};

std::string_view ErrorCodeName(ErrorCode code);

// All library failures are reported through this exception type.  The code is
// stable and printed by the CLI as the machine-readable part of an error line.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string &what)
      : std::runtime_error(what), code_(code) {}
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

#define SFVOC_CHECK(cond, code, msg)                  \
  do {                                                \
    if (!(cond)) throw ::sfvoc::Error((code), (msg)); \
  } while (0)

}  // namespace sfvoc

#endif  // SFVOC_ERROR_H_
