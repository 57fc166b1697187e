// Copyright (c) the jndopt authors
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

#ifndef JNDOPT_ERROR_HPP_
#define JNDOPT_ERROR_HPP_

#include <stdexcept>
#include <string>

namespace jndopt {

enum class ErrorCode {
  kIo,
  kFormat,
  kShapeMismatch,
  kDomain,
  kEmptyGroup,
};

const char* ErrorCodeName(ErrorCode code);

// All fallible operations in the library throw Error. The C API converts the
// code into a jndopt_status.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] void Fail(ErrorCode code, const std::string& message);

}  // namespace jndopt

#endif  // JNDOPT_ERROR_HPP_
