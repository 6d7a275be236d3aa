// Copyright 2026 The ECC Toolkit Authors.
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

#pragma once

#include <stdexcept>
#include <string>

namespace ecc {

enum class ErrorKind {
  kInvalidInput,  // malformed or inconsistent input data
  kParameter,     // caller passed an out-of-contract argument
  kDegenerate,    // data cannot support the requested binning
  kIo,            // file could not be opened, read or written
};

// The single exception type thrown by the toolkit. The kind decides the
// process exit code in the command-line front end.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string &message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

inline Error InvalidInput(const std::string &message) {
  return Error(ErrorKind::kInvalidInput, message);
}
inline Error ParameterError(const std::string &message) {
  return Error(ErrorKind::kParameter, message);
}
inline Error DegenerateError(const std::string &message) {
  return Error(ErrorKind::kDegenerate, message);
}
inline Error IoError(const std::string &message) {
  return Error(ErrorKind::kIo, message);
}

}  // namespace ecc
