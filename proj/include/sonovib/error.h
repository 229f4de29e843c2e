// Copyright 2026 The sonovib Authors. All Rights Reserved.
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

#ifndef SONOVIB_ERROR_H_
#define SONOVIB_ERROR_H_

#include <stdexcept>
#include <string>

namespace sonovib {

// Bad input: missing or malformed files, schema violations, arguments outside
// an operation's preconditions. The CLI maps these to exit code 1.
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Failure while processing otherwise well-formed input. CLI exit code 2.
class ProcessingError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Signal has no energy to normalize or analyze.
class DegenerateSignalError : public ProcessingError {
 public:
  explicit DegenerateSignalError(const std::string& what)
      : ProcessingError("degenerate signal: " + what) {}
};

}  // namespace sonovib

#endif  // SONOVIB_ERROR_H_
