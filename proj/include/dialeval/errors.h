// Copyright 2026 The Dialeval Authors.
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

#ifndef DIALEVAL_ERRORS_H_
#define DIALEVAL_ERRORS_H_

#include <stdexcept>
#include <string>

namespace dialeval {

// Base class for all errors raised by the library. The subclasses map onto
// the process exit codes used by the command-line tool.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bad flags or missing required inputs (exit code 1).
class UsageError : public Error {
 public:
  using Error::Error;
};

// Malformed or inconsistent input data (exit code 2).
class DataError : public Error {
 public:
  using Error::Error;
};

// A parameter or loss became non-finite during training (exit code 3).
class NumericalError : public Error {
 public:
  using Error::Error;
};

}  // namespace dialeval

#endif  // DIALEVAL_ERRORS_H_
