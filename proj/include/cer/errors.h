// Copyright 2026 The CER Authors
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
//

#ifndef CER_ERRORS_H_
#define CER_ERRORS_H_

#include <cstddef>
#include <stdexcept>
#include <string>

namespace cer {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Query text did not match the grammar.
class SyntaxError : public Error {
 public:
  SyntaxError(const std::string& msg, int line, int column);
  int line() const { return line_; }
  int column() const { return column_; }

 private:
  int line_;
  int column_;
};

// Query is well-formed but refers to something that does not exist, repeats
// a clause, or fails the schema type check.
class ValidationError : public Error {
 public:
  using Error::Error;
};

class UnsupportedFeature : public Error {
 public:
  using Error::Error;
};

// Malformed or out-of-order stream input. row is 1-based over data rows, or
// 0 when not tied to a row.
class StreamError : public Error {
 public:
  StreamError(const std::string& msg, std::size_t row = 0);
  std::size_t row() const { return row_; }

 private:
  std::size_t row_;
};

// The oracle refused an instance that would exceed its size guard.
class GuardError : public Error {
 public:
  using Error::Error;
};

}  // namespace cer

#endif  // CER_ERRORS_H_
