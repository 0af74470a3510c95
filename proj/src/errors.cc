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

#include "cer/errors.h"

namespace cer {

SyntaxError::SyntaxError(const std::string& msg, int line, int column)
    : Error("syntax error at " + std::to_string(line) + ":" +
            std::to_string(column) + ": " + msg),
      line_(line),
      column_(column) {}

StreamError::StreamError(const std::string& msg, std::size_t row)
    : Error(row == 0 ? msg : "row " + std::to_string(row) + ": " + msg),
      row_(row) {}

}  // namespace cer
