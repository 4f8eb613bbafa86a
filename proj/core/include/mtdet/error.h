// Copyright 2026 The mtdet Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//   http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef MTDET_ERROR_H_
#define MTDET_ERROR_H_

#include <cstddef>
#include <stdexcept>
#include <string>

namespace mtdet {

// Broad classes of failure. The CLI maps each to a distinct exit code.
enum class ErrorKind {
  kFormat,       // malformed text input (bad id, bad number, wrong field count)
  kDimension,    // vector dimensions disagree
  kDuplicate,    // repeated id where uniqueness is required
  kUnknownId,    // reference to a speaker/utterance that does not exist
  kDegenerate,   // zero vector, zero sigma, empty cohort, undefined rate
  kCoverage,     // submission and key do not cover the same utterances
  kIo,           // file could not be opened/written
};

const char* ErrorKindName(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

// Error raised while reading a line-oriented file. line() is 1-based; 0 means
// the error is not tied to a particular line.
class ParseError : public Error {
 public:
  ParseError(ErrorKind kind, std::size_t line, const std::string& message)
      : Error(kind, line > 0 ? "line " + std::to_string(line) + ": " + message
                             : message),
        line_(line) {}

  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

}  // namespace mtdet

#endif  // MTDET_ERROR_H_
