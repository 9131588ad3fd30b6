// Copyright 2026 The symdirec Authors
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

#ifndef SYMDIREC_ERROR_H_
#define SYMDIREC_ERROR_H_

#include <cstddef>
#include <stdexcept>
#include <string>

namespace symdirec {

// Root of every error thrown by the library. `code()` is a stable,
// machine-readable tag ("SyntaxError", "FixtureMiss", ...) used by the CLI
// and recorded in traces.
class Error : public std::runtime_error {
 public:
  Error(std::string code, const std::string& message)
      : std::runtime_error(message), code_(std::move(code)) {}

  const std::string& code() const noexcept { return code_; }

 private:
  std::string code_;
};

// Generic tagged error for conditions that carry nothing beyond a message.
#define SYMDIREC_DEFINE_ERROR(Name)                                    \
  class Name : public ::symdirec::Error {                              \
   public:                                                             \
    explicit Name(const std::string& message) : Error(#Name, message) {} \
  }

SYMDIREC_DEFINE_ERROR(UnsupportedConstruct);
SYMDIREC_DEFINE_ERROR(DimensionMismatch);
SYMDIREC_DEFINE_ERROR(ZeroVector);
SYMDIREC_DEFINE_ERROR(IoError);
SYMDIREC_DEFINE_ERROR(ConfigError);
SYMDIREC_DEFINE_ERROR(NotCombinational);

// Positioned parse failure. Line and column are 1-based.
class SyntaxError : public Error {
 public:
  SyntaxError(const std::string& message, std::size_t line, std::size_t column,
              std::string token)
      : Error("SyntaxError", Format(message, line, column, token)),
        line_(line),
        column_(column),
        token_(std::move(token)) {}

  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }
  const std::string& token() const noexcept { return token_; }

 private:
  static std::string Format(const std::string& message, std::size_t line,
                            std::size_t column, const std::string& token) {
    std::string out = std::to_string(line) + ":" + std::to_string(column) +
                      ": " + message;
    if (!token.empty()) out += " (at '" + token + "')";
    return out;
  }

  std::size_t line_;
  std::size_t column_;
  std::string token_;
};

}  // namespace symdirec

#endif  // SYMDIREC_ERROR_H_
