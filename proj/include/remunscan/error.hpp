/*
 * Copyright 2026 The remunscan Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *   http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace remunscan {

enum class ErrorKind {
  domain,
  precision,
  insufficient_data,
  no_coverage,
  io,
  parse,
  decode,
  config,
  input,
  transport,
};

inline const char* to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::domain: return "domain";
    case ErrorKind::precision: return "precision";
    case ErrorKind::insufficient_data: return "insufficient-data";
    case ErrorKind::no_coverage: return "no-coverage";
    case ErrorKind::io: return "io";
    case ErrorKind::parse: return "parse";
    case ErrorKind::decode: return "decode";
    case ErrorKind::config: return "config";
    case ErrorKind::input: return "input";
    case ErrorKind::transport: return "transport";
  }
  return "unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

/// A rejected input line. `line` is 1-based within `source`.
class ParseError : public Error {
 public:
  ParseError(std::string source, std::size_t line, const std::string& reason)
      : Error(ErrorKind::parse, source + ":" + std::to_string(line) + ": " + reason),
        source_(std::move(source)),
        line_(line),
        reason_(reason) {}

  const std::string& source() const noexcept { return source_; }
  std::size_t line() const noexcept { return line_; }
  const std::string& reason() const noexcept { return reason_; }

 private:
  std::string source_;
  std::size_t line_;
  std::string reason_;
};

/// Schema mismatch in an external payload; `field` names the offending key.
class DecodeError : public Error {
 public:
  DecodeError(std::string field, const std::string& what)
      : Error(ErrorKind::decode, "field '" + field + "': " + what), field_(std::move(field)) {}

  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

/// Network failure after exhausting retries. Retryable by the caller.
class TransportError : public Error {
 public:
  TransportError(int attempts, const std::string& what)
      : Error(ErrorKind::transport, what + " (after " + std::to_string(attempts) + " attempts)"),
        attempts_(attempts) {}

  int attempts() const noexcept { return attempts_; }
  bool retryable() const noexcept { return true; }

 private:
  int attempts_;
};

}  // namespace remunscan
