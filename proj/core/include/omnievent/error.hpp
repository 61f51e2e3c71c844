// Copyright 2026 The OmniEvent Authors
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

#ifndef OMNIEVENT_ERROR_HPP
#define OMNIEVENT_ERROR_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace omnievent {

/// Base class of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Array or collection shapes do not agree.
class ShapeError : public Error {
 public:
  using Error::Error;
};

/// A value lies outside its admissible range (grid cell, curve code).
class RangeError : public Error {
 public:
  using Error::Error;
};

/// An operation parameter violates its precondition (M = 0, K > N, ...).
class ParameterError : public Error {
 public:
  using Error::Error;
};

/// Non-finite values reached a numeric kernel.
class NumericError : public Error {
 public:
  using Error::Error;
};

/// The requested configuration is valid input but not supported.
class UnsupportedError : public Error {
 public:
  using Error::Error;
};

/// File could not be opened, read or written, or has a corrupt layout.
class IoError : public Error {
 public:
  using Error::Error;
};

/// Malformed configuration text. `line()` is 1-based, 0 when not tied to a line.
class ConfigError : public Error {
 public:
  ConfigError(std::size_t line, const std::string& what)
      : Error(line == 0 ? what : "line " + std::to_string(line) + ": " + what), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

}  // namespace omnievent

#endif  // OMNIEVENT_ERROR_HPP
