// Copyright 2026 The qpost Authors
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

#pragma once

#include <stdexcept>
#include <string>

namespace qpost {

/// Base class for every error raised by the library. Each subclass maps to
/// one failure category so callers (and the CLI) can report it in one line.
class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Configuration length does not match the problem, or two runs differ in length.
class DimensionError : public Error {
  public:
    using Error::Error;
};

/// A vertex index is out of range for the problem or graph.
class IndexError : public Error {
  public:
    using Error::Error;
};

/// A numeric parameter is outside its admissible domain.
class ParameterError : public Error {
  public:
    using Error::Error;
};

/// An input collection is empty or inconsistent (e.g. an empty RunSet).
class InputError : public Error {
  public:
    using Error::Error;
};

/// Exact enumeration was requested on a problem that is too large.
class SizeError : public Error {
  public:
    using Error::Error;
};

/// A file could not be parsed. The message names the line and/or field.
class ParseError : public Error {
  public:
    using Error::Error;
};

/// An experiment configuration is infeasible or inconsistent.
class ConfigError : public Error {
  public:
    using Error::Error;
};

/// Reading or writing a file failed.
class IoError : public Error {
  public:
    using Error::Error;
};

}  // namespace qpost
