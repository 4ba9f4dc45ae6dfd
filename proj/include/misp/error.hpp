// Copyright 2026 The misp Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <stdexcept>
#include <string>

namespace misp {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid parameters, metadata or image dimensions handed to an operator.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// A file or request body violates its schema. `field()` names the offending key.
class SchemaError : public Error {
 public:
  SchemaError(std::string field, const std::string& reason)
      : Error(field + ": " + reason), field_(std::move(field)) {}

  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

/// Byte-level format problems: truncation, bad checksums, undecodable payloads.
class FormatError : public Error {
 public:
  using Error::Error;
};

/// Numerical failure: rank deficiency, degenerate regressions, singular systems.
class NumericError : public Error {
 public:
  using Error::Error;
};

}  // namespace misp
