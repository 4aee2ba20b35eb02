// Copyright 2026 The cachemimo Authors
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

#pragma once

#include <stdexcept>
#include <string>

namespace cachemimo {

/// Base of every error raised by the library. The C API maps each subclass to
/// a distinct status code.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid or inconsistent configuration (bad JSON, violated parameter
/// constraints, unsupported cache setup).
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Argument outside the mathematical domain of an operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Precoder cannot be built for the requested load (ZF with M <= N_n + 1).
class InfeasibleError : public Error {
 public:
  using Error::Error;
};

/// Factorization failure or non-finite evaluation.
class NumericError : public Error {
 public:
  using Error::Error;
};

/// Contract violation by the caller, e.g. asking for an inactive user's estimate.
class LogicError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace cachemimo
