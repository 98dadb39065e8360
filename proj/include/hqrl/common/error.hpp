// Copyright 2026 The hqrl Authors
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
/**
 * @file error.hpp
 * Exception types shared by every hqrl module.
 */
#pragma once

#include <stdexcept>
#include <string>

namespace hqrl {

/// Base class of all library errors.
class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// A size limit (qubits, brute-force variables) was exceeded.
class CapacityError : public Error {
  public:
    using Error::Error;
};

/// A qubit, variable or parameter index is out of range.
class IndexError : public Error {
  public:
    using Error::Error;
};

/// Shapes of two collaborating objects disagree.
class DimensionError : public Error {
  public:
    using Error::Error;
};

/// A caller broke an operation's precondition (e.g. a masked action).
class ContractViolation : public Error {
  public:
    using Error::Error;
};

/// Numerical failure such as a NaN gradient.
class NumericalError : public Error {
  public:
    using Error::Error;
};

/// Invalid or inconsistent configuration / input file.
class ConfigError : public Error {
  public:
    using Error::Error;
};

} // namespace hqrl

#define HQRL_REQUIRE(cond, ExceptionT, msg)                                   \
    do {                                                                       \
        if (!(cond)) {                                                         \
            throw ExceptionT(std::string(msg));                                \
        }                                                                      \
    } while (0)
