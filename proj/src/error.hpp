// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace siamdiff {

// Error taxonomy. The CLI maps these onto exit codes:
// config 2, data 3, numeric 4, integrity 5.
struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

struct DataError : std::runtime_error {
    explicit DataError(const std::string& msg) : std::runtime_error(msg) {}
};

struct NumericError : std::runtime_error {
    explicit NumericError(const std::string& msg) : std::runtime_error(msg) {}
};

struct IntegrityError : std::runtime_error {
    explicit IntegrityError(const std::string& msg) : std::runtime_error(msg) {}
};

// Programming-contract violations (bad shapes, bad arguments, misuse).
struct InvalidParameterError : std::invalid_argument {
    explicit InvalidParameterError(const std::string& msg) : std::invalid_argument(msg) {}
};

struct ShapeError : InvalidParameterError {
    explicit ShapeError(const std::string& msg) : InvalidParameterError(msg) {}
};

struct GeometryError : std::runtime_error {
    explicit GeometryError(const std::string& msg) : std::runtime_error(msg) {}
};

struct UsageError : std::logic_error {
    explicit UsageError(const std::string& msg) : std::logic_error(msg) {}
};

}  // namespace siamdiff
