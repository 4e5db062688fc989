#pragma once

#include <stdexcept>
#include <string>

namespace cbct {

/// Raised for malformed, inconsistent, or missing configuration.
/// The CLI maps it to exit code 2.
class config_error : public std::runtime_error {
public:
    explicit config_error(const std::string& what) : std::runtime_error(what) {}
};

/// Raised when a computation produces or encounters invalid numbers
/// (non-finite cost, nonpositive open-beam intensity, ...).
/// The CLI maps it to exit code 3.
class numeric_error : public std::runtime_error {
public:
    explicit numeric_error(const std::string& what) : std::runtime_error(what) {}
};

} // namespace cbct
