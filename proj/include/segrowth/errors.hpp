#pragma once

#include <stdexcept>
#include <string>

namespace segrowth {

/// Invalid or unusable input data. The CLI maps this to exit code 1.
class DataError : public std::runtime_error {
public:
    explicit DataError(const std::string& what) : std::runtime_error(what) {}
};

/// Estimation failure: infeasible start, empty start grid, singular system,
/// enumeration guard exceeded.
class FitError : public std::runtime_error {
public:
    explicit FitError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace segrowth
