#pragma once

#include <stdexcept>
#include <string>

namespace fradi {

/// Raised for malformed or inconsistent scenario configuration.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Raised when a linear solve or time integration breaks down
/// (singular system, instability blow-up).
class SolverError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace fradi
