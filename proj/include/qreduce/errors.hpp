#pragma once

#include <stdexcept>
#include <string>

namespace qreduce {

// Invalid user-supplied configuration (bad array, schedule, layout, flag).
// The CLI maps this to exit code 2.
class ConfigError : public std::invalid_argument {
public:
    explicit ConfigError(const std::string& what) : std::invalid_argument(what) {}
};

// A violated internal invariant (norm drift, broken channel completeness).
// The CLI maps this to exit code 3.
class InvariantError : public std::runtime_error {
public:
    explicit InvariantError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace qreduce
