#pragma once

#include <stdexcept>
#include <string>

namespace cgas {

// Bad or out-of-domain parameters. Maps to CLI exit code 2.
struct invalid_parameter : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// A requested target cannot be met inside the configured simulation box.
struct capacity_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Clan growth exceeded its budget guard. Carries partial exploration
// statistics; never a silent truncation. Maps to CLI exit code 3.
struct budget_exceeded : std::runtime_error {
    size_t cylinders = 0;
    size_t depth = 0;
    budget_exceeded(const std::string& msg, size_t cyl, size_t dep)
        : std::runtime_error(msg), cylinders(cyl), depth(dep) {}
};

// A structural invariant of a supplied object does not hold.
struct invariant_violation : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace cgas
