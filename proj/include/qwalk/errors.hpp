#pragma once

#include <stdexcept>
#include <string>

namespace qwalk {

// Bad input: malformed parameters, violated preconditions.
class validation_error : public std::runtime_error {
public:
    explicit validation_error(const std::string& what) : std::runtime_error(what) {}
};

// Numerical failure: solver non-convergence, integer overflow, I/O faults.
class computational_error : public std::runtime_error {
public:
    explicit computational_error(const std::string& what) : std::runtime_error(what) {}
};

} // namespace qwalk
