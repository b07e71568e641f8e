#pragma once

#include <stdexcept>
#include <string>

namespace prefrec {

// Bad user-supplied input (configs, parameters, malformed files).
class ValidationError : public std::runtime_error {
public:
    explicit ValidationError(const std::string& msg) : std::runtime_error(msg) {}
};

// Filesystem trouble: missing paths, unwritable outputs.
class IoError : public std::runtime_error {
public:
    explicit IoError(const std::string& msg) : std::runtime_error(msg) {}
};

// Violated internal precondition; indicates a bug, not bad input.
class ContractViolation : public std::logic_error {
public:
    explicit ContractViolation(const std::string& msg) : std::logic_error(msg) {}
};

}  // namespace prefrec
