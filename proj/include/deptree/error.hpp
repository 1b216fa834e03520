#pragma once

#include <stdexcept>
#include <string>

namespace deptree {

/// Bad input: malformed data, out-of-range parameters, unmet preconditions.
class ValidationError : public std::runtime_error {
public:
    explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

/// A result failed one of its own invariants. Indicates a bug, not bad input.
class InvariantError : public std::logic_error {
public:
    explicit InvariantError(const std::string& what) : std::logic_error(what) {}
};

}  // namespace deptree
