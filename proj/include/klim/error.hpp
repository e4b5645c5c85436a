#pragma once

#include <stdexcept>

namespace klim {

/// Malformed or out-of-regime input (bad arity, duplicate atoms, q > k-1, ...).
class InvalidInput : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Construction would exceed the configured generator ceiling.
class ResourceLimit : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// An algebraic identity that must hold was observed to fail (d^2 != 0, ...).
class VerificationFailure : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

} // namespace klim
