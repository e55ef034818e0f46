#pragma once

#include <stdexcept>
#include <string>

namespace plurality {

/// A color, weight or parameter lies outside its valid domain.
class DomainError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A population, schedule or run is set up inconsistently (n too small, bad pair index, ...).
class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A runtime assertion on a protocol invariant failed. Carries a human-readable diagnostic.
class InvariantViolation : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

}  // namespace plurality
