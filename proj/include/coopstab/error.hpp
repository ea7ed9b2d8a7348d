#pragma once

#include <stdexcept>
#include <string>

namespace coopstab {

// Base for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A numeric argument is outside its admissible range.
class InvalidParameter : public Error {
public:
    using Error::Error;
};

// A scenario or simulator configuration is incomplete or inconsistent
// with the selected system variant.
class ConfigError : public Error {
public:
    using Error::Error;
};

// An explicit link table violates interfered <= direct success.
class ConsistencyError : public Error {
public:
    using Error::Error;
};

// A rate formula was asked to divide by a zero service rate while the
// matching arrival rate is positive.
class InfeasibleRate : public Error {
public:
    using Error::Error;
};

} // namespace coopstab
