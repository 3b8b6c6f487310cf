#pragma once

#include <stdexcept>
#include <string>

namespace phj {

// Every library failure derives from Error so callers (the CLI in particular)
// can catch one type and still dispatch on the concrete category.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Input has too few finite samples to define the requested object.
class DegenerateInput : public Error {
public:
    using Error::Error;
};

/// A scalar argument lies outside its admissible range.
class RangeError : public Error {
public:
    using Error::Error;
};

/// A value lies outside the domain where the operation is defined (e.g. +inf).
class DomainError : public Error {
public:
    using Error::Error;
};

/// Two objects that must share a grid or interval do not.
class InterfaceError : public Error {
public:
    using Error::Error;
};

/// A documented precondition on a structured input (convexity, normalization)
/// was violated by the caller.
class ContractViolation : public Error {
public:
    using Error::Error;
};

class NumericalFailure : public Error {
public:
    using Error::Error;
};

class ConfigError : public Error {
public:
    using Error::Error;
};

}  // namespace phj
