#pragma once

#include <stdexcept>
#include <string>

namespace hems {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed input document (syntax, missing keys, wrong types).
class ParseError : public Error {
public:
    using Error::Error;
};

/// A well-formed input that violates a domain invariant. `field()` names the
/// offending key so callers can point the user at it.
class ValidationError : public Error {
public:
    ValidationError(std::string field, const std::string& what);
    const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

/// An appliance schedule outside its feasible region.
class FeasibilityError : public Error {
public:
    using Error::Error;
};

/// A battery transition that leaves its capacity or rate bounds.
class BoundError : public Error {
public:
    using Error::Error;
};

} // namespace hems
