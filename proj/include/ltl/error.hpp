#pragma once

#include <stdexcept>
#include <string>

namespace ltl {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// File could not be read or written.
class IoError : public Error {
public:
    using Error::Error;
};

/// Input document is malformed or violates a domain invariant.
class ValidationError : public Error {
public:
    using Error::Error;
};

/// A model is provably infeasible before or during solving.
class InfeasibleError : public Error {
public:
    using Error::Error;
};

/// Generator parameters cannot yield a feasible instance.
class GenerationError : public Error {
public:
    using Error::Error;
};

/// Brute-force oracle refused a model that is too large.
class SizeExceededError : public Error {
public:
    using Error::Error;
};

/// Internal consistency failure (e.g. a solution that does not decompose).
class InternalError : public Error {
public:
    using Error::Error;
};

}  // namespace ltl
