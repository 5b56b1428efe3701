#pragma once

#include <stdexcept>
#include <string>

namespace nonvanish {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Input outside an operation's mathematical domain (n = 0, even p, off-curve point, ...).
class DomainError : public Error {
public:
    using Error::Error;
};

class SingularCurveError : public Error {
public:
    using Error::Error;
};

/// Good-reduction routine called at a bad prime or vice versa.
class WrongReductionError : public Error {
public:
    using Error::Error;
};

/// A prime coefficient needed for Hecke extension is missing.
class IncompleteInputError : public Error {
public:
    using Error::Error;
};

/// A read past the trusted bound of a series, or a prime beyond the counting range.
class RangeError : public Error {
public:
    using Error::Error;
};

/// Malformed interchange record or fixture file.
class SchemaError : public Error {
public:
    using Error::Error;
};

/// A certificate was requested without its hypotheses holding.
class NotApplicableError : public Error {
public:
    using Error::Error;
};

/// A zero run reached the end of the trusted coefficients; its length is only a lower bound.
class TruncatedRunError : public Error {
public:
    using Error::Error;
};

/// A scan range contains no qualifying integer.
class EmptyDataError : public Error {
public:
    using Error::Error;
};

}  // namespace nonvanish
