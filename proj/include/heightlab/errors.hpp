#pragma once

#include <stdexcept>
#include <string>

namespace heightlab {

// Every failure raised by the library derives from Error so callers can map
// categories onto exit codes without string matching.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Bad input: off-curve points, out-of-range arguments, malformed configs.
class ValidationError : public Error {
public:
    using Error::Error;
};

// Inputs outside an operation's mathematical domain (bad reduction, excluded
// tower levels, unsupported primes).
class DomainError : public Error {
public:
    using Error::Error;
};

// Numerical or p-adic precision ran out before a certified answer was found.
class PrecisionError : public Error {
public:
    using Error::Error;
};

// A Hensel search found no admissible seed.
class NoRootError : public Error {
public:
    using Error::Error;
};

// Tied minimal valuations that could not be resolved.
class AmbiguityError : public Error {
public:
    using Error::Error;
};

// The doubling orbit reached O_E or a 2-torsion point before the requested depth.
class TorsionOrbitError : public Error {
public:
    using Error::Error;
};

// A checked mathematical invariant failed.
class InternalError : public Error {
public:
    using Error::Error;
};

}  // namespace heightlab
