#pragma once

#include <stdexcept>
#include <string>

namespace gammalim {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Argument outside the range over which an object is defined (tabulated potentials).
class RangeError : public Error {
public:
    using Error::Error;
};

/// Point not admissible for the domain (e.g. a penalty on an interval endpoint).
class DomainError : public Error {
public:
    using Error::Error;
};

/// Fields that should share a mesh do not.
class ShapeError : public Error {
public:
    using Error::Error;
};

class ArgumentError : public Error {
public:
    using Error::Error;
};

/// The potential does not admit the requested construction.
class PotentialError : public Error {
public:
    using Error::Error;
};

/// The mesh cannot resolve the requested construction.
class ResolutionError : public Error {
public:
    using Error::Error;
};

class ConfigError : public Error {
public:
    using Error::Error;
};

/// Broken internal invariant.
class InternalError : public Error {
public:
    using Error::Error;
};

}  // namespace gammalim
