#pragma once

#include <stdexcept>
#include <string>

namespace yindex {

/// Base class for all errors raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Bad argument or unknown name passed to a constructor-style operation.
class InvalidArgument : public Error {
public:
    using Error::Error;
};

/// Frame requested at the cone point r = 0.
class SingularPointError : public Error {
public:
    using Error::Error;
};

class MeshError : public Error {
public:
    using Error::Error;
};

class AssemblyError : public Error {
public:
    using Error::Error;
};

/// Factorization breakdown or iteration cap hit in an eigen solver.
class SolverError : public Error {
public:
    using Error::Error;
};

/// A solver route was asked to handle a surface it does not support.
class UnsupportedRoute : public Error {
public:
    using Error::Error;
};

/// Malformed or inconsistent input file.
class InputError : public Error {
public:
    using Error::Error;
};

/// The immersion is degenerate (branch point at sample scale).
class DegenerateImmersion : public Error {
public:
    using Error::Error;
};

} // namespace yindex
