#pragma once

#include <stdexcept>
#include <string>

namespace chordkit {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A constructor or operation precondition was violated by the data itself
// (out-of-range samples, non-unit normals, NaN, ...).
class ValidationError : public Error {
public:
    using Error::Error;
};

class ResolutionMismatch : public Error {
public:
    using Error::Error;
};

class IoError : public Error {
public:
    using Error::Error;
};

class ConfigError : public Error {
public:
    using Error::Error;
};

}  // namespace chordkit
