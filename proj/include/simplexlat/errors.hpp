#pragma once

#include <stdexcept>
#include <string>

namespace simplexlat {

/// Base for every domain error raised by the library. The CLI maps these to
/// exit status 1; anything else escaping dispatch is a usage error.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class DimensionError : public Error {
public:
    using Error::Error;
};

class SingularError : public Error {
public:
    using Error::Error;
};

class ConvergenceError : public Error {
public:
    using Error::Error;
};

/// Right-eigenvector basis too ill-conditioned: the matrix sits at or near an
/// exceptional point.
class NearDefectiveError : public Error {
public:
    using Error::Error;
};

/// The class-coordinate matrix T of a reduction is singular to tolerance.
class ReductionSingularError : public Error {
public:
    using Error::Error;
};

class OverflowError : public Error {
public:
    using Error::Error;
};

class SizeCapError : public Error {
public:
    using Error::Error;
};

class FitError : public Error {
public:
    using Error::Error;
};

/// Malformed input document. `where` holds a field path or "line L, column C".
class ParseError : public Error {
public:
    ParseError(const std::string& where, const std::string& what)
        : Error(where.empty() ? what : where + ": " + what), where_(where) {}

    const std::string& where() const noexcept { return where_; }

private:
    std::string where_;
};

}  // namespace simplexlat
