#pragma once

#include <cstdio>
#include <stdexcept>
#include <string>

namespace impq {

namespace detail {
inline std::string sci(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3e", x);
    return buf;
}
}  // namespace detail

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class DimensionMismatch : public Error {
public:
    DimensionMismatch(const std::string& where, long lhs, long rhs)
        : Error(where + ": dimension mismatch (" + std::to_string(lhs) + " vs " +
                std::to_string(rhs) + ")") {}
};

/// A numeric certification failed; `norm` is the offending residual.
class CertificationError : public Error {
public:
    CertificationError(const std::string& what, double norm)
        : Error(what + " (residual " + detail::sci(norm) + ")"), norm_(norm) {}

    double norm() const noexcept { return norm_; }

private:
    double norm_;
};

class NotHermitian : public CertificationError {
public:
    explicit NotHermitian(double norm)
        : CertificationError("matrix is not Hermitian", norm) {}
};

class NotProjector : public CertificationError {
public:
    NotProjector(const std::string& why, double norm) : CertificationError(why, norm) {}
};

class NotDensity : public CertificationError {
public:
    NotDensity(const std::string& why, double norm) : CertificationError(why, norm) {}
};

/// Iterative meet exceeded its power cap. `gap` is the last successive distance.
class ConvergenceError : public Error {
public:
    ConvergenceError(const std::string& what, double gap)
        : Error(what + " (last step distance " + detail::sci(gap) + ")"), gap_(gap) {}

    double gap() const noexcept { return gap_; }

private:
    double gap_;
};

class DomainError : public Error {
public:
    using Error::Error;
};

/// Input document violates the matrix / config schema.
class SchemaError : public Error {
public:
    using Error::Error;
};

/// A file could not be read or written.
class IoError : public Error {
public:
    using Error::Error;
};

}  // namespace impq
