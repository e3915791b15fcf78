#pragma once

#include <stdexcept>
#include <string>

namespace dbar {

/// Base of every error raised by the library.
class Error : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

/// Point outside the open slice.
class DomainError : public Error
{
public:
    using Error::Error;
};

/// Evaluation at the pole z = w.
class PoleError : public Error
{
public:
    using Error::Error;
};

/// Newton inversion of the slice map did not converge.
class InversionError : public Error
{
public:
    using Error::Error;
};

/// Grid or slice metadata of two operands do not match.
class ShapeError : public Error
{
public:
    using Error::Error;
};

/// Operation not available for this representation (e.g. exact calculus on a conformal slice).
class RepresentationError : public Error
{
public:
    using Error::Error;
};

/// Exact coefficient left the 64-bit range.
class ArithmeticOverflow : public Error
{
public:
    using Error::Error;
};

/// Input violates an operation's precondition. Carries the measured residual when there is one.
class PreconditionError : public Error
{
public:
    explicit PreconditionError(const std::string& what, double residual = 0.0)
        : Error(what), residual_(residual)
    {}

    double residual() const noexcept { return residual_; }

private:
    double residual_;
};

/// Invalid Sobolev index (p <= 1, p = inf, negative k).
class IndexError : public Error
{
public:
    using Error::Error;
};

/// Derivative order beyond what the grid path supports.
class ResolutionError : public Error
{
public:
    using Error::Error;
};

/// Malformed configuration.
class ConfigError : public Error
{
public:
    using Error::Error;
};

/// File system failure.
class IoError : public Error
{
public:
    using Error::Error;
};

} // namespace dbar
