#pragma once

#include <stdexcept>
#include <string>

namespace bottlab {

// Root of every error raised by the library.
class Error : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

// Non-finite entries, non-square or empty input, or a broken structural
// invariant (Hermitian / unitary) at construction time.
class InvalidMatrix : public Error
{
public:
    using Error::Error;
};

class DimensionError : public Error
{
public:
    using Error::Error;
};

// Eigensolver failure or a decomposition that does not reconstruct its input.
class NumericalError : public Error
{
public:
    using Error::Error;
};

// The spectrum of a Loring element comes within gap_min of 1/2, so the
// spectral projection and the index are not certified.
class GapClosedError : public Error
{
public:
    GapClosedError(const std::string& what, double gap)
        : Error(what), gap_(gap)
    {
    }
    double gap() const noexcept { return gap_; }

private:
    double gap_;
};

class NonIntegerIndexError : public Error
{
public:
    using Error::Error;
};

class WindowError : public Error
{
public:
    using Error::Error;
};

// Two window sizes produced different pairing indices.
class StabilityError : public Error
{
public:
    using Error::Error;
};

class NotAProjection : public Error
{
public:
    using Error::Error;
};

// A loop is not unitary (or not based at the identity) where it must be.
class NotAUnitaryLoop : public Error
{
public:
    using Error::Error;
};

// Near-singular determinant while sampling a loop.
class SampleError : public Error
{
public:
    using Error::Error;
};

// Two constructions that must agree exactly (u_t from its definition and
// from the Dirac ramp) disagree.
class ModelInconsistencyError : public Error
{
public:
    using Error::Error;
};

} // namespace bottlab
