#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace nlapprox {

// Base of every error the library throws.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Violated operation precondition (non-increasing abscissae, bad ranges, ...).
class PreconditionError : public Error {
public:
    using Error::Error;
};

// Input vector or sample-count does not have the required shape.
class ShapeError : public Error {
public:
    using Error::Error;
};

class CompositionError : public Error {
public:
    using Error::Error;
};

// Nonfinite or otherwise invalid numeric parameter.
class ParameterError : public Error {
public:
    using Error::Error;
};

// Structurally valid document that describes an inconsistent network.
class ValidationError : public Error {
public:
    using Error::Error;
};

// Malformed interchange document. `offset()` is the byte position where
// parsing stopped.
class ParseError : public Error {
public:
    ParseError(const std::string& what, std::size_t offset)
        : Error(what + " (at byte " + std::to_string(offset) + ")"), offset_(offset) {}

    std::size_t offset() const noexcept { return offset_; }

private:
    std::size_t offset_;
};

// No representable don't-care gap meets the requested error budget.
class InfeasibleError : public Error {
public:
    InfeasibleError(const std::string& what, double achieved)
        : Error(what), achieved_(achieved) {}

    // Error measured at the last (smallest) gap that was tried.
    double achieved() const noexcept { return achieved_; }

private:
    double achieved_;
};

// N too small for the dimension: the projection grid collapses to one cell.
class DegenerateGridError : public Error {
public:
    using Error::Error;
};

// Configuration whose sample spacing would approach floating-point noise.
class ResolutionError : public Error {
public:
    using Error::Error;
};

// Target violates its (alpha, nu) Hoelder certificate.
class CertificateError : public Error {
public:
    using Error::Error;
};

class ResourceError : public Error {
public:
    using Error::Error;
};

class RegistryError : public Error {
public:
    using Error::Error;
};

class DomainError : public Error {
public:
    using Error::Error;
};

}  // namespace nlapprox
