#pragma once

#include <stdexcept>
#include <string>

namespace gfp {

/// Input that cannot be parsed (file format violations, bad tokens).
/// Messages carry the path and 1-based line number when available.
class ParseError : public std::runtime_error {
public:
    explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

/// A numerical routine failed to produce a trustworthy result
/// (eigensolver non-convergence, step-size underflow, singular solve).
class NumericalError : public std::runtime_error {
public:
    explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

/// Spectrum indicates a disconnected graph (lambda2 below tolerance).
class DisconnectedError : public NumericalError {
public:
    explicit DisconnectedError(const std::string& what) : NumericalError(what) {}
};

} // namespace gfp
