#pragma once

#include <complex>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace steklov {

enum class ErrorKind {
    BoundaryAmbiguous,
    DegenerateCurve,
    InvalidArgument,
    ZeroAtOrigin,
    RootInsideDisk,
    NoIntersection,
    SingularRHS,
    TooFewConverged,
    OutsideDomain,
    NotPositiveDefinite,
    NewtonFailed,
    InteriorRequired,
    BranchJump,
    NoSignConstantCell,
    ConfigError,
    LapackFailure,
};

std::string_view to_string(ErrorKind kind) noexcept;

// Every failure raised by the library carries a kind so callers (and the CLI
// exit-code mapping) can dispatch without parsing messages.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

class RootInsideDiskError : public Error {
public:
    RootInsideDiskError(std::vector<std::complex<double>> roots, const std::string& what)
        : Error(ErrorKind::RootInsideDisk, what), roots_(std::move(roots)) {}
    const std::vector<std::complex<double>>& offending_roots() const noexcept { return roots_; }

private:
    std::vector<std::complex<double>> roots_;
};

}  // namespace steklov
