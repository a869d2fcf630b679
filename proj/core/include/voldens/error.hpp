#pragma once

#include <stdexcept>
#include <string>

namespace voldens {

/// Base class for every failure raised by the library. `kind()` is a stable
/// machine-readable tag ("parameter", "pole", "numeric", ...) that the CLI
/// forwards in its error JSON.
class Error : public std::runtime_error {
public:
    Error(std::string kind, const std::string& message)
        : std::runtime_error(message), kind_(std::move(kind)) {}

    const std::string& kind() const noexcept { return kind_; }

private:
    std::string kind_;
};

/// Invalid model or estimator parameter (b <= 0, h <= 0, ...).
struct ParameterError : Error {
    explicit ParameterError(const std::string& m) : Error("parameter", m) {}
};

/// complex_log_gamma evaluated at a non-positive integer.
struct PoleError : Error {
    explicit PoleError(const std::string& m) : Error("pole", m) {}
};

/// Diffusion coefficient vanishing (or non-finite) on the evaluation grid.
struct SingularityError : Error {
    explicit SingularityError(const std::string& m) : Error("singularity", m) {}
};

/// Quadrature did not converge, or a real-valued result carried an imaginary residue.
struct NumericError : Error {
    explicit NumericError(const std::string& m) : Error("numeric", m) {}
};

/// Two grids that must share abscissae do not.
struct GridMismatchError : Error {
    explicit GridMismatchError(const std::string& m) : Error("grid-mismatch", m) {}
};

/// Inconsistent or unsupported configuration.
struct ConfigError : Error {
    explicit ConfigError(const std::string& m) : Error("config", m) {}
};

/// Result would overflow double precision (e.g. sinh(pi^2 L) for large L).
struct OverflowError : Error {
    explicit OverflowError(const std::string& m) : Error("overflow", m) {}
};

/// Input data cannot support the requested estimate (empty series, all points masked).
struct DataError : Error {
    explicit DataError(const std::string& m) : Error("data", m) {}
};

/// Malformed input file.
struct ParseError : Error {
    explicit ParseError(const std::string& m) : Error("parse", m) {}
};

}  // namespace voldens
