#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace voldens {

/// Density values on strictly increasing abscissae. Every estimator and every
/// ground-truth oracle hands its result back in this form.
struct DensityGrid {
    std::vector<double> x;
    std::vector<double> value;
    /// False when values may be negative (raw deconvolution estimates are signed).
    bool nonnegative = false;

    DensityGrid() = default;
    DensityGrid(std::vector<double> abscissae, std::vector<double> values, bool nonneg = false);

    std::size_t size() const noexcept { return x.size(); }

    /// Throws GridMismatchError unless abscissae are strictly increasing and
    /// lengths agree.
    void validate() const;
};

/// `count` equally spaced points on [lo, hi], endpoints included.
std::vector<double> linspace(double lo, double hi, std::size_t count);

/// Composite trapezoid rule over (possibly non-uniform) abscissae.
double trapezoid(std::span<const double> x, std::span<const double> y);

/// Trapezoid integral of the grid values.
double integral(const DensityGrid& grid);

/// Copy of `grid` with negative values set to zero, rescaled to unit trapezoid mass.
/// Throws DataError if the clipped mass is not positive.
DensityGrid clip_and_renormalize(const DensityGrid& grid);

}  // namespace voldens
