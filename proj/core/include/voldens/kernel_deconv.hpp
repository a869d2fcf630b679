#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>

#include "voldens/estimate_report.hpp"
#include "voldens/fourier_table.hpp"
#include "voldens/noise_model.hpp"

namespace voldens {

/// Wand kernel, the inverse Fourier transform of (1 - t^2)^3 on [-1, 1].
/// Closed form for |x| > switch_at, 8-term Taylor series inside.
double wand_kernel(double x, double switch_at = 0.5);

/// (1 - t^2)^3 on [-1, 1], 0 outside.
double wand_charfn(double t);

struct KernelTableOptions {
    std::size_t spectrum_points = 1024;
    double dx = 0.01;
};

/// Deconvolution kernel v_h(x) = (1/2pi) int_{-1}^{1} phi_w(s) / phi_k(s/h) e^{-isx} ds.
/// The FFT table covers |x| <= half_range; arguments outside it fall back to
/// direct quadrature. Immutable after construction.
class DeconvKernel {
public:
    DeconvKernel(double h, double half_range, NoiseKind noise = NoiseKind::LogChiSquare,
                 KernelTableOptions options = {});

    double h() const noexcept { return h_; }
    NoiseKind noise() const noexcept { return noise_; }
    double operator()(double x) const;
    /// Adaptive Gauss-Kronrod over [-1, 1] (relative tolerance rel_tol). Throws
    /// NumericError when the imaginary part exceeds 1e-8 |Re| + 1e-12.
    double direct(double x, double rel_tol = 1e-10) const;
    const CubicTable& table() const noexcept { return table_; }
    double table_imag_residue() const noexcept { return imag_residue_; }

private:
    double h_;
    NoiseKind noise_;
    CubicTable table_;
    double imag_residue_ = 0.0;
};

struct KernelSpec {
    double h = 0.5;
    NoiseKind noise = NoiseKind::LogChiSquare;
    std::size_t grid_points = 512;
    bool clip_negative = false;  ///< clip at 0 and renormalise (off: raw estimator)
    KernelTableOptions table;
};

/// Default abscissae: grid_points points on [min Y - 3h, max Y + 3h].
std::vector<double> default_grid(std::span<const double> y, double h, std::size_t grid_points);

/// Half-width (in units of h) of the kernel argument range needed for `y` and `grid`.
double kernel_argument_range(std::span<const double> y, std::span<const double> grid, double h);

/// (1/nh) sum_j weight_j v_h((x - Y_j)/h) at each grid point; weights default to 1.
std::vector<double> kernel_sums(const DeconvKernel& kernel, std::span<const double> y, std::span<const double> grid,
                                std::span<const double> weights = {});

/// f_nh on `grid` (default_grid when empty).
EstimateReport estimate_density(std::span<const double> y, const KernelSpec& spec, std::span<const double> grid = {});
/// Same with a prebuilt kernel; its table must cover the argument range.
EstimateReport estimate_density(std::span<const double> y, const DeconvKernel& kernel, std::span<const double> grid,
                                bool clip_negative = false);

/// h = gamma pi / log n. Throws ParameterError for n < 3 or gamma <= 0.
double default_bandwidth(std::size_t n, double gamma);

/// Warning text when gamma <= 4/delta_exponent (sampling gap Delta = n^-delta).
std::optional<std::string> bandwidth_warning(double gamma, double delta_exponent);

}  // namespace voldens
