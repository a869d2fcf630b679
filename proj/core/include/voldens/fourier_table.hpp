#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace voldens {

/// Real function sampled on a uniform grid x_q = q * dx, |q| <= Q, evaluated
/// by 4-point (cubic) Lagrange interpolation.
class CubicTable {
public:
    CubicTable() = default;
    CubicTable(double dx, std::vector<double> values);  ///< values[0] sits at x = -Q * dx

    double operator()(double x) const;
    bool covers(double x) const noexcept { return x >= -half_range_ && x <= half_range_; }
    double dx() const noexcept { return dx_; }
    double half_range() const noexcept { return half_range_; }
    std::size_t size() const noexcept { return values_.size(); }
    std::span<const double> values() const noexcept { return values_; }

private:
    double dx_ = 0.0;
    double inv_dx_ = 0.0;
    double half_range_ = 0.0;
    std::ptrdiff_t centre_ = 0;
    std::vector<double> values_;
};

/// Inverse-Fourier tabulation of a compactly supported spectrum,
///
///     T(x) = (1/2pi) * int_{s_lo}^{s_hi} F(s) exp(sign * i * s * x) ds,
///
/// on a uniform x grid, by the trapezoid rule in s evaluated with one FFT.
/// The trapezoid rule converges fast when F and its first derivatives vanish
/// at the support ends (true for every spectrum tabulated in this library).
struct FourierTableSpec {
    double s_lo = -1.0;
    double s_hi = 1.0;
    std::size_t min_spectrum_points = 1024;  ///< raised automatically to avoid aliasing over half_range
    double target_dx = 0.01;                 ///< realised dx is <= target_dx
    double half_range = 100.0;               ///< table covers |x| <= half_range
    int sign = -1;                           ///< -1: exp(-isx), +1: exp(+isx)
};

struct FourierTableResult {
    CubicTable table;
    double max_imag_residue = 0.0;  ///< max |Im T| over the tabulated points
    double max_abs_value = 0.0;
    std::size_t fft_size = 0;
    std::size_t spectrum_points = 0;
};

/// F must be Hermitian in the sense that T is real; the imaginary part of
/// the FFT output is reported, not discarded silently.
FourierTableResult build_fourier_table(const std::function<std::complex<double>(double)>& spectrum,
                                       const FourierTableSpec& spec);


/// c_l = (1/2pi) int F(w) e^{-iwl} dw for l = -L..L, F supported in
/// [-support, support]. One FFT of the 2pi-periodised samples; exact up to
/// aliasing from |l| >= P - L, with P >= max(4(L+1), min_points) a power of 2.
std::vector<std::complex<double>> fourier_coefficients(const std::function<std::complex<double>(double)>& spectrum,
                                                       double support, std::size_t L, std::size_t min_points = 8192);

}  // namespace voldens
