#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "voldens/estimate_report.hpp"
#include "voldens/fourier_table.hpp"
#include "voldens/noise_model.hpp"

namespace voldens {

/// Meyer-type multiresolution built from a symmetric probability measure mu
/// on [-pi/3, pi/3] with CDF F(t) = nu((t + pi/3) / (2pi/3)),
/// nu(x) = x^4 (35 - 84x + 70x^2 - 20x^3). Only this bump is implemented.
struct MeyerSpec {
    int bump_degree = 3;                 ///< nu is C^{bump_degree}; only 3 is supported
    std::size_t spectrum_points = 8192;  ///< minimum frequency samples for U_m tables
    double near_dx = 0.005;
    double near_range = 128.0;
    double far_dx = 0.02;

    void validate() const;
};

double meyer_nu(double x);
/// mu((-inf, t]).
double meyer_mu_cdf(double t);
/// phi~(w) = mu((w - pi, w + pi])^{1/2}; supported in [-4pi/3, 4pi/3].
double meyer_scaling_fourier(double omega, const MeyerSpec& spec = {});
/// psi~(w) = e^{-iw/2} mu((|w|/2 - pi, |w| - pi])^{1/2}.
std::complex<double> meyer_wavelet_fourier(double omega, const MeyerSpec& spec = {});

/// Scaling function phi(x) = (1/2pi) int phi~(w) e^{iwx} dw by adaptive quadrature.
double meyer_scaling_function(double x, const MeyerSpec& spec = {});

/// U_m(x) = (1/2pi) int phi~(w) / phi_k(2^m w) e^{iwx} dw by adaptive quadrature
/// (phi_k(2^m w) = k~(-2^m w) with k~ = conj(phi_k)). Real part after a residue check.
double u_m_function(double x, int m, NoiseKind noise = NoiseKind::LogChiSquare, const MeyerSpec& spec = {});

/// Tabulated U_m on |x| <= range (fine table near 0, coarser beyond); direct
/// quadrature outside. Immutable, shareable across threads.
class UmTable {
public:
    UmTable(int m, NoiseKind noise, double range, const MeyerSpec& spec = {});

    double operator()(double x) const;
    int level() const noexcept { return m_; }
    double range() const noexcept { return range_; }
    double imag_residue() const noexcept { return imag_residue_; }

private:
    int m_;
    NoiseKind noise_;
    MeyerSpec spec_;
    double range_;
    CubicTable near_;
    std::optional<CubicTable> far_;
    double imag_residue_ = 0.0;
};

/// Process-wide cache of U_m tables keyed by (m, noise, range bucket, spec).
std::shared_ptr<const UmTable> shared_um_table(int m, NoiseKind noise, double range, const MeyerSpec& spec = {});

/// 2^{m_n} target log n / (1 + 4pi^2/3) and the realised level
/// m_n = max(0, round(log2 target)).
struct LevelChoice {
    double target = 0.0;
    int level = 0;
};
LevelChoice default_level(std::size_t n);

enum class TruncationRule { SampleSize, LogPower, Fixed };

struct WaveletConfig {
    std::optional<int> level;  ///< default: default_level(n)
    TruncationRule truncation = TruncationRule::SampleSize;
    double log_power = 2.0;    ///< r for L_n = ceil((log n)^r)
    std::size_t fixed_truncation = 0;
    NoiseKind noise = NoiseKind::LogChiSquare;
    std::size_t grid_points = 512;
    MeyerSpec meyer;
};

std::size_t truncation_for(std::size_t n, const WaveletConfig& config);

/// a^_{m,l} = (1/n) sum_i 2^{m/2} U_m(2^m Y_i - l) for l = -L..L.
std::vector<double> wavelet_coefficients(std::span<const double> y, int m, std::size_t L, const UmTable& table);
std::vector<double> wavelet_coefficients(std::span<const double> y, int m, std::size_t L,
                                         NoiseKind noise = NoiseKind::LogChiSquare, const MeyerSpec& spec = {});

struct WaveletEstimate {
    int level = 0;
    double level_target = 0.0;
    std::size_t truncation = 0;
    std::vector<double> coefficients;  ///< index l + L
    EstimateReport report;

    double coefficient(long l) const;
};

/// g^_n(x) = sum_{|l| <= L} a^_{m,l} phi_{m,l}(x) on `grid` (default: grid_points
/// points on [min Y - 3, max Y + 3]).
WaveletEstimate wavelet_estimate(std::span<const double> y, const WaveletConfig& config, std::span<const double> grid = {});

/// sum_{|l| <= L} c_l phi_{m,l}(x) at each grid point.
std::vector<double> render_scaling_expansion(std::span<const double> coefficients, int m, std::span<const double> grid,
                                             const MeyerSpec& spec = {});

/// Exact a_{m,l} = int phi_{m,l} g for l = -L..L from the characteristic
/// function of g (Fourier-domain, one FFT).
std::vector<double> projection_coefficients(const std::function<std::complex<double>(double)>& charfn_g, int m,
                                            std::size_t L);

struct SobolevNorm {
    double value = 0.0;          ///< (int |g~|^2 (w^2 + 1)^alpha dw)^{1/2}, no 1/2pi factor
    double edge_fraction = 0.0;  ///< edge integrand * t_max / integral
    std::optional<std::string> warning;
};

/// Trapezoid quadrature of the Sobolev integral over the table. With this
/// convention ||g||_0^2 = 2pi int g^2 (sqrt(pi) for N(0,1)).
SobolevNorm sobolev_norm(const CharFnTable& table, double alpha);

}  // namespace voldens
