#pragma once

#include <complex>
#include <iosfwd>
#include <numbers>
#include <vector>

namespace voldens {

/// Noise law entering the deconvolution. `None` replaces phi_k by 1 and is
/// the no-noise reduction used in tests.
enum class NoiseKind { LogChiSquare, None };

/// E[log Z^2] for Z ~ N(0,1): -gamma_E - log 2.
inline constexpr double kNoiseMean = -std::numbers::egamma - std::numbers::ln2;
/// Var[log Z^2] = pi^2 / 2.
inline constexpr double kNoiseVariance = std::numbers::pi * std::numbers::pi / 2.0;

/// |t| beyond which noise_charfn returns 0 (|phi_k| < e^{-350} there).
inline constexpr double kCharFnCutoff = 700.0 / std::numbers::pi;

/// Density of log Z^2: k(x) = exp(x/2 - e^x/2) / sqrt(2 pi).
double noise_density(double x);

/// Characteristic function E exp(i t log Z^2) = pi^{-1/2} 2^{it} Gamma(1/2 + it).
std::complex<double> noise_charfn(double t);
std::complex<double> noise_charfn(double t, NoiseKind kind);

/// log phi_k(t) (no cutoff). Real part equals -0.5 log cosh(pi t).
std::complex<double> log_noise_charfn(double t);

/// 1 / phi_k(t), computed as exp(-log phi_k) so it stays finite while
/// |phi_k| is below the double range. Throws OverflowError past |t| = 1400/pi.
std::complex<double> inverse_noise_charfn(double t, NoiseKind kind = NoiseKind::LogChiSquare);

/// log Gamma(z) by the Lanczos approximation (g = 7, 9 terms), with the
/// reflection formula for Re z < 1/2. For Re z >= 1/2 the result is the
/// analytic continuation of the real log Gamma; in the reflected half-plane
/// the imaginary part is only defined modulo 2 pi. Throws PoleError at
/// non-positive integers.
std::complex<double> complex_log_gamma(std::complex<double> z);

/// Characteristic-function samples on a symmetric frequency grid.
struct CharFnTable {
    std::vector<double> t;
    std::vector<std::complex<double>> value;

    /// Throws GridMismatchError unless t is symmetric and increasing, and
    /// NumericError unless value(0) = 1 and value(-t) = conj(value(t)).
    void validate(double tol = 1e-12) const;
};

/// phi_k on `points` (odd) equally spaced frequencies in [-t_max, t_max].
CharFnTable noise_charfn_table(double t_max, std::size_t points);

/// CSV with header t,re,im.
void write_csv(std::ostream& out, const CharFnTable& table);

}  // namespace voldens
