#pragma once

#include <complex>
#include <cstddef>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "voldens/estimate_report.hpp"
#include "voldens/fourier_table.hpp"
#include "voldens/noise_model.hpp"
#include "voldens/svsim.hpp"

namespace voldens {

/// Largest level whose Phi_k(L) = (2/pi) sinh(pi^2 L) fits in a double.
inline constexpr int kMaxPpeLevel = 71;

/// psi_{L,j}(x) = sqrt(L) sinc(Lx - j), sinc(u) = sin(pi u)/(pi u); exact zeros
/// at the other integers.
double sinc_basis(int L, long j, double x);

/// u_{L,j}(y) = (1/2pi) int_{-pi L}^{pi L} e^{isy} psi~_{L,j}(s) / phi_k(s) ds with
/// psi~_{L,j}(s) = e^{-isj/L} / sqrt(L): adaptive quadrature, real part after a
/// residue check. E u_{L,j}(Y) = <psi_{L,j}, g>.
double u_basis(double y, int L, long j, NoiseKind noise = NoiseKind::LogChiSquare);

/// G^{(k)}(pi L), k = 0..count-1, for G = 1/phi_k, by a Cauchy integral.
std::vector<std::complex<double>> edge_derivatives(int L, int count, NoiseKind noise = NoiseKind::LogChiSquare);

struct UTableOptions {
    std::size_t spectrum_points = 8192;
    double points_per_unit = 256.0;  ///< table spacing is 1 / (points_per_unit * L)
};

/// u_{L,0} tabulated on |z| <= range (FFT trapezoid plus Euler-Maclaurin endpoint
/// corrections); beyond the table the integration-by-parts expansion is used
/// for |z| >= 40 and direct quadrature otherwise.
class UBasisTable {
public:
    static constexpr int kTerms = 15;
    static constexpr double kAsymptoticFrom = 40.0;

    UBasisTable(int L, double range, NoiseKind noise = NoiseKind::LogChiSquare, UTableOptions options = {});

    double operator()(double z) const;
    double asymptotic(double z) const;
    int level() const noexcept { return L_; }
    double range() const noexcept { return table_.half_range(); }
    NoiseKind noise() const noexcept { return noise_; }
    std::span<const std::complex<double>> derivatives() const noexcept { return d_; }

private:
    int L_;
    NoiseKind noise_;
    std::vector<std::complex<double>> d_;
    CubicTable table_;
};

std::shared_ptr<const UBasisTable> shared_u_table(int L, double range, NoiseKind noise = NoiseKind::LogChiSquare);

/// a^_{L,j} = (1/n) sum_i u_{L,j}(Y_i) for j = -K..K (index j + K).
std::vector<double> ppe_coefficients(std::span<const double> y, int L, std::size_t K,
                                     NoiseKind noise = NoiseKind::LogChiSquare);

/// gamma_n(f^_L) = -sum a^^2.
double contrast(std::span<const double> coefficients);

/// int_{-pi L}^{pi L} |phi_k(s)|^{-2} ds = (2/pi) sinh(pi^2 L) (2 pi L without noise).
/// Throws OverflowError beyond kMaxPpeLevel.
double phi_k_integral(double L, NoiseKind noise = NoiseKind::LogChiSquare);

/// kappa (1 + L) Phi_k(L) / n.
double penalty(double L, std::size_t n, double kappa, NoiseKind noise = NoiseKind::LogChiSquare);

struct PpeConfig {
    double kappa = 1.0;
    std::optional<std::size_t> truncation;  ///< K_n; default n
    std::vector<int> candidates;            ///< default 1..floor(log n)
    NoiseKind noise = NoiseKind::LogChiSquare;
    std::size_t grid_points = 512;
};

struct PpeLevel {
    int L = 0;
    double contrast = 0.0;
    double penalty = 0.0;
    double criterion = 0.0;
    std::vector<double> coefficients;
};

struct PpeEstimate {
    std::vector<PpeLevel> levels;
    std::size_t selected = 0;  ///< index into levels
    std::size_t truncation = 0;
    EstimateReport report;

    const PpeLevel& chosen() const { return levels.at(selected); }
};

std::vector<int> default_candidates(std::size_t n);

/// Minimises contrast + penalty over the candidate levels (ties: smallest L)
/// and renders f^_{L^} on `grid` (default: grid_points on [min Y - 3, max Y + 3]).
PpeEstimate select_and_estimate(std::span<const double> y, const PpeConfig& config, std::span<const double> grid = {});

/// sum_j c_j psi_{L,j}(x), coefficient index j + K.
std::vector<double> render_sinc_expansion(std::span<const double> coefficients, int L, std::span<const double> grid);

/// Exact a_{L,j} = <psi_{L,j}, f> for j = -K..K.
std::vector<double> sinc_projection_coefficients(const NormalMixture& f, int L, std::size_t K);

/// ||f^_L - f||^2 = sum (a^ - a)^2 + ||f||^2 - sum a^2 (coefficients over the same j range).
double sinc_projection_ise(std::span<const double> estimate, std::span<const double> truth, double truth_l2_squared);

}  // namespace voldens
