#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "voldens/kernel_deconv.hpp"
#include "voldens/svsim.hpp"

namespace voldens {

/// Discrete-time log-volatility xi_{t+1} = m(xi_t) + eta_t observed as
/// Y_t = xi_t + log Z_t^2.
struct ArScenario {
    ArParams params;
    std::size_t n = 20000;
    std::uint64_t seed = 1;
};

struct ArSample {
    std::vector<double> y;
    std::vector<double> xi;  ///< ground truth
};

/// Rejects unstable m (max |m(x)/x| >= 1 at |x| in {1e2, 1e3, 1e4}).
ArSample simulate_nonlinear_ar(const ArScenario& scenario);

struct RegressionOptions {
    double h = 0.35;
    double denominator_floor = 1e-4;
    /// Subtract E log Z^2 from the response: the plain quotient targets m(x) + E log Z^2.
    bool center_response = true;
    NoiseKind noise = NoiseKind::LogChiSquare;
    std::size_t grid_points = 512;
    KernelTableOptions table;
};

struct RegressionEstimate {
    std::vector<double> x;
    std::vector<double> m_hat;        ///< NaN where masked
    std::vector<double> numerator;    ///< (1/nh) sum v_h((x - Y_j)/h) (Y_{j+1} - shift)
    std::vector<double> denominator;  ///< f_nh over Y_1..Y_{n-1}
    std::vector<std::uint8_t> masked; ///< |denominator| < floor
    double response_shift = 0.0;
    double h = 0.0;

    std::size_t unmasked() const;
};

RegressionEstimate regression_estimate(std::span<const double> y, const RegressionOptions& options,
                                       std::span<const double> grid = {});
RegressionEstimate regression_estimate(std::span<const double> y, const DeconvKernel& kernel,
                                       const RegressionOptions& options, std::span<const double> grid);

/// p_nh(x) = (1/nh) sum_j v_h((x - Y_j)/h) (Y_{j+1} - shift - m(x)); with it
/// m_nh(x) - m(x) = p_nh(x) / f_nh(x).
std::vector<double> regression_residual_numerator(std::span<const double> y, const DeconvKernel& kernel,
                                                  const RegressionFunction& m, double response_shift,
                                                  std::span<const double> grid);

/// h = gamma / log n. Throws ParameterError for n < 3 or gamma <= 0.
double default_regression_bandwidth(std::size_t n, double gamma);
/// Warning text when gamma <= pi.
std::optional<std::string> regression_bandwidth_warning(double gamma);

}  // namespace voldens
