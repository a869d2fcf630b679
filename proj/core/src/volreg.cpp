#include "voldens/volreg.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "voldens/csv.hpp"
#include "voldens/error.hpp"

namespace voldens {

ArSample simulate_nonlinear_ar(const ArScenario& scenario) {
    scenario.params.validate();
    if (scenario.n < 2) throw ParameterError("n must be at least 2");
    const auto& p = scenario.params;
    RandomStream eta_rng(scenario.seed, Stream::ArInnovation);
    RandomStream z_rng(scenario.seed, Stream::LogChiNoise);
    const double rho = p.noise_correlation;
    const double rho_c = std::sqrt(1.0 - rho * rho);

    double xi = 0.0;
    for (std::size_t k = 0; k < p.burn_in; ++k) xi = p.m(xi) + p.innovation_sd * eta_rng.normal();
    ArSample out;
    out.y.resize(scenario.n);
    out.xi.resize(scenario.n);
    for (std::size_t t = 0; t < scenario.n; ++t) {
        // eta_t drives xi_{t+1}; Z_t may be correlated with it.
        const double eta = eta_rng.normal();
        const double z = rho * eta + rho_c * z_rng.normal();
        out.xi[t] = xi;
        out.y[t] = xi + std::log(std::max(z * z, kLogFloor));
        xi = p.m(xi) + p.innovation_sd * eta;
    }
    return out;
}

std::size_t RegressionEstimate::unmasked() const {
    std::size_t c = 0;
    for (auto m : masked) c += (m == 0);
    return c;
}

RegressionEstimate regression_estimate(std::span<const double> y, const DeconvKernel& kernel,
                                       const RegressionOptions& options, std::span<const double> grid) {
    if (y.size() < 2) throw DataError("regression needs at least two observations");
    if (!(options.denominator_floor >= 0.0)) throw ParameterError("denominator floor must be non-negative");
    RegressionEstimate est;
    est.h = kernel.h();
    est.response_shift = options.center_response ? kNoiseMean : 0.0;
    const auto lead = y.first(y.size() - 1);
    std::vector<double> response(y.begin() + 1, y.end());
    for (double& r : response) r -= est.response_shift;

    est.x.assign(grid.begin(), grid.end());
    est.denominator = kernel_sums(kernel, lead, est.x);
    est.numerator = kernel_sums(kernel, lead, est.x, response);
    est.m_hat.assign(est.x.size(), std::numeric_limits<double>::quiet_NaN());
    est.masked.assign(est.x.size(), 1);
    for (std::size_t i = 0; i < est.x.size(); ++i) {
        if (std::abs(est.denominator[i]) < options.denominator_floor) continue;
        est.masked[i] = 0;
        est.m_hat[i] = est.numerator[i] / est.denominator[i];
    }
    if (est.unmasked() == 0) throw DataError("every grid point has |f_nh| below the denominator floor");
    return est;
}

RegressionEstimate regression_estimate(std::span<const double> y, const RegressionOptions& options,
                                       std::span<const double> grid) {
    if (y.size() < 2) throw DataError("regression needs at least two observations");
    if (!(options.h > 0.0)) throw ParameterError("bandwidth h must be positive");
    const auto lead = y.first(y.size() - 1);
    std::vector<double> x = grid.empty() ? default_grid(lead, options.h, options.grid_points)
                                         : std::vector<double>(grid.begin(), grid.end());
    const DeconvKernel kernel(options.h, kernel_argument_range(lead, x, options.h) * 1.05 + 1.0, options.noise,
                              options.table);
    return regression_estimate(y, kernel, options, x);
}

std::vector<double> regression_residual_numerator(std::span<const double> y, const DeconvKernel& kernel,
                                                  const RegressionFunction& m, double response_shift,
                                                  std::span<const double> grid) {
    if (y.size() < 2) throw DataError("regression needs at least two observations");
    const auto lead = y.first(y.size() - 1);
    std::vector<double> out(grid.size());
    std::vector<double> response(y.size() - 1);
    for (std::size_t g = 0; g < grid.size(); ++g) {
        const double mx = m(grid[g]);
        for (std::size_t j = 0; j + 1 < y.size(); ++j) response[j] = y[j + 1] - response_shift - mx;
        const double at[1] = {grid[g]};
        out[g] = kernel_sums(kernel, lead, at, response)[0];
    }
    return out;
}

double default_regression_bandwidth(std::size_t n, double gamma) {
    if (n < 3) throw ParameterError("bandwidth rule needs n >= 3");
    if (!(gamma > 0.0)) throw ParameterError("gamma must be positive");
    return gamma / std::log(static_cast<double>(n));
}

std::optional<std::string> regression_bandwidth_warning(double gamma) {
    if (gamma > std::numbers::pi) return std::nullopt;
    return "gamma = " + csv::format(gamma) + " does not exceed pi; the regression rate needs h = gamma / log n with gamma > pi";
}

}  // namespace voldens
