#include <gtest/gtest.h>

#include <cmath>

#include "voldens/error.hpp"
#include "voldens/volreg.hpp"

using namespace voldens;

namespace {

ArScenario linear_scenario(std::size_t n, std::uint64_t seed) {
    ArScenario s;
    s.params.m = {RegressionFunction::Kind::Linear, 0.5, 0.0, 1.0};
    s.n = n;
    s.seed = seed;
    return s;
}

}  // namespace

TEST(Volreg, SimulationLaw) {
    const auto s = simulate_nonlinear_ar(linear_scenario(100000, 3));
    double m = 0.0, v = 0.0, noise = 0.0;
    for (std::size_t t = 0; t < s.xi.size(); ++t) {
        m += s.xi[t];
        noise += s.y[t] - s.xi[t];
    }
    m /= s.xi.size();
    for (double x : s.xi) v += (x - m) * (x - m);
    v /= s.xi.size() - 1;
    EXPECT_NEAR(m, 0.0, 0.05);
    EXPECT_NEAR(v, 4.0 / 3.0, 0.05);
    EXPECT_NEAR(noise / s.xi.size(), kNoiseMean, 0.03);
    auto bad = linear_scenario(10, 1);
    bad.params.m.slope = 1.2;
    EXPECT_THROW(simulate_nonlinear_ar(bad), ParameterError);
}

TEST(Volreg, CorrelatedNoise) {
    auto sc = linear_scenario(50000, 5);
    sc.params.noise_correlation = 0.8;
    const auto s = simulate_nonlinear_ar(sc);
    // Z_t^2 = exp(Y_t - xi_t) and E[eta^2 Z^2] = 1 + 2 rho^2 for standard bivariate normals.
    double num = 0.0;
    for (std::size_t t = 0; t + 1 < s.xi.size(); ++t) {
        const double eta = s.xi[t + 1] - 0.5 * s.xi[t];
        num += eta * eta * std::exp(s.y[t] - s.xi[t]);
    }
    EXPECT_NEAR(num / (s.xi.size() - 1), 1.0 + 2 * 0.64, 0.1);
}

TEST(Volreg, DecompositionIdentity) {
    const auto s = simulate_nonlinear_ar(linear_scenario(3000, 7));
    RegressionOptions opt;
    opt.h = 0.45;
    const auto grid = linspace(-1.0, 1.0, 21);
    const DeconvKernel k(opt.h, kernel_argument_range(s.y, grid, opt.h) * 1.05 + 1.0);
    const auto est = regression_estimate(s.y, k, opt, grid);
    const RegressionFunction m{RegressionFunction::Kind::Linear, 0.5, 0.0, 1.0};
    const auto p = regression_residual_numerator(s.y, k, m, est.response_shift, grid);
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (est.masked[i]) continue;
        const double lhs = est.m_hat[i] - m(grid[i]);
        EXPECT_NEAR(lhs, p[i] / est.denominator[i], 1e-12 * std::max(1.0, std::abs(lhs))) << grid[i];
    }
}

TEST(Volreg, CenteringAndMasking) {
    const auto s = simulate_nonlinear_ar(linear_scenario(2000, 9));
    RegressionOptions opt;
    opt.h = 0.5;
    const auto grid = linspace(-1.0, 1.0, 11);
    const auto centred = regression_estimate(s.y, opt, grid);
    opt.center_response = false;
    const auto raw = regression_estimate(s.y, opt, grid);
    EXPECT_EQ(centred.response_shift, kNoiseMean);
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (centred.masked[i]) continue;
        EXPECT_NEAR(raw.m_hat[i] - centred.m_hat[i], kNoiseMean, 1e-9);
    }
    opt.denominator_floor = 1e9;
    EXPECT_THROW(regression_estimate(s.y, opt, grid), DataError);
    opt.denominator_floor = 0.5 * std::abs(centred.denominator[5]) + 0.5 * std::abs(centred.denominator[0]);
    const auto part = regression_estimate(s.y, opt, grid);
    for (std::size_t i = 0; i < grid.size(); ++i) EXPECT_EQ(std::isnan(part.m_hat[i]), part.masked[i] == 1);
}

TEST(Volreg, BandwidthRules) {
    EXPECT_NEAR(default_regression_bandwidth(20000, 3.5), 3.5 / std::log(20000.0), 1e-15);
    EXPECT_TRUE(regression_bandwidth_warning(3.0));
    EXPECT_FALSE(regression_bandwidth_warning(3.5));
}
