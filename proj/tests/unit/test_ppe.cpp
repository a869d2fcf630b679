#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "voldens/error.hpp"
#include "voldens/metrics.hpp"
#include "voldens/ppe.hpp"
#include "voldens/quadrature.hpp"

using namespace voldens;

namespace {

constexpr double kPi = std::numbers::pi;

}  // namespace

TEST(Ppe, SincBasis) {
    EXPECT_DOUBLE_EQ(sinc_basis(2, 3, 1.5), std::sqrt(2.0));
    for (long j : {-4L, 0L, 1L, 7L}) EXPECT_EQ(sinc_basis(2, j, 1.5), 0.0) << j;
    // Orthonormality by Parseval: <psi_{L,j}, psi_{L,k}> = (1/2pi L) int_{-pi L}^{pi L} e^{is(k-j)/L} ds.
    const auto grid = linspace(-400.0, 400.0, 320001);
    for (long k : {0L, 1L}) {
        std::vector<double> prod;
        for (double x : grid) prod.push_back(sinc_basis(1, 0, x) * sinc_basis(1, k, x));
        EXPECT_NEAR(trapezoid(grid, prod), k == 0 ? 1.0 : 0.0, 2e-3) << k;
    }
    EXPECT_THROW(sinc_basis(0, 0, 0.0), ParameterError);
}

TEST(Ppe, UBasisReference) {
    EXPECT_NEAR(u_basis(0.3, 1, 0), 9.5506960845839256864, 1e-9);
    EXPECT_NEAR(u_basis(-1.0, 1, 2), -1.1873026822539921234, 1e-9);
    EXPECT_NEAR(u_basis(0.25, 2, 1) / -743.05394342032311599, 1.0, 1e-10);
    // Shift identity u_{L,j}(y) = u_{L,0}(y - j/L).
    EXPECT_NEAR(u_basis(0.7, 3, 5), u_basis(0.7 - 5.0 / 3.0, 3, 0), 1e-7);
    // Without noise u_{L,j} is the basis function itself.
    EXPECT_NEAR(u_basis(0.37, 2, 1, NoiseKind::None), sinc_basis(2, 1, 0.37), 1e-11);
}

TEST(Ppe, EdgeDerivatives) {
    // Compare with finite differences of 1/phi_k at pi L.
    const auto d = edge_derivatives(1, 4);
    const double b = kPi;
    const double h = 1e-3;
    const auto G = [](double s) { return inverse_noise_charfn(s); };
    EXPECT_LT(std::abs(d[0] - G(b)) / std::abs(G(b)), 1e-12);
    const auto fd1 = (G(b + h) - G(b - h)) / (2 * h);
    EXPECT_LT(std::abs(d[1] - fd1) / std::abs(d[1]), 1e-5);
    const auto fd2 = (G(b + h) - 2.0 * G(b) + G(b - h)) / (h * h);
    EXPECT_LT(std::abs(d[2] - fd2) / std::abs(d[2]), 1e-4);
}

TEST(Ppe, TableAgainstDirect) {
    for (int L : {1, 2}) {
        const UBasisTable t(L, 64.0);
        const double scale = std::abs(inverse_noise_charfn(kPi * L));
        for (double z : {0.0, 0.3, -2.71, 17.4, -55.0}) {
            EXPECT_NEAR(t(z), u_basis(z, L, 0), 1e-9 * scale) << L << ' ' << z;
        }
        for (double z : {80.0, -123.4}) EXPECT_NEAR(t.asymptotic(z), u_basis(z, L, 0), 1e-9 * scale) << L << ' ' << z;
    }
}

TEST(Ppe, FarCoefficientsMatchTable) {
    // Far j go through the moment expansion; compare with direct table sums.
    const std::vector<double> y = {-3.1, -0.4, 0.0, 1.2, 2.5, -7.9, 0.8};
    for (int L : {1, 3}) {
        const std::size_t K = static_cast<std::size_t>(120 * L);
        const auto a = ppe_coefficients(y, L, K);
        const UBasisTable t(L, 256.0);
        const double scale = std::abs(inverse_noise_charfn(kPi * L));
        for (long j : {-static_cast<long>(K), -70L * L, 70L * L, 100L * L, static_cast<long>(K)}) {
            double acc = 0.0;
            for (double v : y) acc += t(v - static_cast<double>(j) / L);
            EXPECT_NEAR(a[static_cast<std::size_t>(j + static_cast<long>(K))], acc / y.size(), 1e-9 * scale) << L << ' ' << j;
        }
    }
}

TEST(Ppe, PhiIntegralClosedForm) {
    const double frozen[] = {6154.1043523099651148, 118981540.39706804695, 0, 0, 8.5985214126507643775e+20};
    for (int L = 1; L <= 5; ++L) {
        const double b = kPi * L;
        const double q = quadrature::integrate([](double s) { return std::cosh(kPi * s); }, -b, b, 1e-14);
        EXPECT_NEAR(phi_k_integral(L) / q, 1.0, 1e-8) << L;
        const double q2 = quadrature::integrate([](double s) { return 1.0 / std::norm(noise_charfn(s)); }, -b, b, 1e-13);
        EXPECT_NEAR(phi_k_integral(L) / q2, 1.0, 1e-8) << L;
        if (frozen[L - 1] > 0) EXPECT_NEAR(phi_k_integral(L) / frozen[L - 1], 1.0, 1e-13) << L;
    }
    EXPECT_NEAR(penalty(1, 10000, 2.0), 2.0 * 2.0 * 6154.1043523099651148 / 10000, 1e-9);
    EXPECT_DOUBLE_EQ(phi_k_integral(3, NoiseKind::None), 6 * kPi);
    EXPECT_NO_THROW(phi_k_integral(71));
    EXPECT_THROW(phi_k_integral(72), OverflowError);
}

TEST(Ppe, ProjectionCoefficientsMatchQuadrature) {
    const NormalMixture f{{0.4, 0.6}, {-1.0, 1.5}, {0.5, 0.8}};
    const int L = 2;
    const std::size_t K = 100;
    const auto a = sinc_projection_coefficients(f, L, K);
    for (long j : {-100L, -60L, -3L, 0L, 2L, 45L, 99L}) {
        const double q = quadrature::integrate_panels([&](double x) { return sinc_basis(L, j, x) * f.pdf(x); }, -12.0, 12.0,
                                                      48, 1e-12, 1e-12);
        EXPECT_NEAR(a[static_cast<std::size_t>(j + 100)], q, 1e-10) << j;
    }
    // Band-limited reconstruction: the expansion reproduces f closely.
    const auto grid = linspace(-4.0, 4.0, 81);
    const auto rendered = render_sinc_expansion(a, L, grid);
    for (std::size_t i = 0; i < grid.size(); ++i) EXPECT_NEAR(rendered[i], f.pdf(grid[i]), 2e-3) << grid[i];
}

TEST(Ppe, CoefficientExpectationIdentity) {
    const auto g = NormalMixture::normal(0.0, 1.0);
    const auto grid = linspace(-45.0, 9.0, 10801);
    std::vector<double> py(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        py[i] = quadrature::integrate([&](double e) { return g.pdf(grid[i] - e) * noise_density(e); }, -50.0, 5.0, 1e-12, 1e-17);
    }
    const auto a = sinc_projection_coefficients(g, 1, 3);
    const UBasisTable t(1, 64.0);
    for (long j = -3; j <= 3; ++j) {
        std::vector<double> prod(grid.size());
        for (std::size_t i = 0; i < grid.size(); ++i) prod[i] = t(grid[i] - j) * py[i];
        EXPECT_NEAR(trapezoid(grid, prod), a[static_cast<std::size_t>(j + 3)], 1e-5) << j;
    }
}

TEST(Ppe, ProjectionIse) {
    const auto f = NormalMixture::normal(0.0, 1.0);
    const auto a = sinc_projection_coefficients(f, 1, 40);
    auto perturbed = a;
    perturbed[40] += 0.01;
    const double ise = sinc_projection_ise(perturbed, a, f.l2_norm_squared());
    // Projection error at L = 1: int_{|s| > pi} e^{-s^2} ds / 2pi, plus 1e-4.
    const double tail = std::erfc(kPi) / (2.0 * std::sqrt(kPi));
    EXPECT_NEAR(ise, 1e-4 + tail, 1e-9);
    EXPECT_THROW(sinc_projection_ise(a, std::span<const double>(a).first(3), 1.0), GridMismatchError);
}

TEST(Ppe, SelectionMechanics) {
    EXPECT_EQ(default_candidates(10000), (std::vector<int>{1, 2, 3, 4, 5, 6, 7, 8, 9}));
    const auto y = simulate_pure_convolution(NormalMixture::normal(0.0, 1.0), 500, 9);
    PpeConfig cfg;
    cfg.truncation = 30;
    cfg.candidates = {2, 1};
    const auto est = select_and_estimate(y, cfg, linspace(-5.0, 5.0, 51));
    EXPECT_EQ(est.chosen().L, 1);
    for (const auto& level : est.levels) {
        EXPECT_NEAR(level.criterion, level.contrast + level.penalty, 1e-12);
        EXPECT_DOUBLE_EQ(level.penalty, penalty(level.L, 500, 1.0));
    }
    EXPECT_EQ(est.report.diagnostic("selected_level"), 1.0);
    cfg.candidates = {1, 72};
    EXPECT_THROW(select_and_estimate(y, cfg), OverflowError);
    cfg.candidates = {80};
    EXPECT_THROW(select_and_estimate(y, cfg), ConfigError);
}

TEST(Ppe, ContrastWithoutPenalty) {
    // No noise, all Y at 0: a_{L,j} = sqrt(L) delta_{j0}, so the contrast -L favours the largest L.
    const std::vector<double> y = {0.0, 0.0, 0.0};
    PpeConfig cfg;
    cfg.noise = NoiseKind::None;
    cfg.candidates = {3, 2, 1};
    cfg.truncation = 1;
    cfg.kappa = 1e-300;
    const auto est = select_and_estimate(y, cfg, linspace(-1.0, 1.0, 5));
    EXPECT_EQ(est.chosen().L, 3);
    EXPECT_NEAR(est.chosen().contrast, -3.0, 1e-9);
}
