#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <sstream>

#include "voldens/csv.hpp"
#include "voldens/error.hpp"
#include "voldens/metrics.hpp"

using namespace voldens;

TEST(Metrics, Mise) {
    const auto grid = linspace(-10.0, 10.0, 4001);
    const auto a = NormalMixture::normal(0.0, 1.0).on(grid);
    EXPECT_EQ(mise(a, a), 0.0);
    const auto b = NormalMixture::normal(0.1, 1.0).on(grid);
    EXPECT_NEAR(mise(a, b), 0.0014087123347466929212, 1e-12);
    EXPECT_NEAR(mise(a, b), 2 * (1 - std::exp(-0.01 / 4)) / (2 * std::sqrt(std::numbers::pi)), 1e-12);
    EXPECT_EQ(mise(a, b), mise(b, a));
    const DensityGrid one(linspace(0.0, 1.0, 11), std::vector<double>(11, 1.0));
    const DensityGrid zero(linspace(0.0, 1.0, 11), std::vector<double>(11, 0.0));
    EXPECT_NEAR(mise(one, zero), 1.0, 1e-15);
    EXPECT_THROW(mise(one, NormalMixture::normal(0, 1).on(linspace(0.0, 1.0, 12))), GridMismatchError);
}

TEST(Metrics, ModeCount) {
    const auto grid = linspace(-6.0, 6.0, 601);
    EXPECT_EQ(mode_count(NormalMixture::normal(0.0, 1.0).on(grid)), 1);
    EXPECT_EQ(mode_count(NormalMixture{{0.5, 0.5}, {-2.0, 2.0}, {0.5, 0.5}}.on(grid)), 2);
    std::vector<double> rising;
    for (double x : grid) rising.push_back(x + 7.0);
    EXPECT_EQ(mode_count(DensityGrid(grid, rising)), 0);
    // A tiny ripple on a unimodal density falls under the prominence floor.
    auto ripple = NormalMixture::normal(0.0, 1.0).on(grid);
    for (std::size_t i = 0; i < grid.size(); ++i) ripple.value[i] += 0.002 * std::sin(8.0 * grid[i]);
    EXPECT_EQ(mode_count(ripple, 0.02), 1);
    EXPECT_GT(mode_count(ripple, 0.0), 1);
    EXPECT_THROW(mode_count(DensityGrid({0.0, 1.0}, {1.0, 1.0})), GridMismatchError);
}

TEST(Metrics, NormalFit) {
    const auto grid = linspace(-12.0, 12.0, 2401);
    const auto fit = normal_fit(NormalMixture::normal(0.0, 1.0).on(grid));
    EXPECT_NEAR(fit.mean, 0.0, 1e-4);
    EXPECT_NEAR(fit.variance, 1.0, 1e-4);
    const auto shifted = normal_fit(NormalMixture::normal(1.5, 1.0).on(grid));
    EXPECT_NEAR(shifted.mean - fit.mean, 1.5, 1e-6);
    const NormalMixture mix{{0.5, 0.5}, {-2.0, 2.0}, {0.5, 0.5}};
    const auto mf = normal_fit(mix.on(grid));
    EXPECT_NEAR(mf.variance, 0.25 + 4.0, 1e-4);
    EXPECT_GT(mf.variance, 0.25);
    EXPECT_EQ(mf.fitted.size(), grid.size());
    EXPECT_THROW(normal_fit(DensityGrid(grid, std::vector<double>(grid.size(), -1.0))), DataError);
}

TEST(Metrics, Summary) {
    const auto s = summarize({1.0, 2.0, 3.0, 10.0});
    EXPECT_DOUBLE_EQ(s.mean, 4.0);
    EXPECT_DOUBLE_EQ(s.median, 2.5);
    EXPECT_NEAR(s.standard_error, std::sqrt(((9.0 + 4.0 + 1.0 + 36.0) / 3.0) / 4.0), 1e-15);
}

TEST(Metrics, PureConvolutionSample) {
    const auto y = simulate_pure_convolution(NormalMixture::normal(1.0, 2.0), 200000, 17);
    double m = 0.0, v = 0.0;
    for (double x : y) m += x;
    m /= y.size();
    for (double x : y) v += (x - m) * (x - m);
    v /= y.size() - 1;
    EXPECT_NEAR(m, 1.0 + kNoiseMean, 0.02);
    EXPECT_NEAR(v, 4.0 + kNoiseVariance, 0.1);
}

TEST(Experiment, DeterministicAndTagged) {
    auto spec = experiment_preset("pure-convolution");
    spec.n = 300;
    spec.replications = 3;
    spec.grid_points = 81;
    const auto a = run_experiment(spec);
    const auto b = run_experiment(spec);
    EXPECT_EQ(a.rows, b.rows);
    ASSERT_EQ(a.rows.size(), 3u);
    EXPECT_EQ(a.seeds, b.seeds);
    EXPECT_EQ(a.seeds[1], replication_seed(spec.seed_base, 1));
    std::ostringstream csv_out, txt;
    a.write_csv(csv_out);
    a.write_summary(txt);
    std::istringstream in(csv_out.str());
    const auto t = csv::read(in);
    EXPECT_EQ(t.rows.size(), 3u);
    EXPECT_EQ(t.header.front(), "seed");
    EXPECT_EQ(t.rows[2][0], std::to_string(replication_seed(spec.seed_base, 2)));
    EXPECT_NE(txt.str().find("ise"), std::string::npos);
    spec.estimator = "spline";
    EXPECT_THROW(run_experiment(spec), ConfigError);
    EXPECT_THROW(experiment_preset("garch"), ConfigError);
}

TEST(Experiment, ScenarioPresetsRun) {
    for (const char* name : {"ou-exp", "regime-switch"}) {
        auto spec = experiment_preset(name);
        spec.n = 200;
        spec.replications = 2;
        spec.grid_points = 41;
        const auto r = run_experiment(spec);
        EXPECT_EQ(r.rows.size(), 2u) << name;
        for (const auto& [metric, s] : r.aggregate) EXPECT_TRUE(std::isfinite(s.mean)) << name << ' ' << metric;
    }
}
