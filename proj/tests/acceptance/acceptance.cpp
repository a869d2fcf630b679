// Acceptance run: one PASS/FAIL line per criterion. `--only N` runs a single criterion.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iterator>
#include <limits>
#include <map>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "voldens/density_grid.hpp"
#include "voldens/kernel_deconv.hpp"
#include "voldens/metrics.hpp"
#include "voldens/noise_model.hpp"
#include "voldens/ppe.hpp"
#include "voldens/quadrature.hpp"
#include "voldens/random.hpp"
#include "voldens/svsim.hpp"
#include "voldens/volreg.hpp"
#include "voldens/wavelet_deconv.hpp"
#ifdef VOLDENS_HAVE_CLI
#include "voldens/pipeline.hpp"
#endif

using namespace voldens;

namespace {

constexpr double kPi = std::numbers::pi;

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::string fmt(const char* f, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

// Standard normal quartile.
constexpr double kQuartile = 0.6744897501960817;

Outcome noise_identity() {
    double worst = 0.0;
    for (int i = 0; i <= 1000; ++i) {
        const double t = 0.01 * i;
        worst = std::max(worst, std::abs(std::norm(noise_charfn(t)) - 1.0 / std::cosh(kPi * t)));
    }
    const double asym = std::sqrt(2.0) * std::exp(-10.0 * kPi);
    const double rel = std::abs(std::abs(noise_charfn(20.0)) / asym - 1.0);
    return {worst < 1e-10 && rel < 0.01, fmt("sup ||phi_k|^2 - sech(pi t)| = %.3e (< 1e-10); |phi_k(20)| rel dev = %.3e (< 0.01)", worst, rel)};
}

Outcome kernel_constants() {
    const double R = 600.0 * kPi;
    const int panels = 1200;
    const double mass = quadrature::integrate_panels([](double x) { return wand_kernel(x); }, -R, R, panels, 1e-13, 1e-13);
    const double second = quadrature::integrate_panels([](double x) { return x * x * wand_kernel(x); }, -R, R, panels, 1e-13, 1e-12);
    // -phi_w''(0) by central differences of (1 - t^2)^3.
    const double d = 1e-4;
    const double curvature = -(wand_charfn(d) - 2.0 * wand_charfn(0.0) + wand_charfn(-d)) / (d * d);
    const double s = 1e-3;
    const double edge = wand_charfn(1.0 - s) / (s * s * s);
    const bool ok = std::abs(mass - 1.0) < 1e-8 && std::abs(second - 6.0) < 1e-6 && std::abs(second - curvature) < 1e-6 &&
                    std::abs(edge / 8.0 - 1.0) < 0.01;
    return {ok, fmt("int w = %.12f; int u^2 w = %.9f, -phi_w''(0) = %.9f; phi_w(1-s)/s^3 = %.6f at s = 1e-3", mass, second,
                    curvature, edge)};
}

Outcome bias_expansion() {
    const auto f = NormalMixture::normal(0.0, 1.0);
    const double h = 0.75;
    const std::size_t n = 2000, reps = 200;
    const std::vector<double> at{0.0};
    std::vector<double> err;
    double range = 0.0;
    std::vector<std::vector<double>> samples;
    for (std::size_t r = 0; r < reps; ++r) {
        samples.push_back(simulate_pure_convolution(f, n, replication_seed(3, r)));
        range = std::max(range, kernel_argument_range(samples.back(), at, h));
    }
    const DeconvKernel k(h, range * 1.05 + 1.0);
    for (const auto& y : samples) err.push_back(kernel_sums(k, y, at)[0] - f.pdf(0.0));
    const auto s = summarize(err);
    const double target = -3.0 * h * h / std::sqrt(2.0 * kPi);
    // Exact smoothed bias f * w_h(0) - f(0): the integral of w against N(0, h^{-2}).
    const double smoothed =
        quadrature::integrate_panels([&](double u) { return wand_kernel(u) * f.pdf(h * u); }, -200.0, 200.0, 400, 1e-12, 1e-14) -
        f.pdf(0.0);
    const double rel = std::abs(s.mean / target - 1.0);
    return {rel < 0.25, fmt("MC bias = %.4f (SE %.4f), 3h^2 f''(0) = %.4f, rel dev %.3f (< 0.25); exact smoothed bias %.4f", s.mean,
                            s.standard_error, target, rel, smoothed)};
}

Outcome invariant_density_oracle() {
    const auto grid = linspace(-5.0, 5.0, 1001);
    const auto ou = invariant_density([](double x) { return -0.5 * x; }, [](double) { return 1.0; }, 0.0, grid);
    const auto normal = NormalMixture::normal(0.0, 1.0);
    double ou_err = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) ou_err = std::max(ou_err, std::abs(ou.value[i] - normal.pdf(grid[i])));

    // kappa = 2, theta = 1, c = 1: Gamma(shape 2 kappa theta / c^2 = 4, rate 2 kappa / c^2 = 4).
    const auto pos = linspace(0.005, 6.0, 1200);
    const auto cir = invariant_density([](double x) { return 2.0 * (1.0 - x); }, [](double x) { return std::sqrt(x); }, 1.0, pos);
    double cir_err = 0.0;
    for (std::size_t i = 0; i < pos.size(); ++i) {
        const double x = pos[i];
        const double g = std::exp(4.0 * std::log(4.0) + 3.0 * std::log(x) - 4.0 * x - std::lgamma(4.0));
        cir_err = std::max(cir_err, std::abs(cir.value[i] - g));
    }
    return {ou_err < 1e-6 && cir_err < 1e-5, fmt("OU sup error %.3e (< 1e-6); CIR vs Gamma(4,4) sup error %.3e (< 1e-5)", ou_err, cir_err)};
}

Outcome bimodality() {
    auto spec = experiment_preset("regime-switch");
    spec.metrics = {Metric::ModeCount};
    spec.replications = 20;
    spec.seed_base = 5;
    const auto report = run_experiment(spec);
    int hits = 0;
    std::string counts;
    for (const auto& row : report.rows) {
        hits += row[0] == 2.0;
        counts += fmt("%d", static_cast<int>(row[0]));
    }
    return {hits >= 18, fmt("mode_count = 2 in %d/20 replications (need >= 18); counts %s", hits, counts.c_str())};
}

Outcome wavelet_unbiased() {
    const auto f = NormalMixture::normal(0.0, 1.0);
    const auto charfn = [](double t) { return std::complex<double>(std::exp(-0.5 * t * t)); };
    const std::size_t reps = 500, n = 1000, L = 3;
    bool ok = true;
    double worst = 0.0;
    for (int m : {0, 1}) {
        const auto truth = projection_coefficients(charfn, m, L);
        std::vector<std::vector<double>> est(2 * L + 1);
        for (std::size_t r = 0; r < reps; ++r) {
            const auto y = simulate_pure_convolution(f, n, replication_seed(6, r));
            const auto a = wavelet_coefficients(y, m, L);
            for (std::size_t i = 0; i < a.size(); ++i) est[i].push_back(a[i]);
        }
        for (std::size_t i = 0; i < est.size(); ++i) {
            const auto s = summarize(est[i]);
            const double z = std::abs(s.mean - truth[i]) / s.standard_error;
            worst = std::max(worst, z);
            ok = ok && z < 3.0;
        }
    }
    return {ok, fmt("max |mean - a_{m,l}| / SE over m in {0,1}, |l| <= 3: %.2f (< 3)", worst)};
}

// ||g^ - g||^2 through Parseval on the level-m scaling coefficients.
double wavelet_ise(std::span<const double> est, std::span<const double> truth, double g_l2) {
    double cross = 0.0, sq = 0.0;
    for (std::size_t i = 0; i < est.size(); ++i) {
        cross += est[i] * truth[i];
        sq += est[i] * est[i];
    }
    return g_l2 - 2.0 * cross + sq;
}

Outcome wavelet_mise_direction() {
    const auto f = NormalMixture::normal(0.0, 1.0);
    const auto charfn = [](double t) { return std::complex<double>(std::exp(-0.5 * t * t)); };
    std::map<std::size_t, double> median;
    std::string levels;
    for (std::size_t n : {std::size_t{100}, std::size_t{10000}}) {
        WaveletConfig cfg;
        const int m = default_level(n).level;
        const std::size_t L = truncation_for(n, cfg);
        const auto truth = projection_coefficients(charfn, m, L);
        std::vector<double> ise;
        for (std::size_t r = 0; r < 20; ++r) {
            const auto y = simulate_pure_convolution(f, n, replication_seed(7, r));
            ise.push_back(wavelet_ise(wavelet_coefficients(y, m, L), truth, f.l2_norm_squared()));
        }
        median[n] = summarize(ise).median;
        levels += fmt(" n=%zu: m=%d L=%zu median ISE %.4e;", n, m, L, median[n]);
    }
    const double ratio = median[10000] / median[100];
    return {ratio <= 0.7, fmt("%s ratio %.4f (<= 0.7)", levels.c_str(), ratio)};
}

Outcome ppe_contrast_identity() {
    const auto f = NormalMixture::normal(0.0, 1.0);
    const double a20 = sinc_projection_coefficients(f, 2, 0)[0];
    // gamma_n(h) = ||h||^2 - (2/n) sum u_h(Y_i) with ||psi_{2,0}|| = 1.
    std::vector<double> gamma;
    for (std::size_t r = 0; r < 500; ++r) {
        const auto y = simulate_pure_convolution(f, 1000, replication_seed(8, r));
        gamma.push_back(1.0 - 2.0 * ppe_coefficients(y, 2, 0)[0]);
    }
    const auto s = summarize(gamma);
    // ||h - g||^2 - ||g||^2 = 1 - 2 <h, g>.
    const double target = 1.0 - 2.0 * a20;
    const double z = std::abs(s.mean - target) / s.standard_error;
    double worst = 0.0;
    for (int L = 1; L <= 5; ++L) {
        const double b = kPi * L;
        const double q = quadrature::integrate([](double t) { return 1.0 / std::norm(noise_charfn(t)); }, -b, b, 1e-13);
        worst = std::max(worst, std::abs(phi_k_integral(L) / q - 1.0));
    }
    return {z < 3.0 && worst < 1e-8, fmt("E gamma_n = %.4f (SE %.4f) vs %.6f, %.2f SE (< 3); Phi_k rel error %.2e (< 1e-8)", s.mean,
                                         s.standard_error, target, z, worst)};
}

Outcome ppe_selection() {
    const std::size_t n = 10000;
    ExperimentSpec spec;
    spec.scenario = "ou-exp";
    auto sc = scenario_preset("ou-exp");
    sc.n = n;
    sc.delta = 1.0 / std::sqrt(static_cast<double>(n));
    spec.scenario_config = sc;
    const auto truth = NormalMixture::normal(0.0, 1.0);
    PpeConfig cfg;
    cfg.kappa = 1.0;
    const auto max_level = static_cast<int>(std::floor(std::log(static_cast<double>(n))));
    int hits = 0;
    bool in_range = true;
    std::string picks;
    std::map<int, std::vector<double>> truth_coefs;
    for (std::size_t r = 0; r < 20; ++r) {
        const auto y = experiment_sample(spec, replication_seed(9, r));
        const auto est = select_and_estimate(y, cfg, linspace(-5.0, 5.0, 11));
        double best = std::numeric_limits<double>::infinity(), chosen = 0.0;
        for (std::size_t i = 0; i < est.levels.size(); ++i) {
            const auto& lv = est.levels[i];
            auto& a = truth_coefs[lv.L];
            if (a.empty()) a = sinc_projection_coefficients(truth, lv.L, est.truncation);
            const double ise = sinc_projection_ise(lv.coefficients, a, truth.l2_norm_squared());
            best = std::min(best, ise);
            if (i == est.selected) chosen = ise;
        }
        const int L = est.chosen().L;
        in_range = in_range && L >= 1 && L <= max_level;
        hits += chosen <= 1.5 * best;
        picks += fmt("%d", L);
    }
    return {hits >= 16 && in_range,
            fmt("ISE(L^) <= 1.5 min_L ISE(L) in %d/20 seeds (need >= 16); L^ per seed %s, all in 1..%d: %s", hits, picks.c_str(),
                max_level, in_range ? "yes" : "no")};
}

Outcome regression_direction() {
    const RegressionFunction m{RegressionFunction::Kind::Linear, 0.5, 0.0, 1.0};
    // Central range: the interquartile range of the stationary law N(0, 1 / (1 - 0.25)).
    const double q = kQuartile / std::sqrt(0.75);
    const auto grid = linspace(-q, q, 41);
    const auto max_error = [&](const ArSample& s) {
        RegressionOptions opt;
        opt.h = default_regression_bandwidth(s.y.size(), 3.5);
        const auto est = regression_estimate(s.y, opt, grid);
        double worst = 0.0;
        for (std::size_t i = 0; i < grid.size(); ++i) {
            worst = std::max(worst, est.masked[i] ? std::numeric_limits<double>::infinity() : std::abs(est.m_hat[i] - m(grid[i])));
        }
        return worst;
    };
    int hits = 0;
    double identity = 0.0;
    for (std::size_t r = 0; r < 20; ++r) {
        ArScenario sc;
        sc.params.m = m;
        sc.seed = replication_seed(10, r);
        sc.n = 2000;
        const auto small = simulate_nonlinear_ar(sc);
        sc.n = 20000;
        const auto large = simulate_nonlinear_ar(sc);
        hits += max_error(large) < max_error(small);
        if (r == 0) {
            RegressionOptions opt;
            opt.h = default_regression_bandwidth(small.y.size(), 3.5);
            const DeconvKernel k(opt.h, kernel_argument_range(small.y, grid, opt.h) * 1.05 + 1.0);
            const auto est = regression_estimate(small.y, k, opt, grid);
            const auto p = regression_residual_numerator(small.y, k, m, est.response_shift, grid);
            for (std::size_t i = 0; i < grid.size(); ++i) {
                if (est.masked[i]) continue;
                const double lhs = est.m_hat[i] - m(grid[i]);
                identity = std::max(identity, std::abs(lhs - p[i] / est.denominator[i]) / std::max(1.0, std::abs(lhs)));
            }
        }
    }
    return {hits >= 16 && identity <= 1e-12,
            fmt("max error smaller at n = 2e4 than at 2e3 in %d/20 seeds (need >= 16); decomposition residual %.2e (<= 1e-12)", hits,
                identity)};
}

Outcome pipeline_reproducibility() {
#ifdef VOLDENS_HAVE_CLI
    namespace fs = std::filesystem;
    const auto slurp = [](const fs::path& p) {
        std::ifstream in(p, std::ios::binary);
        return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
    };
    const auto dir = fs::temp_directory_path() / "voldens_acceptance_pipeline";
    fs::remove_all(dir);
    bool identical = true;
    std::size_t files = 0;
    for (const char* estimator : {"kernel", "wavelet", "ppe"}) {
        cli::PipelineConfig c;
        c.scenario = "ou-exp";
        c.estimator = estimator;
        c.grid_points = 256;
        c.out_dir = dir / estimator;
        const auto first = cli::run_pipeline(c);
        std::vector<std::string> bytes;
        for (const auto& f : first.files) bytes.push_back(slurp(f));
        const auto second = cli::run_pipeline(c);
        identical = identical && first.files == second.files;
        for (std::size_t i = 0; i < second.files.size() && identical; ++i) identical = bytes[i] == slurp(second.files[i]);
        files += first.files.size();
    }
    auto sc = scenario_preset("aex-like");
    const auto series = cli::demean(simulate_price(simulate_volatility(sc), sc));
    const auto x = series.normalized_increments();
    double mean = 0.0;
    for (double v : x) mean += v;
    mean /= static_cast<double>(x.size());
    fs::remove_all(dir);
    return {identical && std::abs(mean) < 1e-12,
            fmt("%zu output files byte-identical across reruns: %s; demeaned mean return %.2e (< 1e-12)", files,
                identical ? "yes" : "no", std::abs(mean))};
#else
    return {false, "built without the command-line pipeline"};
#endif
}

struct Criterion {
    int id;
    const char* name;
    std::function<Outcome()> run;
};

}  // namespace

int main(int argc, char** argv) {
    const std::vector<Criterion> criteria = {
        {1, "noise identity", noise_identity},
        {2, "kernel constants", kernel_constants},
        {3, "bias expansion", bias_expansion},
        {4, "invariant density oracle", invariant_density_oracle},
        {5, "bimodality detection", bimodality},
        {6, "wavelet coefficients unbiased", wavelet_unbiased},
        {7, "wavelet MISE direction", wavelet_mise_direction},
        {8, "PPE contrast identity", ppe_contrast_identity},
        {9, "PPE adaptive selection", ppe_selection},
        {10, "regression direction", regression_direction},
        {11, "pipeline reproducibility", pipeline_reproducibility},
    };
    int only = 0;
    for (int i = 1; i < argc; ++i) {
        if (std::strcmp(argv[i], "--only") == 0 && i + 1 < argc) {
            only = std::atoi(argv[++i]);
        } else {
            std::fprintf(stderr, "usage: %s [--only N]\n", argv[0]);
            return 2;
        }
    }
    int failed = 0;
    for (const auto& c : criteria) {
        if (only != 0 && c.id != only) continue;
        const auto start = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        std::printf("criterion %2d %s %s: %s [%.1fs]\n", c.id, o.pass ? "PASS" : "FAIL", c.name, o.detail.c_str(), secs);
        std::fflush(stdout);
        failed += !o.pass;
    }
    return failed == 0 ? 0 : 1;
}
