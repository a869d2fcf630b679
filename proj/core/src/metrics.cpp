#include "voldens/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <numbers>
#include <ostream>
#include <sstream>

#include "voldens/csv.hpp"
#include "voldens/error.hpp"
#include "voldens/random.hpp"

namespace voldens {

double mise(const DensityGrid& estimate, const DensityGrid& truth) {
    estimate.validate();
    truth.validate();
    if (estimate.x != truth.x) throw GridMismatchError("estimate and truth are on different grids");
    std::vector<double> sq(estimate.size());
    for (std::size_t i = 0; i < sq.size(); ++i) {
        const double d = estimate.value[i] - truth.value[i];
        sq[i] = d * d;
    }
    return trapezoid(estimate.x, sq);
}

int mode_count(const DensityGrid& grid, double prominence_floor) {
    if (grid.size() < 3) throw GridMismatchError("mode count needs at least three grid points");
    const auto g = clip_and_renormalize(grid);
    const auto& v = g.value;
    const std::size_t n = v.size();
    int modes = 0;
    std::size_t i = 1;
    while (i + 1 < n) {
        // Collapse plateaus: [i, k] equal values.
        std::size_t k = i;
        while (k + 1 < n && v[k + 1] == v[i]) ++k;
        if (k + 1 >= n) break;
        if (v[i - 1] < v[i] && v[k + 1] < v[i]) {
            double left_min = v[i];
            std::size_t l = i;
            while (l > 0 && v[l - 1] <= v[i]) left_min = std::min(left_min, v[--l]);
            double right_min = v[k];
            std::size_t r = k;
            while (r + 1 < n && v[r + 1] <= v[i]) right_min = std::min(right_min, v[++r]);
            const double prominence = v[i] - std::max(left_min, right_min);
            if (prominence > prominence_floor) ++modes;
        }
        i = k + 1;
    }
    return modes;
}

NormalFit normal_fit(const DensityGrid& grid) {
    const auto g = clip_and_renormalize(grid);
    std::vector<double> w(g.size());
    for (std::size_t i = 0; i < w.size(); ++i) w[i] = g.x[i] * g.value[i];
    NormalFit fit;
    fit.mean = trapezoid(g.x, w);
    for (std::size_t i = 0; i < w.size(); ++i) {
        const double d = g.x[i] - fit.mean;
        w[i] = d * d * g.value[i];
    }
    fit.variance = trapezoid(g.x, w);
    if (!(fit.variance > 0.0)) throw DataError("fitted variance is not positive");
    fit.fitted = NormalMixture::normal(fit.mean, std::sqrt(fit.variance)).on(g.x);
    return fit;
}

Summary summarize(std::vector<double> values) {
    Summary s;
    s.count = values.size();
    if (values.empty()) return s;
    double acc = 0.0;
    for (double v : values) acc += v;
    s.mean = acc / static_cast<double>(values.size());
    if (values.size() > 1) {
        double ss = 0.0;
        for (double v : values) ss += (v - s.mean) * (v - s.mean);
        s.standard_error = std::sqrt(ss / static_cast<double>(values.size() - 1) / static_cast<double>(values.size()));
    }
    std::sort(values.begin(), values.end());
    const std::size_t m = values.size() / 2;
    s.median = values.size() % 2 ? values[m] : 0.5 * (values[m - 1] + values[m]);
    return s;
}

std::vector<double> simulate_pure_convolution(const NormalMixture& f, std::size_t n, std::uint64_t seed, NoiseKind noise) {
    if (f.weight.empty()) throw ParameterError("empty mixture");
    RandomStream signal(seed, Stream::Signal);
    RandomStream noise_rng(seed, Stream::LogChiNoise);
    std::vector<double> y(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double u = signal.uniform();
        std::size_t c = 0;
        double cum = f.weight[0];
        while (u >= cum && c + 1 < f.weight.size()) cum += f.weight[++c];
        const double xi = f.mean[c] + f.sd[c] * signal.normal();
        const double z = noise_rng.normal();
        y[i] = noise == NoiseKind::None ? xi : xi + std::log(std::max(z * z, kLogFloor));
    }
    return y;
}

ExperimentSpec experiment_preset(const std::string& name) {
    ExperimentSpec s;
    s.scenario = name;
    if (name == "pure-convolution") {
        s.n = 2000;
        s.bandwidth = 0.75;
    } else if (name == "ou-exp") {
        s.n = 5000;
        s.bandwidth = 0.6;
    } else if (name == "regime-switch") {
        s.n = 5000;
        s.bandwidth = 0.4;
        s.grid_lo = -5.0;
        s.grid_hi = 5.0;
    } else {
        throw ConfigError("unknown experiment preset '" + name + "'");
    }
    return s;
}

std::uint64_t replication_seed(std::uint64_t base, std::size_t r) { return mix_seed(base + r); }

std::vector<double> experiment_sample(const ExperimentSpec& spec, std::uint64_t seed, NormalMixture* truth) {
    if (spec.scenario == "pure-convolution") {
        if (truth) *truth = spec.truth;
        return simulate_pure_convolution(spec.truth, spec.n, seed);
    }
    ScenarioConfig cfg = spec.scenario_config.value_or(scenario_preset(spec.scenario));
    cfg.n = spec.n;
    cfg.volatility_seed = seed;
    cfg.price_seed = mix_seed(seed ^ 0x5bd1e995u);
    const auto path = simulate_volatility(cfg);
    if (!path.truth) throw ConfigError("scenario has no closed-form truth");
    if (truth) *truth = *path.truth;
    const auto series = simulate_price(path, cfg);
    return log_squared_transform(series).y;
}

namespace {

double interpolate(const DensityGrid& g, double x) {
    if (x <= g.x.front()) return g.value.front();
    if (x >= g.x.back()) return g.value.back();
    const auto it = std::upper_bound(g.x.begin(), g.x.end(), x);
    const std::size_t i = static_cast<std::size_t>(it - g.x.begin());
    const double t = (x - g.x[i - 1]) / (g.x[i] - g.x[i - 1]);
    return g.value[i - 1] + t * (g.value[i] - g.value[i - 1]);
}

}  // namespace

ExperimentReport run_experiment(const ExperimentSpec& spec) {
    if (spec.replications < 1) throw ParameterError("replication count must be at least 1");
    if (spec.estimator != "kernel" && spec.estimator != "wavelet" && spec.estimator != "ppe") {
        throw ConfigError("unknown estimator '" + spec.estimator + "'");
    }
    const auto grid = linspace(spec.grid_lo, spec.grid_hi, spec.grid_points);
    ExperimentReport report;
    for (Metric m : spec.metrics) {
        switch (m) {
            case Metric::PointError:
                report.columns.push_back("point_error");
                break;
            case Metric::Mise:
                report.columns.push_back("ise");
                break;
            case Metric::ModeCount:
                report.columns.push_back("modes");
                break;
            case Metric::MomentFit:
                report.columns.push_back("fit_mean");
                report.columns.push_back("fit_variance");
                break;
        }
    }
    for (std::size_t r = 0; r < spec.replications; ++r) {
        const std::uint64_t seed = replication_seed(spec.seed_base, r);
        NormalMixture truth;
        const auto y = experiment_sample(spec, seed, &truth);
        EstimateReport est;
        if (spec.estimator == "kernel") {
            KernelSpec ks;
            ks.h = spec.bandwidth;
            est = estimate_density(y, ks, grid);
        } else if (spec.estimator == "wavelet") {
            est = wavelet_estimate(y, spec.wavelet, grid).report;
        } else {
            est = select_and_estimate(y, spec.ppe, grid).report;
        }
        const auto truth_grid = truth.on(grid);
        std::vector<double> row;
        for (Metric m : spec.metrics) {
            switch (m) {
                case Metric::PointError:
                    row.push_back(interpolate(est.density, spec.point) - truth.pdf(spec.point));
                    break;
                case Metric::Mise:
                    row.push_back(mise(est.density, truth_grid));
                    break;
                case Metric::ModeCount:
                    row.push_back(mode_count(est.density, spec.prominence));
                    break;
                case Metric::MomentFit: {
                    const auto fit = normal_fit(est.density);
                    row.push_back(fit.mean);
                    row.push_back(fit.variance);
                    break;
                }
            }
        }
        report.seeds.push_back(seed);
        report.rows.push_back(std::move(row));
    }
    for (std::size_t c = 0; c < report.columns.size(); ++c) {
        std::vector<double> col;
        for (const auto& row : report.rows) col.push_back(row[c]);
        report.aggregate.emplace_back(report.columns[c], summarize(std::move(col)));
    }
    return report;
}

void ExperimentReport::write_csv(std::ostream& out) const {
    std::vector<std::string> header{"seed"};
    header.insert(header.end(), columns.begin(), columns.end());
    csv::Writer w(out, header);
    for (std::size_t r = 0; r < rows.size(); ++r) {
        std::vector<std::string> cells{std::to_string(seeds[r])};
        for (double v : rows[r]) cells.push_back(csv::format(v));
        w.row(cells);
    }
}

void ExperimentReport::write_summary(std::ostream& out) const {
    std::ostringstream s;
    s << std::left << std::setw(16) << "metric" << std::right << std::setw(16) << "mean" << std::setw(16) << "mc_se"
      << std::setw(16) << "median" << std::setw(8) << "reps" << '\n';
    for (const auto& [name, sum] : aggregate) {
        s << std::left << std::setw(16) << name << std::right << std::setprecision(6) << std::setw(16) << sum.mean
          << std::setw(16) << sum.standard_error << std::setw(16) << sum.median << std::setw(8) << sum.count << '\n';
    }
    out << s.str();
}

}  // namespace voldens
