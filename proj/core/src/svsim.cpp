#include "voldens/svsim.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "voldens/error.hpp"
#include "voldens/quadrature.hpp"

namespace voldens {

void OuParams::validate() const {
    if (!(b > 0.0) || !std::isfinite(b)) throw ParameterError("OU mean reversion b must be positive, got " + std::to_string(b));
    if (!(a > 0.0) || !std::isfinite(a)) throw ParameterError("OU diffusion a must be positive, got " + std::to_string(a));
    if (!std::isfinite(mu) || !std::isfinite(x0)) throw ParameterError("OU level and start must be finite");
}

void RegimeSwitchParams::validate() const {
    regime0.validate();
    regime1.validate();
    if (!(lambda01 > 0.0) || !(lambda10 > 0.0)) throw ParameterError("switching rates must be positive");
}

double RegressionFunction::operator()(double x) const {
    switch (kind) {
        case Kind::Linear:
            return slope * x + intercept;
        case Kind::Tanh:
            return intercept + slope * scale * std::tanh(x / scale);
    }
    return 0.0;
}

double RegressionFunction::growth_ratio() const {
    double worst = 0.0;
    for (double r : {1e2, 1e3, 1e4})
        for (double x : {r, -r}) worst = std::max(worst, std::abs((*this)(x) / x));
    return worst;
}

void ArParams::validate() const {
    if (!(innovation_sd > 0.0)) throw ParameterError("innovation sd must be positive");
    if (!(std::abs(noise_correlation) < 1.0)) throw ParameterError("noise correlation must lie in (-1, 1)");
    if (m.kind == RegressionFunction::Kind::Tanh && !(m.scale > 0.0)) throw ParameterError("tanh scale must be positive");
    const double g = m.growth_ratio();
    if (!(g < 1.0)) {
        throw ParameterError("autoregression is not stable: max |m(x)/x| at |x| in {1e2,1e3,1e4} is " + std::to_string(g));
    }
}

void ScenarioConfig::validate() const {
    if (!(delta > 0.0) || !std::isfinite(delta)) throw ParameterError("delta must be positive");
    if (n < 2) throw ParameterError("n must be at least 2");
    if (substeps < 1) throw ParameterError("substeps must be at least 1");
    if (volatility_seed == price_seed) throw ConfigError("volatility and price seeds must differ");
    if (!std::isfinite(drift)) throw ParameterError("drift must be finite");
    switch (model) {
        case VolatilityModel::OuExp:
            ou.validate();
            break;
        case VolatilityModel::RegimeSwitchExp:
            regime.validate();
            break;
        case VolatilityModel::NonlinearAr:
            ar.validate();
            break;
    }
}

std::string_view model_name(VolatilityModel m) {
    switch (m) {
        case VolatilityModel::OuExp:
            return "ou-exp";
        case VolatilityModel::RegimeSwitchExp:
            return "regime-switch-exp";
        case VolatilityModel::NonlinearAr:
            return "nonlinear-ar";
    }
    return "?";
}

VolatilityModel parse_model(std::string_view name) {
    if (name == "ou-exp") return VolatilityModel::OuExp;
    if (name == "regime-switch-exp" || name == "regime-switch") return VolatilityModel::RegimeSwitchExp;
    if (name == "nonlinear-ar") return VolatilityModel::NonlinearAr;
    throw ConfigError("unknown volatility model '" + std::string(name) + "'");
}

NormalMixture NormalMixture::normal(double mean, double sd) { return {{1.0}, {mean}, {sd}}; }

double NormalMixture::pdf(double x) const {
    double acc = 0.0;
    for (std::size_t i = 0; i < weight.size(); ++i) {
        const double z = (x - mean[i]) / sd[i];
        acc += weight[i] * std::exp(-0.5 * z * z) / (sd[i] * std::sqrt(2.0 * std::numbers::pi));
    }
    return acc;
}

double NormalMixture::pdf_second_derivative(double x) const {
    double acc = 0.0;
    for (std::size_t i = 0; i < weight.size(); ++i) {
        const double z = (x - mean[i]) / sd[i];
        const double phi = std::exp(-0.5 * z * z) / (sd[i] * std::sqrt(2.0 * std::numbers::pi));
        acc += weight[i] * phi * (z * z - 1.0) / (sd[i] * sd[i]);
    }
    return acc;
}

DensityGrid NormalMixture::on(std::span<const double> grid) const {
    std::vector<double> v(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) v[i] = pdf(grid[i]);
    return DensityGrid({grid.begin(), grid.end()}, std::move(v), true);
}

double NormalMixture::l2_norm_squared() const {
    // int N(m1,s1^2) N(m2,s2^2) = N(m1 - m2; 0, s1^2 + s2^2)
    double acc = 0.0;
    for (std::size_t i = 0; i < weight.size(); ++i) {
        for (std::size_t j = 0; j < weight.size(); ++j) {
            const double v = sd[i] * sd[i] + sd[j] * sd[j];
            const double d = mean[i] - mean[j];
            acc += weight[i] * weight[j] * std::exp(-0.5 * d * d / v) / std::sqrt(2.0 * std::numbers::pi * v);
        }
    }
    return acc;
}

std::vector<double> simulate_ou(const OuParams& params, std::size_t steps, double dt, RandomStream& rng) {
    params.validate();
    if (!(dt > 0.0)) throw ParameterError("dt must be positive");
    if (steps < 1) throw ParameterError("steps must be at least 1");
    std::vector<double> path(steps + 1);
    path[0] = params.stationary_start ? params.mu + std::sqrt(params.stationary_variance()) * rng.normal() : params.x0;
    const double decay = std::exp(-params.b * dt);
    const double sd = params.a * std::sqrt(-std::expm1(-2.0 * params.b * dt) / (2.0 * params.b));
    for (std::size_t k = 1; k <= steps; ++k) path[k] = params.mu + (path[k - 1] - params.mu) * decay + sd * rng.normal();
    return path;
}

std::vector<double> simulate_ou(const OuParams& params, std::size_t steps, double dt, std::uint64_t seed) {
    RandomStream rng(seed, Stream::OuFactor0);
    return simulate_ou(params, steps, dt, rng);
}

std::vector<std::uint8_t> simulate_markov2(double lambda01, double lambda10, std::size_t steps, double dt,
                                           RandomStream& rng, std::optional<int> initial_state) {
    if (!(lambda01 > 0.0) || !(lambda10 > 0.0)) throw ParameterError("switching rates must be positive");
    if (!(dt > 0.0)) throw ParameterError("dt must be positive");
    if (initial_state && *initial_state != 0 && *initial_state != 1) throw ParameterError("initial state must be 0 or 1");
    std::vector<std::uint8_t> path(steps + 1);
    const double pi1 = lambda01 / (lambda01 + lambda10);
    path[0] = initial_state ? static_cast<std::uint8_t>(*initial_state) : static_cast<std::uint8_t>(rng.uniform() < pi1);
    const double p01 = -std::expm1(-lambda01 * dt);
    const double p10 = -std::expm1(-lambda10 * dt);
    for (std::size_t k = 1; k <= steps; ++k) {
        const double u = rng.uniform();
        const std::uint8_t s = path[k - 1];
        path[k] = (s == 0) ? static_cast<std::uint8_t>(u < p01) : static_cast<std::uint8_t>(!(u < p10));
    }
    return path;
}

std::vector<std::uint8_t> simulate_markov2(double lambda01, double lambda10, std::size_t steps, double dt,
                                           std::uint64_t seed, std::optional<int> initial_state) {
    RandomStream rng(seed, Stream::RegimeChain);
    return simulate_markov2(lambda01, lambda10, steps, dt, rng, initial_state);
}

VolatilityPath simulate_volatility(const ScenarioConfig& config) {
    config.validate();
    VolatilityPath out;
    const std::size_t fine = config.n * config.substeps;
    out.dt = config.delta / static_cast<double>(config.substeps);
    switch (config.model) {
        case VolatilityModel::OuExp: {
            RandomStream rng(config.volatility_seed, Stream::OuFactor0);
            out.log_sigma2 = simulate_ou(config.ou, fine, out.dt, rng);
            out.truth = NormalMixture::normal(config.ou.mu, std::sqrt(config.ou.stationary_variance()));
            break;
        }
        case VolatilityModel::RegimeSwitchExp: {
            const auto& r = config.regime;
            RandomStream rng0(config.volatility_seed, Stream::OuFactor0);
            RandomStream rng1(config.volatility_seed, Stream::OuFactor1);
            RandomStream chain_rng(config.volatility_seed, Stream::RegimeChain);
            const auto x0 = simulate_ou(r.regime0, fine, out.dt, rng0);
            const auto x1 = simulate_ou(r.regime1, fine, out.dt, rng1);
            const auto u = simulate_markov2(r.lambda01, r.lambda10, fine, out.dt, chain_rng);
            out.log_sigma2.resize(fine + 1);
            for (std::size_t k = 0; k <= fine; ++k) out.log_sigma2[k] = u[k] ? x1[k] : x0[k];
            const double p1 = r.pi1();
            out.truth = NormalMixture{{p1, 1.0 - p1},
                                      {r.regime1.mu, r.regime0.mu},
                                      {std::sqrt(r.regime1.stationary_variance()), std::sqrt(r.regime0.stationary_variance())}};
            break;
        }
        case VolatilityModel::NonlinearAr: {
            const auto& ar = config.ar;
            RandomStream rng(config.volatility_seed, Stream::ArInnovation);
            double xi = 0.0;
            for (std::size_t k = 0; k < ar.burn_in; ++k) xi = ar.m(xi) + ar.innovation_sd * rng.normal();
            out.log_sigma2.resize(fine + 1);
            for (std::size_t i = 0; i < config.n; ++i) {
                xi = ar.m(xi) + ar.innovation_sd * rng.normal();
                std::fill_n(out.log_sigma2.begin() + static_cast<std::ptrdiff_t>(i * config.substeps), config.substeps, xi);
            }
            out.log_sigma2[fine] = xi;
            if (ar.m.kind == RegressionFunction::Kind::Linear) {
                const double s = ar.m.slope;
                out.truth = NormalMixture::normal(ar.m.intercept / (1.0 - s), ar.innovation_sd / std::sqrt(1.0 - s * s));
            }
            break;
        }
    }
    out.sigma2.resize(out.log_sigma2.size());
    std::transform(out.log_sigma2.begin(), out.log_sigma2.end(), out.sigma2.begin(), [](double v) { return std::exp(v); });
    return out;
}

std::vector<double> ObservationSeries::normalized_increments() const {
    if (log_price.size() < 2) throw DataError("series needs at least two prices");
    const double scale = 1.0 / std::sqrt(delta);
    std::vector<double> x(log_price.size() - 1);
    for (std::size_t i = 1; i < log_price.size(); ++i) x[i - 1] = (log_price[i] - log_price[i - 1]) * scale;
    return x;
}

ObservationSeries simulate_price(const VolatilityPath& path, const ScenarioConfig& config, std::span<const double> normals) {
    config.validate();
    const std::size_t fine = config.n * config.substeps;
    if (path.sigma2.size() != fine + 1) {
        throw GridMismatchError("volatility path has " + std::to_string(path.sigma2.size()) + " points, expected " +
                                std::to_string(fine + 1));
    }
    if (normals.size() < fine) throw GridMismatchError("not enough Brownian increments for the price path");
    const double dt = config.delta / static_cast<double>(config.substeps);
    const double sqrt_dt = std::sqrt(dt);
    ObservationSeries out;
    out.delta = config.delta;
    out.log_price.resize(config.n + 1);
    out.log_price[0] = 0.0;
    double s = 0.0;
    for (std::size_t k = 0; k < fine; ++k) {
        s += config.drift * dt + std::sqrt(path.sigma2[k]) * sqrt_dt * normals[k];
        if ((k + 1) % config.substeps == 0) out.log_price[(k + 1) / config.substeps] = s;
    }
    return out;
}

ObservationSeries simulate_price(const VolatilityPath& path, const ScenarioConfig& config) {
    RandomStream rng(config.price_seed, Stream::Brownian);
    std::vector<double> normals(config.n * config.substeps);
    for (double& z : normals) z = rng.normal();
    return simulate_price(path, config, normals);
}

LogSquared log_squared_transform(std::span<const double> increments, double floor) {
    if (!(floor > 0.0)) throw ParameterError("log floor must be positive");
    LogSquared out;
    out.y.resize(increments.size());
    for (std::size_t i = 0; i < increments.size(); ++i) {
        double sq = increments[i] * increments[i];
        if (!(sq >= floor)) {
            sq = floor;
            ++out.floored;
        }
        out.y[i] = std::log(sq);
    }
    return out;
}

LogSquared log_squared_transform(const ObservationSeries& series, double floor) {
    const auto x = series.normalized_increments();
    return log_squared_transform(x, floor);
}

DensityGrid invariant_density(const std::function<double(double)>& drift, const std::function<double(double)>& diffusion,
                              double x0, std::span<const double> grid) {
    if (grid.size() < 2) throw GridMismatchError("invariant density needs at least two grid points");
    for (std::size_t i = 1; i < grid.size(); ++i)
        if (!(grid[i] > grid[i - 1])) throw GridMismatchError("grid must be strictly increasing");

    auto ratio = [&](double y) {
        const double a = diffusion(y);
        if (!(a > 0.0) || !std::isfinite(a)) throw SingularityError("diffusion vanishes at x = " + std::to_string(y));
        return drift(y) / (a * a);
    };
    auto segment = [&](double lo, double hi) { return quadrature::integrate(ratio, lo, hi, 1e-13, 1e-15); };

    const std::size_t n = grid.size();
    std::vector<double> log_f(n);
    std::vector<double> cumulative(n);
    // Anchor at the grid point nearest x0, then walk outwards segment by segment.
    const auto nearest = static_cast<std::size_t>(
        std::min_element(grid.begin(), grid.end(), [&](double p, double q) { return std::abs(p - x0) < std::abs(q - x0); }) -
        grid.begin());
    ratio(x0);
    cumulative[nearest] = segment(x0, grid[nearest]);
    for (std::size_t i = nearest + 1; i < n; ++i) cumulative[i] = cumulative[i - 1] + segment(grid[i - 1], grid[i]);
    for (std::size_t i = nearest; i-- > 0;) cumulative[i] = cumulative[i + 1] - segment(grid[i], grid[i + 1]);

    for (std::size_t i = 0; i < n; ++i) {
        const double a = diffusion(grid[i]);
        if (!(a > 0.0) || !std::isfinite(a)) throw SingularityError("diffusion vanishes at x = " + std::to_string(grid[i]));
        log_f[i] = 2.0 * cumulative[i] - 2.0 * std::log(a);
    }
    const double peak = *std::max_element(log_f.begin(), log_f.end());
    std::vector<double> f(n);
    for (std::size_t i = 0; i < n; ++i) f[i] = std::exp(log_f[i] - peak);
    const double mass = trapezoid(grid, f);
    for (double& v : f) v /= mass;
    return DensityGrid({grid.begin(), grid.end()}, std::move(f), true);
}

}  // namespace voldens
