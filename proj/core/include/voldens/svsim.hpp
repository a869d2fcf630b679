#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "voldens/density_grid.hpp"
#include "voldens/random.hpp"

namespace voldens {

/// dX = -b (X - mu) dt + a dW.
struct OuParams {
    double b = 0.5;
    double mu = 0.0;
    double a = 1.0;
    bool stationary_start = true;
    double x0 = 0.0;  ///< used when stationary_start is false

    void validate() const;
    double stationary_variance() const { return a * a / (2.0 * b); }
};

/// xi = U X^1 + (1 - U) X^0 with U a two-state chain; lambda01 is the 0 -> 1 rate.
struct RegimeSwitchParams {
    OuParams regime0{0.5, -2.0, 1.0};
    OuParams regime1{0.5, 2.0, 1.0};
    double lambda01 = 1.0;
    double lambda10 = 1.0;

    void validate() const;
    double pi1() const { return lambda01 / (lambda01 + lambda10); }
};

/// Autoregression function for the discrete-time log-volatility model
/// xi_{t+1} = m(xi_t) + eta_t.
struct RegressionFunction {
    enum class Kind { Linear, Tanh };
    Kind kind = Kind::Linear;
    double slope = 0.5;
    double intercept = 0.0;
    double scale = 1.0;  ///< tanh: m(x) = intercept + slope * scale * tanh(x / scale)

    double operator()(double x) const;
    /// max |m(x)/x| over |x| in {1e2, 1e3, 1e4}; the model is accepted when < 1.
    double growth_ratio() const;
};

struct ArParams {
    RegressionFunction m;
    double innovation_sd = 1.0;
    double noise_correlation = 0.0;  ///< corr(eta_t, Z_t) for the observation noise
    std::size_t burn_in = 1000;

    void validate() const;
};

enum class VolatilityModel { OuExp, RegimeSwitchExp, NonlinearAr };

struct ScenarioConfig {
    VolatilityModel model = VolatilityModel::OuExp;
    OuParams ou;
    RegimeSwitchParams regime;
    ArParams ar;
    double drift = 0.0;  ///< constant b_t; 0 means zero drift
    double delta = 1.0;
    std::size_t n = 1000;
    std::size_t substeps = 16;
    std::uint64_t volatility_seed = 1;
    std::uint64_t price_seed = 2;

    void validate() const;
};

std::string_view model_name(VolatilityModel m);
VolatilityModel parse_model(std::string_view name);  ///< throws ConfigError on unknown tags

/// Finite mixture of normals; the ground-truth law of log sigma^2.
struct NormalMixture {
    std::vector<double> weight;
    std::vector<double> mean;
    std::vector<double> sd;

    static NormalMixture normal(double mean, double sd);
    double pdf(double x) const;
    double pdf_second_derivative(double x) const;
    DensityGrid on(std::span<const double> grid) const;
    /// int f^2 in closed form.
    double l2_norm_squared() const;
};

/// Exact-transition OU path X_0 .. X_steps on spacing dt.
std::vector<double> simulate_ou(const OuParams& params, std::size_t steps, double dt, std::uint64_t seed);
std::vector<double> simulate_ou(const OuParams& params, std::size_t steps, double dt, RandomStream& rng);

/// Two-state chain U_0 .. U_steps with per-step flip probability 1 - exp(-lambda dt).
/// U_0 is drawn from the stationary law unless `initial_state` is given.
std::vector<std::uint8_t> simulate_markov2(double lambda01, double lambda10, std::size_t steps, double dt,
                                           std::uint64_t seed, std::optional<int> initial_state = std::nullopt);
std::vector<std::uint8_t> simulate_markov2(double lambda01, double lambda10, std::size_t steps, double dt,
                                           RandomStream& rng, std::optional<int> initial_state = std::nullopt);

struct VolatilityPath {
    double dt = 0.0;                   ///< fine-grid spacing delta / substeps
    std::vector<double> log_sigma2;    ///< n * substeps + 1 values
    std::vector<double> sigma2;
    std::optional<NormalMixture> truth;  ///< invariant law of log sigma^2 when known in closed form
};

VolatilityPath simulate_volatility(const ScenarioConfig& config);

/// Log prices S_0 = 0, S_Delta, ..., S_{n Delta}.
struct ObservationSeries {
    double delta = 1.0;
    std::vector<double> log_price;

    std::size_t size() const noexcept { return log_price.empty() ? 0 : log_price.size() - 1; }
    /// (S_{i Delta} - S_{(i-1) Delta}) / sqrt(Delta)
    std::vector<double> normalized_increments() const;
};

/// Euler scheme on the fine grid of `path`; `normals` (one per fine step)
/// replaces the Brownian stream when given.
ObservationSeries simulate_price(const VolatilityPath& path, const ScenarioConfig& config);
ObservationSeries simulate_price(const VolatilityPath& path, const ScenarioConfig& config,
                                 std::span<const double> normals);

struct LogSquared {
    std::vector<double> y;
    std::size_t floored = 0;  ///< increments whose square fell below the floor
};

inline constexpr double kLogFloor = 1e-300;

LogSquared log_squared_transform(std::span<const double> increments, double floor = kLogFloor);
LogSquared log_squared_transform(const ObservationSeries& series, double floor = kLogFloor);

/// Invariant density of dX = b(X) dt + a(X) dW on `grid`:
/// f(x) proportional to exp(2 int_{x0}^x b/a^2) / a(x)^2, normalised to unit
/// trapezoid mass on the grid. Throws SingularityError when a vanishes.
DensityGrid invariant_density(const std::function<double(double)>& drift, const std::function<double(double)>& diffusion,
                              double x0, std::span<const double> grid);

/// Plain-text key = value documents ('#' starts a comment).
using KeyValues = std::map<std::string, std::string, std::less<>>;
KeyValues parse_key_values(std::istream& in);

ScenarioConfig parse_scenario(std::istream& in);
ScenarioConfig scenario_from_key_values(const KeyValues& kv);
void write_scenario(std::ostream& out, const ScenarioConfig& config);
/// Named presets: "ou-exp", "regime-switch", "nonlinear-ar", "aex-like".
ScenarioConfig scenario_preset(std::string_view name);

void write_price_csv(std::ostream& out, const ObservationSeries& series);      ///< t,S
void write_series_csv(std::ostream& out, const ObservationSeries& series);     ///< i,X,Y

}  // namespace voldens
