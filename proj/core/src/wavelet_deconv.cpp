#include "voldens/wavelet_deconv.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <tuple>

#include "voldens/csv.hpp"
#include "voldens/error.hpp"
#include "voldens/parallel.hpp"
#include "voldens/quadrature.hpp"

namespace voldens {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kSupport = 4.0 * kPi / 3.0;

double um_scale(int m, NoiseKind noise) {
    // (1/2pi) int |phi~ / phi_k(2^m w)| <= (4/3) / |phi_k(2^m 4pi/3)|
    return (4.0 / 3.0) * std::abs(inverse_noise_charfn(std::ldexp(kSupport, m), noise));
}

std::complex<double> um_spectrum(double w, int m, NoiseKind noise, const MeyerSpec& spec) {
    const double p = meyer_scaling_fourier(w, spec);
    if (p == 0.0) return {0.0, 0.0};
    return p * inverse_noise_charfn(std::ldexp(w, m), noise);
}

}  // namespace

void MeyerSpec::validate() const {
    if (bump_degree != 3) throw ConfigError("only the degree-3 Meyer bump is implemented");
    if (spectrum_points < 64) throw ParameterError("too few spectrum points");
    if (!(near_dx > 0.0) || !(far_dx > 0.0) || !(near_range > 0.0)) throw ParameterError("table spacings must be positive");
}

double meyer_nu(double x) {
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    const double x2 = x * x;
    return x2 * x2 * (35.0 - 84.0 * x + 70.0 * x2 - 20.0 * x2 * x);
}

double meyer_mu_cdf(double t) { return meyer_nu((t + kPi / 3.0) / (2.0 * kPi / 3.0)); }

double meyer_scaling_fourier(double omega, const MeyerSpec&) {
    const double a = std::abs(omega);
    if (a >= kSupport) return 0.0;
    if (a <= 2.0 * kPi / 3.0) return 1.0;
    // mu((w - pi, w + pi]) = 1 - F(|w| - pi) = nu(1 - x); nu(x) + nu(1 - x) = 1 avoids the cancellation
    return std::sqrt(meyer_nu((kSupport - a) / (2.0 * kPi / 3.0)));
}

std::complex<double> meyer_wavelet_fourier(double omega, const MeyerSpec&) {
    const double a = std::abs(omega);
    // F(a - pi) - F(a/2 - pi): only the first term is live below 4pi/3, only the second above
    const double mass = a <= kSupport ? meyer_mu_cdf(a - kPi) : meyer_nu((kSupport - a / 2.0) / (2.0 * kPi / 3.0));
    if (!(mass > 0.0)) return {0.0, 0.0};
    return std::polar(std::sqrt(mass), -omega / 2.0);
}

double u_m_function(double x, int m, NoiseKind noise, const MeyerSpec& spec) {
    if (m < 0) throw ParameterError("level m must be non-negative");
    auto integrand = [&](double w) { return um_spectrum(w, m, noise, spec) * std::polar(1.0, w * x); };
    const double scale = um_scale(m, noise);
    const int panels = std::max(1, static_cast<int>(std::ceil(std::abs(x) / 4.0)));
    const double b = 2.0 * kPi / 3.0;
    std::complex<double> v = quadrature::integrate_panels(integrand, -kSupport, -b, panels, 1e-11, 1e-14 * scale) +
                             quadrature::integrate_panels(integrand, -b, b, 2 * panels, 1e-11, 1e-14 * scale) +
                             quadrature::integrate_panels(integrand, b, kSupport, panels, 1e-11, 1e-14 * scale);
    v /= 2.0 * kPi;
    if (std::abs(v.imag()) > 1e-8 * std::abs(v.real()) + 1e-12 * scale) {
        throw NumericError("U_m(" + csv::format(x) + ") has imaginary residue " + csv::format(v.imag()));
    }
    return v.real();
}

double meyer_scaling_function(double x, const MeyerSpec& spec) { return u_m_function(x, 0, NoiseKind::None, spec); }

UmTable::UmTable(int m, NoiseKind noise, double range, const MeyerSpec& spec)
    : m_(m), noise_(noise), spec_(spec), range_(range) {
    spec.validate();
    if (m < 0) throw ParameterError("level m must be non-negative");
    if (!(range > 0.0)) throw ParameterError("table range must be positive");
    auto spectrum = [&](double w) { return um_spectrum(w, m, noise, spec); };
    auto build = [&](double dx, double half_range) {
        FourierTableSpec fs;
        fs.s_lo = -kSupport;
        fs.s_hi = kSupport;
        fs.min_spectrum_points = spec.spectrum_points;
        fs.target_dx = dx;
        fs.half_range = half_range;
        fs.sign = 1;
        auto r = build_fourier_table(spectrum, fs);
        if (r.max_imag_residue > 1e-8 * r.max_abs_value) {
            throw NumericError("U_m table has imaginary residue " + csv::format(r.max_imag_residue));
        }
        imag_residue_ = std::max(imag_residue_, r.max_imag_residue);
        return std::move(r.table);
    };
    near_ = build(spec.near_dx, std::min(range, spec.near_range));
    if (range > near_.half_range()) far_ = build(spec.far_dx, range);
}

double UmTable::operator()(double x) const {
    if (near_.covers(x)) return near_(x);
    if (far_ && far_->covers(x)) return (*far_)(x);
    return u_m_function(x, m_, noise_, spec_);
}

std::shared_ptr<const UmTable> shared_um_table(int m, NoiseKind noise, double range, const MeyerSpec& spec) {
    using Key = std::tuple<int, int, double, int, std::size_t, double, double, double>;
    static std::mutex mutex;
    static std::map<Key, std::shared_ptr<const UmTable>> cache;
    double bucket = 128.0;
    while (bucket < range) bucket *= 2.0;
    const Key key{m, static_cast<int>(noise), bucket, spec.bump_degree, spec.spectrum_points,
                  spec.near_dx, spec.near_range, spec.far_dx};
    std::lock_guard<std::mutex> lock(mutex);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
    auto table = std::make_shared<const UmTable>(m, noise, bucket, spec);
    cache.emplace(key, table);
    return table;
}

LevelChoice default_level(std::size_t n) {
    if (n < 3) throw ParameterError("level rule needs n >= 3");
    LevelChoice c;
    c.target = std::log(static_cast<double>(n)) / (1.0 + 4.0 * kPi * kPi / 3.0);
    c.level = std::max(0, static_cast<int>(std::lround(std::log2(c.target))));
    return c;
}

std::size_t truncation_for(std::size_t n, const WaveletConfig& config) {
    switch (config.truncation) {
        case TruncationRule::SampleSize:
            return n;
        case TruncationRule::LogPower:
            if (!(config.log_power > 0.0)) throw ParameterError("truncation exponent r must be positive");
            return static_cast<std::size_t>(std::ceil(std::pow(std::log(static_cast<double>(n)), config.log_power)));
        case TruncationRule::Fixed:
            return config.fixed_truncation;
    }
    return n;
}

std::vector<double> wavelet_coefficients(std::span<const double> y, int m, std::size_t L, const UmTable& table) {
    if (y.empty()) throw DataError("empty series");
    if (table.level() != m) throw ConfigError("U_m table level does not match the requested level");
    std::vector<double> scaled(y.size());
    for (std::size_t i = 0; i < y.size(); ++i) scaled[i] = std::ldexp(y[i], m);
    const double norm = std::pow(2.0, 0.5 * m) / static_cast<double>(y.size());
    std::vector<double> out(2 * L + 1);
    parallel_for(out.size(), [&](std::size_t begin, std::size_t end) {
        for (std::size_t k = begin; k < end; ++k) {
            const double l = static_cast<double>(k) - static_cast<double>(L);
            double acc = 0.0;
            for (double s : scaled) acc += table(s - l);
            out[k] = acc * norm;
        }
    });
    return out;
}

std::vector<double> wavelet_coefficients(std::span<const double> y, int m, std::size_t L, NoiseKind noise,
                                         const MeyerSpec& spec) {
    if (y.empty()) throw DataError("empty series");
    double ymax = 0.0;
    for (double v : y) ymax = std::max(ymax, std::abs(v));
    const auto table = shared_um_table(m, noise, std::ldexp(ymax, m) + static_cast<double>(L) + 8.0, spec);
    return wavelet_coefficients(y, m, L, *table);
}

double WaveletEstimate::coefficient(long l) const {
    const long L = static_cast<long>(truncation);
    if (l < -L || l > L) return 0.0;
    return coefficients[static_cast<std::size_t>(l + L)];
}

std::vector<double> render_scaling_expansion(std::span<const double> coefficients, int m, std::span<const double> grid,
                                             const MeyerSpec& spec) {
    if (coefficients.size() % 2 == 0) throw GridMismatchError("coefficient list must be symmetric (odd length)");
    const auto L = static_cast<double>(coefficients.size() / 2);
    double gmax = 0.0;
    for (double x : grid) gmax = std::max(gmax, std::abs(x));
    const auto phi = shared_um_table(0, NoiseKind::None, std::ldexp(gmax, m) + L + 8.0, spec);
    const double norm = std::pow(2.0, 0.5 * m);
    std::vector<double> out(grid.size());
    parallel_for(grid.size(), [&](std::size_t begin, std::size_t end) {
        for (std::size_t g = begin; g < end; ++g) {
            const double s = std::ldexp(grid[g], m);
            double acc = 0.0;
            for (std::size_t k = 0; k < coefficients.size(); ++k) {
                if (coefficients[k] != 0.0) acc += coefficients[k] * (*phi)(s - (static_cast<double>(k) - L));
            }
            out[g] = acc * norm;
        }
    });
    return out;
}

WaveletEstimate wavelet_estimate(std::span<const double> y, const WaveletConfig& config, std::span<const double> grid) {
    config.meyer.validate();
    if (y.size() < 3) throw DataError("wavelet estimate needs n >= 3");
    WaveletEstimate est;
    const LevelChoice rule = default_level(y.size());
    est.level_target = rule.target;
    est.level = config.level.value_or(rule.level);
    if (est.level < 0) throw ParameterError("level m must be non-negative");
    est.truncation = truncation_for(y.size(), config);

    double ymax = 0.0;
    for (double v : y) ymax = std::max(ymax, std::abs(v));
    const auto table = shared_um_table(est.level, config.noise,
                                       std::ldexp(ymax, est.level) + static_cast<double>(est.truncation) + 8.0, config.meyer);
    est.coefficients = wavelet_coefficients(y, est.level, est.truncation, *table);

    std::vector<double> x;
    if (grid.empty()) {
        const auto [lo, hi] = std::minmax_element(y.begin(), y.end());
        const double pad = 3.0 * std::ldexp(1.0, -est.level);
        x = linspace(*lo - pad, *hi + pad, config.grid_points);
    } else {
        x.assign(grid.begin(), grid.end());
    }
    auto values = render_scaling_expansion(est.coefficients, est.level, x, config.meyer);

    double l2 = 0.0;
    for (double a : est.coefficients) l2 += a * a;
    auto& r = est.report;
    r.density = DensityGrid(std::move(x), std::move(values), false);
    r.set_config("estimator", "wavelet");
    r.set_config("level", config.level ? std::to_string(*config.level) : "auto");
    r.set_config("truncation", config.truncation == TruncationRule::SampleSize ? "n"
                               : config.truncation == TruncationRule::LogPower ? "log-power"
                                                                                : std::to_string(config.fixed_truncation));
    r.set_config("noise", config.noise == NoiseKind::None ? "none" : "log-chi-square");
    r.set_diagnostic("n", static_cast<double>(y.size()));
    r.set_diagnostic("level", est.level);
    r.set_diagnostic("level_target", est.level_target);
    r.set_diagnostic("truncation", static_cast<double>(est.truncation));
    r.set_diagnostic("coefficient_l2", l2);
    r.set_diagnostic("table_imag_residue", table->imag_residue());
    r.set_diagnostic("mass", integral(r.density));
    return est;
}

std::vector<double> projection_coefficients(const std::function<std::complex<double>(double)>& charfn_g, int m,
                                            std::size_t L) {
    if (m < 0) throw ParameterError("level m must be non-negative");
    const double norm = std::pow(2.0, 0.5 * m);
    auto spectrum = [&](double w) -> std::complex<double> {
        const double p = meyer_scaling_fourier(w);
        if (p == 0.0) return {0.0, 0.0};
        return norm * p * charfn_g(std::ldexp(w, m));
    };
    const auto c = fourier_coefficients(spectrum, kSupport, L);
    std::vector<double> out(c.size());
    for (std::size_t i = 0; i < c.size(); ++i) out[i] = c[i].real();
    return out;
}

SobolevNorm sobolev_norm(const CharFnTable& table, double alpha) {
    table.validate(1e-9);
    std::vector<double> integrand(table.t.size());
    for (std::size_t i = 0; i < table.t.size(); ++i) {
        integrand[i] = std::norm(table.value[i]) * std::pow(table.t[i] * table.t[i] + 1.0, alpha);
    }
    SobolevNorm out;
    const double total = trapezoid(table.t, integrand);
    out.value = std::sqrt(total);
    const double edge = std::max(integrand.front(), integrand.back());
    out.edge_fraction = total > 0.0 ? edge * table.t.back() / total : 0.0;
    if (out.edge_fraction > 1e-6) {
        out.warning = "Sobolev integral is truncation dominated: edge integrand * t_max / integral = " +
                      csv::format(out.edge_fraction) + "; widen the table";
    }
    return out;
}

}  // namespace voldens
