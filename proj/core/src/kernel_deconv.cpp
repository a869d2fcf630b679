#include "voldens/kernel_deconv.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <string>

#include "voldens/csv.hpp"
#include "voldens/error.hpp"
#include "voldens/parallel.hpp"
#include "voldens/quadrature.hpp"

namespace voldens {

namespace {

// Taylor coefficients of pi * w(x) in powers of x^2.
constexpr std::array<double, 8> wand_taylor() {
    std::array<double, 8> c{};
    double factorial = 1.0;
    for (int k = 0; k < 8; ++k) {
        if (k > 0) factorial *= static_cast<double>((2 * k - 1) * (2 * k));
        const double m = 2.0 * k;
        const double bracket = 1.0 / (m + 1) - 3.0 / (m + 3) + 3.0 / (m + 5) - 1.0 / (m + 7);
        c[static_cast<std::size_t>(k)] = ((k % 2) ? -1.0 : 1.0) * bracket / factorial;
    }
    return c;
}

constexpr auto kWandTaylor = wand_taylor();

}  // namespace

double wand_kernel(double x, double switch_at) {
    const double ax = std::abs(x);
    if (ax <= switch_at) {
        const double x2 = x * x;
        double acc = 0.0;
        for (std::size_t k = kWandTaylor.size(); k-- > 0;) acc = acc * x2 + kWandTaylor[k];
        return acc / std::numbers::pi;
    }
    const double x2 = x * x;
    const double x7 = x2 * x2 * x2 * x;
    return (48.0 * x * (x2 - 15.0) * std::cos(x) - 144.0 * (2.0 * x2 - 5.0) * std::sin(x)) / (std::numbers::pi * x7);
}

double wand_charfn(double t) {
    if (std::abs(t) >= 1.0) return 0.0;
    const double u = 1.0 - t * t;
    return u * u * u;
}

DeconvKernel::DeconvKernel(double h, double half_range, NoiseKind noise, KernelTableOptions options)
    : h_(h), noise_(noise) {
    if (!(h > 0.0) || !std::isfinite(h)) throw ParameterError("bandwidth h must be positive");
    if (!(half_range > 0.0)) throw ParameterError("kernel table range must be positive");
    FourierTableSpec spec;
    spec.s_lo = -1.0;
    spec.s_hi = 1.0;
    spec.min_spectrum_points = options.spectrum_points;
    spec.target_dx = options.dx;
    spec.half_range = half_range;
    spec.sign = -1;
    auto spectrum = [this](double s) { return wand_charfn(s) * inverse_noise_charfn(s / h_, noise_); };
    auto built = build_fourier_table(spectrum, spec);
    imag_residue_ = built.max_imag_residue;
    if (imag_residue_ > 1e-8 * built.max_abs_value + 1e-12) {
        throw NumericError("deconvolution kernel table has imaginary residue " + csv::format(imag_residue_));
    }
    table_ = std::move(built.table);
}

double DeconvKernel::direct(double x, double rel_tol) const {
    auto integrand = [&](double s) {
        return wand_charfn(s) * inverse_noise_charfn(s / h_, noise_) * std::polar(1.0, -s * x);
    };
    const double scale = std::abs(inverse_noise_charfn(1.0 / h_, noise_));
    const std::complex<double> v = quadrature::integrate(integrand, -1.0, 1.0, rel_tol, 1e-14 * scale) /
                                   (2.0 * std::numbers::pi);
    if (std::abs(v.imag()) > 1e-8 * std::abs(v.real()) + 1e-12) {
        throw NumericError("v_h(" + csv::format(x) + ") has imaginary residue " + csv::format(v.imag()));
    }
    return v.real();
}

double DeconvKernel::operator()(double x) const { return table_.covers(x) ? table_(x) : direct(x); }

std::vector<double> default_grid(std::span<const double> y, double h, std::size_t grid_points) {
    if (y.empty()) throw DataError("empty series");
    const auto [lo, hi] = std::minmax_element(y.begin(), y.end());
    return linspace(*lo - 3.0 * h, *hi + 3.0 * h, grid_points);
}

double kernel_argument_range(std::span<const double> y, std::span<const double> grid, double h) {
    if (y.empty() || grid.empty()) return 1.0;
    const auto [ylo, yhi] = std::minmax_element(y.begin(), y.end());
    const auto [glo, ghi] = std::minmax_element(grid.begin(), grid.end());
    return std::max({std::abs(*ghi - *ylo), std::abs(*yhi - *glo), 1.0}) / h;
}

std::vector<double> kernel_sums(const DeconvKernel& kernel, std::span<const double> y, std::span<const double> grid,
                                std::span<const double> weights) {
    if (y.empty()) throw DataError("empty series");
    if (!weights.empty() && weights.size() != y.size()) throw GridMismatchError("weights and series differ in length");
    const double inv_h = 1.0 / kernel.h();
    const double norm = 1.0 / (static_cast<double>(y.size()) * kernel.h());
    std::vector<double> out(grid.size());
    parallel_for(grid.size(), [&](std::size_t begin, std::size_t end) {
        for (std::size_t g = begin; g < end; ++g) {
            const double x = grid[g];
            double acc = 0.0;
            if (weights.empty()) {
                for (double yj : y) acc += kernel((x - yj) * inv_h);
            } else {
                for (std::size_t j = 0; j < y.size(); ++j) acc += weights[j] * kernel((x - y[j]) * inv_h);
            }
            out[g] = acc * norm;
        }
    });
    return out;
}

EstimateReport estimate_density(std::span<const double> y, const DeconvKernel& kernel, std::span<const double> grid,
                                bool clip_negative) {
    if (y.empty()) throw DataError("empty series");
    std::vector<double> x(grid.begin(), grid.end());
    auto values = kernel_sums(kernel, y, x, {});
    EstimateReport report;
    report.density = DensityGrid(std::move(x), std::move(values), false);
    if (clip_negative) report.density = clip_and_renormalize(report.density);
    report.set_config("estimator", "kernel");
    report.set_config("kernel", "wand");
    report.set_config("bandwidth", csv::format(kernel.h()));
    report.set_config("noise", kernel.noise() == NoiseKind::None ? "none" : "log-chi-square");
    report.set_config("clip_negative", clip_negative ? "true" : "false");
    report.set_diagnostic("n", static_cast<double>(y.size()));
    report.set_diagnostic("bandwidth", kernel.h());
    report.set_diagnostic("grid_lo", report.density.x.front());
    report.set_diagnostic("grid_hi", report.density.x.back());
    report.set_diagnostic("table_imag_residue", kernel.table_imag_residue());
    report.set_diagnostic("mass", integral(report.density));
    return report;
}

EstimateReport estimate_density(std::span<const double> y, const KernelSpec& spec, std::span<const double> grid) {
    if (y.empty()) throw DataError("empty series");
    if (!(spec.h > 0.0)) throw ParameterError("bandwidth h must be positive");
    std::vector<double> x = grid.empty() ? default_grid(y, spec.h, spec.grid_points) : std::vector<double>(grid.begin(), grid.end());
    const DeconvKernel kernel(spec.h, kernel_argument_range(y, x, spec.h) * 1.05 + 1.0, spec.noise, spec.table);
    return estimate_density(y, kernel, x, spec.clip_negative);
}

double default_bandwidth(std::size_t n, double gamma) {
    if (n < 3) throw ParameterError("bandwidth rule needs n >= 3");
    if (!(gamma > 0.0)) throw ParameterError("gamma must be positive");
    return gamma * std::numbers::pi / std::log(static_cast<double>(n));
}

std::optional<std::string> bandwidth_warning(double gamma, double delta_exponent) {
    if (!(delta_exponent > 0.0)) return std::nullopt;
    const double bound = 4.0 / delta_exponent;
    if (gamma > bound) return std::nullopt;
    return "gamma = " + csv::format(gamma) + " does not exceed 4/delta = " + csv::format(bound) +
           "; the bias/variance balance behind h = gamma pi / log n needs gamma > 4/delta";
}

}  // namespace voldens
