#include "voldens/noise_model.hpp"

#include <array>
#include <cmath>
#include <ostream>
#include <string>

#include "voldens/csv.hpp"
#include "voldens/density_grid.hpp"
#include "voldens/error.hpp"

namespace voldens {

namespace {

constexpr double kLanczosG = 7.0;
constexpr std::array<double, 9> kLanczos = {
    0.99999999999980993,  676.5203681218851,     -1259.1392167224028,
    771.32342877765313,   -176.61502916214059,   12.507343278686905,
    -0.13857109526572012, 9.9843695780195716e-6, 1.5056327351493116e-7};

const double kHalfLog2Pi = 0.5 * std::log(2.0 * std::numbers::pi);
const double kHalfLogPi = 0.5 * std::log(std::numbers::pi);

std::complex<double> lanczos_log_gamma(std::complex<double> z) {
    z -= 1.0;
    std::complex<double> sum = kLanczos[0];
    for (std::size_t i = 1; i < kLanczos.size(); ++i) sum += kLanczos[i] / (z + static_cast<double>(i));
    const std::complex<double> t = z + kLanczosG + 0.5;
    return kHalfLog2Pi + (z + 0.5) * std::log(t) - t + std::log(sum);
}

}  // namespace

double noise_density(double x) {
    if (x > 709.0) return 0.0;
    return std::exp(0.5 * x - 0.5 * std::exp(x)) / std::sqrt(2.0 * std::numbers::pi);
}

std::complex<double> complex_log_gamma(std::complex<double> z) {
    if (z.imag() == 0.0 && z.real() <= 0.0 && z.real() == std::floor(z.real())) {
        throw PoleError("log Gamma has a pole at z = " + std::to_string(z.real()));
    }
    if (z.real() >= 0.5) return lanczos_log_gamma(z);
    // Gamma(z) Gamma(1 - z) = pi / sin(pi z)
    const std::complex<double> s = std::sin(std::numbers::pi * z);
    return std::log(std::numbers::pi) - std::log(s) - lanczos_log_gamma(1.0 - z);
}

std::complex<double> log_noise_charfn(double t) {
    const std::complex<double> lg = complex_log_gamma({0.5, t});
    return {lg.real() - kHalfLogPi, lg.imag() + t * std::numbers::ln2};
}

std::complex<double> noise_charfn(double t) {
    if (std::abs(t) > kCharFnCutoff) return {0.0, 0.0};
    if (t == 0.0) return {1.0, 0.0};
    return std::exp(log_noise_charfn(t));
}

std::complex<double> noise_charfn(double t, NoiseKind kind) {
    return kind == NoiseKind::None ? std::complex<double>(1.0, 0.0) : noise_charfn(t);
}

std::complex<double> inverse_noise_charfn(double t, NoiseKind kind) {
    if (kind == NoiseKind::None) return {1.0, 0.0};
    if (std::abs(t) > 2.0 * kCharFnCutoff) {
        throw OverflowError("1/phi_k(t) exceeds the double range at t = " + std::to_string(t));
    }
    if (t == 0.0) return {1.0, 0.0};
    return std::exp(-log_noise_charfn(t));
}

void CharFnTable::validate(double tol) const {
    if (t.size() != value.size()) throw GridMismatchError("charfn table: lengths differ");
    if (t.empty() || t.size() % 2 == 0) throw GridMismatchError("charfn table needs an odd number of points");
    const std::size_t n = t.size();
    for (std::size_t i = 1; i < n; ++i)
        if (!(t[i] > t[i - 1])) throw GridMismatchError("charfn table: frequencies not increasing");
    for (std::size_t i = 0; i < n / 2; ++i) {
        const std::size_t j = n - 1 - i;
        if (t[i] != -t[j]) throw GridMismatchError("charfn table: frequencies not symmetric");
        if (std::abs(value[i] - std::conj(value[j])) > tol) throw NumericError("charfn table: not Hermitian");
    }
    if (t[n / 2] != 0.0 || std::abs(value[n / 2] - 1.0) > tol) throw NumericError("charfn table: value at 0 is not 1");
}

CharFnTable noise_charfn_table(double t_max, std::size_t points) {
    if (!(t_max > 0.0)) throw ParameterError("t_max must be positive");
    if (points < 3 || points % 2 == 0) throw ParameterError("charfn table needs an odd number (>= 3) of points");
    CharFnTable table;
    table.t = linspace(-t_max, t_max, points);
    const std::size_t mid = points / 2;
    table.t[mid] = 0.0;
    for (std::size_t i = 0; i < mid; ++i) table.t[points - 1 - i] = -table.t[i];
    table.value.resize(points);
    for (std::size_t i = mid; i < points; ++i) {
        table.value[i] = noise_charfn(table.t[i]);
        table.value[points - 1 - i] = std::conj(table.value[i]);
    }
    return table;
}

void write_csv(std::ostream& out, const CharFnTable& table) {
    csv::Writer w(out, {"t", "re", "im"});
    for (std::size_t i = 0; i < table.t.size(); ++i) w.row({table.t[i], table.value[i].real(), table.value[i].imag()});
}

}  // namespace voldens
