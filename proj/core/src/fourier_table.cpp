#include "voldens/fourier_table.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numbers>

#include "voldens/error.hpp"

namespace voldens {

namespace {

// FFTW planning is not thread-safe.
std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}

struct FftBuffer {
    explicit FftBuffer(std::size_t n) : data(fftw_alloc_complex(n)) {
        if (data == nullptr) throw NumericError("fourier table: allocation failed");
    }
    ~FftBuffer() {
        if (plan != nullptr) {
            std::lock_guard<std::mutex> lock(planner_mutex());
            fftw_destroy_plan(plan);
        }
        fftw_free(data);
    }
    FftBuffer(const FftBuffer&) = delete;
    FftBuffer& operator=(const FftBuffer&) = delete;

    fftw_complex* data;
    fftw_plan plan = nullptr;
};

std::size_t next_pow2(double v) {
    std::size_t n = 1;
    while (static_cast<double>(n) < v) n <<= 1;
    return n;
}

}  // namespace

CubicTable::CubicTable(double dx, std::vector<double> values) : dx_(dx), values_(std::move(values)) {
    if (!(dx > 0.0)) throw ParameterError("table spacing must be positive");
    if (values_.size() < 5 || values_.size() % 2 == 0) throw ParameterError("table needs an odd number (>= 5) of points");
    inv_dx_ = 1.0 / dx;
    centre_ = static_cast<std::ptrdiff_t>(values_.size() / 2);
    half_range_ = dx * static_cast<double>(centre_);
}

double CubicTable::operator()(double x) const {
    const double u = x * inv_dx_ + static_cast<double>(centre_);
    const auto last = static_cast<std::ptrdiff_t>(values_.size()) - 1;
    auto i = static_cast<std::ptrdiff_t>(std::floor(u));
    // Stencil i-1 .. i+2, shifted inwards at the edges.
    i = std::clamp<std::ptrdiff_t>(i, 1, last - 2);
    const double t = u - static_cast<double>(i);
    const double* v = values_.data() + (i - 1);
    const double tm1 = t + 1.0;
    const double t1 = t - 1.0;
    const double t2 = t - 2.0;
    return -v[0] * t * t1 * t2 / 6.0 + v[1] * tm1 * t1 * t2 / 2.0 - v[2] * tm1 * t * t2 / 2.0 +
           v[3] * tm1 * t * t1 / 6.0;
}

FourierTableResult build_fourier_table(const std::function<std::complex<double>(double)>& spectrum,
                                       const FourierTableSpec& spec) {
    if (!(spec.s_hi > spec.s_lo)) throw ParameterError("spectrum support must have s_hi > s_lo");
    if (!(spec.target_dx > 0.0) || !(spec.half_range > 0.0)) throw ParameterError("table spacing and range must be positive");
    if (spec.sign != 1 && spec.sign != -1) throw ParameterError("sign must be +1 or -1");

    const double width = spec.s_hi - spec.s_lo;
    // The trapezoid sum is 2pi/ds periodic in x; keep the period at least 4x the half range.
    const double ds_alias = std::numbers::pi / (2.0 * spec.half_range);
    std::size_t intervals = std::max<std::size_t>(spec.min_spectrum_points, 8);
    intervals = std::max(intervals, static_cast<std::size_t>(std::ceil(width / ds_alias)));
    const double ds = width / static_cast<double>(intervals);

    const std::size_t n = next_pow2(2.0 * std::numbers::pi / (ds * spec.target_dx));
    const double dx = 2.0 * std::numbers::pi / (static_cast<double>(n) * ds);
    const auto q_max = static_cast<std::size_t>(std::floor(spec.half_range / dx)) + 2;
    if (2 * q_max + 1 > n) throw NumericError("fourier table: FFT too short for the requested range");

    FftBuffer fft(n);
    fftw_complex* buf = fft.data;
    {
        std::lock_guard<std::mutex> lock(planner_mutex());
        fft.plan = fftw_plan_dft_1d(static_cast<int>(n), buf, buf, spec.sign < 0 ? FFTW_FORWARD : FFTW_BACKWARD,
                                    FFTW_ESTIMATE);
    }
    std::fill(reinterpret_cast<double*>(buf), reinterpret_cast<double*>(buf) + 2 * n, 0.0);
    for (std::size_t k = 0; k <= intervals; ++k) {
        const double s = (k == intervals) ? spec.s_hi : spec.s_lo + ds * static_cast<double>(k);
        std::complex<double> f = spectrum(s);
        if (k == 0 || k == intervals) f *= 0.5;
        const std::size_t slot = k % n;  // folding is exact: the kernel is n-periodic in k
        buf[slot][0] += f.real();
        buf[slot][1] += f.imag();
    }
    fftw_execute(fft.plan);

    FourierTableResult out;
    out.fft_size = n;
    out.spectrum_points = intervals + 1;
    std::vector<double> values(2 * q_max + 1);
    const double scale = ds / (2.0 * std::numbers::pi);
    for (std::ptrdiff_t q = -static_cast<std::ptrdiff_t>(q_max); q <= static_cast<std::ptrdiff_t>(q_max); ++q) {
        const std::size_t slot = q >= 0 ? static_cast<std::size_t>(q) : n - static_cast<std::size_t>(-q);
        const double x = dx * static_cast<double>(q);
        const std::complex<double> phase = std::polar(scale, spec.sign * spec.s_lo * x);
        const std::complex<double> t = phase * std::complex<double>(buf[slot][0], buf[slot][1]);
        values[static_cast<std::size_t>(q + static_cast<std::ptrdiff_t>(q_max))] = t.real();
        out.max_imag_residue = std::max(out.max_imag_residue, std::abs(t.imag()));
        out.max_abs_value = std::max(out.max_abs_value, std::abs(t.real()));
    }
    out.table = CubicTable(dx, std::move(values));
    return out;
}


std::vector<std::complex<double>> fourier_coefficients(const std::function<std::complex<double>(double)>& spectrum,
                                                       double support, std::size_t L, std::size_t min_points) {
    if (!(support > 0.0)) throw ParameterError("spectrum support must be positive");
    const std::size_t p = next_pow2(static_cast<double>(std::max(4 * (L + 1), min_points)));
    const double ds = 2.0 * std::numbers::pi / static_cast<double>(p);
    const auto k_max = static_cast<std::ptrdiff_t>(std::ceil(support / ds));
    FftBuffer fft(p);
    fftw_complex* buf = fft.data;
    {
        std::lock_guard<std::mutex> lock(planner_mutex());
        fft.plan = fftw_plan_dft_1d(static_cast<int>(p), buf, buf, FFTW_FORWARD, FFTW_ESTIMATE);
    }
    std::fill(reinterpret_cast<double*>(buf), reinterpret_cast<double*>(buf) + 2 * p, 0.0);
    const auto period = static_cast<std::ptrdiff_t>(p);
    for (std::ptrdiff_t k = -k_max; k <= k_max; ++k) {
        const std::complex<double> f = spectrum(ds * static_cast<double>(k));
        const auto slot = static_cast<std::size_t>(((k % period) + period) % period);
        buf[slot][0] += f.real();
        buf[slot][1] += f.imag();
    }
    fftw_execute(fft.plan);
    std::vector<std::complex<double>> out(2 * L + 1);
    const double scale = ds / (2.0 * std::numbers::pi);
    for (std::ptrdiff_t l = -static_cast<std::ptrdiff_t>(L); l <= static_cast<std::ptrdiff_t>(L); ++l) {
        const auto slot = static_cast<std::size_t>(((l % period) + period) % period);
        out[static_cast<std::size_t>(l + static_cast<std::ptrdiff_t>(L))] = scale * std::complex<double>(buf[slot][0], buf[slot][1]);
    }
    return out;
}

}  // namespace voldens
