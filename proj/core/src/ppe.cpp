#include "voldens/ppe.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <string>
#include <tuple>

#include "voldens/csv.hpp"
#include "voldens/error.hpp"
#include "voldens/parallel.hpp"
#include "voldens/quadrature.hpp"

namespace voldens {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr int kMoments = 65;

void check_level(int L) {
    if (L < 1) throw ParameterError("level L must be at least 1");
    if (L > kMaxPpeLevel) {
        throw OverflowError("level L = " + std::to_string(L) + " exceeds the double-precision limit " +
                            std::to_string(kMaxPpeLevel));
    }
}

// sin(pi u) with exact zeros at integers.
double sinpi(double u) {
    const double k = std::nearbyint(u);
    const double r = u - k;
    const double s = std::sin(kPi * r);
    return std::fmod(k, 2.0) == 0.0 ? s : -s;
}

// 1/phi_k at complex argument: sqrt(pi) 2^{-is} / Gamma(1/2 + is).
std::complex<double> inverse_charfn_complex(std::complex<double> s) {
    const std::complex<double> i(0.0, 1.0);
    return std::exp(0.5 * std::log(kPi) - i * s * std::numbers::ln2 - complex_log_gamma(0.5 + i * s));
}

double binomial(int n, int k) {
    double r = 1.0;
    for (int i = 1; i <= k; ++i) r = r * static_cast<double>(n - k + i) / static_cast<double>(i);
    return r;
}

}  // namespace

double sinc_basis(int L, long j, double x) {
    if (L < 1) throw ParameterError("level L must be at least 1");
    const double u = static_cast<double>(L) * x - static_cast<double>(j);
    const double root = std::sqrt(static_cast<double>(L));
    if (u == 0.0) return root;
    return root * sinpi(u) / (kPi * u);
}

double u_basis(double y, int L, long j, NoiseKind noise) {
    check_level(L);
    const double b = kPi * L;
    const double inv_root = 1.0 / std::sqrt(static_cast<double>(L));
    const double shift = static_cast<double>(j) / static_cast<double>(L);
    auto integrand = [&](double s) {
        const std::complex<double> basis = std::polar(inv_root, -s * shift);
        return std::polar(1.0, s * y) * basis * inverse_noise_charfn(s, noise);
    };
    const double scale = std::abs(inverse_noise_charfn(b, noise));
    const int panels = std::max(2, static_cast<int>(std::ceil(b * (std::abs(y) + std::abs(shift) + 1.0) / (2.0 * kPi))));
    const std::complex<double> v =
        quadrature::integrate_panels(integrand, -b, b, panels, 1e-11, 1e-15 * scale * b) / (2.0 * kPi);
    if (std::abs(v.imag()) > 1e-8 * std::abs(v.real()) + 1e-12 * scale) {
        throw NumericError("u_{L,j}(" + csv::format(y) + ") has imaginary residue " + csv::format(v.imag()));
    }
    return v.real();
}

std::vector<std::complex<double>> edge_derivatives(int L, int count, NoiseKind noise) {
    check_level(L);
    std::vector<std::complex<double>> d(static_cast<std::size_t>(count));
    if (count <= 0) return d;
    if (noise == NoiseKind::None) {
        d[0] = 1.0;
        return d;
    }
    const double b = kPi * L;
    constexpr int points = 128;
    constexpr double radius = 2.0;
    std::vector<std::complex<double>> g(points);
    for (int p = 0; p < points; ++p) g[p] = inverse_charfn_complex(b + std::polar(radius, 2.0 * kPi * p / points));
    double factorial = 1.0;
    for (int k = 0; k < count; ++k) {
        if (k > 0) factorial *= k;
        std::complex<double> acc = 0.0;
        for (int p = 0; p < points; ++p) acc += g[p] * std::polar(1.0, -2.0 * kPi * k * p / points);
        d[static_cast<std::size_t>(k)] = acc / static_cast<double>(points) * factorial / std::pow(radius, k);
    }
    return d;
}

UBasisTable::UBasisTable(int L, double range, NoiseKind noise, UTableOptions options)
    : L_(L), noise_(noise), d_(edge_derivatives(L, kTerms, noise)) {
    check_level(L);
    if (!(range > 0.0)) throw ParameterError("table range must be positive");
    const double b = kPi * L;
    const double inv_root = 1.0 / std::sqrt(static_cast<double>(L));
    FourierTableSpec spec;
    spec.s_lo = -b;
    spec.s_hi = b;
    spec.min_spectrum_points = options.spectrum_points;
    spec.target_dx = 1.0 / (options.points_per_unit * L);
    spec.half_range = range;
    spec.sign = 1;
    auto built = build_fourier_table([&](double s) { return inv_root * inverse_noise_charfn(s, noise); }, spec);
    if (built.max_imag_residue > 1e-8 * built.max_abs_value) {
        throw NumericError("u table has imaginary residue " + csv::format(built.max_imag_residue));
    }

    // The spectrum does not vanish at +-b, so the trapezoid sum carries the
    // Euler-Maclaurin endpoint terms; subtract the first three.
    const double ds = 2.0 * b / static_cast<double>(built.spectrum_points - 1);
    const double dx = built.table.dx();
    std::vector<double> values(built.table.values().begin(), built.table.values().end());
    const auto centre = static_cast<std::ptrdiff_t>(values.size() / 2);
    constexpr std::array<double, 3> em = {1.0 / 12.0, -1.0 / 720.0, 1.0 / 30240.0};
    std::array<std::complex<double>, 6> f{};
    for (std::size_t r = 0; r < f.size(); ++r) f[r] = d_[r] * inv_root;
    for (std::ptrdiff_t q = -centre; q <= centre; ++q) {
        const double x = dx * static_cast<double>(q);
        const std::complex<double> ix(0.0, x);
        const std::complex<double> phase = std::polar(1.0, b * x);
        double corr = 0.0;
        double h_pow = ds * ds;
        for (int k = 1; k <= 3; ++k) {
            const int m = 2 * k - 1;
            // H^{(m)}(b) for H(s) = F(s) e^{isx}
            std::complex<double> hm = 0.0;
            std::complex<double> ixp = 1.0;
            for (int r = m; r >= 0; --r) {
                hm += binomial(m, r) * f[static_cast<std::size_t>(r)] * ixp;
                ixp *= ix;
            }
            corr += em[static_cast<std::size_t>(k - 1)] * h_pow * 2.0 * (hm * phase).real();
            h_pow *= ds * ds;
        }
        values[static_cast<std::size_t>(q + centre)] -= corr / (2.0 * kPi);
    }
    table_ = CubicTable(dx, std::move(values));
}

double UBasisTable::asymptotic(double z) const {
    const double b = kPi * L_;
    const std::complex<double> iz(0.0, z);
    std::complex<double> acc = 0.0;
    std::complex<double> denom = iz;
    for (int k = 0; k < kTerms; ++k) {
        const double sign = (k % 2) ? -1.0 : 1.0;
        acc += sign * d_[static_cast<std::size_t>(k)] / denom;
        denom *= iz;
    }
    const double value = 2.0 * (acc * std::polar(1.0, b * z)).real();
    return value / (2.0 * kPi * std::sqrt(static_cast<double>(L_)));
}

double UBasisTable::operator()(double z) const {
    if (table_.covers(z)) return table_(z);
    if (std::abs(z) >= kAsymptoticFrom) return asymptotic(z);
    return u_basis(z, L_, 0, noise_);
}

std::shared_ptr<const UBasisTable> shared_u_table(int L, double range, NoiseKind noise) {
    using Key = std::tuple<int, int, double>;
    static std::mutex mutex;
    static std::map<Key, std::shared_ptr<const UBasisTable>> cache;
    double bucket = 64.0;
    while (bucket < range) bucket *= 2.0;
    const Key key{L, static_cast<int>(noise), bucket};
    std::lock_guard<std::mutex> lock(mutex);
    if (auto it = cache.find(key); it != cache.end()) return it->second;
    auto table = std::make_shared<const UBasisTable>(L, bucket, noise);
    cache.emplace(key, table);
    return table;
}

std::vector<double> ppe_coefficients(std::span<const double> y, int L, std::size_t K, NoiseKind noise) {
    check_level(L);
    if (y.empty()) throw DataError("empty series");
    const double n = static_cast<double>(y.size());
    double top = 0.0;
    for (double v : y) top = std::max(top, std::abs(v));
    const double scale = top > 0.0 ? top : 1.0;
    // Near j use the table; for |j/L| >= threshold every |Y_i - j/L| >= 40 and
    // 1/(Y - t)^{k+1} expands in powers of Y/t with |Y/t| <= 1/3.
    const double threshold = std::max(3.0 * scale, UBasisTable::kAsymptoticFrom + scale);
    const auto table = shared_u_table(L, threshold + scale + 1.0, noise);
    const double b = kPi * L;

    std::vector<std::complex<double>> moments(kMoments, 0.0);
    for (double v : y) {
        const std::complex<double> e = std::polar(1.0, b * v);
        const double r = v / scale;
        double rp = 1.0;
        for (int p = 0; p < kMoments; ++p) {
            moments[static_cast<std::size_t>(p)] += e * rp;
            rp *= r;
        }
    }
    for (auto& m : moments) m /= n;
    const auto d = table->derivatives();

    const auto Kl = static_cast<long>(K);
    std::vector<double> out(2 * K + 1);
    const double inv_root = 1.0 / std::sqrt(static_cast<double>(L));
    parallel_for(out.size(), [&](std::size_t begin, std::size_t end) {
        for (std::size_t idx = begin; idx < end; ++idx) {
            const long j = static_cast<long>(idx) - Kl;
            const double t = static_cast<double>(j) / static_cast<double>(L);
            if (std::abs(t) < threshold) {
                double acc = 0.0;
                for (double v : y) acc += (*table)(v - t);
                out[idx] = acc / n;
                continue;
            }
            const double ratio = scale / t;
            std::complex<double> acc = 0.0;
            std::complex<double> i_pow(0.0, 1.0);  // i^{k+1}
            double inv_t = -1.0 / t;                // (-1/t)^{k+1}
            for (int k = 0; k < UBasisTable::kTerms; ++k) {
                std::complex<double> series = 0.0;
                double rp = 1.0;
                for (int p = 0; p < kMoments; ++p) {
                    series += binomial(p + k, k) * rp * moments[static_cast<std::size_t>(p)];
                    rp *= ratio;
                }
                const double sign = (k % 2) ? -1.0 : 1.0;
                acc += sign * d[static_cast<std::size_t>(k)] / i_pow * inv_t * series;
                i_pow *= std::complex<double>(0.0, 1.0);
                inv_t *= -1.0 / t;
            }
            const double parity = (j % 2 == 0) ? 1.0 : -1.0;
            out[idx] = parity * acc.real() * inv_root / kPi;
        }
    });
    return out;
}

double contrast(std::span<const double> coefficients) {
    double acc = 0.0;
    for (double a : coefficients) acc += a * a;
    return -acc;
}

double phi_k_integral(double L, NoiseKind noise) {
    if (!(L > 0.0)) throw ParameterError("level L must be positive");
    if (noise == NoiseKind::None) return 2.0 * kPi * L;
    if (L > kMaxPpeLevel) {
        throw OverflowError("Phi_k(L) overflows double precision for L > " + std::to_string(kMaxPpeLevel));
    }
    return 2.0 / kPi * std::sinh(kPi * kPi * L);
}

double penalty(double L, std::size_t n, double kappa, NoiseKind noise) {
    if (!(kappa > 0.0)) throw ParameterError("kappa must be positive");
    if (n < 1) throw ParameterError("n must be positive");
    return kappa * (1.0 + L) * phi_k_integral(L, noise) / static_cast<double>(n);
}

std::vector<int> default_candidates(std::size_t n) {
    if (n < 3) throw ParameterError("level selection needs n >= 3");
    const int top = static_cast<int>(std::floor(std::log(static_cast<double>(n))));
    std::vector<int> out;
    for (int L = 1; L <= std::max(1, top); ++L) out.push_back(L);
    return out;
}

std::vector<double> render_sinc_expansion(std::span<const double> coefficients, int L, std::span<const double> grid) {
    if (coefficients.size() % 2 == 0) throw GridMismatchError("coefficient list must be symmetric (odd length)");
    const auto K = static_cast<long>(coefficients.size() / 2);
    const double root = std::sqrt(static_cast<double>(L));
    std::vector<double> out(grid.size());
    parallel_for(grid.size(), [&](std::size_t begin, std::size_t end) {
        for (std::size_t g = begin; g < end; ++g) {
            const double u = static_cast<double>(L) * grid[g];
            const double k = std::nearbyint(u);
            if (u == k) {
                const long j = static_cast<long>(k);
                out[g] = (j >= -K && j <= K) ? root * coefficients[static_cast<std::size_t>(j + K)] : 0.0;
                continue;
            }
            // psi_{L,j}(x) = sqrt(L) (-1)^j sin(pi u) / (pi (u - j))
            const double s = sinpi(u);
            double acc = 0.0;
            for (long j = -K; j <= K; ++j) {
                const double c = coefficients[static_cast<std::size_t>(j + K)];
                acc += ((j % 2 == 0) ? c : -c) / (u - static_cast<double>(j));
            }
            out[g] = root * s * acc / kPi;
        }
    });
    return out;
}

PpeEstimate select_and_estimate(std::span<const double> y, const PpeConfig& config, std::span<const double> grid) {
    if (y.size() < 3) throw DataError("PPE needs n >= 3");
    if (!(config.kappa > 0.0)) throw ParameterError("kappa must be positive");
    const std::size_t n = y.size();
    PpeEstimate est;
    est.truncation = config.truncation.value_or(n);
    if (est.truncation < 1) throw ParameterError("K_n must be at least 1");
    const std::vector<int> candidates = config.candidates.empty() ? default_candidates(n) : config.candidates;
    if (candidates.empty()) throw ConfigError("empty candidate level set");
    if (std::all_of(candidates.begin(), candidates.end(), [](int L) { return L > kMaxPpeLevel; })) {
        throw ConfigError("every candidate level exceeds the overflow limit " + std::to_string(kMaxPpeLevel));
    }
    for (int L : candidates) check_level(L);

    for (int L : candidates) {
        PpeLevel level;
        level.L = L;
        level.coefficients = ppe_coefficients(y, L, est.truncation, config.noise);
        level.contrast = contrast(level.coefficients);
        level.penalty = penalty(L, n, config.kappa, config.noise);
        level.criterion = level.contrast + level.penalty;
        est.levels.push_back(std::move(level));
    }
    // Ties go to the smallest L.
    std::vector<std::size_t> order(est.levels.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return est.levels[a].L < est.levels[b].L; });
    est.selected = order.front();
    for (std::size_t i : order)
        if (est.levels[i].criterion < est.levels[est.selected].criterion) est.selected = i;

    std::vector<double> x;
    if (grid.empty()) {
        const auto [lo, hi] = std::minmax_element(y.begin(), y.end());
        x = linspace(*lo - 3.0, *hi + 3.0, config.grid_points);
    } else {
        x.assign(grid.begin(), grid.end());
    }
    const auto& chosen = est.chosen();
    auto values = render_sinc_expansion(chosen.coefficients, chosen.L, x);
    auto& r = est.report;
    r.density = DensityGrid(std::move(x), std::move(values), false);
    r.set_config("estimator", "ppe");
    r.set_config("kappa", csv::format(config.kappa));
    r.set_config("truncation", config.truncation ? std::to_string(*config.truncation) : "n");
    r.set_config("noise", config.noise == NoiseKind::None ? "none" : "log-chi-square");
    r.set_diagnostic("n", static_cast<double>(n));
    r.set_diagnostic("selected_level", chosen.L);
    r.set_diagnostic("truncation", static_cast<double>(est.truncation));
    r.set_diagnostic("selected_contrast", chosen.contrast);
    r.set_diagnostic("selected_penalty", chosen.penalty);
    r.set_diagnostic("mass", integral(r.density));
    return est;
}

std::vector<double> sinc_projection_coefficients(const NormalMixture& f, int L, std::size_t K) {
    check_level(L);
    const double b = kPi * L;
    const double inv_root = 1.0 / std::sqrt(static_cast<double>(L));
    auto charfn = [&](double s) {
        std::complex<double> acc = 0.0;
        for (std::size_t i = 0; i < f.weight.size(); ++i)
            acc += f.weight[i] * std::polar(std::exp(-0.5 * f.sd[i] * f.sd[i] * s * s), f.mean[i] * s);
        return acc;
    };
    double reach = 0.0;
    for (std::size_t i = 0; i < f.weight.size(); ++i) reach = std::max(reach, std::abs(f.mean[i]) + 12.0 * f.sd[i]);
    const double threshold = 3.0 * reach;

    // Far j: <psi_{L,j}, f> = (-1)^j / (pi sqrt(L)) int f(x) sin(pi L x) / (x - t) dx,
    // expanded in powers of x/t.
    std::vector<double> moments(kMoments);
    for (int p = 0; p < kMoments; ++p) {
        auto integrand = [&](double x) { return f.pdf(x) * std::pow(x / reach, p) * sinpi(L * x); };
        const int panels = std::max(4, static_cast<int>(std::ceil(2.0 * reach * L)));
        moments[static_cast<std::size_t>(p)] = quadrature::integrate_panels(integrand, -reach, reach, panels, 1e-12, 1e-16);
    }

    const auto Kl = static_cast<long>(K);
    std::vector<double> out(2 * K + 1);
    parallel_for(out.size(), [&](std::size_t begin, std::size_t end) {
        for (std::size_t idx = begin; idx < end; ++idx) {
            const long j = static_cast<long>(idx) - Kl;
            const double t = static_cast<double>(j) / static_cast<double>(L);
            if (std::abs(t) < threshold) {
                auto integrand = [&](double s) { return (std::polar(1.0, -s * t) * charfn(s)).real(); };
                const int panels = std::max(2, static_cast<int>(std::ceil(b * (std::abs(t) + reach) / (2.0 * kPi))));
                out[idx] = inv_root / kPi * quadrature::integrate_panels(integrand, 0.0, b, panels, 1e-12, 1e-15);
                continue;
            }
            double acc = 0.0;
            double rp = 1.0;
            for (int p = 0; p < kMoments; ++p) {
                acc += rp * moments[static_cast<std::size_t>(p)];
                rp *= reach / t;
            }
            const double parity = (j % 2 == 0) ? 1.0 : -1.0;
            out[idx] = -parity * inv_root / (kPi * t) * acc;
        }
    });
    return out;
}

double sinc_projection_ise(std::span<const double> estimate, std::span<const double> truth, double truth_l2_squared) {
    if (estimate.size() != truth.size()) throw GridMismatchError("coefficient lists differ in length");
    double diff = 0.0;
    double captured = 0.0;
    for (std::size_t i = 0; i < estimate.size(); ++i) {
        const double d = estimate[i] - truth[i];
        diff += d * d;
        captured += truth[i] * truth[i];
    }
    return diff + truth_l2_squared - captured;
}

}  // namespace voldens
