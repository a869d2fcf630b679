#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <queue>
#include <string>
#include <type_traits>
#include <vector>

#include "voldens/error.hpp"

namespace voldens::quadrature {

/// Result of a Gauss-Kronrod pass over one interval.
template <class T>
struct Segment {
    double a;
    double b;
    T value;
    double error;
    bool operator<(const Segment& other) const { return error < other.error; }
};

namespace detail {

// 15-point Kronrod extension of the 7-point Gauss rule (QUADPACK qk15 tables).
inline constexpr std::array<double, 8> kNodes = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851, 0.864864423359769072789712788640926,
    0.741531185599394439863864773280788, 0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr std::array<double, 8> kKronrodWeights = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204, 0.104790010322250183839876322541518,
    0.140653259715525918745189590510238, 0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr std::array<double, 4> kGaussWeights = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780, 0.381830050505118944950369775488975,
    0.417959183673469387755102040816327};

template <class T>
double magnitude(const T& v) {
    return std::abs(v);
}

template <class F>
auto kronrod15(F& f, double a, double b) {
    using T = std::invoke_result_t<F&, double>;
    const double centre = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    const T fc = f(centre);
    T kronrod = fc * kKronrodWeights[7];
    T gauss = fc * kGaussWeights[3];
    for (int j = 0; j < 7; ++j) {
        const double dx = half * kNodes[j];
        const T f1 = f(centre - dx);
        const T f2 = f(centre + dx);
        kronrod += (f1 + f2) * kKronrodWeights[j];
        if (j % 2 == 1) gauss += (f1 + f2) * kGaussWeights[j / 2];
    }
    Segment<T> seg{a, b, kronrod * half, magnitude(T((kronrod - gauss) * half))};
    return seg;
}

}  // namespace detail

/// Globally adaptive 15-point Gauss-Kronrod on [a, b] (QUADPACK qag scheme).
/// Works for real and complex integrands. Stops when the summed error
/// estimate is below max(abs_tol, rel_tol * |integral|); throws NumericError
/// when `max_segments` bisections do not get there.
template <class F>
auto integrate(F&& f, double a, double b, double rel_tol = 1e-10, double abs_tol = 1e-300,
               std::size_t max_segments = 4000) {
    using T = std::invoke_result_t<F&, double>;
    if (a == b) return T{};
    if (!std::isfinite(a) || !std::isfinite(b)) throw NumericError("quadrature bounds must be finite");

    std::priority_queue<Segment<T>> heap;
    auto first = detail::kronrod15(f, a, b);
    T total = first.value;
    double total_error = first.error;
    heap.push(first);

    auto converged = [&] { return total_error <= std::max(abs_tol, rel_tol * detail::magnitude(total)); };
    while (!converged()) {
        if (heap.size() >= max_segments) {
            throw NumericError("quadrature did not converge on [" + std::to_string(a) + ", " + std::to_string(b) +
                               "]: error estimate " + std::to_string(total_error));
        }
        Segment<T> worst = heap.top();
        heap.pop();
        const double mid = 0.5 * (worst.a + worst.b);
        auto left = detail::kronrod15(f, worst.a, mid);
        auto right = detail::kronrod15(f, mid, worst.b);
        total += left.value + right.value - worst.value;
        total_error += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
    }
    // Re-sum from the leaves to drop accumulated cancellation in `total`.
    T sum{};
    while (!heap.empty()) {
        sum += heap.top().value;
        heap.pop();
    }
    if (!std::isfinite(detail::magnitude(sum))) throw NumericError("quadrature produced a non-finite value");
    return sum;
}

/// Splits [a, b] into `panels` equal pieces and integrates each adaptively.
/// For oscillatory integrands whose period is much shorter than b - a.
template <class F>
auto integrate_panels(F&& f, double a, double b, int panels, double rel_tol = 1e-10, double abs_tol = 1e-300) {
    using T = std::invoke_result_t<F&, double>;
    T acc{};
    const double width = (b - a) / panels;
    for (int p = 0; p < panels; ++p) {
        const double lo = a + width * p;
        const double hi = (p + 1 == panels) ? b : lo + width;
        acc += integrate(f, lo, hi, rel_tol, abs_tol / panels);
    }
    return acc;
}

}  // namespace voldens::quadrature
