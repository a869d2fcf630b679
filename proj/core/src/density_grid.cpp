#include "voldens/density_grid.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "voldens/error.hpp"

namespace voldens {

DensityGrid::DensityGrid(std::vector<double> abscissae, std::vector<double> values, bool nonneg)
    : x(std::move(abscissae)), value(std::move(values)), nonnegative(nonneg) {
    validate();
}

void DensityGrid::validate() const {
    if (x.size() != value.size()) {
        throw GridMismatchError("abscissae and values differ in length (" + std::to_string(x.size()) +
                                " vs " + std::to_string(value.size()) + ")");
    }
    for (std::size_t i = 1; i < x.size(); ++i) {
        if (!(x[i] > x[i - 1])) {
            throw GridMismatchError("abscissae must be strictly increasing (index " + std::to_string(i) + ")");
        }
    }
}

std::vector<double> linspace(double lo, double hi, std::size_t count) {
    if (count < 2) throw ParameterError("linspace needs at least two points");
    if (!(hi > lo)) throw ParameterError("linspace needs hi > lo");
    std::vector<double> out(count);
    const double step = (hi - lo) / static_cast<double>(count - 1);
    for (std::size_t i = 0; i < count; ++i) out[i] = lo + step * static_cast<double>(i);
    out.back() = hi;
    return out;
}

double trapezoid(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) throw GridMismatchError("trapezoid: length mismatch");
    double acc = 0.0;
    for (std::size_t i = 1; i < x.size(); ++i) acc += 0.5 * (x[i] - x[i - 1]) * (y[i] + y[i - 1]);
    return acc;
}

double integral(const DensityGrid& grid) { return trapezoid(grid.x, grid.value); }

DensityGrid clip_and_renormalize(const DensityGrid& grid) {
    DensityGrid out = grid;
    for (double& v : out.value) v = std::max(v, 0.0);
    const double mass = integral(out);
    if (!(mass > 0.0) || !std::isfinite(mass)) throw DataError("density has no positive mass after clipping");
    for (double& v : out.value) v /= mass;
    out.nonnegative = true;
    return out;
}

}  // namespace voldens
