#include <benchmark/benchmark.h>

#include <map>
#include <vector>

#include "voldens/density_grid.hpp"
#include "voldens/kernel_deconv.hpp"
#include "voldens/metrics.hpp"
#include "voldens/ppe.hpp"
#include "voldens/wavelet_deconv.hpp"

using namespace voldens;

namespace {

const std::vector<double>& sample(std::size_t n) {
    static std::map<std::size_t, std::vector<double>> cache;
    auto& y = cache[n];
    if (y.empty()) y = simulate_pure_convolution(NormalMixture::normal(0.0, 1.0), n, 42);
    return y;
}

}  // namespace

static void BM_KernelTable(benchmark::State& state) {
    for (auto _ : state) {
        DeconvKernel k(0.5, static_cast<double>(state.range(0)));
        benchmark::DoNotOptimize(k.table().size());
    }
}
BENCHMARK(BM_KernelTable)->Arg(100)->Arg(400)->Unit(benchmark::kMillisecond);

static void BM_KernelSums(benchmark::State& state) {
    const auto& y = sample(static_cast<std::size_t>(state.range(0)));
    const auto grid = linspace(-5.0, 5.0, 512);
    const double h = 0.5;
    const DeconvKernel k(h, kernel_argument_range(y, grid, h) * 1.05 + 1.0);
    for (auto _ : state) benchmark::DoNotOptimize(kernel_sums(k, y, grid));
    state.SetItemsProcessed(state.iterations() * state.range(0) * 512);
}
BENCHMARK(BM_KernelSums)->Arg(1000)->Arg(10000)->Unit(benchmark::kMillisecond);

static void BM_UmTable(benchmark::State& state) {
    for (auto _ : state) {
        UmTable t(static_cast<int>(state.range(0)), NoiseKind::LogChiSquare, 128.0);
        benchmark::DoNotOptimize(t(0.0));
    }
}
BENCHMARK(BM_UmTable)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

static void BM_WaveletCoefficients(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const auto& y = sample(n);
    const auto table = shared_um_table(0, NoiseKind::LogChiSquare, 128.0 + static_cast<double>(n));
    for (auto _ : state) benchmark::DoNotOptimize(wavelet_coefficients(y, 0, n, *table));
}
BENCHMARK(BM_WaveletCoefficients)->Arg(1000)->Arg(4000)->Unit(benchmark::kMillisecond);

static void BM_PpeCoefficients(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const auto& y = sample(n);
    for (auto _ : state) benchmark::DoNotOptimize(ppe_coefficients(y, 1, n));
}
BENCHMARK(BM_PpeCoefficients)->Arg(1000)->Arg(10000)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
