#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "voldens/density_grid.hpp"
#include "voldens/kernel_deconv.hpp"
#include "voldens/ppe.hpp"
#include "voldens/svsim.hpp"
#include "voldens/wavelet_deconv.hpp"

namespace voldens {

/// Trapezoid integral of (estimate - truth)^2; abscissae must match exactly.
double mise(const DensityGrid& estimate, const DensityGrid& truth);

/// Interior strict local maxima whose topographic prominence exceeds
/// `prominence_floor`, counted on the clipped and renormalised grid.
int mode_count(const DensityGrid& grid, double prominence_floor = 0.02);

struct NormalFit {
    double mean = 0.0;
    double variance = 0.0;
    DensityGrid fitted;
};

/// Mean and variance of the clipped, renormalised grid and the matching normal on the same abscissae.
NormalFit normal_fit(const DensityGrid& grid);

/// Mean, standard error and median of a sample.
struct Summary {
    double mean = 0.0;
    double standard_error = 0.0;
    double median = 0.0;
    std::size_t count = 0;
};
Summary summarize(std::vector<double> values);

/// Y_i = xi_i + log Z_i^2 with xi_i iid from `f` (Z_i = 0 if noise is None).
std::vector<double> simulate_pure_convolution(const NormalMixture& f, std::size_t n, std::uint64_t seed,
                                              NoiseKind noise = NoiseKind::LogChiSquare);

enum class Metric { PointError, Mise, ModeCount, MomentFit };

struct ExperimentSpec {
    /// "ou-exp", "regime-switch" (simulated SV paths) or "pure-convolution" (iid xi + noise).
    std::string scenario = "pure-convolution";
    std::optional<ScenarioConfig> scenario_config;  ///< overrides the preset for SV scenarios
    NormalMixture truth = NormalMixture::normal(0.0, 1.0);  ///< pure-convolution only
    std::size_t n = 1000;
    std::string estimator = "kernel";  ///< kernel | wavelet | ppe
    double bandwidth = 0.5;            ///< kernel
    WaveletConfig wavelet;
    PpeConfig ppe;
    std::size_t replications = 20;
    std::uint64_t seed_base = 1;
    std::vector<Metric> metrics = {Metric::PointError, Metric::Mise, Metric::ModeCount, Metric::MomentFit};
    double point = 0.0;
    double grid_lo = -5.0;
    double grid_hi = 5.0;
    std::size_t grid_points = 401;
    double prominence = 0.02;
};

/// Preset specs named like their scenarios.
ExperimentSpec experiment_preset(const std::string& name);

struct ExperimentReport {
    std::vector<std::string> columns;  ///< metric columns; the CSV prepends "seed"
    std::vector<std::uint64_t> seeds;  ///< one per row
    std::vector<std::vector<double>> rows;
    std::vector<std::pair<std::string, Summary>> aggregate;

    void write_csv(std::ostream& out) const;
    void write_summary(std::ostream& out) const;
};

/// Seed of replication r: mix_seed(seed_base + r).
std::uint64_t replication_seed(std::uint64_t base, std::size_t r);

/// Log-squared observations of one replication of the spec's scenario plus its truth.
std::vector<double> experiment_sample(const ExperimentSpec& spec, std::uint64_t seed, NormalMixture* truth = nullptr);

/// Deterministic for a fixed spec; rows in replication order.
ExperimentReport run_experiment(const ExperimentSpec& spec);

}  // namespace voldens
