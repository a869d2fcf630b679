#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "voldens/error.hpp"
#include "voldens/svsim.hpp"

namespace voldens::cli {

/// Everything one `voldens` run needs. Exactly one of input_csv / scenario is set.
struct PipelineConfig {
    std::optional<std::filesystem::path> input_csv;
    std::optional<std::string> scenario;  ///< preset name or path to a scenario key = value file
    std::string price_column;             ///< empty: the only column, else "price" or "close"
    bool demean = false;
    double delta = 1.0;
    std::string estimator = "kernel";     ///< kernel | wavelet | ppe | regression
    std::filesystem::path out_dir = "voldens-out";

    std::optional<double> bandwidth;
    std::optional<double> gamma;          ///< kernel default 2, regression default 3.5
    std::size_t grid_points = 512;
    std::optional<int> level;
    std::string truncation = "n";         ///< n | log-power | <integer>
    double log_power = 2.0;
    double kappa = 1.0;
    std::optional<std::size_t> kn;
    double denominator_floor = 1e-4;
    double prominence = 0.02;

    /// Throws ConfigError (or UnknownEstimator) when inconsistent.
    void validate() const;
};

/// Raised for an estimator name outside the supported set; the CLI maps it to exit code 2.
struct UnknownEstimator : Error {
    explicit UnknownEstimator(const std::string& m) : Error("unknown-estimator", m) {}
};

/// Applies `key = value` entries (flag names without the leading dashes) onto `config`.
void apply_key_values(PipelineConfig& config, const KeyValues& kv);

/// Round-trippable key = value echo of the config.
void write_config(std::ostream& out, const PipelineConfig& config);

/// Price CSV (header row, strictly positive prices) to log prices on spacing delta.
ObservationSeries ingest_prices(std::istream& in, double delta, const std::string& column = "");

/// Subtracts the mean log return: S'_i = S_i - i (S_n - S_0) / n. Idempotent.
ObservationSeries demean(const ObservationSeries& series);

struct PipelineResult {
    std::vector<std::filesystem::path> files;
    std::size_t n = 0;
};

/// Loads or simulates the series, runs the estimator and writes density.csv,
/// diagnostics.csv, config.txt and plot.gp (plus coefficients.csv for wavelet
/// and levels.csv for ppe) into out_dir.
PipelineResult run_pipeline(const PipelineConfig& config);

}  // namespace voldens::cli
