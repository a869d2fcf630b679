#pragma once

#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "voldens/density_grid.hpp"

namespace voldens {

/// Estimator output bundle: the density grid, an echo of the configuration
/// that produced it, and named numeric diagnostics (insertion ordered).
struct EstimateReport {
    DensityGrid density;
    std::vector<std::pair<std::string, std::string>> config;
    std::vector<std::pair<std::string, double>> diagnostics;
    std::vector<std::string> warnings;

    void set_config(std::string key, std::string value);
    void set_diagnostic(std::string key, double value);
    /// Throws ConfigError when absent.
    double diagnostic(std::string_view key) const;
    bool has_diagnostic(std::string_view key) const;
};

}  // namespace voldens
