#include "voldens/estimate_report.hpp"

#include <algorithm>

#include "voldens/error.hpp"

namespace voldens {

void EstimateReport::set_config(std::string key, std::string value) {
    auto it = std::find_if(config.begin(), config.end(), [&](const auto& kv) { return kv.first == key; });
    if (it != config.end()) it->second = std::move(value);
    else config.emplace_back(std::move(key), std::move(value));
}

void EstimateReport::set_diagnostic(std::string key, double value) {
    auto it = std::find_if(diagnostics.begin(), diagnostics.end(), [&](const auto& kv) { return kv.first == key; });
    if (it != diagnostics.end()) it->second = value;
    else diagnostics.emplace_back(std::move(key), value);
}

bool EstimateReport::has_diagnostic(std::string_view key) const {
    return std::any_of(diagnostics.begin(), diagnostics.end(), [&](const auto& kv) { return kv.first == key; });
}

double EstimateReport::diagnostic(std::string_view key) const {
    for (const auto& [k, v] : diagnostics)
        if (k == key) return v;
    throw ConfigError("no diagnostic named '" + std::string(key) + "'");
}

}  // namespace voldens
