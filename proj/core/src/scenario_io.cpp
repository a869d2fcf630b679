#include <charconv>
#include <istream>
#include <ostream>
#include <string>

#include "voldens/csv.hpp"
#include "voldens/error.hpp"
#include "voldens/svsim.hpp"

namespace voldens {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

double as_double(const std::string& key, const std::string& v) {
    try {
        return csv::parse_double(v);
    } catch (const ParseError&) {
        throw ConfigError("key '" + key + "': expected a number, got '" + v + "'");
    }
}

std::uint64_t as_uint(const std::string& key, const std::string& v) {
    std::uint64_t out = 0;
    auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc{} || ptr != v.data() + v.size() || v.empty()) {
        throw ConfigError("key '" + key + "': expected a non-negative integer, got '" + v + "'");
    }
    return out;
}

// Applies `ou.<field>`-style keys; returns false for keys it does not own.
bool apply_ou(OuParams& p, std::string_view field, const std::string& key, const std::string& v) {
    if (field == "b") p.b = as_double(key, v);
    else if (field == "mu") p.mu = as_double(key, v);
    else if (field == "a") p.a = as_double(key, v);
    else if (field == "start") {
        if (v == "stationary") p.stationary_start = true;
        else if (v == "fixed") p.stationary_start = false;
        else throw ConfigError("key '" + key + "': expected stationary|fixed");
    } else if (field == "x0") p.x0 = as_double(key, v);
    else return false;
    return true;
}

void write_ou(std::ostream& out, std::string_view prefix, const OuParams& p) {
    out << prefix << ".b = " << csv::format(p.b) << '\n';
    out << prefix << ".mu = " << csv::format(p.mu) << '\n';
    out << prefix << ".a = " << csv::format(p.a) << '\n';
    out << prefix << ".start = " << (p.stationary_start ? "stationary" : "fixed") << '\n';
    out << prefix << ".x0 = " << csv::format(p.x0) << '\n';
}

}  // namespace

KeyValues parse_key_values(std::istream& in) {
    KeyValues kv;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::string_view s = line;
        if (auto hash = s.find('#'); hash != std::string_view::npos) s = s.substr(0, hash);
        s = trim(s);
        if (s.empty()) continue;
        const auto eq = s.find('=');
        if (eq == std::string_view::npos) throw ParseError("line " + std::to_string(line_no) + ": expected key = value");
        const std::string key(trim(s.substr(0, eq)));
        const std::string value(trim(s.substr(eq + 1)));
        if (key.empty()) throw ParseError("line " + std::to_string(line_no) + ": empty key");
        if (!kv.emplace(key, value).second) throw ParseError("line " + std::to_string(line_no) + ": duplicate key '" + key + "'");
    }
    return kv;
}

ScenarioConfig scenario_from_key_values(const KeyValues& kv) {
    ScenarioConfig c;
    if (auto it = kv.find("preset"); it != kv.end()) c = scenario_preset(it->second);
    for (const auto& [key, v] : kv) {
        const std::string_view k = key;
        if (k == "preset") continue;
        if (k == "model") c.model = parse_model(v);
        else if (k == "drift") c.drift = as_double(key, v);
        else if (k == "delta") c.delta = as_double(key, v);
        else if (k == "n") c.n = as_uint(key, v);
        else if (k == "substeps") c.substeps = as_uint(key, v);
        else if (k == "seed.volatility") c.volatility_seed = as_uint(key, v);
        else if (k == "seed.price") c.price_seed = as_uint(key, v);
        else if (k.starts_with("ou.") && apply_ou(c.ou, k.substr(3), key, v)) {
        } else if (k.starts_with("regime0.") && apply_ou(c.regime.regime0, k.substr(8), key, v)) {
        } else if (k.starts_with("regime1.") && apply_ou(c.regime.regime1, k.substr(8), key, v)) {
        } else if (k == "lambda01") c.regime.lambda01 = as_double(key, v);
        else if (k == "lambda10") c.regime.lambda10 = as_double(key, v);
        else if (k == "ar.function") {
            if (v == "linear") c.ar.m.kind = RegressionFunction::Kind::Linear;
            else if (v == "tanh") c.ar.m.kind = RegressionFunction::Kind::Tanh;
            else throw ConfigError("key 'ar.function': expected linear|tanh");
        } else if (k == "ar.slope") c.ar.m.slope = as_double(key, v);
        else if (k == "ar.intercept") c.ar.m.intercept = as_double(key, v);
        else if (k == "ar.scale") c.ar.m.scale = as_double(key, v);
        else if (k == "ar.sd") c.ar.innovation_sd = as_double(key, v);
        else if (k == "ar.correlation") c.ar.noise_correlation = as_double(key, v);
        else if (k == "ar.burn_in") c.ar.burn_in = as_uint(key, v);
        else throw ConfigError("unknown scenario key '" + key + "'");
    }
    c.validate();
    return c;
}

ScenarioConfig parse_scenario(std::istream& in) { return scenario_from_key_values(parse_key_values(in)); }

void write_scenario(std::ostream& out, const ScenarioConfig& c) {
    out << "model = " << model_name(c.model) << '\n';
    out << "drift = " << csv::format(c.drift) << '\n';
    out << "delta = " << csv::format(c.delta) << '\n';
    out << "n = " << c.n << '\n';
    out << "substeps = " << c.substeps << '\n';
    out << "seed.volatility = " << c.volatility_seed << '\n';
    out << "seed.price = " << c.price_seed << '\n';
    write_ou(out, "ou", c.ou);
    write_ou(out, "regime0", c.regime.regime0);
    write_ou(out, "regime1", c.regime.regime1);
    out << "lambda01 = " << csv::format(c.regime.lambda01) << '\n';
    out << "lambda10 = " << csv::format(c.regime.lambda10) << '\n';
    out << "ar.function = " << (c.ar.m.kind == RegressionFunction::Kind::Linear ? "linear" : "tanh") << '\n';
    out << "ar.slope = " << csv::format(c.ar.m.slope) << '\n';
    out << "ar.intercept = " << csv::format(c.ar.m.intercept) << '\n';
    out << "ar.scale = " << csv::format(c.ar.m.scale) << '\n';
    out << "ar.sd = " << csv::format(c.ar.innovation_sd) << '\n';
    out << "ar.correlation = " << csv::format(c.ar.noise_correlation) << '\n';
    out << "ar.burn_in = " << c.ar.burn_in << '\n';
}

ScenarioConfig scenario_preset(std::string_view name) {
    ScenarioConfig c;
    if (name == "ou-exp") {
        c.model = VolatilityModel::OuExp;
        c.ou = {0.5, 0.0, 1.0};
        c.delta = 0.1;
        c.n = 5000;
    } else if (name == "regime-switch") {
        c.model = VolatilityModel::RegimeSwitchExp;
        c.regime.regime0 = {2.0, -2.0, 1.0};
        c.regime.regime1 = {2.0, 2.0, 1.0};
        c.regime.lambda01 = 1.0;
        c.regime.lambda10 = 1.0;
        c.delta = 0.1;
        c.n = 5000;
    } else if (name == "nonlinear-ar") {
        c.model = VolatilityModel::NonlinearAr;
        c.ar.m = {RegressionFunction::Kind::Linear, 0.5, 0.0, 1.0};
        c.ar.innovation_sd = 1.0;
        c.delta = 1.0;
        c.n = 20000;
        c.substeps = 1;
    } else if (name == "aex-like") {
        // daily data: log sigma^2 around log(1e-4), slowly mean reverting
        c.model = VolatilityModel::OuExp;
        c.ou = {0.05, -9.2, 0.2};
        c.drift = 0.000636;
        c.delta = 1.0;
        c.n = 2600;
    } else {
        throw ConfigError("unknown scenario preset '" + std::string(name) + "'");
    }
    c.volatility_seed = 20240101;
    c.price_seed = 20240102;
    return c;
}

void write_price_csv(std::ostream& out, const ObservationSeries& series) {
    csv::Writer w(out, {"t", "S"});
    for (std::size_t i = 0; i < series.log_price.size(); ++i)
        w.row({series.delta * static_cast<double>(i), series.log_price[i]});
}

void write_series_csv(std::ostream& out, const ObservationSeries& series) {
    const auto x = series.normalized_increments();
    const auto y = log_squared_transform(x);
    csv::Writer w(out, {"i", "X", "Y"});
    for (std::size_t i = 0; i < x.size(); ++i) w.row({static_cast<double>(i + 1), x[i], y.y[i]});
}

}  // namespace voldens
