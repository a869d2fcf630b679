#include "voldens/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <ostream>
#include <sstream>

#include "voldens/csv.hpp"
#include "voldens/kernel_deconv.hpp"
#include "voldens/metrics.hpp"
#include "voldens/ppe.hpp"
#include "voldens/volreg.hpp"
#include "voldens/wavelet_deconv.hpp"

namespace voldens::cli {

namespace {

bool is_estimator(const std::string& e) { return e == "kernel" || e == "wavelet" || e == "ppe" || e == "regression"; }

double number(const std::string& key, const std::string& v) {
    try {
        return csv::parse_double(v);
    } catch (const ParseError&) {
        throw ConfigError("key '" + key + "': expected a number, got '" + v + "'");
    }
}

std::size_t count(const std::string& key, const std::string& v) {
    const double d = number(key, v);
    if (!(d >= 0.0) || d != std::floor(d)) throw ConfigError("key '" + key + "': expected a non-negative integer");
    return static_cast<std::size_t>(d);
}

bool flag(const std::string& key, const std::string& v) {
    if (v == "true" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "no") return false;
    throw ConfigError("key '" + key + "': expected true|false");
}

std::ofstream open_out(const std::filesystem::path& p) {
    std::ofstream out(p, std::ios::binary);
    if (!out) throw ConfigError("cannot write " + p.string());
    return out;
}

ObservationSeries load_series(const PipelineConfig& c) {
    if (c.input_csv) {
        std::ifstream in(*c.input_csv);
        if (!in) throw ConfigError("cannot read " + c.input_csv->string());
        return ingest_prices(in, c.delta, c.price_column);
    }
    ScenarioConfig sc;
    std::error_code ec;
    if (std::filesystem::is_regular_file(*c.scenario, ec)) {
        std::ifstream in(*c.scenario);
        sc = parse_scenario(in);
    } else {
        sc = scenario_preset(*c.scenario);
    }
    const auto path = simulate_volatility(sc);
    return simulate_price(path, sc);
}

void write_diagnostics(const std::filesystem::path& p, const EstimateReport& r, const std::vector<std::pair<std::string, double>>& extra) {
    auto out = open_out(p);
    csv::Writer w(out, {"key", "value"});
    for (const auto& [k, v] : r.diagnostics) w.row({k, csv::format(v)});
    for (const auto& [k, v] : extra) w.row({k, csv::format(v)});
    for (const auto& warning : r.warnings) w.row({"warning", "\"" + warning + "\""});
}

void write_plot(const std::filesystem::path& p, const std::string& estimator, bool with_fit) {
    auto out = open_out(p);
    out << "# gnuplot " << p.filename().string() << '\n';
    out << "set datafile separator ','\n";
    out << "set terminal pngcairo size 900,560\n";
    if (estimator == "regression") {
        out << "set output 'regression.png'\n";
        out << "set xlabel 'log sigma^2 (lagged)'\nset ylabel 'm(x)'\n";
        out << "plot 'density.csv' using 1:2 skip 1 with lines title 'm estimate'\n";
        return;
    }
    out << "set output 'density.png'\n";
    out << "set xlabel 'log sigma^2'\nset ylabel 'density'\n";
    out << "plot 'density.csv' using 1:2 skip 1 with lines title '" << estimator << " estimate'";
    if (with_fit) out << ", \\\n     'density.csv' using 1:3 skip 1 with lines dashtype 2 title 'normal fit'";
    out << '\n';
}

}  // namespace

void PipelineConfig::validate() const {
    if (input_csv.has_value() == scenario.has_value()) throw ConfigError("give exactly one of --input and --scenario");
    if (!is_estimator(estimator)) {
        throw UnknownEstimator("unknown estimator '" + estimator + "' (expected kernel|wavelet|ppe|regression)");
    }
    if (!(delta > 0.0)) throw ConfigError("delta must be positive");
    if (grid_points < 3) throw ConfigError("grid-points must be at least 3");
    if (bandwidth && !(*bandwidth > 0.0)) throw ConfigError("bandwidth must be positive");
    if (gamma && !(*gamma > 0.0)) throw ConfigError("gamma must be positive");
    if (level && *level < 0) throw ConfigError("level must be non-negative");
    if (truncation != "n" && truncation != "log-power") count("truncation", truncation);
    if (!(kappa > 0.0)) throw ConfigError("kappa must be positive");
    if (out_dir.empty()) throw ConfigError("output directory is empty");
}

void apply_key_values(PipelineConfig& c, const KeyValues& kv) {
    for (const auto& [key, v] : kv) {
        if (key == "input") c.input_csv = v;
        else if (key == "scenario") c.scenario = v;
        else if (key == "price-column") c.price_column = v;
        else if (key == "demean") c.demean = flag(key, v);
        else if (key == "delta") c.delta = number(key, v);
        else if (key == "estimator") c.estimator = v;
        else if (key == "out") c.out_dir = v;
        else if (key == "bandwidth") c.bandwidth = number(key, v);
        else if (key == "gamma") c.gamma = number(key, v);
        else if (key == "grid-points") c.grid_points = count(key, v);
        else if (key == "level") c.level = static_cast<int>(count(key, v));
        else if (key == "truncation") c.truncation = v;
        else if (key == "log-power") c.log_power = number(key, v);
        else if (key == "kappa") c.kappa = number(key, v);
        else if (key == "kn") c.kn = count(key, v);
        else if (key == "denominator-floor") c.denominator_floor = number(key, v);
        else if (key == "prominence") c.prominence = number(key, v);
        else throw ConfigError("unknown config key '" + key + "'");
    }
}

void write_config(std::ostream& out, const PipelineConfig& c) {
    if (c.input_csv) out << "input = " << c.input_csv->string() << '\n';
    if (c.scenario) out << "scenario = " << *c.scenario << '\n';
    if (!c.price_column.empty()) out << "price-column = " << c.price_column << '\n';
    out << "demean = " << (c.demean ? "true" : "false") << '\n';
    out << "delta = " << csv::format(c.delta) << '\n';
    out << "estimator = " << c.estimator << '\n';
    out << "out = " << c.out_dir.string() << '\n';
    if (c.bandwidth) out << "bandwidth = " << csv::format(*c.bandwidth) << '\n';
    if (c.gamma) out << "gamma = " << csv::format(*c.gamma) << '\n';
    out << "grid-points = " << c.grid_points << '\n';
    if (c.level) out << "level = " << *c.level << '\n';
    out << "truncation = " << c.truncation << '\n';
    out << "log-power = " << csv::format(c.log_power) << '\n';
    out << "kappa = " << csv::format(c.kappa) << '\n';
    if (c.kn) out << "kn = " << *c.kn << '\n';
    out << "denominator-floor = " << csv::format(c.denominator_floor) << '\n';
    out << "prominence = " << csv::format(c.prominence) << '\n';
}

ObservationSeries ingest_prices(std::istream& in, double delta, const std::string& column) {
    if (!(delta > 0.0)) throw ConfigError("delta must be positive");
    const auto table = csv::read(in);
    std::size_t col = 0;
    if (!column.empty()) {
        col = table.column(column);
    } else if (table.header.size() > 1) {
        const auto it = std::find_if(table.header.begin(), table.header.end(), [](const std::string& h) {
            std::string lower = h;
            std::transform(lower.begin(), lower.end(), lower.begin(), [](unsigned char ch) { return std::tolower(ch); });
            return lower == "price" || lower == "close";
        });
        if (it == table.header.end()) throw ParseError("several columns and none named price or close; pass --price-column");
        col = static_cast<std::size_t>(it - table.header.begin());
    }
    if (table.rows.size() < 3) throw DataError("price file needs at least 3 rows, got " + std::to_string(table.rows.size()));
    ObservationSeries s;
    s.delta = delta;
    s.log_price.reserve(table.rows.size());
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
        if (col >= table.rows[r].size()) throw ParseError("row " + std::to_string(r + 2) + " has no price cell");
        const double p = csv::parse_double(table.rows[r][col]);
        if (!(p > 0.0) || !std::isfinite(p)) throw DataError("row " + std::to_string(r + 2) + ": price must be positive");
        s.log_price.push_back(std::log(p));
    }
    return s;
}

ObservationSeries demean(const ObservationSeries& series) {
    if (series.log_price.size() < 2) throw DataError("series needs at least two prices");
    ObservationSeries out = series;
    const double m = (series.log_price.back() - series.log_price.front()) / static_cast<double>(series.size());
    for (std::size_t i = 0; i < out.log_price.size(); ++i) out.log_price[i] -= static_cast<double>(i) * m;
    return out;
}

PipelineResult run_pipeline(const PipelineConfig& c) {
    c.validate();
    std::filesystem::create_directories(c.out_dir);
    ObservationSeries series = load_series(c);
    if (c.demean) series = demean(series);
    const auto transformed = log_squared_transform(series);
    const std::vector<double>& y = transformed.y;
    const std::size_t n = y.size();
    if (n < 3) throw DataError("need at least 3 returns");

    PipelineResult result;
    result.n = n;
    const auto file = [&](const char* name) {
        result.files.push_back(c.out_dir / name);
        return result.files.back();
    };
    std::vector<std::pair<std::string, double>> extra{{"floored_returns", static_cast<double>(transformed.floored)}};

    if (c.estimator == "regression") {
        RegressionOptions opt;
        const double gamma = c.gamma.value_or(3.5);
        opt.h = c.bandwidth.value_or(default_regression_bandwidth(n, gamma));
        opt.denominator_floor = c.denominator_floor;
        opt.grid_points = c.grid_points;
        const auto est = regression_estimate(y, opt);
        {
            auto out = open_out(file("density.csv"));
            csv::Writer w(out, {"x", "m_hat", "numerator", "denominator", "masked"});
            for (std::size_t i = 0; i < est.x.size(); ++i) {
                w.row({est.x[i], est.m_hat[i], est.numerator[i], est.denominator[i], static_cast<double>(est.masked[i])});
            }
        }
        EstimateReport r;
        r.set_diagnostic("n", static_cast<double>(n));
        r.set_diagnostic("bandwidth", est.h);
        r.set_diagnostic("response_shift", est.response_shift);
        r.set_diagnostic("unmasked_points", static_cast<double>(est.unmasked()));
        if (!c.bandwidth) {
            if (auto warn = regression_bandwidth_warning(gamma)) r.warnings.push_back(*warn);
        }
        write_diagnostics(file("diagnostics.csv"), r, extra);
        {
            auto out = open_out(file("config.txt"));
            write_config(out, c);
        }
        write_plot(file("plot.gp"), c.estimator, false);
        return result;
    }

    EstimateReport report;
    if (c.estimator == "kernel") {
        KernelSpec spec;
        const double gamma = c.gamma.value_or(2.0);
        spec.h = c.bandwidth.value_or(default_bandwidth(n, gamma));
        spec.grid_points = c.grid_points;
        report = estimate_density(y, spec);
        if (!c.bandwidth) {
            const double exponent = -std::log(c.delta) / std::log(static_cast<double>(n));
            if (auto warn = bandwidth_warning(gamma, exponent)) report.warnings.push_back(*warn);
        }
    } else if (c.estimator == "wavelet") {
        WaveletConfig cfg;
        cfg.level = c.level;
        cfg.grid_points = c.grid_points;
        if (c.truncation == "n") {
            cfg.truncation = TruncationRule::SampleSize;
        } else if (c.truncation == "log-power") {
            cfg.truncation = TruncationRule::LogPower;
            cfg.log_power = c.log_power;
        } else {
            cfg.truncation = TruncationRule::Fixed;
            cfg.fixed_truncation = count("truncation", c.truncation);
        }
        auto est = wavelet_estimate(y, cfg);
        auto out = open_out(file("coefficients.csv"));
        csv::Writer w(out, {"l", "a"});
        const long L = static_cast<long>(est.truncation);
        for (long l = -L; l <= L; ++l) w.row({static_cast<double>(l), est.coefficient(l)});
        report = std::move(est.report);
    } else {
        PpeConfig cfg;
        cfg.kappa = c.kappa;
        cfg.truncation = c.kn;
        cfg.grid_points = c.grid_points;
        auto est = select_and_estimate(y, cfg);
        auto out = open_out(file("levels.csv"));
        csv::Writer w(out, {"L", "contrast", "penalty", "criterion", "selected"});
        for (std::size_t i = 0; i < est.levels.size(); ++i) {
            const auto& lv = est.levels[i];
            w.row({static_cast<double>(lv.L), lv.contrast, lv.penalty, lv.criterion, i == est.selected ? 1.0 : 0.0});
        }
        report = std::move(est.report);
    }

    extra.emplace_back("mode_count", mode_count(report.density, c.prominence));
    const auto fit = normal_fit(report.density);
    extra.emplace_back("normal_fit_mean", fit.mean);
    extra.emplace_back("normal_fit_variance", fit.variance);
    {
        auto out = open_out(file("density.csv"));
        csv::Writer w(out, {"x", "density", "normal_fit"});
        for (std::size_t i = 0; i < report.density.size(); ++i) {
            w.row({report.density.x[i], report.density.value[i], fit.fitted.value[i]});
        }
    }
    write_diagnostics(file("diagnostics.csv"), report, extra);
    {
        auto out = open_out(file("config.txt"));
        write_config(out, c);
    }
    write_plot(file("plot.gp"), c.estimator, true);
    return result;
}

}  // namespace voldens::cli
