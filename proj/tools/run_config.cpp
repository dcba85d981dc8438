#include "run_config.hpp"

#include <fmt/format.h>

#include <charconv>
#include <fstream>
#include <map>
#include <sstream>

namespace pulsearea::cli {

namespace {

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

double parse_double(const std::string& key, std::string_view text) {
    text = trim(text);
    double value = 0.0;
    const auto* end = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(text.data(), end, value);
    if (ec != std::errc() || ptr != end || text.empty()) {
        throw ConfigError(key, "expected a number, got '" + std::string(text) + "'");
    }
    return value;
}

std::size_t parse_count(const std::string& key, std::string_view text) {
    text = trim(text);
    std::size_t value = 0;
    const auto* end = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(text.data(), end, value);
    if (ec != std::errc() || ptr != end || text.empty()) {
        throw ConfigError(key, "expected a non-negative integer, got '" + std::string(text) + "'");
    }
    return value;
}

std::vector<double> parse_list(const std::string& key, std::string_view text) {
    std::vector<double> values;
    text = trim(text);
    if (text.empty()) return values;
    std::size_t start = 0;
    while (start <= text.size()) {
        const auto comma = text.find(',', start);
        const auto item = text.substr(start, comma == std::string_view::npos ? text.npos : comma - start);
        values.push_back(parse_double(key, item));
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return values;
}

void require(bool ok, const std::string& key, const std::string& message) {
    if (!ok) throw ConfigError(key, message);
}

}  // namespace

ModelParams RunConfig::params_for(double lambda) const {
    ModelParams params;
    params.M = 1.0 / M_inv_ns;
    params.lambda = lambda;
    params.mu = mu;
    params.omega_z = omega_z;
    return params;
}

SolverConfig RunConfig::solver_config_for(double lambda) const {
    SolverConfig config;
    config.theta_min = theta_min;
    config.theta_max = lambda > 0.0 ? theta_max : kTwoPi - lossless_gap;
    config.n_grid = n_grid;
    config.abs_tol = abs_tol;
    config.rel_tol = rel_tol;
    config.anchor = anchor;
    return config;
}

RunConfig parse_run_config(std::string_view text) {
    RunConfig config;
    std::map<std::string, int> seen;
    std::size_t line_no = 0;
    std::istringstream in{std::string(text)};
    std::string raw;
    while (std::getline(in, raw)) {
        ++line_no;
        std::string_view line = raw;
        if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) {
            throw ConfigError("", fmt::format("line {}: expected 'key = value'", line_no));
        }
        const std::string key{trim(line.substr(0, eq))};
        const std::string_view value = trim(line.substr(eq + 1));
        if (seen[key]++ > 0) throw ConfigError(key, "given more than once");

        if (key == "M_inv_ns") config.M_inv_ns = parse_double(key, value);
        else if (key == "mu") config.mu = parse_double(key, value);
        else if (key == "omega_z") config.omega_z = parse_double(key, value);
        else if (key == "lambda_sweep") config.lambda_sweep = parse_list(key, value);
        else if (key == "theta_min") config.theta_min = parse_double(key, value);
        else if (key == "theta_max") config.theta_max = parse_double(key, value);
        else if (key == "lossless_gap") config.lossless_gap = parse_double(key, value);
        else if (key == "n_grid") config.n_grid = parse_count(key, value);
        else if (key == "abs_tol") config.abs_tol = parse_double(key, value);
        else if (key == "rel_tol") config.rel_tol = parse_double(key, value);
        else if (key == "anchor") {
            try {
                config.anchor = parse_anchor(value);
            } catch (const ValidationError& e) {
                throw ConfigError(key, e.what());
            }
        } else if (key == "method") {
            try {
                config.method = parse_method(value);
            } catch (const ValidationError& e) {
                throw ConfigError(key, e.what());
            }
        } else if (key == "output_dir") config.output_dir = std::string(value);
        else if (key == "output_format") config.output_format = std::string(value);
        else if (key == "figure_tau_min") config.figure_tau_min = parse_double(key, value);
        else if (key == "figure_tau_max") config.figure_tau_max = parse_double(key, value);
        else throw ConfigError(key, "unknown key");
    }
    return config;
}

RunConfig load_run_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("", "cannot read config file '" + path.string() + "'");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_run_config(buffer.str());
}

void validate(const RunConfig& config) {
    require(!config.lambda_sweep.empty(), "lambda_sweep", "must list at least one value");
    for (std::size_t i = 0; i < config.lambda_sweep.size(); ++i) {
        const double lambda = config.lambda_sweep[i];
        require(std::isfinite(lambda) && lambda >= 0.0, "lambda_sweep", "entries must be finite and >= 0");
        if (i > 0) {
            require(lambda > config.lambda_sweep[i - 1], "lambda_sweep", "entries must be strictly increasing");
        }
    }
    require(std::isfinite(config.M_inv_ns) && config.M_inv_ns > 0.0, "M_inv_ns", "must be > 0");
    require(std::isfinite(config.mu) && config.mu > 0.0, "mu", "must be > 0");
    require(std::isfinite(config.omega_z), "omega_z", "must be finite");
    require(std::isfinite(config.theta_min) && config.theta_min > 0.0 && config.theta_min < kPi, "theta_min",
            "must lie in (0, pi)");
    require(std::isfinite(config.theta_max) && config.theta_max > kPi, "theta_max", "must be > pi");
    require(std::isfinite(config.lossless_gap) && config.lossless_gap > 0.0 && config.lossless_gap < kPi,
            "lossless_gap", "must lie in (0, pi)");
    require(config.n_grid >= 2, "n_grid", "must be >= 2");
    require(config.abs_tol > 0.0 && config.abs_tol < 1.0, "abs_tol", "must lie in (0, 1)");
    require(config.rel_tol > 0.0 && config.rel_tol < 1.0, "rel_tol", "must lie in (0, 1)");
    require(config.output_format == "csv", "output_format", "only 'csv' is supported");
    require(!config.output_dir.empty(), "output_dir", "must not be empty");
    require(std::isfinite(config.figure_tau_min) && std::isfinite(config.figure_tau_max) &&
                config.figure_tau_min < config.figure_tau_max,
            "figure_tau_max", "must be greater than figure_tau_min");
}

void ensure_writable(const std::filesystem::path& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw ConfigError("output_dir", "cannot create '" + dir.string() + "': " + ec.message());
    const auto probe = dir / ".pulsearea_write_probe";
    {
        std::ofstream out(probe);
        if (!out || !(out << "ok")) throw ConfigError("output_dir", "'" + dir.string() + "' is not writable");
    }
    std::filesystem::remove(probe, ec);
}

std::string to_text(const RunConfig& config) {
    std::string sweep;
    for (std::size_t i = 0; i < config.lambda_sweep.size(); ++i) {
        sweep += fmt::format("{}{:.17g}", i ? ", " : "", config.lambda_sweep[i]);
    }
    return fmt::format(
        "M_inv_ns = {:.17g}\nmu = {:.17g}\nomega_z = {:.17g}\nlambda_sweep = {}\n"
        "theta_min = {:.17g}\ntheta_max = {:.17g}\nlossless_gap = {:.17g}\nn_grid = {}\n"
        "abs_tol = {:.17g}\nrel_tol = {:.17g}\nanchor = {}\nmethod = {}\noutput_dir = {}\n"
        "output_format = {}\nfigure_tau_min = {:.17g}\nfigure_tau_max = {:.17g}\n",
        config.M_inv_ns, config.mu, config.omega_z, sweep, config.theta_min, config.theta_max,
        config.lossless_gap, config.n_grid, config.abs_tol, config.rel_tol, to_string(config.anchor),
        to_string(config.method), config.output_dir.string(), config.output_format, config.figure_tau_min,
        config.figure_tau_max);
}

}  // namespace pulsearea::cli
