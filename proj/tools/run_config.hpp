#pragma once

#include "pulsearea/errors.hpp"
#include "pulsearea/model.hpp"

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace pulsearea::cli {

/// Configuration problem; `key()` names the offending entry when there is one.
class ConfigError : public ValidationError {
public:
    ConfigError(std::string key, const std::string& message)
        : ValidationError(key.empty() ? message : "config key '" + key + "': " + message),
          key_(std::move(key)) {}

    const std::string& key() const noexcept { return key_; }

private:
    std::string key_;
};

/// Everything a CLI run needs: model and solver settings, the λ sweep and
/// where to write results.
///
/// The text form is flat `key = value` lines; `#` starts a comment and
/// unknown keys are rejected. lambda_sweep is a comma separated list.
struct RunConfig {
    double M_inv_ns = 0.5;
    double mu = 1.0;
    double omega_z = 2.0 * kPi * 5.0;
    std::vector<double> lambda_sweep{0.0, 0.1, 0.25, 0.5, 1.0};

    double theta_min = 1e-3;
    double theta_max = 6.0 * kPi;          ///< used for λ > 0
    double lossless_gap = kDefaultLosslessGap;  ///< λ = 0 runs stop at 2π - gap
    std::size_t n_grid = 2001;
    double abs_tol = 1e-10;
    double rel_tol = 1e-8;
    Anchor anchor = Anchor::area_pi;
    Method method = Method::quadrature;

    std::filesystem::path output_dir = "out";
    std::string output_format = "csv";

    double figure_tau_min = -3.0;  ///< ns
    double figure_tau_max = 5.0;   ///< ns

    ModelParams params_for(double lambda) const;
    SolverConfig solver_config_for(double lambda) const;
};

/// Parses the text form on top of the defaults. Throws ConfigError.
RunConfig parse_run_config(std::string_view text);

/// Reads and parses a config file. Throws ConfigError.
RunConfig load_run_config(const std::filesystem::path& path);

/// Cross-field checks: sweep non-empty, entries >= 0 and strictly
/// increasing, model/solver settings valid for every λ. Throws ConfigError.
void validate(const RunConfig& config);

/// Creates the output directory if needed and probes it with a scratch
/// file. Throws ConfigError (key output_dir) when it is not writable.
void ensure_writable(const std::filesystem::path& dir);

/// Serialises a config back to its text form.
std::string to_text(const RunConfig& config);

}  // namespace pulsearea::cli
