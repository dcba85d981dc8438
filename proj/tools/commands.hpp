#pragma once

#include "run_config.hpp"

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace pulsearea::cli {

/// Process exit codes.
enum ExitCode : int {
    kExitOk = 0,
    kExitConfig = 1,
    kExitSolver = 2,
    kExitAudit = 3,
};

inline constexpr const char* kTrajectoryCsvHeader =
    "tau_ns,theta_rad,theta_dot_rad_per_ns,envelope_M_over_mu,phi_rad";

/// Writes one trajectory CSV per λ (`simulate_lambda_<λ>.csv`).
/// Returns the written paths. Solver failures propagate as SolverError.
std::vector<std::filesystem::path> cmd_simulate(const RunConfig& config, std::ostream& log);

/// Writes the column subset of figure `which` (1: θ, 2: envelope, 3: φ)
/// per λ on a uniform τ grid over [figure_tau_min, figure_tau_max], plus
/// `figure<which>_manifest.csv` mapping λ to file.
std::vector<std::filesystem::path> cmd_figures(const RunConfig& config, int which, std::ostream& log);

struct AuditOutcome {
    std::filesystem::path summary;
    std::vector<std::string> failed;  ///< "lambda=<λ>:<check>" entries
};

/// Builds an audit report per λ and writes `audit_summary.json`.
AuditOutcome cmd_audit(const RunConfig& config, std::ostream& log);

/// Full command-line entry point; returns the process exit code.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

/// Formats a value the way every output file does (12 significant digits).
std::string format_number(double value);

}  // namespace pulsearea::cli
