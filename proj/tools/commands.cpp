#include "commands.hpp"

#include "pulsearea/analysis.hpp"
#include "pulsearea/solver.hpp"

#include <CLI11.hpp>
#include <fmt/format.h>
#include <json.hpp>

#include <cmath>
#include <fstream>
#include <ostream>

namespace pulsearea::cli {

namespace {

std::string lambda_tag(double lambda) { return fmt::format("{:g}", lambda); }

class CsvWriter {
public:
    explicit CsvWriter(const std::filesystem::path& path) : path_(path), out_(path, std::ios::binary) {
        if (!out_) throw SolverError("cannot open '" + path.string() + "' for writing");
    }

    void header(const std::string& text) { out_ << text << '\n'; }

    void row(std::initializer_list<double> values) {
        bool first = true;
        for (double v : values) {
            if (!std::isfinite(v)) {
                throw SolverError("non-finite value while writing '" + path_.string() + "'");
            }
            if (!first) out_ << ',';
            out_ << format_number(v);
            first = false;
        }
        out_ << '\n';
    }

    void close() {
        out_.close();
        if (!out_) throw SolverError("failed writing '" + path_.string() + "'");
    }

private:
    std::filesystem::path path_;
    std::ofstream out_;
};

// Attaches λ (and the achieved tolerance when known) to solver failures.
[[noreturn]] void rethrow_with_lambda(double lambda) {
    try {
        throw;
    } catch (const ToleranceError& e) {
        throw ToleranceError(fmt::format("lambda = {}: {} (achieved error estimate {:.3g}, requested {:.3g})",
                                         lambda_tag(lambda), e.what(), e.achieved(), e.requested()),
                             e.achieved(), e.requested());
    } catch (const std::exception& e) {
        throw SolverError(fmt::format("lambda = {}: {}", lambda_tag(lambda), e.what()));
    }
}

nlohmann::json to_json(const AuditReport& r) {
    using nlohmann::json;
    json j;
    j["lambda"] = r.lambda;
    j["soliton_max_abs_err"] = r.soliton_max_abs_err ? json(*r.soliton_max_abs_err) : json(nullptr);
    j["route_tau_lo_ns"] = r.routes.tau_lo;
    j["route_tau_hi_ns"] = r.routes.tau_hi;
    j["route_max_theta_diff"] = r.routes.max_theta_diff;
    j["route_max_phi_diff"] = r.routes.max_phi_diff;
    j["peak_envelope"] = r.peak_envelope;
    if (r.asymptotes) {
        j["plateau_envelope"] = r.asymptotes->plateau_envelope;
        j["plateau_rel_error"] = r.asymptotes->plateau_rel_error;
        j["phase_slope"] = r.asymptotes->phase_slope;
        j["phase_slope_rel_error"] = r.asymptotes->phase_slope_rel_error;
        j["plateau_envelope_large_lambda_rel_error"] = *r.plateau_envelope_large_lambda_rel_error;
        j["phase_slope_large_lambda_rel_error"] = *r.phase_slope_large_lambda_rel_error;
    } else {
        for (const char* key : {"plateau_envelope", "plateau_rel_error", "phase_slope", "phase_slope_rel_error",
                                "plateau_envelope_large_lambda_rel_error", "phase_slope_large_lambda_rel_error"}) {
            j[key] = nullptr;
        }
    }
    json extrema = json::array();
    for (const auto& e : r.extrema) {
        extrema.push_back({{"tau_ns", e.tau},
                           {"theta_rad", e.theta},
                           {"envelope", e.envelope},
                           {"kind", e.kind == ExtremumKind::maximum ? "max" : "min"},
                           {"area_residual", e.area_residual}});
    }
    j["extrema"] = std::move(extrema);
    j["max_extremum_residual"] = r.max_extremum_residual;
    j["final_area_excess"] = r.final_area_excess;
    j["gamma_spectral_slope"] = r.gamma_spectral_slope;
    json gamma = json::array();
    for (const auto& g : r.gamma_ratio) gamma.push_back({g.tau, g.ratio});
    j["gamma_ratio"] = std::move(gamma);
    json checks = json::array();
    for (const auto& c : r.checks) {
        checks.push_back({{"name", c.name}, {"passed", c.passed}, {"value", c.value}, {"threshold", c.threshold}});
    }
    j["checks"] = std::move(checks);
    j["passed"] = r.passed();
    return j;
}

}  // namespace

std::string format_number(double value) {
    if (value == 0.0) value = 0.0;  // drop the sign of -0
    return fmt::format("{:.12g}", value);
}

std::vector<std::filesystem::path> cmd_simulate(const RunConfig& config, std::ostream& log) {
    std::vector<std::filesystem::path> written;
    for (double lambda : config.lambda_sweep) {
        const auto path = config.output_dir / fmt::format("simulate_lambda_{}.csv", lambda_tag(lambda));
        try {
            const Trajectory t = solve_trajectory(config.params_for(lambda), config.solver_config_for(lambda),
                                                  config.method);
            CsvWriter csv(path);
            csv.header(kTrajectoryCsvHeader);
            for (std::size_t i = 0; i < t.size(); ++i) {
                csv.row({t.tau()[i], t.theta()[i], t.theta_dot()[i], t.envelope()[i], t.phi()[i]});
            }
            csv.close();
        } catch (...) {
            rethrow_with_lambda(lambda);
        }
        log << "wrote " << path.string() << '\n';
        written.push_back(path);
    }
    return written;
}

std::vector<std::filesystem::path> cmd_figures(const RunConfig& config, int which, std::ostream& log) {
    if (which < 1 || which > 3) throw ConfigError("which", "figure must be 1, 2 or 3");
    static constexpr const char* headers[] = {"tau_ns,theta_rad", "tau_ns,envelope_M_over_mu", "tau_ns,phi_rad"};

    std::vector<std::filesystem::path> written;
    std::vector<std::pair<double, std::string>> manifest;
    const auto grid = uniform_grid(config.figure_tau_min, config.figure_tau_max, config.n_grid);
    for (double lambda : config.lambda_sweep) {
        const auto name = fmt::format("figure{}_lambda_{}.csv", which, lambda_tag(lambda));
        const auto path = config.output_dir / name;
        try {
            const ModelParams params = config.params_for(lambda);
            const SolverConfig solver = config_covering(params, config.solver_config_for(lambda),
                                                        config.figure_tau_min, config.figure_tau_max);
            const Trajectory t = solve_trajectory(params, solver, config.method, grid);
            const auto column = which == 1 ? t.theta() : which == 2 ? t.envelope() : t.phi();
            CsvWriter csv(path);
            csv.header(headers[which - 1]);
            for (std::size_t i = 0; i < t.size(); ++i) csv.row({t.tau()[i], column[i]});
            csv.close();
        } catch (...) {
            rethrow_with_lambda(lambda);
        }
        log << "wrote " << path.string() << '\n';
        written.push_back(path);
        manifest.emplace_back(lambda, name);
    }

    const auto manifest_path = config.output_dir / fmt::format("figure{}_manifest.csv", which);
    std::ofstream out(manifest_path, std::ios::binary);
    out << "lambda,file\n";
    for (const auto& [lambda, name] : manifest) out << format_number(lambda) << ',' << name << '\n';
    out.close();
    if (!out) throw SolverError("failed writing '" + manifest_path.string() + "'");
    log << "wrote " << manifest_path.string() << '\n';
    written.push_back(manifest_path);
    return written;
}

AuditOutcome cmd_audit(const RunConfig& config, std::ostream& log) {
    nlohmann::json records = nlohmann::json::array();
    AuditOutcome outcome;
    for (double lambda : config.lambda_sweep) {
        AuditReport report;
        try {
            report = build_audit_report(config.params_for(lambda), config.solver_config_for(lambda));
        } catch (...) {
            rethrow_with_lambda(lambda);
        }
        for (const auto& name : report.failed_checks()) {
            outcome.failed.push_back(fmt::format("lambda={}:{}", lambda_tag(lambda), name));
        }
        log << fmt::format("lambda = {}: {}\n", lambda_tag(lambda), report.passed() ? "pass" : "FAIL");
        records.push_back(to_json(report));
    }

    nlohmann::json summary;
    summary["M_inv_ns"] = config.M_inv_ns;
    summary["mu"] = config.mu;
    summary["anchor"] = std::string(to_string(config.anchor));
    summary["records"] = std::move(records);
    summary["passed"] = outcome.failed.empty();
    summary["failed_checks"] = outcome.failed;

    outcome.summary = config.output_dir / "audit_summary.json";
    std::ofstream out(outcome.summary, std::ios::binary);
    out << summary.dump(2) << '\n';
    out.close();
    if (!out) throw SolverError("failed writing '" + outcome.summary.string() + "'");
    log << "wrote " << outcome.summary.string() << '\n';
    return outcome;
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Pulse-area solver for a qubit in a frictive (Ohmic) environment"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir;
    int which = 1;
    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", config_path, "Flat key = value configuration file");
        sub->add_option("--out", out_dir, "Output directory (overrides output_dir)");
    };
    auto* simulate = app.add_subcommand("simulate", "Write one trajectory CSV per lambda");
    auto* figures = app.add_subcommand("figures", "Write the data behind figure 1, 2 or 3");
    auto* audit = app.add_subcommand("audit", "Check every structural claim and write a JSON summary");
    for (auto* sub : {simulate, figures, audit}) add_common(sub);
    figures->add_option("--which", which, "Figure number")->required()->check(CLI::Range(1, 3));

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return kExitConfig;
    }

    RunConfig config;
    try {
        if (!config_path.empty()) config = load_run_config(config_path);
        if (!out_dir.empty()) config.output_dir = out_dir;
        validate(config);
        ensure_writable(config.output_dir);
    } catch (const std::exception& e) {
        err << "config error: " << e.what() << '\n';
        return kExitConfig;
    }

    try {
        if (simulate->parsed()) {
            cmd_simulate(config, out);
        } else if (figures->parsed()) {
            cmd_figures(config, which, out);
        } else {
            const AuditOutcome outcome = cmd_audit(config, out);
            if (!outcome.failed.empty()) {
                for (const auto& f : outcome.failed) err << "audit check failed: " << f << '\n';
                return kExitAudit;
            }
        }
    } catch (const std::exception& e) {
        err << "solver error: " << e.what() << '\n';
        return kExitSolver;
    }
    return kExitOk;
}

}  // namespace pulsearea::cli
