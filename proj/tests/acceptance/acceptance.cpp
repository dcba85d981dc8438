// Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include "commands.hpp"
#include "oracles.hpp"
#include "pulsearea/analysis.hpp"
#include "pulsearea/solver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

using namespace pulsearea;
namespace fs = std::filesystem;

namespace {

const std::vector<double> kSweep{0.0, 0.1, 0.25, 0.5, 1.0};
constexpr double kWidth = 0.5;  // M^-1 in ns

struct Outcome {
    bool passed = true;
    std::string detail;

    void require(bool ok, const std::string& what) {
        if (!ok) {
            passed = false;
            detail += (detail.empty() ? "" : "; ") + what;
        }
    }
};

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.3g", v);
    return buf;
}

Outcome parameter_consistency() {
    Outcome o;
    const double mhz = peak_coupling_freq(make_params(kWidth, 0.0)) * 1e3;
    o.require(std::round(mhz * 10.0) / 10.0 == 636.6, "peak coupling " + fmt(mhz) + " MHz");
    o.require(std::abs(mhz - 636.0) / 636.0 <= 1e-3, "not within 0.1% of 636 MHz");
    return o;
}

Outcome soliton() {
    Outcome o;
    const auto p = make_params(kWidth, 0.0);
    const auto c = default_config(0.0);
    const auto grid = uniform_grid(-4.0 / p.M, 4.0 / p.M, 1601);
    for (auto method : {Method::quadrature, Method::ivp}) {
        const auto t = solve_trajectory(p, c, method, grid);
        double worst = 0.0;
        for (std::size_t i = 0; i < grid.size(); ++i) {
            worst = std::max(worst, std::abs(t.theta()[i] - oracle::soliton_theta(grid[i], p.M)));
            o.require(t.phi()[i] == 0.0, std::string(to_string(method)) + " phase not zero");
        }
        o.require(worst <= 1e-6, std::string(to_string(method)) + " theta error " + fmt(worst));
        const auto peak = solve_trajectory(p, c, method, std::vector<double>{-0.1, 0.0, 0.1});
        const double rel = std::abs(peak.envelope()[1] - 2.0 * p.M / p.mu) / (2.0 * p.M / p.mu);
        o.require(rel <= 1e-5, std::string(to_string(method)) + " peak envelope rel error " + fmt(rel));
    }
    return o;
}

Outcome lossless_asymptote() {
    Outcome o;
    const auto p = make_params(kWidth, 0.0);
    SolverConfig c = default_config(0.0);
    c.theta_max = kTwoPi - 1e-6;
    const AreaQuadrature q(p, c);
    const double tau = 10.0 / p.M;
    o.require(q.tau_end() >= tau, "range ends at tau " + fmt(q.tau_end()));
    if (q.tau_end() >= tau) {
        const double gap = kTwoPi - q.theta_at(tau);
        o.require(gap <= 1e-3 && gap >= 0.0, "2pi - theta = " + fmt(gap));
    }
    return o;
}

Outcome route_equivalence() {
    Outcome o;
    for (double lambda : kSweep) {
        const auto r = compare_routes(make_params(kWidth, lambda), default_config(lambda));
        o.require(r.max_theta_diff <= 1e-6, "lambda " + fmt(lambda) + " theta diff " + fmt(r.max_theta_diff));
        o.require(r.max_phi_diff <= 1e-5, "lambda " + fmt(lambda) + " phi diff " + fmt(r.max_phi_diff));
    }
    return o;
}

Outcome extrema_placement() {
    Outcome o;
    for (double lambda : kSweep) {
        const auto p = make_params(kWidth, lambda);
        const auto ex = find_envelope_extrema(solve_trajectory(p, default_config(lambda), Method::quadrature));
        int maxima = 0;
        for (const auto& e : ex) {
            o.require(e.area_residual <= 1e-3, "lambda " + fmt(lambda) + " residual " + fmt(e.area_residual));
            if (e.kind == ExtremumKind::maximum) ++maxima;
        }
        if (lambda >= 0.25) o.require(maxima >= 2, "lambda " + fmt(lambda) + " has " + std::to_string(maxima) + " maxima");
    }
    const auto p = make_params(kWidth, 1.0);
    SolverConfig c = default_config(1.0);
    c.anchor = Anchor::leading_edge;
    const auto ex = find_envelope_extrema(solve_trajectory(p, c, Method::quadrature));
    const auto first = std::find_if(ex.begin(), ex.end(), [](const auto& e) { return e.kind == ExtremumKind::maximum; });
    o.require(first != ex.end() && first->tau > 0.0, "lambda 1 first maximum not at tau > 0");
    return o;
}

Outcome asymptotic_plateau() {
    Outcome o;
    const auto p1 = make_params(kWidth, 1.0);
    const auto a1 = measure_asymptotes(solve_trajectory(p1, default_config(1.0), Method::quadrature));
    o.require(a1.plateau_rel_error <= 1e-3, "plateau rel error " + fmt(a1.plateau_rel_error));
    o.require(a1.phase_slope_rel_error <= 1e-3, "slope rel error " + fmt(a1.phase_slope_rel_error));

    auto large_lambda_form = [&](double lambda, double bound) {
        const auto p = make_params(kWidth, lambda);
        const auto a = measure_asymptotes(solve_trajectory(p, default_config(lambda), Method::quadrature));
        const double env = std::abs(a.plateau_envelope - plateau_envelope_large_lambda(p)) / plateau_envelope_large_lambda(p);
        const double slope = std::abs(a.phase_slope - phase_slope_large_lambda(p)) / phase_slope_large_lambda(p);
        o.require(env <= bound, "lambda " + fmt(lambda) + " large-lambda envelope form off by " + fmt(env));
        o.require(slope <= bound, "lambda " + fmt(lambda) + " large-lambda slope form off by " + fmt(slope));
    };
    large_lambda_form(1.0, 0.12);
    large_lambda_form(10.0, 0.01);
    return o;
}

Outcome area_excess() {
    Outcome o;
    for (double lambda : kSweep) {
        if (lambda == 0.0) continue;
        for (auto method : {Method::quadrature, Method::ivp}) {
            const auto t = solve_trajectory(make_params(kWidth, lambda), default_config(lambda), method);
            o.require(t.theta().back() > kTwoPi, "lambda " + fmt(lambda) + " ends at " + fmt(t.theta().back()));
        }
    }
    return o;
}

Outcome monotone_attenuation() {
    Outcome o;
    double previous = INFINITY;
    for (double lambda : kSweep) {
        const auto t = solve_trajectory(make_params(kWidth, lambda), default_config(lambda), Method::quadrature);
        const double peak = *std::max_element(t.envelope().begin(), t.envelope().end());
        o.require(peak <= previous, "peak rises at lambda " + fmt(lambda));
        previous = peak;
    }
    return o;
}

Outcome cutoff_insensitivity() {
    Outcome o;
    for (double lambda : kSweep) {
        const auto p = make_params(kWidth, lambda);
        SolverConfig coarse = default_config(lambda);
        SolverConfig fine = coarse;
        fine.theta_min = 5e-4;
        const AreaQuadrature a(p, coarse);
        const AreaQuadrature b(p, fine);
        double worst = 0.0;
        for (double theta : uniform_grid(coarse.theta_min, coarse.theta_max, 401)) {
            worst = std::max({worst, std::abs(a.tau(theta) - b.tau(theta)), std::abs(a.phi(theta) - b.phi(theta))});
        }
        const AreaIvp ia(p, coarse);
        const AreaIvp ib(p, fine);
        const double lo = std::max(ia.tau_begin(), ib.tau_begin());
        const double hi = std::min(ia.tau_end(), ib.tau_end());
        for (double tau : uniform_grid(lo, hi, 2001)) {
            const auto sa = ia.state_at(tau);
            const auto sb = ib.state_at(tau);
            worst = std::max({worst, std::abs(sa.theta - sb.theta), std::abs(sa.phi - sb.phi),
                              std::abs(sa.theta_dot - sb.theta_dot)});
        }
        o.require(worst <= 1e-6, "lambda " + fmt(lambda) + " changes by " + fmt(worst));
    }
    return o;
}

std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

int run_cli_args(std::vector<std::string> args) {
    args.insert(args.begin(), "pulsearea");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    return cli::run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
}

Outcome cli_contract() {
    Outcome o;
    const auto root = fs::temp_directory_path() / "pulsearea_acceptance";
    fs::remove_all(root);
    fs::create_directories(root);
    auto write = [&](const std::string& name, const std::string& text) {
        std::ofstream(root / name) << text;
        return (root / name).string();
    };
    const auto defaults = write("default.cfg", "");
    o.require(run_cli_args({"simulate", "--config", defaults, "--out", (root / "a").string()}) == 0, "simulate run 1");
    o.require(run_cli_args({"simulate", "--config", defaults, "--out", (root / "b").string()}) == 0, "simulate run 2");
    int files = 0;
    for (const auto& entry : fs::directory_iterator(root / "a")) {
        if (entry.path().extension() != ".csv") continue;
        ++files;
        const auto a = read_file(entry.path());
        o.require(a == read_file(root / "b" / entry.path().filename()), entry.path().filename().string() + " differs");
        o.require(a.substr(0, a.find('\n')) == cli::kTrajectoryCsvHeader, "header mismatch");
    }
    o.require(files == static_cast<int>(kSweep.size()), "expected one CSV per lambda");

    o.require(run_cli_args({"audit", "--config", defaults, "--out", (root / "audit0").string()}) == 0,
              "default audit not exit 0");
    const auto loose = write("loose.cfg", "rel_tol = 0.5\n");
    o.require(run_cli_args({"audit", "--config", loose, "--out", (root / "audit3").string()}) == 3,
              "loose audit not exit 3");
    const auto empty = write("empty.cfg", "lambda_sweep =\n");
    o.require(run_cli_args({"audit", "--config", empty, "--out", (root / "audit1").string()}) == 1,
              "empty sweep not exit 1");
    return o;
}

}  // namespace

int main() {
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
        {"parameter consistency", parameter_consistency},
        {"lossless soliton oracle", soliton},
        {"lossless area asymptote", lossless_asymptote},
        {"route equivalence", route_equivalence},
        {"extrema placement", extrema_placement},
        {"asymptotic plateau", asymptotic_plateau},
        {"area excess", area_excess},
        {"monotone attenuation", monotone_attenuation},
        {"cutoff insensitivity", cutoff_insensitivity},
        {"cli determinism and schema", cli_contract},
    };
    int failures = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const auto start = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = criteria[i].second();
        } catch (const std::exception& e) {
            o.require(false, std::string("exception: ") + e.what());
        }
        const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        std::printf("[%s] criterion %zu: %s (%.2f s)%s%s\n", o.passed ? "PASS" : "FAIL", i + 1,
                    criteria[i].first.c_str(), seconds, o.detail.empty() ? "" : " - ", o.detail.c_str());
        if (!o.passed) ++failures;
    }
    std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
    return failures == 0 ? 0 : 1;
}
