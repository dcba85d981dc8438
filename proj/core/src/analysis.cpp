#include "pulsearea/analysis.hpp"

#include "pulsearea/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace pulsearea {

SolitonSample soliton_oracle(double tau, const ModelParams& params) {
    validate(params);
    if (params.lambda != 0.0) {
        throw ValidationError("soliton_oracle requires lambda = 0");
    }
    const double x = params.M * tau;
    // 4 arctan(e^x) = 2π - 4 arctan(e^{-x}); use the form that avoids overflow.
    const double theta = x <= 0.0 ? 4.0 * std::atan(std::exp(x)) : kTwoPi - 4.0 * std::atan(std::exp(-x));
    const double envelope = 2.0 * params.M / params.mu / std::cosh(x);
    return {theta, envelope, 0.0};
}

namespace {

double area_residual(double theta) {
    const double r = std::fmod(theta, kPi);
    return std::min(r, kPi - r);
}

// Vertex of the parabola through three points.
std::pair<double, double> parabola_vertex(double x0, double y0, double x1, double y1, double x2, double y2) {
    const double d1 = (y1 - y0) / (x1 - x0);
    const double d2 = (y2 - y1) / (x2 - x1);
    const double curvature = (d2 - d1) / (x2 - x0);
    if (curvature == 0.0) return {x1, y1};
    // p(x) = y1 + slope1 (x - x1) + curvature (x - x1)^2 with slope1 the
    // derivative at x1.
    const double slope1 = d1 + curvature * (x1 - x0);
    double dx = -slope1 / (2.0 * curvature);
    dx = std::clamp(dx, x0 - x1, x2 - x1);
    return {x1 + dx, y1 + slope1 * dx + curvature * dx * dx};
}

}  // namespace

std::vector<EnvelopeExtremum> find_envelope_extrema(const Trajectory& trajectory) {
    const auto tau = trajectory.tau();
    const auto env = trajectory.envelope();
    std::vector<EnvelopeExtremum> out;
    const std::size_t n = trajectory.size();
    if (n < 3) return out;

    for (std::size_t i = 1; i + 1 < n; ++i) {
        const double left = env[i] - env[i - 1];
        const double right = env[i + 1] - env[i];
        ExtremumKind kind;
        if (left > 0.0 && right <= 0.0) {
            kind = ExtremumKind::maximum;
        } else if (left < 0.0 && right >= 0.0) {
            kind = ExtremumKind::minimum;
        } else {
            continue;
        }
        const auto [t, e] = parabola_vertex(tau[i - 1], env[i - 1], tau[i], env[i], tau[i + 1], env[i + 1]);
        const double theta = invert_theta(trajectory, t);
        out.push_back({t, theta, e, kind, area_residual(theta)});
    }
    return out;
}

double plateau_envelope_limit(const ModelParams& params) {
    return params.M * std::sqrt(2.0 / params.bracket_norm()) / params.mu;
}

double phase_slope_limit(const ModelParams& params) {
    return params.M * std::sqrt(0.5 * params.bracket_norm());
}

double plateau_envelope_large_lambda(const ModelParams& params) {
    return std::sqrt(8.0) * params.M / (params.lambda * params.mu);
}

double phase_slope_large_lambda(const ModelParams& params) {
    return params.M * params.lambda / std::sqrt(8.0);
}

Asymptotes measure_asymptotes(const Trajectory& trajectory) {
    const auto& params = trajectory.params();
    if (!(params.lambda > 0.0)) {
        throw ValidationError("measure_asymptotes requires lambda > 0");
    }
    const auto theta = trajectory.theta();
    if (theta.back() < 2.0 * kTwoPi) {
        std::ostringstream out;
        out << "insufficient range: theta_end = " << theta.back() << " < 4*pi";
        throw RangeError(out.str());
    }
    const auto tau = trajectory.tau();
    const auto env = trajectory.envelope();
    const auto phi = trajectory.phi();
    const std::size_t n = trajectory.size();
    const std::size_t count = std::max<std::size_t>(2, n / 5);
    const std::size_t first = n - count;

    double mean_env = 0.0, mean_tau = 0.0, mean_phi = 0.0;
    for (std::size_t i = first; i < n; ++i) {
        mean_env += env[i];
        mean_tau += tau[i];
        mean_phi += phi[i];
    }
    mean_env /= static_cast<double>(count);
    mean_tau /= static_cast<double>(count);
    mean_phi /= static_cast<double>(count);
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t i = first; i < n; ++i) {
        sxy += (tau[i] - mean_tau) * (phi[i] - mean_phi);
        sxx += (tau[i] - mean_tau) * (tau[i] - mean_tau);
    }
    const double slope = sxy / sxx;

    Asymptotes a;
    a.plateau_envelope = mean_env;
    a.plateau_rel_error = std::abs(mean_env / plateau_envelope_limit(params) - 1.0);
    a.phase_slope = slope;
    a.phase_slope_rel_error = std::abs(slope / phase_slope_limit(params) - 1.0);
    a.final_area_excess = theta.back() - kTwoPi;
    return a;
}

std::vector<GammaSample> gamma_audit(const Trajectory& trajectory, std::span<const double> phi,
                                     double spectral_slope) {
    const double lambda = trajectory.params().lambda;
    if (!(lambda > 0.0)) throw ValidationError("gamma_audit requires lambda > 0");
    if (phi.size() != trajectory.size()) throw ValidationError("gamma_audit: phase length mismatch");
    const auto theta = trajectory.theta();
    const auto tau = trajectory.tau();

    auto weight = [&](std::size_t i) {
        const double s = std::sin(phi[i]);
        return spectral_slope * s * s;
    };
    std::vector<GammaSample> out;
    out.reserve(theta.size());
    double gamma = weight(0) * theta[0];
    for (std::size_t i = 1; i < theta.size(); ++i) {
        gamma += 0.5 * (weight(i - 1) + weight(i)) * (theta[i] - theta[i - 1]);
        out.push_back({tau[i], theta[i], gamma / (lambda * theta[i])});
    }
    return out;
}

std::vector<GammaSample> gamma_audit(const Trajectory& trajectory, double spectral_slope) {
    return gamma_audit(trajectory, trajectory.phi(), spectral_slope);
}

RouteComparison compare_routes(const AreaQuadrature& quadrature, const AreaIvp& ivp) {
    RouteComparison cmp;
    cmp.tau_lo = std::max(quadrature.tau_begin(), ivp.tau_begin());
    cmp.tau_hi = std::min(quadrature.tau_end(), ivp.tau_end());
    // Raw samples: a badly resolved IVP need not satisfy the Trajectory
    // invariants, and that is exactly what this comparison should expose.
    for (double tau : uniform_grid(cmp.tau_lo, cmp.tau_hi, quadrature.config().n_grid)) {
        const double theta = quadrature.theta_at(tau);
        const PulseState state = ivp.state_at(tau);
        cmp.max_theta_diff = std::max(cmp.max_theta_diff, std::abs(theta - state.theta));
        cmp.max_phi_diff = std::max(cmp.max_phi_diff, std::abs(quadrature.phi(theta) - state.phi));
    }
    if (!ivp.reached_theta_max()) {
        cmp.max_theta_diff = std::max(cmp.max_theta_diff, quadrature.config().theta_max - ivp.theta_end());
    }
    return cmp;
}

RouteComparison compare_routes(const ModelParams& params, const SolverConfig& config) {
    return compare_routes(AreaQuadrature(params, config), AreaIvp(params, config));
}

double soliton_max_abs_error(const Trajectory& trajectory, double tau_lo, double tau_hi) {
    double worst = 0.0;
    for (std::size_t i = 0; i < trajectory.size(); ++i) {
        const double t = trajectory.tau()[i];
        if (t < tau_lo || t > tau_hi) continue;
        worst = std::max(worst, std::abs(trajectory.theta()[i] - soliton_oracle(t, trajectory.params()).theta));
    }
    return worst;
}

bool AuditReport::passed() const {
    return std::all_of(checks.begin(), checks.end(), [](const AuditCheck& c) { return c.passed; });
}

std::vector<std::string> AuditReport::failed_checks() const {
    std::vector<std::string> names;
    for (const auto& c : checks) {
        if (!c.passed) names.push_back(c.name);
    }
    return names;
}

AuditReport build_audit_report(const ModelParams& params, const SolverConfig& config) {
    const AreaQuadrature quadrature(params, config);
    const AreaIvp ivp(params, config);
    const Trajectory primary =
        sample(quadrature, uniform_grid(quadrature.tau_begin(), quadrature.tau_end(), config.n_grid));

    AuditReport report;
    report.lambda = params.lambda;
    report.routes = compare_routes(quadrature, ivp);
    report.checks.push_back({"route_equivalence_theta", report.routes.max_theta_diff <= kRouteThetaTolerance,
                             report.routes.max_theta_diff, kRouteThetaTolerance});
    report.checks.push_back({"route_equivalence_phi", report.routes.max_phi_diff <= kRoutePhiTolerance,
                             report.routes.max_phi_diff, kRoutePhiTolerance});

    if (params.lambda == 0.0) {
        const double lo = std::max({-4.0 / params.M, quadrature.tau_begin(), ivp.tau_begin()});
        const double hi = std::min({4.0 / params.M, quadrature.tau_end(), ivp.tau_end()});
        const auto window = uniform_grid(lo, hi, config.n_grid);
        const double err = std::max(soliton_max_abs_error(sample(quadrature, window), lo, hi),
                                    soliton_max_abs_error(sample(ivp, window), lo, hi));
        report.soliton_max_abs_err = err;
        report.checks.push_back({"soliton_error", err <= kSolitonTolerance, err, kSolitonTolerance});
    }

    report.extrema = find_envelope_extrema(primary);
    for (const auto& e : report.extrema) {
        report.max_extremum_residual = std::max(report.max_extremum_residual, e.area_residual);
    }
    report.checks.push_back({"extrema_placement", report.max_extremum_residual <= kExtremumAreaTolerance,
                             report.max_extremum_residual, kExtremumAreaTolerance});

    const auto env = primary.envelope();
    report.peak_envelope = *std::max_element(env.begin(), env.end());
    report.final_area_excess = primary.theta().back() - kTwoPi;

    if (params.lambda > 0.0) {
        if (primary.theta().back() >= 2.0 * kTwoPi) {
            report.asymptotes = measure_asymptotes(primary);
            report.plateau_envelope_large_lambda_rel_error =
                std::abs(report.asymptotes->plateau_envelope / plateau_envelope_large_lambda(params) - 1.0);
            report.phase_slope_large_lambda_rel_error =
                std::abs(report.asymptotes->phase_slope / phase_slope_large_lambda(params) - 1.0);
        }
        report.gamma_spectral_slope = 2.0 * params.lambda;
        report.gamma_ratio = gamma_audit(primary, report.gamma_spectral_slope);
    }
    return report;
}

}  // namespace pulsearea
