#include "pulsearea/errors.hpp"
#include "pulsearea/solver.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace pulsearea {

namespace {

void check_tau_grid(std::span<const double> grid, double lo, double hi) {
    if (grid.size() < 2) throw ValidationError("tau grid needs at least two points");
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (i > 0 && !(grid[i] > grid[i - 1])) throw ValidationError("tau grid must be strictly increasing");
    }
    if (grid.front() < lo || grid.back() > hi) {
        std::ostringstream out;
        out << "tau grid [" << grid.front() << ", " << grid.back() << "] ns exceeds solved range [" << lo
            << ", " << hi << "]";
        throw RangeError(out.str());
    }
}

}  // namespace

Trajectory sample(const AreaQuadrature& route, std::span<const double> tau_grid) {
    check_tau_grid(tau_grid, route.tau_begin(), route.tau_end());
    const auto& params = route.params();
    SolverDiagnostics diagnostics;
    std::vector<double> theta, rate, phi;
    theta.reserve(tau_grid.size());
    rate.reserve(tau_grid.size());
    phi.reserve(tau_grid.size());
    for (double tau : tau_grid) {
        const double th = route.theta_at(tau);
        theta.push_back(th);
        rate.push_back(theta_dot(th, params, diagnostics));
        phi.push_back(route.phi(th));
    }
    return Trajectory({tau_grid.begin(), tau_grid.end()}, std::move(theta), std::move(rate), std::move(phi),
                      params, route.config(), Method::quadrature);
}

Trajectory sample(const AreaIvp& route, std::span<const double> tau_grid) {
    check_tau_grid(tau_grid, route.tau_begin(), route.tau_end());
    std::vector<double> theta, rate, phi;
    theta.reserve(tau_grid.size());
    rate.reserve(tau_grid.size());
    phi.reserve(tau_grid.size());
    for (double tau : tau_grid) {
        const PulseState state = route.state_at(tau);
        theta.push_back(state.theta);
        rate.push_back(state.theta_dot);
        phi.push_back(route.params().lambda == 0.0 ? 0.0 : state.phi);
    }
    return Trajectory({tau_grid.begin(), tau_grid.end()}, std::move(theta), std::move(rate), std::move(phi),
                      route.params(), route.config(), Method::ivp);
}

Trajectory solve_trajectory(const ModelParams& params, const SolverConfig& config, Method method) {
    if (method == Method::quadrature) {
        const AreaQuadrature route(params, config);
        return sample(route, uniform_grid(route.tau_begin(), route.tau_end(), config.n_grid));
    }
    return integrate_ivp(params, config);
}

Trajectory solve_trajectory(const ModelParams& params, const SolverConfig& config, Method method,
                            std::span<const double> tau_grid) {
    if (method == Method::quadrature) {
        return sample(AreaQuadrature(params, config), tau_grid);
    }
    return sample(AreaIvp(params, config), tau_grid);
}

double invert_theta(const Trajectory& trajectory, double tau_query) {
    const auto tau = trajectory.tau();
    const auto theta = trajectory.theta();
    const auto slope = trajectory.theta_dot();
    if (!(tau_query >= tau.front() && tau_query <= tau.back())) {
        std::ostringstream out;
        out << "tau = " << tau_query << " ns outside trajectory range [" << tau.front() << ", " << tau.back()
            << "]";
        throw RangeError(out.str());
    }
    const auto it = std::upper_bound(tau.begin(), tau.end(), tau_query);
    std::size_t i = static_cast<std::size_t>(it - tau.begin());
    i = std::min(i == 0 ? 0 : i - 1, tau.size() - 2);
    if (tau_query == tau[i]) return theta[i];
    if (tau_query == tau[i + 1]) return theta[i + 1];

    const double h = tau[i + 1] - tau[i];
    const double secant = (theta[i + 1] - theta[i]) / h;
    double m0 = slope[i];
    double m1 = slope[i + 1];
    // Fritsch-Carlson: keep (m0, m1)/secant inside the circle of radius 3.
    const double alpha = m0 / secant;
    const double beta = m1 / secant;
    const double r2 = alpha * alpha + beta * beta;
    if (r2 > 9.0) {
        const double scale = 3.0 / std::sqrt(r2);
        m0 = scale * alpha * secant;
        m1 = scale * beta * secant;
    }
    const double t = (tau_query - tau[i]) / h;
    const double t2 = t * t;
    const double t3 = t2 * t;
    const double h00 = 2.0 * t3 - 3.0 * t2 + 1.0;
    const double h10 = t3 - 2.0 * t2 + t;
    const double h01 = -2.0 * t3 + 3.0 * t2;
    const double h11 = t3 - t2;
    return h00 * theta[i] + h10 * h * m0 + h01 * theta[i + 1] + h11 * h * m1;
}

SolverConfig config_covering(const ModelParams& params, SolverConfig config, double tau_lo, double tau_hi) {
    const bool lossless = params.lambda == 0.0;
    for (int attempt = 0; attempt < 60; ++attempt) {
        const AreaQuadrature route(params, config);
        const bool low_ok = route.tau_begin() <= tau_lo;
        const bool high_ok = route.tau_end() >= tau_hi;
        if (low_ok && high_ok) return config;
        if (!low_ok) config.theta_min *= 0.25;
        if (!high_ok) {
            if (lossless) {
                config.theta_max = kTwoPi - 0.25 * (kTwoPi - config.theta_max);
            } else {
                config.theta_max += kTwoPi;
            }
        }
    }
    std::ostringstream out;
    out << "cannot cover tau window [" << tau_lo << ", " << tau_hi << "] ns for lambda = " << params.lambda;
    throw DomainError(out.str());
}

}  // namespace pulsearea
