#include "pulsearea/errors.hpp"
#include "pulsearea/quadrature.hpp"
#include "pulsearea/solver.hpp"

#include <boost/math/tools/roots.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <sstream>

namespace pulsearea {

namespace {

constexpr double kGeometricZone = 0.5;   // rad, geometric panels inside this distance of a singular end
constexpr double kGeometricRatio = 1.25;
constexpr double kMaxPanelWidth = 0.1;   // rad

void append_uniform(std::vector<double>& nodes, double a, double b) {
    const auto count = static_cast<std::size_t>(std::ceil((b - a) / kMaxPanelWidth));
    for (std::size_t i = 1; i <= count; ++i) {
        nodes.push_back(i == count ? b : a + (b - a) * static_cast<double>(i) / static_cast<double>(count));
    }
}

// Nodes from theta_min to theta_max with π as an exact node.
std::vector<double> panel_nodes(double theta_min, double theta_max, bool lossless) {
    std::vector<double> nodes{theta_min};
    double x = theta_min;
    while (x * kGeometricRatio < kGeometricZone) {
        x *= kGeometricRatio;
        nodes.push_back(x);
    }
    append_uniform(nodes, nodes.back(), kPi);

    if (!lossless) {
        append_uniform(nodes, kPi, theta_max);
        return nodes;
    }
    // Lossless tail: geometric in the gap u = 2π - θ.
    const double gap = kTwoPi - theta_max;
    if (gap >= kGeometricZone) {
        append_uniform(nodes, kPi, theta_max);
        return nodes;
    }
    append_uniform(nodes, kPi, kTwoPi - kGeometricZone);
    double u = kGeometricZone;
    while (u / kGeometricRatio > gap) {
        u /= kGeometricRatio;
        nodes.push_back(kTwoPi - u);
    }
    nodes.push_back(theta_max);
    return nodes;
}

std::string describe(const ModelParams& params, double a, double b) {
    std::ostringstream out;
    out << "lambda = " << params.lambda << ", theta in [" << a << ", " << b << "]";
    return out.str();
}

}  // namespace

AreaQuadrature::AreaQuadrature(const ModelParams& params, const SolverConfig& config)
    : params_(params), config_(config) {
    validate(params_);
    validate(config_);
    const bool lossless = params_.lambda == 0.0;
    if (lossless && config_.theta_max >= kTwoPi) {
        throw DomainError("lambda = 0: theta_max must stay below 2*pi (the soliton reaches 2*pi only as tau -> inf)");
    }

    node_theta_ = panel_nodes(config_.theta_min, config_.theta_max, lossless);
    const std::size_t n = node_theta_.size();
    const auto pi_node = static_cast<std::size_t>(
        std::find(node_theta_.begin(), node_theta_.end(), kPi) - node_theta_.begin());

    double s_at_pi = 0.0;
    if (config_.anchor == Anchor::leading_edge) {
        // M τ(θ) = ln(θ/4) + ∫_0^θ (ds/dϑ - 1/ϑ) dϑ. The lossless 1/(2π - ϑ)
        // part of the subtracted singularity integrates to ln 2 over [0, π].
        const double sqrt_norm = std::sqrt(params_.bracket_norm());
        auto remainder = [&](double t) {
            const double tail = lossless ? 1.0 / (kTwoPi - t) : 0.0;
            return sqrt_norm / std::sqrt(area_bracket(t, params_.lambda)) - 1.0 / t - tail;
        };
        const auto result = numeric::integrate(remainder, 0.0, kPi, config_.abs_tol, config_.rel_tol);
        if (!result.converged) {
            throw ToleranceError("tau anchor integral did not converge (" + describe(params_, 0.0, kPi) + ")",
                                 result.error, config_.abs_tol);
        }
        max_error_ = std::max(max_error_, result.error);
        s_at_pi = std::log(kPi / 4.0) + result.value + (lossless ? std::log(2.0) : 0.0);
    }

    std::vector<double> s(n, 0.0);
    node_phi_.assign(n, 0.0);
    s[pi_node] = s_at_pi;
    for (std::size_t j = pi_node; j + 1 < n; ++j) {
        s[j + 1] = s[j] + scaled_tau_increment(node_theta_[j], node_theta_[j + 1]);
        node_phi_[j + 1] = node_phi_[j] + phi_increment(node_theta_[j], node_theta_[j + 1]);
    }
    for (std::size_t j = pi_node; j > 0; --j) {
        s[j - 1] = s[j] - scaled_tau_increment(node_theta_[j - 1], node_theta_[j]);
        node_phi_[j - 1] = node_phi_[j] - phi_increment(node_theta_[j - 1], node_theta_[j]);
    }
    node_tau_.resize(n);
    for (std::size_t j = 0; j < n; ++j) node_tau_[j] = s[j] / params_.M;
}

double AreaQuadrature::scaled_tau_increment(double from, double to) const {
    if (from == to) return 0.0;
    const double lambda = params_.lambda;
    const double sqrt_norm = std::sqrt(params_.bracket_norm());
    const bool lossless = lambda == 0.0;
    auto remainder = [&](double t) {
        const double tail = lossless ? 1.0 / (kTwoPi - t) : 0.0;
        return sqrt_norm / std::sqrt(area_bracket(t, lambda)) - 1.0 / t - tail;
    };
    const auto result = numeric::integrate(remainder, from, to, config_.abs_tol, config_.rel_tol);
    if (!result.converged) {
        throw ToleranceError("tau quadrature did not converge (" + describe(params_, from, to) + ")",
                             result.error, config_.abs_tol);
    }
    max_error_ = std::max(max_error_, result.error);
    double log_part = std::log(to / from);
    if (lossless) log_part -= std::log((kTwoPi - to) / (kTwoPi - from));
    return result.value + log_part;
}

double AreaQuadrature::phi_increment(double from, double to) const {
    const double lambda = params_.lambda;
    if (lambda == 0.0 || from == to) return 0.0;
    auto remainder = [&](double t) { return phase_rate(t, lambda) - lambda / t; };
    const auto result = numeric::integrate(remainder, from, to, config_.abs_tol, config_.rel_tol);
    if (!result.converged) {
        throw ToleranceError("phi quadrature did not converge (" + describe(params_, from, to) + ")",
                             result.error, config_.abs_tol);
    }
    max_error_ = std::max(max_error_, result.error);
    return result.value + lambda * std::log(to / from);
}

std::size_t AreaQuadrature::panel_of_theta(double theta) const {
    if (!(theta >= node_theta_.front() && theta <= node_theta_.back())) {
        std::ostringstream out;
        out << "theta = " << theta << " outside [" << node_theta_.front() << ", " << node_theta_.back() << "]";
        throw RangeError(out.str());
    }
    const auto it = std::upper_bound(node_theta_.begin(), node_theta_.end(), theta);
    const auto j = static_cast<std::size_t>(it - node_theta_.begin());
    return std::min(j == 0 ? 0 : j - 1, node_theta_.size() - 2);
}

double AreaQuadrature::tau(double theta) const {
    const std::size_t j = panel_of_theta(theta);
    return node_tau_[j] + scaled_tau_increment(node_theta_[j], theta) / params_.M;
}

double AreaQuadrature::phi(double theta) const {
    const std::size_t j = panel_of_theta(theta);
    return node_phi_[j] + phi_increment(node_theta_[j], theta);
}

double AreaQuadrature::theta_at(double tau) const {
    if (!(tau >= tau_begin() && tau <= tau_end())) {
        std::ostringstream out;
        out << "tau = " << tau << " ns outside [" << tau_begin() << ", " << tau_end() << "]";
        throw RangeError(out.str());
    }
    const auto it = std::upper_bound(node_tau_.begin(), node_tau_.end(), tau);
    std::size_t j = static_cast<std::size_t>(it - node_tau_.begin());
    j = std::min(j == 0 ? 0 : j - 1, node_tau_.size() - 2);
    if (tau == node_tau_[j]) return node_theta_[j];
    if (tau == node_tau_[j + 1]) return node_theta_[j + 1];

    const double lo = node_theta_[j];
    const double hi = node_theta_[j + 1];
    const double target = (tau - node_tau_[j]) * params_.M;
    const double sqrt_norm = std::sqrt(params_.bracket_norm());
    auto residual = [&](double theta) {
        const double value = scaled_tau_increment(lo, theta) - target;
        const double slope = sqrt_norm / std::sqrt(area_bracket(theta, params_.lambda));
        return std::make_pair(value, slope);
    };
    const double frac = (tau - node_tau_[j]) / (node_tau_[j + 1] - node_tau_[j]);
    const double guess = lo + frac * (hi - lo);
    std::uintmax_t iterations = 100;
    return boost::math::tools::newton_raphson_iterate(residual, guess, lo, hi,
                                                      std::numeric_limits<double>::digits - 3,
                                                      iterations);
}

namespace {

void check_theta_grid(std::span<const double> grid, const SolverConfig& config) {
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (!(grid[i] >= config.theta_min && grid[i] <= config.theta_max)) {
            throw ValidationError("theta grid value outside [theta_min, theta_max]");
        }
        if (i > 0 && !(grid[i] > grid[i - 1])) {
            throw ValidationError("theta grid must be strictly increasing");
        }
    }
}

}  // namespace

std::vector<double> tau_of_theta(std::span<const double> theta_grid, const ModelParams& params,
                                 const SolverConfig& config) {
    const AreaQuadrature route(params, config);
    check_theta_grid(theta_grid, config);
    std::vector<double> out;
    out.reserve(theta_grid.size());
    for (double theta : theta_grid) out.push_back(route.tau(theta));
    return out;
}

std::vector<double> phi_of_theta(std::span<const double> theta_grid, const ModelParams& params,
                                 const SolverConfig& config) {
    const AreaQuadrature route(params, config);
    check_theta_grid(theta_grid, config);
    std::vector<double> out;
    out.reserve(theta_grid.size());
    for (double theta : theta_grid) out.push_back(route.phi(theta));
    return out;
}

}  // namespace pulsearea
