#include "pulsearea/model.hpp"

#include "pulsearea/errors.hpp"

#include <cmath>
#include <string>

namespace pulsearea {

namespace {

void require(bool ok, const std::string& message) {
    if (!ok) throw ValidationError(message);
}

}  // namespace

void validate(const ModelParams& params) {
    require(std::isfinite(params.M) && params.M > 0.0, "M must be finite and > 0");
    require(std::isfinite(params.lambda) && params.lambda >= 0.0, "lambda must be finite and >= 0");
    require(std::isfinite(params.mu) && params.mu > 0.0, "mu must be finite and > 0");
    require(std::isfinite(params.omega_z), "omega_z must be finite");
}

ModelParams make_params(double M_inv_ns, double lambda) {
    require(std::isfinite(M_inv_ns) && M_inv_ns > 0.0, "M_inv_ns must be finite and > 0");
    require(std::isfinite(lambda) && lambda >= 0.0, "lambda must be finite and >= 0");
    ModelParams params;
    params.M = 1.0 / M_inv_ns;
    params.lambda = lambda;
    params.mu = 1.0;
    return params;
}

double peak_coupling_freq(const ModelParams& params) {
    validate(params);
    return 2.0 * params.M / kTwoPi;
}

std::string_view to_string(Anchor anchor) {
    switch (anchor) {
        case Anchor::area_pi: return "area_pi";
        case Anchor::leading_edge: return "leading_edge";
    }
    return "unknown";
}

Anchor parse_anchor(std::string_view text) {
    if (text == "area_pi") return Anchor::area_pi;
    if (text == "leading_edge") return Anchor::leading_edge;
    throw ValidationError("unknown anchor '" + std::string(text) + "' (expected area_pi or leading_edge)");
}

std::string_view to_string(Method method) {
    switch (method) {
        case Method::quadrature: return "quadrature";
        case Method::ivp: return "ivp";
    }
    return "unknown";
}

Method parse_method(std::string_view text) {
    if (text == "quadrature") return Method::quadrature;
    if (text == "ivp") return Method::ivp;
    throw ValidationError("unknown method '" + std::string(text) + "' (expected quadrature or ivp)");
}

SolverConfig default_config(double lambda) {
    SolverConfig config;
    config.theta_max = lambda > 0.0 ? 6.0 * kPi : kTwoPi - kDefaultLosslessGap;
    return config;
}

void validate(const SolverConfig& config) {
    require(std::isfinite(config.theta_min) && config.theta_min > 0.0, "theta_min must be > 0");
    require(config.theta_min < kPi, "theta_min must be < pi");
    require(std::isfinite(config.theta_max) && config.theta_max > kPi, "theta_max must be > pi");
    require(config.n_grid >= 2, "n_grid must be >= 2");
    require(config.abs_tol > 0.0 && config.abs_tol < 1.0, "abs_tol must lie in (0, 1)");
    require(config.rel_tol > 0.0 && config.rel_tol < 1.0, "rel_tol must lie in (0, 1)");
}

std::vector<double> uniform_grid(double a, double b, std::size_t n) {
    require(n >= 2, "uniform_grid needs at least two points");
    require(std::isfinite(a) && std::isfinite(b) && a < b, "uniform_grid needs a < b");
    std::vector<double> grid(n);
    const double step = (b - a) / static_cast<double>(n - 1);
    for (std::size_t i = 0; i < n; ++i) grid[i] = a + step * static_cast<double>(i);
    grid.back() = b;
    return grid;
}

}  // namespace pulsearea
