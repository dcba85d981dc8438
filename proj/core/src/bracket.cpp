#include "pulsearea/errors.hpp"
#include "pulsearea/solver.hpp"

#include <cmath>
#include <string>

namespace pulsearea {

namespace {

// e^x - 1 - x for x >= 0.
double expm1_minus_x(double x) {
    if (x < 1.0) {
        double term = 0.5 * x * x;
        double sum = term;
        for (int k = 3; k < 40 && term > 1e-18 * sum; ++k) {
            term *= x / k;
            sum += term;
        }
        return sum;
    }
    return std::expm1(x) - x;
}

// x - sin x for x >= 0.
double x_minus_sin(double x) {
    if (x < 1.0) {
        const double x2 = x * x;
        double term = x * x2 / 6.0;
        double sum = term;
        for (int k = 4; k < 40 && std::abs(term) > 1e-18 * sum; k += 2) {
            term *= -x2 / (k * (k + 1));
            sum += term;
        }
        return sum;
    }
    return x - std::sin(x);
}

}  // namespace

double area_bracket(double theta, double lambda) {
    if (!(theta >= 0.0)) {
        throw DomainError("area_bracket: theta must be >= 0, got " + std::to_string(theta));
    }
    const double a = 0.5 * lambda * theta;
    if (a > 30.0) {
        return 2.0 - std::exp(-a) * (2.0 * std::cos(theta) + lambda * std::sin(theta));
    }
    const double s = std::sin(0.5 * theta);
    return std::exp(-a) * (4.0 * s * s + 2.0 * expm1_minus_x(a) + lambda * x_minus_sin(theta));
}

double theta_dot(double theta, const ModelParams& params, SolverDiagnostics& diagnostics) {
    const double radicand = area_bracket(theta, params.lambda) / params.bracket_norm();
    if (radicand < 0.0) {
        if (radicand > -kRadicandClampWindow) {
            ++diagnostics.clamped_radicands;
            return 0.0;
        }
        throw SolverError("theta_dot: negative radicand " + std::to_string(radicand) +
                          " at theta = " + std::to_string(theta));
    }
    return params.M * std::sqrt(radicand);
}

double theta_dot(double theta, const ModelParams& params) {
    SolverDiagnostics unused;
    return theta_dot(theta, params, unused);
}

double phase_rate(double theta, double lambda) {
    if (!(theta >= 0.0)) {
        throw DomainError("phase_rate: theta must be >= 0, got " + std::to_string(theta));
    }
    if (lambda == 0.0 || theta == 0.0) {
        return lambda == 0.0 ? 0.0 : HUGE_VAL;
    }
    // (1 + λ²/4)(1 - e^{-λθ}) / B is the same quantity with both numerator
    // and denominator multiplied by 2 e^{-λθ/2}.
    const double norm = 1.0 + 0.25 * lambda * lambda;
    return norm * -std::expm1(-lambda * theta) / area_bracket(theta, lambda);
}

}  // namespace pulsearea
