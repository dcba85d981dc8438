#include "pulsearea/dopri5.hpp"
#include "pulsearea/errors.hpp"
#include "pulsearea/solver.hpp"

#include <boost/math/tools/roots.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <sstream>

namespace pulsearea {

namespace {

using Y = numeric::State<3>;  // (θ, θ̇/M, φ) against s = M τ

constexpr double kMaxScaledSpan = 1e4;  // s units; far beyond any reachable θ_max
constexpr double kMaxScaledStep = 0.25;
// Per-step tolerances are this fraction of the configured ones. Near the
// lossless saddle at 2π a first-integral error ε moves θ by about ε/(4u)
// (u = 2π - θ), so the local error has to sit well below the requested
// trajectory accuracy.
constexpr double kStepToleranceFactor = 1e-2;

double crossing(const numeric::DenseStep<3>& step, double level) {
    auto f = [&](double s) { return step.eval(s)[0] - level; };
    const double f0 = step.y0[0] - level;
    const double f1 = f(step.t1());
    if (f0 == 0.0) return step.t0;
    if (f1 == 0.0) return step.t1();
    std::uintmax_t iterations = 200;
    auto tol = boost::math::tools::eps_tolerance<double>(std::numeric_limits<double>::digits - 2);
    const auto [a, b] = boost::math::tools::toms748_solve(f, step.t0, step.t1(), f0, f1, tol, iterations);
    return 0.5 * (a + b);
}

}  // namespace

AreaIvp::AreaIvp(const ModelParams& params, const SolverConfig& config)
    : params_(params), config_(config) {
    validate(params_);
    validate(config_);
    const double lambda = params_.lambda;
    const double norm = params_.bracket_norm();
    if (lambda == 0.0 && config_.theta_max >= kTwoPi) {
        throw DomainError("lambda = 0: theta_max must stay below 2*pi (the separatrix never reaches 2*pi)");
    }

    auto rhs = [lambda](double, const Y& y) -> Y {
        const double theta = y[0];
        const double rate = y[1];
        return {rate, std::exp(-0.5 * lambda * theta) * std::sin(theta),
                -std::expm1(-lambda * theta) / rate};
    };

    const Y start{config_.theta_min, std::sqrt(area_bracket(config_.theta_min, lambda) / norm), 0.0};

    numeric::StepControl control;
    control.abs_tol = kStepToleranceFactor * config_.abs_tol;
    control.rel_tol = kStepToleranceFactor * config_.rel_tol;
    control.h_initial = 1e-3;
    control.h_max = kMaxScaledStep;

    const double drift_limit = std::max(1e-6, 1e4 * std::max(config_.rel_tol, config_.abs_tol));
    const double theta_max = config_.theta_max;
    std::string failure;
    double s_end = 0.0;

    auto on_step = [&](const numeric::DenseStep<3>& step) {
        const Y y = step.eval(step.t1());
        if (!(y[1] > 0.0)) {
            // Energy deficit: the pendulum turns back before theta_max. Keep
            // the monotone part and report the shortfall.
            if (steps_.empty() || step.y0[0] < kPi) {
                failure = "area rate reached zero before theta = pi";
                return numeric::StepStatus::rejected_by_caller;
            }
            s_end = step.t0;
            reached_theta_max_ = false;
            return numeric::StepStatus::stopped;
        }
        steps_.push_back(Step{step.t0, step.h, step.y0, step.k});
        const double drift = std::abs(y[1] * y[1] - area_bracket(std::max(y[0], 0.0), lambda) / norm);
        max_drift_ = std::max(max_drift_, drift);
        if (drift > drift_limit) {
            std::ostringstream out;
            out << "first-integral drift " << drift << " exceeds " << drift_limit;
            failure = out.str();
            return numeric::StepStatus::rejected_by_caller;
        }
        if (y[0] >= theta_max) {
            s_end = crossing(step, theta_max);
            return numeric::StepStatus::stopped;
        }
        if (step.t1() > kMaxScaledSpan) {
            failure = "theta_max not reached within the integration span";
            return numeric::StepStatus::rejected_by_caller;
        }
        return numeric::StepStatus::running;
    };

    const auto status = numeric::integrate_dopri5<3>(rhs, 0.0, start, control, on_step);
    if (status != numeric::StepStatus::stopped) {
        std::ostringstream out;
        out << "IVP failed for lambda = " << lambda << ": ";
        switch (status) {
            case numeric::StepStatus::step_underflow: out << "step size underflow"; break;
            case numeric::StepStatus::step_limit: out << "step limit reached"; break;
            default: out << failure; break;
        }
        throw IntegrationError(out.str());
    }

    // Anchor: locate θ = π.
    const auto pi_step = std::find_if(steps_.begin(), steps_.end(), [&](const Step& st) {
        numeric::DenseStep<3> d{st.s0, st.h, st.y0, st.k};
        return d.eval(d.t1())[0] >= kPi;
    });
    numeric::DenseStep<3> d{pi_step->s0, pi_step->h, pi_step->y0, pi_step->k};
    const double s_pi = crossing(d, kPi);
    phi_shift_ = d.eval(s_pi)[2];
    if (config_.anchor == Anchor::area_pi) {
        s_shift_ = s_pi;
    } else {
        // M τ(θ) = ln(θ/4) + λθ/6 + O(θ²) near the leading edge.
        const double t0 = config_.theta_min;
        s_shift_ = -(std::log(t0 / 4.0) + lambda * t0 / 6.0);
    }
    tau_begin_ = (0.0 - s_shift_) / params_.M;
    tau_end_ = (s_end - s_shift_) / params_.M;
    theta_end_ = reached_theta_max_ ? theta_max : eval_scaled(s_end)[0];
}

std::array<double, 3> AreaIvp::eval_scaled(double s) const {
    const auto it = std::upper_bound(steps_.begin(), steps_.end(), s,
                                     [](double v, const Step& st) { return v < st.s0; });
    const std::size_t j = it == steps_.begin() ? 0 : static_cast<std::size_t>(it - steps_.begin()) - 1;
    const Step& st = steps_[j];
    const numeric::DenseStep<3> d{st.s0, st.h, st.y0, st.k};
    return d.eval(s);
}

PulseState AreaIvp::state_at(double tau) const {
    if (!(tau >= tau_begin_ && tau <= tau_end_)) {
        std::ostringstream out;
        out << "tau = " << tau << " ns outside [" << tau_begin_ << ", " << tau_end_ << "]";
        throw RangeError(out.str());
    }
    const double s = tau * params_.M + s_shift_;
    const auto y = eval_scaled(s);
    return {y[0], params_.M * y[1], y[2] - phi_shift_};
}

Trajectory integrate_ivp(const ModelParams& params, const SolverConfig& config) {
    const AreaIvp route(params, config);
    if (!route.reached_theta_max()) {
        std::ostringstream out;
        out << "IVP failed for lambda = " << params.lambda << ": area rate reached zero at theta = "
            << route.theta_end() << " < theta_max = " << config.theta_max
            << " (first-integral drift " << route.first_integral_drift() << ")";
        throw IntegrationError(out.str());
    }
    return sample(route, uniform_grid(route.tau_begin(), route.tau_end(), config.n_grid));
}

}  // namespace pulsearea
