#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <string>
#include <vector>

namespace pulsearea::numeric {

/// Dormand-Prince 5(4) coefficients (FSAL, seven stages) together with the
/// continuous extension used by Hairer's DOPRI5.
struct DormandPrince54 {
    static constexpr std::array<double, 7> c{0.0, 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0};
    static constexpr double a21 = 1.0 / 5.0;
    static constexpr double a31 = 3.0 / 40.0, a32 = 9.0 / 40.0;
    static constexpr double a41 = 44.0 / 45.0, a42 = -56.0 / 15.0, a43 = 32.0 / 9.0;
    static constexpr double a51 = 19372.0 / 6561.0, a52 = -25360.0 / 2187.0,
                            a53 = 64448.0 / 6561.0, a54 = -212.0 / 729.0;
    static constexpr double a61 = 9017.0 / 3168.0, a62 = -355.0 / 33.0, a63 = 46732.0 / 5247.0,
                            a64 = 49.0 / 176.0, a65 = -5103.0 / 18656.0;
    static constexpr std::array<double, 7> b{35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0,
                                             -2187.0 / 6784.0, 11.0 / 84.0, 0.0};
    // b - b_hat
    static constexpr std::array<double, 7> e{-71.0 / 57600.0, 0.0, 71.0 / 16695.0, -71.0 / 1920.0,
                                             17253.0 / 339200.0, -22.0 / 525.0, 1.0 / 40.0};
    // Dense output: y(t + s h) = y + h sum_i k_i sum_j p[i][j] s^(j+1)
    static constexpr std::array<std::array<double, 4>, 7> p{{
        {1.0, -8048581381.0 / 2820520608.0, 8663915743.0 / 2820520608.0,
         -12715105075.0 / 11282082432.0},
        {0.0, 0.0, 0.0, 0.0},
        {0.0, 131558114200.0 / 32700410799.0, -68118460800.0 / 10900136933.0,
         87487479700.0 / 32700410799.0},
        {0.0, -1754552775.0 / 470086768.0, 14199869525.0 / 1410260304.0,
         -10690763975.0 / 1880347072.0},
        {0.0, 127303824393.0 / 49829197408.0, -318862633887.0 / 49829197408.0,
         701980252875.0 / 199316789632.0},
        {0.0, -282668133.0 / 205662961.0, 2019193451.0 / 616988883.0,
         -1453857185.0 / 822651844.0},
        {0.0, 40617522.0 / 29380423.0, -110615467.0 / 29380423.0, 69997945.0 / 29380423.0},
    }};
};

template <std::size_t N>
using State = std::array<double, N>;

/// One accepted step with everything needed for dense output on [t0, t0 + h].
template <std::size_t N>
struct DenseStep {
    double t0 = 0.0;
    double h = 0.0;
    State<N> y0{};
    std::array<State<N>, 7> k{};

    double t1() const noexcept { return t0 + h; }

    State<N> eval(double t) const {
        using T = DormandPrince54;
        const double s = (t - t0) / h;
        std::array<double, 7> q{};
        for (std::size_t i = 0; i < 7; ++i) {
            q[i] = s * (T::p[i][0] + s * (T::p[i][1] + s * (T::p[i][2] + s * T::p[i][3])));
        }
        State<N> y = y0;
        for (std::size_t n = 0; n < N; ++n) {
            double acc = 0.0;
            for (std::size_t i = 0; i < 7; ++i) acc += q[i] * k[i][n];
            y[n] += h * acc;
        }
        return y;
    }
};

struct StepControl {
    double abs_tol = 1e-10;
    double rel_tol = 1e-8;
    double h_initial = 1e-3;
    double h_max = std::numeric_limits<double>::infinity();
    std::size_t max_steps = 1'000'000;
};

enum class StepStatus { running, stopped, step_underflow, step_limit, rejected_by_caller };

/// Adaptive Dormand-Prince 5(4) driver.
///
/// `rhs(t, y)` returns dy/dt. After every accepted step `on_step(step)` is
/// called with the dense step and returns StepStatus::running to continue
/// or any other value to stop. The integrator keeps no history; callers
/// store whatever steps they need.
template <std::size_t N, class Rhs, class OnStep>
StepStatus integrate_dopri5(Rhs&& rhs, double t, State<N> y, const StepControl& control,
                            OnStep&& on_step) {
    using T = DormandPrince54;
    auto axpy = [](const State<N>& base, double h, std::initializer_list<std::pair<double, const State<N>*>> terms) {
        State<N> out = base;
        for (const auto& [coef, vec] : terms) {
            if (coef == 0.0) continue;
            for (std::size_t n = 0; n < N; ++n) out[n] += h * coef * (*vec)[n];
        }
        return out;
    };

    double h = std::min(control.h_initial, control.h_max);
    State<N> k1 = rhs(t, y);
    double err_prev = 1e-4;
    bool rejected_last = false;

    for (std::size_t steps = 0; steps < control.max_steps;) {
        if (h < 64.0 * std::numeric_limits<double>::epsilon() * std::max(std::abs(t), 1.0)) {
            return StepStatus::step_underflow;
        }
        const State<N> k2 = rhs(t + T::c[1] * h, axpy(y, h, {{T::a21, &k1}}));
        const State<N> k3 = rhs(t + T::c[2] * h, axpy(y, h, {{T::a31, &k1}, {T::a32, &k2}}));
        const State<N> k4 =
            rhs(t + T::c[3] * h, axpy(y, h, {{T::a41, &k1}, {T::a42, &k2}, {T::a43, &k3}}));
        const State<N> k5 = rhs(t + T::c[4] * h,
                                axpy(y, h, {{T::a51, &k1}, {T::a52, &k2}, {T::a53, &k3}, {T::a54, &k4}}));
        const State<N> k6 =
            rhs(t + h, axpy(y, h, {{T::a61, &k1}, {T::a62, &k2}, {T::a63, &k3}, {T::a64, &k4}, {T::a65, &k5}}));
        const State<N> y_new = axpy(
            y, h, {{T::b[0], &k1}, {T::b[2], &k3}, {T::b[3], &k4}, {T::b[4], &k5}, {T::b[5], &k6}});
        const State<N> k7 = rhs(t + h, y_new);

        double err = 0.0;
        for (std::size_t n = 0; n < N; ++n) {
            const double est = h * (T::e[0] * k1[n] + T::e[2] * k3[n] + T::e[3] * k4[n] +
                                    T::e[4] * k5[n] + T::e[5] * k6[n] + T::e[6] * k7[n]);
            const double scale =
                control.abs_tol + control.rel_tol * std::max(std::abs(y[n]), std::abs(y_new[n]));
            err += (est / scale) * (est / scale);
        }
        err = std::sqrt(err / static_cast<double>(N));

        if (!std::isfinite(err)) {
            h *= 0.1;
            rejected_last = true;
            continue;
        }

        if (err <= 1.0) {
            DenseStep<N> step{t, h, y, {k1, k2, k3, k4, k5, k6, k7}};
            ++steps;
            t += h;
            y = y_new;
            k1 = k7;
            const StepStatus status = on_step(step);
            if (status != StepStatus::running) {
                return status;
            }
            // PI controller (Hairer's DOPRI5 defaults).
            const double e = std::max(err, 1e-10);
            double factor = 0.9 * std::pow(e, -0.7 / 5.0) * std::pow(err_prev, 0.4 / 5.0);
            factor = std::clamp(factor, 0.2, rejected_last ? 1.0 : 10.0);
            h = std::min(h * factor, control.h_max);
            err_prev = std::max(err, 1e-4);
            rejected_last = false;
        } else {
            h *= std::max(0.2, 0.9 * std::pow(err, -1.0 / 5.0));
            rejected_last = true;
        }
    }
    return StepStatus::step_limit;
}

}  // namespace pulsearea::numeric
