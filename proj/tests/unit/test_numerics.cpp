#include <catch2/catch_amalgamated.hpp>

#include "pulsearea/dopri5.hpp"
#include "pulsearea/quadrature.hpp"

#include <cmath>
#include <numbers>
#include <vector>

using namespace pulsearea::numeric;
using Catch::Approx;

TEST_CASE("Kronrod rule is exact through degree 22, Gauss through 13", "[numerics][quadrature]") {
    for (int k = 0; k <= 23; ++k) {
        const auto panel = gauss_kronrod15([k](double x) { return std::pow(x, k); }, -1.0, 1.0);
        const double exact = k % 2 ? 0.0 : 2.0 / (k + 1);
        INFO("degree " << k);
        CHECK(panel.value == Approx(exact).margin(2e-15));
        if (k <= 13) {
            // The embedded Gauss rule is exact too, so the estimate vanishes.
            CHECK(panel.error <= 1e-15);
        }
    }
}

TEST_CASE("adaptive integration of smooth and peaked integrands", "[numerics][quadrature]") {
    const double pi = std::numbers::pi;
    auto r = integrate([](double x) { return std::sin(x); }, 0.0, pi, 1e-13, 1e-13);
    CHECK(r.converged);
    CHECK(r.value == Approx(2.0).epsilon(1e-13));

    // Sharp Lorentzian: needs many subdivisions.
    const double w = 1e-4;
    r = integrate([w](double x) { return w / (x * x + w * w); }, -1.0, 1.0, 1e-12, 1e-12);
    CHECK(r.converged);
    CHECK(r.value == Approx(2.0 * std::atan(1.0 / w)).epsilon(1e-11));

    // Integrable 1/sqrt endpoint singularity.
    r = integrate([](double x) { return 1.0 / std::sqrt(x); }, 0.0, 1.0, 1e-10, 1e-10);
    CHECK(r.value == Approx(2.0).epsilon(1e-8));

    r = integrate([](double) { return 1.0; }, 2.0, 2.0, 1e-10, 1e-10);
    CHECK(r.value == 0.0);
}

TEST_CASE("adaptive integration reports non-convergence", "[numerics][quadrature]") {
    const auto r = integrate([](double x) { return std::sin(1.0 / x) / x; }, 1e-6, 1.0, 1e-14, 1e-14, 8);
    CHECK_FALSE(r.converged);
    CHECK(r.error > 1e-14);
}

namespace {

// Harmonic oscillator: y = (cos t, -sin t).
std::vector<DenseStep<2>> run_oscillator(double tol, double t_end) {
    std::vector<DenseStep<2>> steps;
    StepControl control;
    control.abs_tol = tol;
    control.rel_tol = tol;
    integrate_dopri5<2>([](double, const State<2>& y) { return State<2>{y[1], -y[0]}; }, 0.0, State<2>{1.0, 0.0},
                        control, [&](const DenseStep<2>& s) {
                            steps.push_back(s);
                            return s.t1() >= t_end ? StepStatus::stopped : StepStatus::running;
                        });
    return steps;
}

}  // namespace

TEST_CASE("Dormand-Prince meets tolerance and dense output is consistent", "[numerics][ode]") {
    const auto steps = run_oscillator(1e-10, 10.0);
    REQUIRE(!steps.empty());
    double worst_node = 0.0;
    double worst_dense = 0.0;
    for (std::size_t i = 0; i + 1 < steps.size(); ++i) {
        // Dense output at s = 1 reproduces the next step's start.
        const auto end = steps[i].eval(steps[i].t1());
        CHECK(end[0] == Approx(steps[i + 1].y0[0]).margin(1e-14));
        worst_node = std::max(worst_node, std::abs(steps[i + 1].y0[0] - std::cos(steps[i + 1].t0)));
        for (double frac : {0.1, 0.37, 0.5, 0.81}) {
            const double t = steps[i].t0 + frac * steps[i].h;
            worst_dense = std::max(worst_dense, std::abs(steps[i].eval(t)[0] - std::cos(t)));
        }
    }
    CHECK(worst_node < 1e-8);
    CHECK(worst_dense < 1e-8);
}

TEST_CASE("Dormand-Prince global error shrinks with tolerance", "[numerics][ode]") {
    auto final_error = [](double tol) {
        const auto steps = run_oscillator(tol, 5.0);
        const auto& last = steps.back();
        return std::abs(last.eval(5.0)[0] - std::cos(5.0));
    };
    const double loose = final_error(1e-6);
    const double tight = final_error(1e-10);
    CHECK(tight < loose);
    CHECK(tight < 1e-8);
}

TEST_CASE("Dormand-Prince reports step underflow", "[numerics][ode]") {
    StepControl control;
    control.abs_tol = 1e-12;
    control.rel_tol = 1e-12;
    // y' = y^2 blows up at t = 1.
    const auto status = integrate_dopri5<1>([](double, const State<1>& y) { return State<1>{y[0] * y[0]}; }, 0.0,
                                            State<1>{1.0}, control,
                                            [](const DenseStep<1>&) { return StepStatus::running; });
    CHECK(status != StepStatus::running);
    CHECK(status != StepStatus::stopped);
}
