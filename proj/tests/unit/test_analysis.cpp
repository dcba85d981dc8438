#include <catch2/catch_amalgamated.hpp>

#include "oracles.hpp"
#include "pulsearea/analysis.hpp"
#include "pulsearea/errors.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

using namespace pulsearea;
using Catch::Approx;

TEST_CASE("soliton oracle", "[analysis]") {
    const auto p = make_params(0.5, 0.0);
    const auto peak = soliton_oracle(0.0, p);
    CHECK(peak.theta == Approx(kPi).epsilon(1e-15));
    CHECK(peak.envelope == Approx(2.0 * p.M).epsilon(1e-15));
    CHECK(peak.phi == 0.0);

    const auto tail = soliton_oracle(50.0, p);
    CHECK(tail.theta == Approx(kTwoPi).epsilon(1e-15));
    CHECK(tail.envelope == Approx(0.0).margin(1e-30));

    CHECK(soliton_oracle(std::log(std::tan(3.0 * kPi / 8.0)) / p.M, p).theta == Approx(1.5 * kPi).epsilon(1e-14));
    CHECK_THROWS_AS(soliton_oracle(0.0, make_params(0.5, 0.1)), ValidationError);
}

TEST_CASE("extrema of the lossless envelope", "[analysis]") {
    const auto p = make_params(0.5, 0.0);
    const auto t = solve_trajectory(p, default_config(0.0), Method::quadrature);
    const auto ex = find_envelope_extrema(t);
    REQUIRE(ex.size() == 1);
    CHECK(ex[0].kind == ExtremumKind::maximum);
    CHECK(ex[0].tau == Approx(0.0).margin(1e-4));
    CHECK(ex[0].theta == Approx(kPi).margin(1e-3));
    CHECK(ex[0].envelope == Approx(2.0 * p.M).epsilon(1e-8));
}

TEST_CASE("extrema sit at multiples of pi under loss", "[analysis]") {
    for (double lambda : {0.25, 0.5, 1.0}) {
        const auto p = make_params(0.5, lambda);
        const auto t = solve_trajectory(p, default_config(lambda), Method::quadrature);
        const auto ex = find_envelope_extrema(t);
        int maxima = 0;
        for (const auto& e : ex) {
            INFO("lambda " << lambda << " tau " << e.tau);
            CHECK(e.area_residual <= kExtremumAreaTolerance);
            CHECK(e.area_residual >= 0.0);
            if (e.kind == ExtremumKind::maximum) ++maxima;
        }
        CHECK(maxima >= 2);
    }
}

TEST_CASE("extrema of a synthetic envelope", "[analysis]") {
    // θ(τ) = τ + sin τ has θ̇ = 1 + cos τ with minima at odd multiples of π.
    std::vector<double> tau, theta, rate, phi;
    for (int i = 0; i <= 4000; ++i) {
        const double x = 0.1 + 12.0 * i / 4000.0;
        tau.push_back(x);
        theta.push_back(x + std::sin(x));
        rate.push_back(1.0 + std::cos(x) + 1e-3);
        phi.push_back(0.0);
    }
    const Trajectory t(tau, theta, rate, phi, make_params(1.0, 0.0), default_config(0.0), Method::quadrature);
    const auto ex = find_envelope_extrema(t);
    REQUIRE(ex.size() == 3);
    CHECK(ex[0].kind == ExtremumKind::minimum);
    CHECK(ex[0].tau == Approx(kPi).margin(1e-4));
    CHECK(ex[1].kind == ExtremumKind::maximum);
    CHECK(ex[1].tau == Approx(kTwoPi).margin(1e-4));
    CHECK(ex[2].tau == Approx(3.0 * kPi).margin(1e-4));
}

TEST_CASE("asymptotic limits", "[analysis]") {
    const auto p = make_params(0.5, 1.0);
    CHECK(plateau_envelope_limit(p) == Approx(2.5298).epsilon(1e-4));
    CHECK(phase_slope_limit(p) == Approx(1.5811).epsilon(1e-4));
    CHECK(plateau_envelope_large_lambda(p) == Approx(std::sqrt(8.0) * 2.0).epsilon(1e-15));
    CHECK(phase_slope_large_lambda(p) == Approx(2.0 / std::sqrt(8.0)).epsilon(1e-15));

    const auto heavy = make_params(0.5, 1e4);
    CHECK(plateau_envelope_limit(heavy) / plateau_envelope_large_lambda(heavy) == Approx(1.0).epsilon(1e-7));
    CHECK(phase_slope_limit(heavy) / phase_slope_large_lambda(heavy) == Approx(1.0).epsilon(1e-7));
}

TEST_CASE("measured asymptotes converge with range", "[analysis]") {
    const auto p = make_params(0.5, 1.0);
    const auto a = measure_asymptotes(solve_trajectory(p, default_config(1.0), Method::quadrature));
    CHECK(a.plateau_rel_error <= kAsymptoteTolerance);
    CHECK(a.phase_slope_rel_error <= kAsymptoteTolerance);
    CHECK(a.final_area_excess > 0.0);

    SolverConfig short_run = default_config(1.0);
    short_run.theta_max = 4.0 * kPi;
    SolverConfig long_run = default_config(1.0);
    long_run.theta_max = 8.0 * kPi;
    const auto s = measure_asymptotes(solve_trajectory(p, short_run, Method::quadrature));
    const auto l = measure_asymptotes(solve_trajectory(p, long_run, Method::quadrature));
    CHECK(l.plateau_rel_error <= s.plateau_rel_error);
    CHECK(l.phase_slope_rel_error <= s.phase_slope_rel_error);

    SolverConfig too_short = default_config(1.0);
    too_short.theta_max = 3.0 * kPi;
    CHECK_THROWS_AS(measure_asymptotes(solve_trajectory(p, too_short, Method::quadrature)), RangeError);
    CHECK_THROWS_AS(
        measure_asymptotes(solve_trajectory(make_params(0.5, 0.0), default_config(0.0), Method::quadrature)),
        ValidationError);
}

TEST_CASE("gamma audit synthetic phases", "[analysis]") {
    const double lambda = 0.5;
    const auto p = make_params(0.5, lambda);
    const auto t = solve_trajectory(p, default_config(lambda), Method::quadrature);
    const std::vector<double> quarter(t.tau().size(), kPi / 2.0);
    const std::vector<double> zero(t.tau().size(), 0.0);
    const auto one = gamma_audit(t, quarter, lambda);
    const auto none = gamma_audit(t, zero, lambda);
    REQUIRE(one.size() == t.tau().size() - 1);
    for (const auto& g : one) CHECK(g.ratio == Approx(1.0).epsilon(1e-12));
    for (const auto& g : none) CHECK(g.ratio == 0.0);

    const auto real = gamma_audit(t, 2.0 * lambda);
    for (const auto& g : real) CHECK(std::isfinite(g.ratio));
    CHECK_THROWS_AS(gamma_audit(t, std::vector<double>(3, 0.0), lambda), ValidationError);
}

TEST_CASE("route comparison across the sweep", "[analysis]") {
    for (double lambda : {0.0, 0.1, 0.25, 0.5, 1.0}) {
        const auto r = compare_routes(make_params(0.5, lambda), default_config(lambda));
        INFO("lambda " << lambda);
        CHECK(r.max_theta_diff <= kRouteThetaTolerance);
        CHECK(r.max_phi_diff <= kRoutePhiTolerance);
        CHECK(r.tau_hi > r.tau_lo);
    }
}

TEST_CASE("audit report for the lossless and lossy cases", "[analysis]") {
    const auto r0 = build_audit_report(make_params(0.5, 0.0), default_config(0.0));
    REQUIRE(r0.soliton_max_abs_err.has_value());
    CHECK(*r0.soliton_max_abs_err <= kSolitonTolerance);
    CHECK(r0.extrema.size() == 1);
    CHECK(r0.gamma_ratio.empty());
    CHECK(r0.passed());

    const auto r1 = build_audit_report(make_params(0.5, 1.0), default_config(1.0));
    CHECK_FALSE(r1.soliton_max_abs_err.has_value());
    REQUIRE(r1.asymptotes.has_value());
    CHECK(r1.asymptotes->plateau_rel_error <= kAsymptoteTolerance);
    CHECK(r1.asymptotes->phase_slope_rel_error <= kAsymptoteTolerance);
    CHECK(r1.final_area_excess > 0.0);
    CHECK(r1.gamma_spectral_slope == 2.0);
    CHECK(r1.passed());
    CHECK(r1.failed_checks().empty());

    const auto r01 = build_audit_report(make_params(0.5, 0.1), default_config(0.1));
    CHECK(r01.final_area_excess > 0.0);
}

TEST_CASE("audit flags a loose tolerance", "[analysis]") {
    SolverConfig c = default_config(0.0);
    c.rel_tol = 0.5;
    const auto r = build_audit_report(make_params(0.5, 0.0), c);
    CHECK_FALSE(r.passed());
    const auto failed = r.failed_checks();
    CHECK(std::find(failed.begin(), failed.end(), "route_equivalence_theta") != failed.end());
}
