#pragma once

#include "pulsearea/model.hpp"
#include "pulsearea/solver.hpp"

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace pulsearea {

/// Hard thresholds used by the audit.
inline constexpr double kSolitonTolerance = 1e-6;        // rad
inline constexpr double kRouteThetaTolerance = 1e-6;     // rad
inline constexpr double kRoutePhiTolerance = 1e-5;       // rad
inline constexpr double kExtremumAreaTolerance = 1e-3;   // rad
inline constexpr double kAsymptoteTolerance = 1e-3;      // relative

struct SolitonSample {
    double theta = 0.0;     ///< rad
    double envelope = 0.0;  ///< units of M/μ
    double phi = 0.0;       ///< rad
};

/// Lossless separatrix θ = 4 arctan(e^{Mτ}), 𝓔 = (2M/μ) sech(Mτ), φ = 0.
/// ValidationError unless params.lambda == 0.
SolitonSample soliton_oracle(double tau, const ModelParams& params);

enum class ExtremumKind { maximum, minimum };

struct EnvelopeExtremum {
    double tau = 0.0;
    double theta = 0.0;
    double envelope = 0.0;
    ExtremumKind kind = ExtremumKind::maximum;
    double area_residual = 0.0;  ///< distance of θ from the nearest multiple of π
};

/// Interior local extrema of the envelope: sign changes of the discrete
/// derivative, each refined by a three-point parabolic fit; θ at the refined
/// time comes from invert_theta().
std::vector<EnvelopeExtremum> find_envelope_extrema(const Trajectory& trajectory);

/// Exact large-θ limits of the envelope and of the phase slope.
double plateau_envelope_limit(const ModelParams& params);  // M sqrt(2/(1+λ²/4)) / μ
double phase_slope_limit(const ModelParams& params);       // M sqrt((1+λ²/4)/2)

/// The λ ≫ 1 forms √8 M/(λμ) and Mλ/√8 of the same limits.
double plateau_envelope_large_lambda(const ModelParams& params);
double phase_slope_large_lambda(const ModelParams& params);

struct Asymptotes {
    double plateau_envelope = 0.0;       ///< mean envelope over the last 20% of samples
    double plateau_rel_error = 0.0;      ///< against plateau_envelope_limit
    double phase_slope = 0.0;            ///< least-squares dφ/dτ over the same window, rad/ns
    double phase_slope_rel_error = 0.0;  ///< against phase_slope_limit
    double final_area_excess = 0.0;      ///< θ(τ_end) - 2π
};

/// Requires λ > 0 and θ(τ_end) >= 4π (RangeError otherwise).
Asymptotes measure_asymptotes(const Trajectory& trajectory);

struct GammaSample {
    double tau = 0.0;
    double theta = 0.0;
    double ratio = 0.0;  ///< Γ_exact / (λ θ)
};

/// Accumulates Γ(τ) = ∫ γ(Ω) sin²φ ds with γ(Ω) = spectral_slope·Ω along the
/// trajectory (trapezoid in the area measure dθ = Ω ds, plus
/// spectral_slope·θ₀·sin²φ₀ for the area already present at the first
/// sample) and returns Γ/(λθ) at every sample after the first. Nothing is
/// asserted about the ratio.
std::vector<GammaSample> gamma_audit(const Trajectory& trajectory, double spectral_slope);

/// As above with the phase replaced by `phi` (same length as the trajectory).
std::vector<GammaSample> gamma_audit(const Trajectory& trajectory, std::span<const double> phi,
                                     double spectral_slope);

struct RouteComparison {
    double tau_lo = 0.0;
    double tau_hi = 0.0;
    double max_theta_diff = 0.0;  ///< rad
    double max_phi_diff = 0.0;    ///< rad
};

/// Samples both routes on a common uniform τ grid (config.n_grid points over
/// the overlap of their ranges) and reports the largest differences.
RouteComparison compare_routes(const AreaQuadrature& quadrature, const AreaIvp& ivp);
RouteComparison compare_routes(const ModelParams& params, const SolverConfig& config);

/// max |θ - 4 arctan(e^{Mτ})| over the trajectory samples with τ in
/// [tau_lo, tau_hi].
double soliton_max_abs_error(const Trajectory& trajectory, double tau_lo, double tau_hi);

struct AuditCheck {
    std::string name;
    bool passed = false;
    double value = 0.0;
    double threshold = 0.0;
};

struct AuditReport {
    double lambda = 0.0;
    std::optional<double> soliton_max_abs_err;  ///< λ = 0 only, worst of both routes
    RouteComparison routes;
    double peak_envelope = 0.0;
    std::optional<Asymptotes> asymptotes;       ///< λ > 0 with θ_end >= 4π
    std::optional<double> plateau_envelope_large_lambda_rel_error;
    std::optional<double> phase_slope_large_lambda_rel_error;
    std::vector<EnvelopeExtremum> extrema;
    double max_extremum_residual = 0.0;
    double final_area_excess = 0.0;
    double gamma_spectral_slope = 0.0;
    std::vector<GammaSample> gamma_ratio;       ///< λ > 0 only
    std::vector<AuditCheck> checks;

    bool passed() const;
    std::vector<std::string> failed_checks() const;
};

/// Runs both routes and every analysis on one λ. Hard checks: soliton error
/// (λ = 0), extremum placement and route equivalence.
AuditReport build_audit_report(const ModelParams& params, const SolverConfig& config);

}  // namespace pulsearea
