#pragma once

#include "pulsearea/model.hpp"

#include <array>
#include <cstddef>
#include <span>
#include <vector>

namespace pulsearea {

// ---------------------------------------------------------------------------
// Pointwise quantities of the area equation
// ---------------------------------------------------------------------------

/// B(θ; λ) = 2 - e^{-λθ/2}(2 cos θ + λ sin θ), the radicand of the first
/// integral θ̇² = M² B / (1 + λ²/4).
///
/// Evaluated as e^{-a}[4 sin²(θ/2) + 2(e^a - 1 - a) + λ(θ - sin θ)] with
/// a = λθ/2, a sum of non-negative terms, so small θ (where B ≈ (1+λ²/4)θ²)
/// keeps full relative precision. Throws DomainError for θ < 0.
double area_bracket(double theta, double lambda);

/// Counts roundoff events absorbed by the rate evaluation.
struct SolverDiagnostics {
    std::size_t clamped_radicands = 0;
};

/// Radicand values in (-kRadicandClampWindow, 0) are treated as zero.
inline constexpr double kRadicandClampWindow = 1e-12;

/// Rabi rate θ̇ = M sqrt(B(θ; λ) / (1 + λ²/4)) in rad/ns.
double theta_dot(double theta, const ModelParams& params);
double theta_dot(double theta, const ModelParams& params, SolverDiagnostics& diagnostics);

/// dφ/dθ = (1 + λ²/4) sinh(λθ/2) / (e^{λθ/2} - cos θ - (λ/2) sin θ).
/// Non-negative; identically zero for λ = 0; tends to λ/θ as θ → 0 and to
/// (1 + λ²/4)/2 as θ → ∞ for λ > 0.
double phase_rate(double theta, double lambda);

// ---------------------------------------------------------------------------
// Route A: quadrature of the implicit solutions τ(θ), φ(θ)
// ---------------------------------------------------------------------------

/// Anchored τ(θ) and φ(θ) over [theta_min, theta_max] and their inverse.
///
/// The integrands' 1/ϑ singularity at ϑ → 0 (and, for λ = 0, the 1/(2π - ϑ)
/// singularity of the soliton tail) is subtracted and integrated through its
/// logarithmic primitive; the bounded remainder goes through adaptive
/// Gauss-Kronrod quadrature on a fixed panel table. φ is anchored to 0 at
/// θ = π; τ follows config.anchor.
class AreaQuadrature {
public:
    AreaQuadrature(const ModelParams& params, const SolverConfig& config);

    /// τ(θ) in ns for θ in [theta_min, theta_max].
    double tau(double theta) const;
    /// φ(θ) in rad for θ in [theta_min, theta_max].
    double phi(double theta) const;
    /// Inverse of tau(): θ(τ) for τ in [tau_begin(), tau_end()].
    double theta_at(double tau) const;

    double tau_begin() const noexcept { return node_tau_.front(); }
    double tau_end() const noexcept { return node_tau_.back(); }

    const ModelParams& params() const noexcept { return params_; }
    const SolverConfig& config() const noexcept { return config_; }

    /// Largest quadrature error estimate seen so far (dimensionless τ units).
    double max_error_estimate() const noexcept { return max_error_; }

private:
    std::size_t panel_of_theta(double theta) const;
    double scaled_tau_increment(double from, double to) const;
    double phi_increment(double from, double to) const;

    ModelParams params_;
    SolverConfig config_;
    std::vector<double> node_theta_;
    std::vector<double> node_tau_;   // ns
    std::vector<double> node_phi_;
    mutable double max_error_ = 0.0;
};

/// τ(θ) in ns at each grid point (strictly increasing, inside
/// [theta_min, theta_max]). DomainError if λ = 0 and theta_max >= 2π.
std::vector<double> tau_of_theta(std::span<const double> theta_grid, const ModelParams& params,
                                 const SolverConfig& config);

/// φ(θ) in rad at each grid point, anchored φ(π) = 0.
std::vector<double> phi_of_theta(std::span<const double> theta_grid, const ModelParams& params,
                                 const SolverConfig& config);

// ---------------------------------------------------------------------------
// Route B: direct integration of θ̈ = M² e^{-λθ/2} sin θ
// ---------------------------------------------------------------------------

struct PulseState {
    double theta = 0.0;      ///< rad
    double theta_dot = 0.0;  ///< rad/ns
    double phi = 0.0;        ///< rad
};

/// Dense solution of the initial value problem, already anchored.
///
/// Integration starts at θ = theta_min on the branch θ̇ = M sqrt(B/(1+λ²/4))
/// and stops when θ reaches theta_max. The phase is carried along as a third
/// component with φ̇ = M² (1 - e^{-λθ}) / θ̇.
class AreaIvp {
public:
    AreaIvp(const ModelParams& params, const SolverConfig& config);

    PulseState state_at(double tau) const;

    double tau_begin() const noexcept { return tau_begin_; }
    double tau_end() const noexcept { return tau_end_; }
    std::size_t steps() const noexcept { return steps_.size(); }

    /// max |θ̇²/M² - B(θ)/(1+λ²/4)| over accepted steps.
    double first_integral_drift() const noexcept { return max_drift_; }

    /// False when accumulated error left the pendulum short of the energy
    /// needed to reach theta_max (possible for λ = 0 with loose tolerances);
    /// the solution then ends at the last step before θ̇ changes sign.
    bool reached_theta_max() const noexcept { return reached_theta_max_; }
    double theta_end() const noexcept { return theta_end_; }

    const ModelParams& params() const noexcept { return params_; }
    const SolverConfig& config() const noexcept { return config_; }

private:
    struct Step {
        double s0, h;
        std::array<double, 3> y0;
        std::array<std::array<double, 3>, 7> k;
    };
    std::array<double, 3> eval_scaled(double s) const;

    ModelParams params_;
    SolverConfig config_;
    std::vector<Step> steps_;
    double s_shift_ = 0.0;
    double phi_shift_ = 0.0;
    double tau_begin_ = 0.0;
    double tau_end_ = 0.0;
    double max_drift_ = 0.0;
    double theta_end_ = 0.0;
    bool reached_theta_max_ = true;
};

/// Integrates the IVP and samples it on a uniform τ grid of config.n_grid
/// points spanning the integrated range. IntegrationError if theta_max is
/// not reached.
Trajectory integrate_ivp(const ModelParams& params, const SolverConfig& config);

// ---------------------------------------------------------------------------
// Orchestration
// ---------------------------------------------------------------------------

/// Solves with the chosen route on a uniform τ grid of config.n_grid points
/// covering the route's full range.
Trajectory solve_trajectory(const ModelParams& params, const SolverConfig& config, Method method);

/// Same, sampled at caller-supplied τ values (strictly increasing, inside
/// the route's range; RangeError otherwise).
Trajectory solve_trajectory(const ModelParams& params, const SolverConfig& config, Method method,
                            std::span<const double> tau_grid);

Trajectory sample(const AreaQuadrature& route, std::span<const double> tau_grid);
Trajectory sample(const AreaIvp& route, std::span<const double> tau_grid);

/// θ at `tau_query` by monotone cubic Hermite interpolation of the stored
/// samples, using the stored θ̇ as node slopes (limited where needed so the
/// interpolant stays monotone). RangeError outside the sampled range.
double invert_theta(const Trajectory& trajectory, double tau_query);

/// Widens theta_min / theta_max (never narrows) until the quadrature route
/// covers [tau_lo, tau_hi] in ns. For λ = 0 the upper bound approaches 2π
/// by shrinking the gap.
SolverConfig config_covering(const ModelParams& params, SolverConfig config, double tau_lo,
                             double tau_hi);

}  // namespace pulsearea
