#pragma once

#include <cstddef>
#include <numbers>
#include <span>
#include <string_view>
#include <vector>

namespace pulsearea {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Physical parameters of the pulse/qubit system.
///
/// Only the characteristic rate `M` and the dissipation scale `lambda` enter
/// the area equation. `mu` converts between the Rabi rate and the field
/// envelope (envelope = theta_dot / mu) and `omega_z` is carried as metadata.
/// Instances are plain values; validate with `validate()` or build them
/// through `make_params()`.
struct ModelParams {
    double M = 2.0;                        ///< ns^-1
    double lambda = 0.0;                   ///< dimensionless, >= 0
    double mu = 1.0;                       ///< dipole moment, arbitrary consistent units
    double omega_z = 2.0 * kPi * 5.0;      ///< rad/ns

    /// Pulse-width scale M^-1 in ns.
    double M_inv_ns() const noexcept { return 1.0 / M; }

    /// The factor 1 + lambda^2/4 that normalises the area bracket.
    double bracket_norm() const noexcept { return 1.0 + 0.25 * lambda * lambda; }
};

/// Throws ValidationError unless M > 0, lambda >= 0, mu > 0 (all finite).
void validate(const ModelParams& params);

/// Builds parameters from the pulse-width scale M^-1 (ns) and lambda; mu = 1.
ModelParams make_params(double M_inv_ns, double lambda);

/// Peak Rabi frequency of the lossless soliton, 2M / 2π, in GHz.
///
/// Only the lambda = 0 pulse actually reaches this value; dissipation
/// lowers the obtainable peak.
double peak_coupling_freq(const ModelParams& params);

/// Where τ = 0 is registered on the area axis.
enum class Anchor {
    /// τ = 0 where θ = π (for every λ).
    area_pi,
    /// τ → M^-1 ln(θ/4) as θ → 0, i.e. every λ shares the leading edge of
    /// the lossless soliton 4 arctan(e^{Mτ}). Identical to area_pi at λ = 0.
    leading_edge,
};

std::string_view to_string(Anchor anchor);
Anchor parse_anchor(std::string_view text);

/// Numerical controls shared by both solver routes.
struct SolverConfig {
    double theta_min = 1e-3;                 ///< rad, regularised lower cutoff
    double theta_max = 6.0 * kPi;            ///< rad
    std::size_t n_grid = 2001;               ///< output samples
    double abs_tol = 1e-10;
    double rel_tol = 1e-8;
    Anchor anchor = Anchor::area_pi;         ///< φ = 0 at θ = π regardless
};

/// Default gap below 2π used for the lossless upper bound.
inline constexpr double kDefaultLosslessGap = 1e-3;

/// Default configuration for a given lambda: theta_max = 6π for lambda > 0
/// and 2π - 1e-3 for the lossless case.
SolverConfig default_config(double lambda);

/// Throws ValidationError unless 0 < theta_min < π < theta_max,
/// n_grid >= 2 and both tolerances lie in (0, 1).
void validate(const SolverConfig& config);

enum class Method { quadrature, ivp };

std::string_view to_string(Method method);
Method parse_method(std::string_view text);

/// Sampled pulse: aligned arrays of local time, area, Rabi rate, envelope
/// and phase.
///
/// The constructor enforces the invariants (equal lengths >= 2, θ strictly
/// increasing, θ̇ >= 0, envelope = θ̇/μ, φ non-decreasing for λ > 0 and
/// identically zero for λ = 0) and throws SolverError otherwise. Once built
/// a trajectory is immutable.
class Trajectory {
public:
    Trajectory(std::vector<double> tau, std::vector<double> theta,
               std::vector<double> theta_dot, std::vector<double> phi,
               const ModelParams& params, const SolverConfig& config, Method method);

    std::size_t size() const noexcept { return tau_.size(); }

    std::span<const double> tau() const noexcept { return tau_; }
    std::span<const double> theta() const noexcept { return theta_; }
    std::span<const double> theta_dot() const noexcept { return theta_dot_; }
    std::span<const double> envelope() const noexcept { return envelope_; }
    std::span<const double> phi() const noexcept { return phi_; }

    const ModelParams& params() const noexcept { return params_; }
    const SolverConfig& config() const noexcept { return config_; }
    Method method() const noexcept { return method_; }

private:
    std::vector<double> tau_;
    std::vector<double> theta_;
    std::vector<double> theta_dot_;
    std::vector<double> envelope_;
    std::vector<double> phi_;
    ModelParams params_;
    SolverConfig config_;
    Method method_;
};

/// n equally spaced points from a to b inclusive (n >= 2).
std::vector<double> uniform_grid(double a, double b, std::size_t n);

}  // namespace pulsearea
