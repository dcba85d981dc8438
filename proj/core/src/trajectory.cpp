#include "pulsearea/errors.hpp"
#include "pulsearea/model.hpp"

#include <cmath>
#include <string>

namespace pulsearea {

namespace {

void check(bool ok, const std::string& what) {
    if (!ok) throw SolverError("trajectory invariant violated: " + what);
}

}  // namespace

Trajectory::Trajectory(std::vector<double> tau, std::vector<double> theta,
                       std::vector<double> theta_dot, std::vector<double> phi,
                       const ModelParams& params, const SolverConfig& config, Method method)
    : tau_(std::move(tau)),
      theta_(std::move(theta)),
      theta_dot_(std::move(theta_dot)),
      phi_(std::move(phi)),
      params_(params),
      config_(config),
      method_(method) {
    const std::size_t n = tau_.size();
    check(n >= 2, "at least two samples");
    check(theta_.size() == n && theta_dot_.size() == n && phi_.size() == n, "equal array lengths");

    envelope_.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        check(std::isfinite(tau_[i]) && std::isfinite(theta_[i]) && std::isfinite(theta_dot_[i]) &&
                  std::isfinite(phi_[i]),
              "finite samples");
        check(theta_dot_[i] >= 0.0, "theta_dot >= 0");
        envelope_[i] = theta_dot_[i] / params_.mu;
        if (i > 0) {
            check(tau_[i] > tau_[i - 1], "tau strictly increasing");
            check(theta_[i] > theta_[i - 1], "theta strictly increasing");
            if (params_.lambda > 0.0) check(phi_[i] >= phi_[i - 1], "phi non-decreasing");
        }
        if (params_.lambda == 0.0) check(phi_[i] == 0.0, "phi constant for lambda = 0");
    }
}

}  // namespace pulsearea
