#pragma once

#include <cstdint>
#include <vector>

#include "bibo/core.hpp"
#include "bibo/spectral.hpp"

namespace bibo {

/// Per-mode state trajectories x_n(t_k) on a uniform grid.
struct StateTrajectory {
    double dt = 1.0;
    std::size_t len = 0;
    std::vector<std::vector<Complex>> modes;  // modes[n][k]
};

/// Variation-of-constants solution with x(0) = 0, diagonalized per mode and
/// propagated with the exact segment map
///   x_n(t_{k+1}) = e^{lambda_n dt} x_n(t_k) + b_n u_k dt phi1(lambda_n dt).
/// Exact for piecewise-constant-left input; no stiffness constraints.
StateTrajectory simulate_state(const SpectralSystemSpec& spec, const Signal& u);

/// y(t_k) = sum_n c_n^* x_n(t_k) + alpha u(t_k), compensated over modes.
/// Throws GridMismatch when traj was not produced from (spec, u).
Signal evaluate_output(const SpectralSystemSpec& spec, const StateTrajectory& traj, const Signal& u);

/// simulate_state + evaluate_output without materializing the trajectory.
Signal simulate_output(const SpectralSystemSpec& spec, const Signal& u);

struct RatioSuiteConfig {
    std::uint64_t seed = 12345;
    /// Horizon; <= 0 selects 20/decay_rate (clamped to [5, 200]).
    double t_final = 0.0;
    /// Grid step; <= 0 selects t_final / 2000.
    double dt = 0.0;
};

struct RatioEstimate {
    double max_ratio = 0.0;
    Signal witness;
    std::string witness_kind;
    std::uint64_t seed = 0;
    int n_inputs = 0;
};

/// Estimates the best BIBO constant: max over a deterministic probe set
/// (step, alternating sign, sign-matched extremal input) plus n_inputs seeded
/// random piecewise-constant +-1 signals of sup|y|/sup|u|. The sign-matched
/// probe u(t_k) = conj(sign(h(T - t_k))) realizes the total-variation
/// attainment construction, so ratios approach (never exceed) ||h||_M.
RatioEstimate empirical_bibo_ratio(const SpectralSystemSpec& spec, const RatioSuiteConfig& cfg,
                                   int n_inputs);

/// Residual of the Laplace relation y-hat = G u-hat for compactly supported
/// input (u is taken as 0 from the final grid point on). Both transforms are
/// evaluated by segment-exact quadrature of the simulated trajectory,
/// including the closed-form free response beyond the grid. Returns
/// max_s |y-hat(s) - G(s) u-hat(s)| / (1 + |u-hat(s)|).
double laplace_consistency_check(const SpectralSystemSpec& spec, const Signal& u,
                                 const std::vector<Complex>& s_points);

}  // namespace bibo
