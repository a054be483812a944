#pragma once

#include <functional>
#include <string>
#include <vector>

#include "bibo/core.hpp"
#include "bibo/quadrature.hpp"

namespace bibo {

/// Analytic-function evaluator on a right half-plane with recorded abscissa.
struct TransferFn {
    std::function<Complex(Complex)> evaluator;
    HalfPlane domain;
    std::string description;

    Complex operator()(Complex s) const { return evaluator(s); }
};

/// One exponential mode of the impulse-response density.
struct DensityMode {
    Complex lambda;
    Complex weight;  // b_n c_n^*
};

/// Absolutely continuous part of the impulse response,
/// t -> sum_n b_n c_n^* e^{lambda_n t}, with decay metadata. The Dirac atom
/// alpha delta(t) lives in BVMeasure, not here.
///
/// Envelope invariant: |evaluate(t)| <= coeff_l1 * e^{-decay_rate * t}.
struct ImpulseDensity {
    std::vector<DensityMode> modes;
    double decay_rate = 1e308;  // -max Re lambda over contributing modes; huge when empty
    double coeff_l1 = 0.0;      // sum |b_n c_n^*|

    Complex evaluate(double t) const;
    bool empty() const { return modes.empty(); }

    /// Horizon T* with coeff_l1 e^{-decay T*}/decay < 1e-12 max(1, coeff_l1),
    /// plus the matching analytic bound on the remainder beyond T*.
    double truncation_horizon() const;
    double horizon_tail_bound(double t_star) const;
};

struct TransferEvalConfig {
    /// Pole proximity threshold, relative to max(1, |lambda_n|).
    double pole_epsilon = 1e-12;
};

/// G(s) = alpha + sum_n b_n c_n^* / (s - lambda_n), compensated summation.
/// Throws OutsideDomain for Re s <= abscissa and PoleHit near eigenvalues.
Complex evaluate_transfer(const SpectralSystemSpec& spec, Complex s, const TransferEvalConfig& cfg = {});

/// TransferFn wrapper around evaluate_transfer with the spec's half-plane.
TransferFn make_transfer_fn(const SpectralSystemSpec& spec, const TransferEvalConfig& cfg = {});

/// Consistency residual of the resolvent-difference relation
/// G(s1) - G(s2) = sum_n b_n c_n^* [1/(s1-lambda_n) - 1/(s2-lambda_n)],
/// with the right-hand sum evaluated in ascending- and descending-|lambda|
/// order. Returns the worse of the two residuals; callers compare against
/// 1e-10 * (1 + sum |b_n c_n^*|).
double transfer_difference_check(const SpectralSystemSpec& spec, Complex s1, Complex s2,
                                 const TransferEvalConfig& cfg = {});

/// Prop. sufficient condition sum_k |b_k c_k^* / Re lambda_k| < inf.
BiboReport check_cond_riesz(const SpectralSystemSpec& spec);

/// Extension allowing finitely many Re lambda_k >= 0 provided b_k c_k^* = 0
/// there; bound from the stable part only.
BiboReport check_finite_unstable(const SpectralSystemSpec& spec);

/// Density of the impulse response; throws UnstableMode if a mode with
/// b_n c_n^* != 0 has Re lambda_n >= 0.
ImpulseDensity impulse_density(const SpectralSystemSpec& spec);

/// L1 integrability of the impulse density: adaptive quadrature of
/// |density| on [0, T*] plus the analytic horizon remainder. Strictly sharper
/// than check_cond_riesz when coefficients cancel.
BiboReport check_impulse_l1(const SpectralSystemSpec& spec, const QuadratureConfig& quad_cfg = {});

struct FractionalOrdersConfig {
    /// Sector constant K in |Im lambda_n| <= K |Re lambda_n| (analyticity
    /// proxy for diagonal systems).
    double sector_k = 10.0;
    /// Heuristic growth-detection ratio for sup/l2 conditions over the
    /// truncation.
    double growth_ratio = 1.2;
    QuadratureConfig quad;
};

/// Fractional admissibility orders: sup_n |b_n|/|lambda_n|^alpha and
/// sup_n |c_n|/|lambda_n|^beta finite, alpha + beta < 1 (or = 1 with the
/// l2 encodings). Bound delegated to check_impulse_l1.
BiboReport check_fractional_orders(const SpectralSystemSpec& spec, double alpha, double beta,
                                   const FractionalOrdersConfig& cfg = {});

}  // namespace bibo
