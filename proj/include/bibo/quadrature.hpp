#pragma once

#include <complex>
#include <functional>

namespace bibo {

struct QuadratureConfig {
    double abs_tol = 1e-12;
    double rel_tol = 1e-10;
    int max_intervals = 20000;
    /// Seed subdivision count; helps adaptivity when the integrand lives on a
    /// much shorter scale than the interval.
    int initial_intervals = 8;
};

struct QuadratureResult {
    std::complex<double> value;
    double error_estimate = 0.0;
    int evaluations = 0;
};

/// Globally adaptive Gauss-Kronrod 15(7) on [a, b]. Deterministic: the worst
/// interval (ties broken by position) is bisected until the summed error
/// estimate meets max(abs_tol, rel_tol * |value|) or the interval budget runs
/// out.
QuadratureResult integrate(const std::function<std::complex<double>(double)>& f, double a, double b,
                           const QuadratureConfig& cfg = {});

QuadratureResult integrate_real(const std::function<double(double)>& f, double a, double b,
                                const QuadratureConfig& cfg = {});

}  // namespace bibo
