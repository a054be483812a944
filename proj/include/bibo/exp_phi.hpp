#pragma once

#include <complex>

namespace bibo {

using Complex = std::complex<double>;

/// e^z - 1 without cancellation near z = 0 (std::expm1 is real-only).
inline Complex expm1z(Complex z) {
    if (std::abs(z) < 0.5) {
        // Taylor series; terms fall below eps well before k = 24 for |z| < 0.5.
        Complex term = z;
        Complex acc = z;
        for (int k = 2; k <= 24; ++k) {
            term *= z / static_cast<double>(k);
            acc += term;
            if (std::abs(term) < 1e-20 * (1.0 + std::abs(acc))) break;
        }
        return acc;
    }
    return std::exp(z) - 1.0;
}

/// phi1(z) = (e^z - 1)/z, phi1(0) = 1.
inline Complex phi1(Complex z) {
    if (std::abs(z) < 1e-150) return 1.0;
    return expm1z(z) / z;
}

/// phi2(z) = (e^z - 1 - z)/z^2, phi2(0) = 1/2.  Equals int_0^1 theta e^{z(1-theta)} dtheta.
inline Complex phi2(Complex z) {
    if (std::abs(z) < 0.5) {
        // sum_{m>=0} z^m / (m+2)!
        Complex term = 0.5;
        Complex acc = 0.5;
        for (int m = 1; m <= 24; ++m) {
            term *= z / static_cast<double>(m + 2);
            acc += term;
            if (std::abs(term) < 1e-20 * (1.0 + std::abs(acc))) break;
        }
        return acc;
    }
    return (expm1z(z) - z) / (z * z);
}

/// Exact increment of one mode over a constant-input segment of width dt:
/// x <- e^{lambda dt} x + b u (e^{lambda dt} - 1)/lambda, with the integrator
/// limit dt * b * u * (1 + lambda dt / 2 + ...) handled through phi1.
inline Complex segment_forcing(Complex lambda, double dt, Complex bu) {
    return bu * dt * phi1(lambda * dt);
}

}  // namespace bibo
