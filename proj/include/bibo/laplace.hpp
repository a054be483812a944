#pragma once

#include <string>

#include "bibo/core.hpp"
#include "bibo/measure.hpp"
#include "bibo/spectral.hpp"

namespace bibo {

/// Laplace transform of a BV measure: atoms exactly, density in closed form
/// per mode. Valid for Re s > -decay_rate of the density.
Complex laplace_of_measure(const BVMeasure& h, Complex s);

enum class InversionMethod { BromwichTrapezoid, TalbotFixed };

struct TimeGrid {
    double dt = 1e-2;
    std::size_t len = 101;
};

struct InversionConfig {
    InversionMethod method = InversionMethod::BromwichTrapezoid;
    /// Bromwich: Euler-accelerated node budget (even, >= 16); Talbot: contour
    /// half-order M.
    int contour_nodes = 48;
    /// Contour validity floor, used when the transfer abscissa is >= 0. For
    /// exponentially stable kernels the scaled contour Re s = A/(2t) already
    /// lies in the analyticity domain, and a fixed positive shift would blow
    /// up the e^{sigma t} prefactor at late times.
    double abscissa_shift = 1.0;
    TimeGrid t_grid;
};

InversionConfig default_inversion_config(const TransferFn& transfer);

/// Numerical inverse Laplace transform of the density part: returns samples
/// h(t_k) on the requested grid. The t = 0 sample is set to 0 and excluded
/// from accuracy guarantees (atoms make pointwise inversion meaningless
/// there). Neither contour assumes conjugate symmetry, so complex-valued
/// densities invert correctly.
Signal invert_laplace(const TransferFn& transfer, const InversionConfig& cfg);

struct InversionCrossCheck {
    Signal primary;
    double max_discrepancy = 0.0;  // max_k>=1 |bromwich - talbot|
};

/// Runs both contours and reports their disagreement; contour methods fail
/// silently, so disagreement is the error signal.
InversionCrossCheck invert_laplace_cross(const TransferFn& transfer, const InversionConfig& cfg);

enum class GrowthFlag { Bounded, GrowsAlongReals, Undetermined };

const char* growth_flag_name(GrowthFlag flag);

struct ProbeConfig {
    double sigma_max = 1e6;
    /// Floor for the left end of the log grid when abscissa + 1 <= 0.
    double sigma_floor = 1e-2;
    int points_per_decade = 4;
    std::vector<double> imag_parts = {0.0, 1.0, 10.0, 100.0};
    /// Growth threshold for |G| across the top two decades of the real axis.
    /// 1.3 discriminates log-growth (ratio ~ 1.46 at sigma_max = 1e6) from
    /// bounded rational tails (ratio -> 1).
    double growth_factor = 1.3;
};

struct ProbeResult {
    double sup_estimate = 0.0;
    GrowthFlag flag = GrowthFlag::Bounded;
    std::string notes;
};

/// Samples |G| on a log-spaced grid of real parts x the configured imaginary
/// parts. Flags GrowsAlongReals when the real-axis samples increase
/// monotonically across the top two decades by more than growth_factor.
/// A heuristic probe: it can only falsify boundedness, never certify it.
ProbeResult halfplane_bound_probe(const TransferFn& transfer, const ProbeConfig& cfg = {});

}  // namespace bibo
