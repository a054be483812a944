#pragma once

#include <optional>
#include <vector>

#include "bibo/core.hpp"
#include "bibo/quadrature.hpp"
#include "bibo/spectral.hpp"

namespace bibo {

struct Atom {
    double location = 0.0;
    Complex weight = 0.0;
};

/// Measure of bounded total variation on [0, inf): finite atomic part plus an
/// absolutely continuous exponential-mode density.
struct BVMeasure {
    std::vector<Atom> atoms;  // locations strictly increasing, >= 0
    std::optional<ImpulseDensity> density;

    /// alpha delta(t) + sum_n b_n c_n^* e^{lambda_n t} for a validated spec.
    /// Throws UnstableMode if a contributing mode has Re lambda >= 0.
    static BVMeasure from_spec(const SpectralSystemSpec& spec);
};

BVMeasure validate_measure(BVMeasure h);

/// ||h||_M = sum |atom weights| + int_0^inf |density|; adaptive quadrature on
/// [0, T*] plus the analytic exponential remainder. Throws
/// NonIntegrableDensity when the density does not decay.
double total_variation(const BVMeasure& h, const QuadratureConfig& quad_cfg = {});

struct ConvolveDiagnostics {
    double max_atom_snap_error = 0.0;  // |location - snapped grid time|, worst atom
};

/// y = h * u on u's grid, u piecewise-constant-left and 0 before t = 0.
/// Atom locations snap to the nearest grid point (distance recorded); the
/// density part is integrated in closed form segment-by-segment per mode, so
/// no quadrature error enters.
Signal convolve(const BVMeasure& h, const Signal& u, ConvolveDiagnostics* diag = nullptr);

struct BiboBoundCheck {
    double ratio = 0.0;
    double bound = 0.0;
    bool ok = false;
};

/// Empirical check of ||y||_inf <= ||h||_M ||u||_inf for one input.
/// Throws ZeroInput when sup_norm(u) == 0.
BiboBoundCheck bibo_bound_check(const BVMeasure& h, const Signal& u,
                                const QuadratureConfig& quad_cfg = {});

}  // namespace bibo
