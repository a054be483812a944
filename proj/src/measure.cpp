#include "bibo/measure.hpp"

#include <algorithm>
#include <cmath>

#include "bibo/exp_phi.hpp"
#include "bibo/summation.hpp"

namespace bibo {

BVMeasure BVMeasure::from_spec(const SpectralSystemSpec& spec) {
    BVMeasure h;
    if (spec.feedthrough != 0.0) h.atoms.push_back({0.0, spec.feedthrough});
    ImpulseDensity density = impulse_density(spec);
    if (!density.empty()) h.density = std::move(density);
    return h;
}

BVMeasure validate_measure(BVMeasure h) {
    double prev = -1.0;
    for (const Atom& a : h.atoms) {
        if (!(a.location >= 0.0) || !is_finite(a.location) || !is_finite(a.weight)) {
            throw Error(ErrorCode::NonFiniteEntry, "atom location/weight invalid");
        }
        if (a.location <= prev) {
            throw Error(ErrorCode::NonFiniteEntry, "atom locations must be strictly increasing");
        }
        prev = a.location;
    }
    return h;
}

double total_variation(const BVMeasure& h, const QuadratureConfig& quad_cfg) {
    CompensatedSum tv;
    for (const Atom& a : h.atoms) tv += std::abs(a.weight);

    if (h.density && !h.density->empty()) {
        const ImpulseDensity& density = *h.density;
        if (!(density.decay_rate > 0.0)) {
            throw Error(ErrorCode::NonIntegrableDensity, "density decay rate <= 0");
        }
        const double t_star = density.truncation_horizon();
        QuadratureConfig cfg = quad_cfg;
        cfg.initial_intervals =
            std::max(cfg.initial_intervals, std::min(512, static_cast<int>(t_star * density.decay_rate) * 2));
        const QuadratureResult q =
            integrate_real([&density](double t) { return std::abs(density.evaluate(t)); }, 0.0, t_star, cfg);
        tv += q.value.real();
        tv += density.horizon_tail_bound(t_star);
    }
    return tv.value();
}

Signal convolve(const BVMeasure& h, const Signal& u, ConvolveDiagnostics* diag) {
    Signal y;
    y.dt = u.dt;
    y.samples.assign(u.size(), Complex(0.0, 0.0));
    if (u.samples.empty()) return y;
    const std::size_t len = u.size();

    // Atomic part: y_k += w_j u(t_k - loc_j), locations snapped to the grid.
    double worst_snap = 0.0;
    for (const Atom& a : h.atoms) {
        const auto shift = static_cast<long long>(std::llround(a.location / u.dt));
        worst_snap = std::max(worst_snap, std::abs(a.location - static_cast<double>(shift) * u.dt));
        for (std::size_t k = 0; k < len; ++k) {
            const long long src = static_cast<long long>(k) - shift;
            if (src < 0) continue;
            y.samples[k] += a.weight * u.samples[static_cast<std::size_t>(src)];
        }
    }
    if (diag) diag->max_atom_snap_error = worst_snap;

    // Density part: per mode, z(t) = int_0^t e^{lambda (t-s)} u(s) ds obeys
    // z_{k+1} = e^{lambda dt} z_k + u_k dt phi1(lambda dt), exactly for
    // piecewise-constant u. Per-sample contribution is weight * z_k.
    if (h.density) {
        std::vector<ComplexCompensatedSum> acc(len);
        for (const DensityMode& m : h.density->modes) {
            const Complex step = std::exp(m.lambda * u.dt);
            const Complex force = u.dt * phi1(m.lambda * u.dt);
            Complex z = 0.0;
            for (std::size_t k = 0; k + 1 < len; ++k) {
                z = step * z + force * u.samples[k];
                acc[k + 1] += m.weight * z;
            }
        }
        for (std::size_t k = 0; k < len; ++k) y.samples[k] += acc[k].value();
    }
    return y;
}

BiboBoundCheck bibo_bound_check(const BVMeasure& h, const Signal& u, const QuadratureConfig& quad_cfg) {
    const double u_norm = sup_norm(u);
    if (u_norm == 0.0) throw Error(ErrorCode::ZeroInput, "sup_norm(u) must be > 0");
    BiboBoundCheck out;
    out.ratio = sup_norm(convolve(h, u)) / u_norm;
    out.bound = total_variation(h, quad_cfg);
    out.ok = out.ratio <= out.bound * (1.0 + 1e-6);
    return out;
}

}  // namespace bibo
