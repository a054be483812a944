#include "bibo/laplace.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "bibo/summation.hpp"

namespace bibo {

namespace {

constexpr double kPi = 3.14159265358979323846;

std::string fmt(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

Complex eval_on_contour(const TransferFn& transfer, Complex s) {
    try {
        const Complex v = transfer(s);
        if (!is_finite(v)) {
            throw Error(ErrorCode::ContourError, "evaluator returned non-finite value at contour node");
        }
        return v;
    } catch (const Error& e) {
        if (e.code() == ErrorCode::ContourError) throw;
        throw Error(ErrorCode::ContourError, std::string("evaluator failed on contour node: ") + e.what());
    }
}

/// Durbin periodized trapezoid on Re s = sigma with binomial (Euler)
/// acceleration of the alternating series:
///   h(t) ~ (e^{sigma t}/(2t)) sum_n (-1)^n G(sigma + i n pi / t).
Complex invert_bromwich_at(const TransferFn& transfer, double t, int nodes, double validity_floor) {
    const int m_base = std::max(4, nodes / 2);
    const int m_euler = m_base;
    // Contour scale: aliasing error ~ e^{-A}. Capped so the e^{A/2}
    // amplification keeps the roundoff floor near 1e-10.
    const double a_scale = std::min(25.7, 1.0 + 0.5 * nodes);
    double sigma = a_scale / (2.0 * t);
    if (transfer.domain.abscissa >= 0.0) sigma = std::max(sigma, validity_floor);

    auto term = [&](int n) -> Complex {
        if (n == 0) return eval_on_contour(transfer, Complex(sigma, 0.0));
        const double w = kPi * n / t;
        const Complex pair = eval_on_contour(transfer, Complex(sigma, w)) +
                             eval_on_contour(transfer, Complex(sigma, -w));
        return (n % 2 == 0) ? pair : -pair;
    };

    ComplexCompensatedSum partial;
    partial += term(0);
    for (int n = 1; n <= m_base; ++n) partial += term(n);

    // Binomial average of partial sums s_{M}, ..., s_{M+B}.
    Complex euler_acc = 0.0;
    double binom = 1.0;  // C(B, 0)
    double binom_total = 0.0;
    Complex s_m = partial.value();
    for (int j = 0; j <= m_euler; ++j) {
        if (j > 0) {
            partial += term(m_base + j);
            s_m = partial.value();
            binom *= static_cast<double>(m_euler - j + 1) / static_cast<double>(j);
        }
        euler_acc += binom * s_m;
        binom_total += binom;
    }
    euler_acc /= binom_total;  // == 2^{-B} sum C(B,j) s_{M+j}

    return std::exp(sigma * t) / (2.0 * t) * euler_acc;
}

/// Abate-Valko fixed Talbot contour s(theta) = r theta (cot theta + i),
/// trapezoid in theta over (-pi, pi); endpoint terms vanish with e^{s t}.
Complex invert_talbot_at(const TransferFn& transfer, double t, int m) {
    m = std::max(8, m);
    const double r = 2.0 * m / (5.0 * t);
    ComplexCompensatedSum acc;
    for (int k = -(m - 1); k <= m - 1; ++k) {
        Complex s, ds;
        if (k == 0) {
            s = Complex(r, 0.0);
            ds = Complex(0.0, r);
        } else {
            const double theta = kPi * k / m;
            const double cot = std::cos(theta) / std::sin(theta);
            s = r * Complex(theta * cot, theta);
            ds = r * Complex(cot - theta / (std::sin(theta) * std::sin(theta)), 1.0);
        }
        acc += std::exp(s * t) * eval_on_contour(transfer, s) * ds;
    }
    // (1/2 pi i) closed-contour integral, theta step pi/m.
    return acc.value() / Complex(0.0, 2.0 * m);
}

}  // namespace

Complex laplace_of_measure(const BVMeasure& h, Complex s) {
    if (h.density && !h.density->empty() && !(s.real() > -h.density->decay_rate)) {
        throw Error(ErrorCode::OutsideDomain,
                    "Re s = " + fmt(s.real()) + " not right of -decay_rate = " + fmt(-h.density->decay_rate));
    }
    ComplexCompensatedSum acc;
    for (const Atom& a : h.atoms) acc += a.weight * std::exp(-s * a.location);
    if (h.density) {
        for (const DensityMode& m : h.density->modes) acc += m.weight / (s - m.lambda);
    }
    return acc.value();
}

InversionConfig default_inversion_config(const TransferFn& transfer) {
    InversionConfig cfg;
    cfg.abscissa_shift = std::max(transfer.domain.abscissa, 0.0) + 1.0;
    return cfg;
}

Signal invert_laplace(const TransferFn& transfer, const InversionConfig& cfg) {
    if (!(cfg.abscissa_shift > transfer.domain.abscissa)) {
        throw Error(ErrorCode::OutsideDomain, "abscissa_shift must exceed the transfer abscissa");
    }
    if (cfg.method == InversionMethod::BromwichTrapezoid && cfg.contour_nodes % 2 != 0) {
        throw Error(ErrorCode::DomainError, "contour_nodes must be even for BromwichTrapezoid");
    }
    if (cfg.contour_nodes < 8) {
        throw Error(ErrorCode::DomainError, "contour_nodes too small");
    }

    Signal out;
    out.dt = cfg.t_grid.dt;
    out.samples.assign(cfg.t_grid.len, Complex(0.0, 0.0));
    for (std::size_t k = 1; k < cfg.t_grid.len; ++k) {
        const double t = cfg.t_grid.dt * static_cast<double>(k);
        out.samples[k] = cfg.method == InversionMethod::BromwichTrapezoid
                             ? invert_bromwich_at(transfer, t, cfg.contour_nodes, cfg.abscissa_shift)
                             : invert_talbot_at(transfer, t, cfg.contour_nodes);
    }
    return out;
}

InversionCrossCheck invert_laplace_cross(const TransferFn& transfer, const InversionConfig& cfg) {
    InversionCrossCheck out;
    InversionConfig a = cfg;
    a.method = InversionMethod::BromwichTrapezoid;
    if (a.contour_nodes % 2 != 0) ++a.contour_nodes;
    InversionConfig b = cfg;
    b.method = InversionMethod::TalbotFixed;
    // Talbot's e^{2M/5} prefactor amplifies roundoff beyond ~32 nodes, so the
    // cross-check pins its side to the method's sweet spot.
    b.contour_nodes = std::min(b.contour_nodes, 24);

    const Signal ha = invert_laplace(transfer, a);
    const Signal hb = invert_laplace(transfer, b);
    out.primary = cfg.method == InversionMethod::BromwichTrapezoid ? ha : hb;
    for (std::size_t k = 1; k < ha.size(); ++k) {
        out.max_discrepancy = std::max(out.max_discrepancy, std::abs(ha.samples[k] - hb.samples[k]));
    }
    return out;
}

const char* growth_flag_name(GrowthFlag flag) {
    switch (flag) {
        case GrowthFlag::Bounded: return "Bounded";
        case GrowthFlag::GrowsAlongReals: return "GrowsAlongReals";
        case GrowthFlag::Undetermined: return "Undetermined";
    }
    return "Unknown";
}

ProbeResult halfplane_bound_probe(const TransferFn& transfer, const ProbeConfig& cfg) {
    ProbeResult out;
    const double sigma_lo = std::max(transfer.domain.abscissa + 1.0, cfg.sigma_floor);
    const double decades = std::log10(cfg.sigma_max / sigma_lo);
    const int n_sigma = std::max(8, static_cast<int>(std::ceil(decades * cfg.points_per_decade)) + 1);

    std::vector<double> sigmas(n_sigma);
    for (int i = 0; i < n_sigma; ++i) {
        sigmas[i] = sigma_lo * std::pow(cfg.sigma_max / sigma_lo, static_cast<double>(i) / (n_sigma - 1));
    }

    std::vector<double> real_axis(n_sigma, 0.0);
    for (int i = 0; i < n_sigma; ++i) {
        for (double tau : cfg.imag_parts) {
            const double g = std::abs(eval_on_contour(transfer, Complex(sigmas[i], tau)));
            out.sup_estimate = std::max(out.sup_estimate, g);
            if (tau == 0.0) real_axis[i] = g;
        }
    }

    const double window_lo = cfg.sigma_max / 100.0;
    int first = n_sigma - 1;
    for (int i = 0; i < n_sigma; ++i) {
        if (sigmas[i] >= window_lo * (1.0 - 1e-12)) {
            first = i;
            break;
        }
    }
    bool monotone = true;
    for (int i = first; i + 1 < n_sigma; ++i) {
        if (real_axis[i + 1] < real_axis[i] * (1.0 - 1e-9)) {
            monotone = false;
            break;
        }
    }
    const double base = real_axis[first];
    const double top = real_axis[n_sigma - 1];
    const bool grew = base > 1e-300 && top >= cfg.growth_factor * base;

    if (monotone && grew) {
        out.flag = GrowthFlag::GrowsAlongReals;
    } else if (grew) {
        out.flag = GrowthFlag::Undetermined;
    } else {
        out.flag = GrowthFlag::Bounded;
    }
    out.notes = "heuristic probe: |G| on sigma in [" + fmt(sigma_lo) + "," + fmt(cfg.sigma_max) +
                "], growth ratio " + fmt(base > 0.0 ? top / base : 0.0) + " over the top two decades vs factor " +
                fmt(cfg.growth_factor);
    return out;
}

}  // namespace bibo
