#include "bibo/core.hpp"

#include <cmath>
#include <sstream>

namespace bibo {

bool is_finite(double x) { return std::isfinite(x); }
bool is_finite(Complex z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

const char* error_code_name(ErrorCode code) {
    switch (code) {
        case ErrorCode::LengthMismatch: return "LengthMismatch";
        case ErrorCode::NonFiniteEntry: return "NonFiniteEntry";
        case ErrorCode::OutsideDomain: return "OutsideDomain";
        case ErrorCode::PoleHit: return "PoleHit";
        case ErrorCode::UnstableMode: return "UnstableMode";
        case ErrorCode::SectorViolation: return "SectorViolation";
        case ErrorCode::NotExponentiallyStable: return "NotExponentiallyStable";
        case ErrorCode::NonIntegrableDensity: return "NonIntegrableDensity";
        case ErrorCode::ZeroInput: return "ZeroInput";
        case ErrorCode::GridMismatch: return "GridMismatch";
        case ErrorCode::ContourError: return "ContourError";
        case ErrorCode::UnstablePerturbed: return "UnstablePerturbed";
        case ErrorCode::DomainError: return "DomainError";
        case ErrorCode::AssertionFailure: return "AssertionFailure";
        case ErrorCode::ParseError: return "ParseError";
    }
    return "UnknownError";
}

const char* verdict_name(Verdict v) {
    switch (v) {
        case Verdict::ProvedBibo: return "ProvedBibo";
        case Verdict::ConditionFailed: return "ConditionFailed";
        case Verdict::Inconclusive: return "Inconclusive";
    }
    return "Unknown";
}

const char* condition_name(Condition c) {
    switch (c) {
        case Condition::CondRiesz: return "CondRiesz";
        case Condition::FiniteUnstableExt: return "FiniteUnstableExt";
        case Condition::ImpulseL1: return "ImpulseL1";
        case Condition::FractionalOrders: return "FractionalOrders";
        case Condition::TransferConstant: return "TransferConstant";
    }
    return "Unknown";
}

TailBound tail_cond_riesz_bound(const TailModel& tail, std::size_t n_trunc) {
    if (std::holds_alternative<TailNone>(tail)) return TailBound::none();
    if (const auto* user = std::get_if<TailUserBound>(&tail)) return TailBound::finite(user->value);
    const auto& pl = std::get<TailPowerLaw>(tail);
    if (pl.p <= 1.0) return TailBound::divergent();
    // sum_{n>N} b c / (a n^p) <= (b c / a) * integral_N^inf x^-p dx
    const double n = std::max<double>(1.0, static_cast<double>(n_trunc));
    const double s = pl.b_mag * pl.c_mag / pl.a * std::pow(n, 1.0 - pl.p) / (pl.p - 1.0);
    return TailBound::finite(s);
}

SpectralSystemSpec validate_spec(SpectralSystemSpec spec) {
    const std::size_t n = spec.eigenvalues.size();
    if (spec.b_coeffs.size() != n || spec.c_coeffs.size() != n) {
        std::ostringstream os;
        os << "sequence lengths differ: eigenvalues=" << n << " b=" << spec.b_coeffs.size()
           << " c=" << spec.c_coeffs.size();
        throw Error(ErrorCode::LengthMismatch, os.str());
    }
    for (std::size_t k = 0; k < n; ++k) {
        if (!is_finite(spec.eigenvalues[k]) || !is_finite(spec.b_coeffs[k]) || !is_finite(spec.c_coeffs[k])) {
            throw Error(ErrorCode::NonFiniteEntry, "non-finite entry at mode " + std::to_string(k));
        }
    }
    if (!is_finite(spec.feedthrough)) {
        throw Error(ErrorCode::NonFiniteEntry, "non-finite feedthrough");
    }
    if (const auto* pl = std::get_if<TailPowerLaw>(&spec.tail_model)) {
        if (!(pl->a > 0.0) || !(pl->p > 0.0) || pl->b_mag < 0.0 || pl->c_mag < 0.0 ||
            !is_finite(pl->a) || !is_finite(pl->p) || !is_finite(pl->b_mag) || !is_finite(pl->c_mag)) {
            throw Error(ErrorCode::NonFiniteEntry, "power-law tail requires a > 0, p > 0 and finite magnitudes");
        }
    }
    if (const auto* user = std::get_if<TailUserBound>(&spec.tail_model)) {
        if (user->value < 0.0 || !is_finite(user->value)) {
            throw Error(ErrorCode::NonFiniteEntry, "user tail bound must be finite and >= 0");
        }
    }
    double abscissa = kEmptyAbscissa;
    for (const Complex& lambda : spec.eigenvalues) abscissa = std::max(abscissa, lambda.real());
    spec.abscissa_ = abscissa;
    return spec;
}

Signal validate_signal(Signal sig) {
    if (!(sig.dt > 0.0) || !is_finite(sig.dt)) {
        throw Error(ErrorCode::NonFiniteEntry, "signal requires dt > 0");
    }
    for (const Complex& v : sig.samples) {
        if (!is_finite(v)) throw Error(ErrorCode::NonFiniteEntry, "non-finite signal sample");
    }
    return sig;
}

double sup_norm(const Signal& sig) {
    double m = 0.0;
    for (const Complex& v : sig.samples) m = std::max(m, std::abs(v));
    return m;
}

}  // namespace bibo
