#pragma once

#include <complex>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "bibo/errors.hpp"

namespace bibo {

using Complex = std::complex<double>;

/// Sentinel growth abscissa of the empty system: effectively -infinity while
/// staying an ordinary double, so half-plane arithmetic degrades gracefully.
inline constexpr double kEmptyAbscissa = -1e308;

bool is_finite(double x);
bool is_finite(Complex z);

/// Right half-plane { s : Re s > abscissa }, used for domain bookkeeping.
struct HalfPlane {
    double abscissa = 0.0;

    bool contains(Complex s) const { return s.real() > abscissa; }
};

// --- tail models beyond the truncation -------------------------------------

struct TailNone {};

/// lambda_n = -a n^p for n > N with constant coefficient magnitudes.
struct TailPowerLaw {
    double a = 1.0;
    double p = 2.0;
    double b_mag = 1.0;
    double c_mag = 1.0;
};

/// User-supplied bound on sum_{n>N} |b_n c_n^* / Re lambda_n|.
struct TailUserBound {
    double value = 0.0;
};

using TailModel = std::variant<TailNone, TailPowerLaw, TailUserBound>;

/// Result of evaluating a tail model: no tail claim, a finite bound, or a
/// divergent majorant (power law with p <= 1).
struct TailBound {
    enum class Kind { None, Finite, Divergent } kind = Kind::None;
    double value = 0.0;

    static TailBound none() { return {Kind::None, 0.0}; }
    static TailBound finite(double v) { return {Kind::Finite, v}; }
    static TailBound divergent() { return {Kind::Divergent, 0.0}; }
};

/// Bound on sum_{n>n_trunc} |b_n c_n^* / Re lambda_n| implied by the tail model.
TailBound tail_cond_riesz_bound(const TailModel& tail, std::size_t n_trunc);

// --- the truncated Riesz-spectral system ------------------------------------

/// Diagonal (Riesz-spectral) system truncated to N modes: eigenvalues
/// lambda_n, input coefficients b_n, output coefficients c_n, plus the
/// additive feedthrough constant of the transfer function.
struct SpectralSystemSpec {
    std::vector<Complex> eigenvalues;
    std::vector<Complex> b_coeffs;
    std::vector<Complex> c_coeffs;
    Complex feedthrough = 0.0;
    TailModel tail_model = TailNone{};

    std::size_t size() const { return eigenvalues.size(); }

    /// b_n c_n^*, the only combination the input-output behaviour sees.
    Complex mode_weight(std::size_t n) const { return b_coeffs[n] * std::conj(c_coeffs[n]); }

    /// Growth abscissa max Re lambda_n; kEmptyAbscissa for N = 0.
    /// Valid after validate_spec().
    double abscissa() const { return abscissa_; }

    friend SpectralSystemSpec validate_spec(SpectralSystemSpec spec);

  private:
    double abscissa_ = kEmptyAbscissa;
};

/// Checks lengths and finiteness, validates the tail model, caches the growth
/// abscissa (an exact max, no floating drift). Idempotent.
SpectralSystemSpec validate_spec(SpectralSystemSpec spec);

// --- signals ----------------------------------------------------------------

/// Scalar signal on the uniform grid t_k = k dt, interpreted as
/// piecewise-constant-left: u(t) = samples[k] on [t_k, t_{k+1}), and 0 after
/// the final grid point.
struct Signal {
    double dt = 1.0;
    std::vector<Complex> samples;

    static constexpr double t0 = 0.0;

    std::size_t size() const { return samples.size(); }
    double duration() const { return samples.empty() ? 0.0 : dt * static_cast<double>(samples.size() - 1); }
    double time_at(std::size_t k) const { return dt * static_cast<double>(k); }
};

Signal validate_signal(Signal sig);

/// max_k |samples[k]|; 0 for an empty signal.
double sup_norm(const Signal& sig);

// --- analysis verdicts -------------------------------------------------------

enum class Verdict { ProvedBibo, ConditionFailed, Inconclusive };
enum class Condition { CondRiesz, FiniteUnstableExt, ImpulseL1, FractionalOrders, TransferConstant };

const char* verdict_name(Verdict v);
const char* condition_name(Condition c);

/// Structured verdict of one sufficient-condition checker.
/// Invariant: verdict == ProvedBibo implies bound is present and finite.
struct BiboReport {
    Verdict verdict = Verdict::Inconclusive;
    Condition condition_used = Condition::CondRiesz;
    std::optional<double> bound;
    std::optional<double> tail_bound;
    std::optional<double> empirical_ratio;
    std::string notes;
};

}  // namespace bibo
