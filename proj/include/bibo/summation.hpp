#pragma once

#include <complex>

namespace bibo {

/// Neumaier-compensated accumulator. Mode sums run over up to ~1e6 terms with
/// heavy cancellation (stacked systems), where a naive sum would lose the
/// cancellation to roundoff.
struct CompensatedSum {
    double sum = 0.0;
    double compensation = 0.0;

    void add(double value) {
        const double t = sum + value;
        if (std::abs(sum) >= std::abs(value)) {
            compensation += (sum - t) + value;
        } else {
            compensation += (value - t) + sum;
        }
        sum = t;
    }

    CompensatedSum& operator+=(double value) {
        add(value);
        return *this;
    }

    double value() const { return sum + compensation; }
};

/// Component-wise compensated accumulator for complex terms.
struct ComplexCompensatedSum {
    CompensatedSum re;
    CompensatedSum im;

    void add(std::complex<double> value) {
        re.add(value.real());
        im.add(value.imag());
    }

    ComplexCompensatedSum& operator+=(std::complex<double> value) {
        add(value);
        return *this;
    }

    std::complex<double> value() const { return {re.value(), im.value()}; }
};

}  // namespace bibo
