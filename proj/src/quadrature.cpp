#include "bibo/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "bibo/summation.hpp"

namespace bibo {

namespace {

// QUADPACK dqk15 abscissae/weights on [-1, 1].
constexpr double kXgk[8] = {
    0.991455371120813, 0.949107912342759, 0.864864423359769, 0.741531185599394,
    0.586087235467691, 0.405845151377397, 0.207784955007898, 0.0,
};
constexpr double kWgk[8] = {
    0.022935322010529, 0.063092092629979, 0.104790010322250, 0.140653259715525,
    0.169004726639267, 0.190350578064785, 0.204432940075298, 0.209482141084728,
};
constexpr double kWg[4] = {
    0.129484966168870, 0.279705391489277, 0.381830050505119, 0.417959183673469,
};

struct Interval {
    double a;
    double b;
    std::complex<double> value;
    double error;
};

Interval gk15(const std::function<std::complex<double>(double)>& f, double a, double b) {
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    std::complex<double> fv[15];
    for (int j = 0; j < 7; ++j) {
        fv[j] = f(c - h * kXgk[j]);
        fv[14 - j] = f(c + h * kXgk[j]);
    }
    fv[7] = f(c);

    std::complex<double> kronrod = kWgk[7] * fv[7];
    std::complex<double> gauss = kWg[3] * fv[7];
    for (int j = 0; j < 7; ++j) {
        kronrod += kWgk[j] * (fv[j] + fv[14 - j]);
        if (j % 2 == 1) gauss += kWg[j / 2] * (fv[j] + fv[14 - j]);
    }
    kronrod *= h;
    gauss *= h;
    const double err = std::abs(kronrod - gauss);
    return {a, b, kronrod, err};
}

}  // namespace

QuadratureResult integrate(const std::function<std::complex<double>(double)>& f, double a, double b,
                           const QuadratureConfig& cfg) {
    QuadratureResult out;
    if (!(b > a)) {
        out.value = 0.0;
        return out;
    }

    std::vector<Interval> intervals;
    const int seeds = std::max(1, cfg.initial_intervals);
    const double step = (b - a) / seeds;
    for (int i = 0; i < seeds; ++i) {
        const double lo = a + i * step;
        const double hi = (i + 1 == seeds) ? b : a + (i + 1) * step;
        intervals.push_back(gk15(f, lo, hi));
        out.evaluations += 15;
    }

    auto totals = [&intervals]() {
        ComplexCompensatedSum v;
        CompensatedSum e;
        for (const Interval& iv : intervals) {
            v += iv.value;
            e += iv.error;
        }
        return std::pair<std::complex<double>, double>(v.value(), e.value());
    };

    while (static_cast<int>(intervals.size()) < cfg.max_intervals) {
        auto [total, err] = totals();
        const double goal = std::max(cfg.abs_tol, cfg.rel_tol * std::abs(total));
        if (err <= goal) break;
        // Deterministic worst-first refinement.
        std::size_t worst = 0;
        for (std::size_t i = 1; i < intervals.size(); ++i) {
            if (intervals[i].error > intervals[worst].error) worst = i;
        }
        if (!(intervals[worst].error > 0.0)) break;
        const Interval iv = intervals[worst];
        const double mid = 0.5 * (iv.a + iv.b);
        if (!(mid > iv.a && mid < iv.b)) break;  // interval exhausted at double resolution
        intervals[worst] = gk15(f, iv.a, mid);
        intervals.push_back(gk15(f, mid, iv.b));
        out.evaluations += 30;
    }

    auto [total, err] = totals();
    out.value = total;
    out.error_estimate = err;
    return out;
}

QuadratureResult integrate_real(const std::function<double(double)>& f, double a, double b,
                                const QuadratureConfig& cfg) {
    return integrate([&f](double t) { return std::complex<double>(f(t), 0.0); }, a, b, cfg);
}

}  // namespace bibo
