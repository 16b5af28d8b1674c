#pragma once

// Gaussian primitives built on erfc, plus log-gamma and compensated summation.

#include <cmath>
#include <limits>

#include "ordstat/errors.hpp"

namespace ordstat {

namespace gauss {

inline constexpr double kInvSqrt2 = 0.70710678118654752440;
inline constexpr double kLogSqrt2Pi = 0.91893853320467274178;
/// Above this abscissa the Mills-ratio continued fraction replaces the erfc ratio.
inline constexpr double kTailSwitch = 8.0;

inline double pdf(double x) { return std::exp(-0.5 * x * x - kLogSqrt2Pi); }
inline double cdf(double x) { return 0.5 * std::erfc(-x * kInvSqrt2); }
inline double sf(double x) { return 0.5 * std::erfc(x * kInvSqrt2); }

/// Mills ratio sf(x)/pdf(x) by the Laplace continued fraction
/// 1/(x + 1/(x + 2/(x + 3/(x + ...)))), evaluated with modified Lentz. Intended for x >= 3.
inline double mills_ratio_cf(double x) {
    constexpr double tiny = 1e-300;
    double f = x;
    double c = f;
    double d = 0.0;
    for (int j = 1; j < 2000; ++j) {
        const double a = static_cast<double>(j);
        d = x + a * d;
        if (d == 0.0) d = tiny;
        d = 1.0 / d;
        c = x + a / c;
        if (c == 0.0) c = tiny;
        const double delta = c * d;
        f *= delta;
        if (std::abs(delta - 1.0) < 1e-16) break;
    }
    return 1.0 / f;
}

/// log of the upper tail, finite for every finite x.
inline double log_sf(double x) {
    if (x < kTailSwitch) return std::log(sf(x));
    return -0.5 * x * x - kLogSqrt2Pi + std::log(mills_ratio_cf(x));
}

/// pdf/sf, the Gaussian hazard rate.
inline double hazard(double x) {
    if (x < kTailSwitch) return pdf(x) / sf(x);
    return 1.0 / mills_ratio_cf(x);
}

/// Smallest x with sf(x) <= q, for q in (0, 1).
///
/// Bracketed Newton iteration on log sf (concave, slope -hazard) with bisection
/// fallback. Iterates until the step falls below 1e-14 relative to max(1, |x|),
/// well inside the 1e-12 absolute target.
inline double upper_quantile(double q) {
    if (!(q > 0.0 && q < 1.0)) throw InputError("gaussian upper quantile: q must lie in (0,1)");
    if (q == 0.5) return 0.0;
    if (q > 0.5) return -upper_quantile(1.0 - q);

    const double target = std::log(q);
    double lo = 0.0;
    double hi = 1.0;
    while (log_sf(hi) > target) {
        lo = hi;
        hi *= 2.0;
    }
    // Asymptotic start; clamped into the bracket.
    const double l2 = -2.0 * target;
    double x = l2 > 2.0 ? std::sqrt(l2 - std::log(l2) - 1.8378770664093453) : 0.5 * (lo + hi);
    if (!(x > lo && x < hi)) x = 0.5 * (lo + hi);

    for (int it = 0; it < 200; ++it) {
        const double g = log_sf(x) - target;
        if (g == 0.0) return x;
        if (g > 0.0) lo = x; else hi = x;
        double next = x + g / hazard(x);
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
        const double step = next - x;
        x = next;
        if (std::abs(step) <= 1e-14 * std::max(1.0, std::abs(x)) || hi - lo <= 1e-15 * std::max(1.0, hi)) {
            return x;
        }
    }
    throw NumericalError("gaussian upper quantile: iteration did not converge");
}

/// Phi^{-1}(p), p in (0,1).
inline double quantile(double p) {
    if (!(p > 0.0 && p < 1.0)) throw InputError("gaussian quantile: p must lie in (0,1)");
    if (p > 0.5) return upper_quantile(1.0 - p);
    return -upper_quantile(p);
}

}  // namespace gauss

/// log Gamma(x) for x > 0 without touching the global signgam.
inline double log_gamma(double x) {
#if defined(__GLIBC__)
    int sign = 0;
    return ::lgamma_r(x, &sign);
#else
    return std::lgamma(x);
#endif
}

/// Neumaier-compensated running sum.
class CompensatedSum {
public:
    void add(double v) noexcept {
        const double t = sum_ + v;
        if (std::abs(sum_) >= std::abs(v)) comp_ += (sum_ - t) + v;
        else comp_ += (v - t) + sum_;
        sum_ = t;
    }
    [[nodiscard]] double value() const noexcept { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

}  // namespace ordstat
