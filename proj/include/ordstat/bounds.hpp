#pragma once

// Closed-form and semi-analytic evaluation of the variance and tail bounds for
// order statistics, plus the constants they depend on.

#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "ordstat/distributions.hpp"
#include "ordstat/errors.hpp"
#include "ordstat/estimate.hpp"
#include "ordstat/renyi.hpp"

namespace ordstat {

enum class BoundKind {
    EsVariance,
    HazardVariance,
    ExpEsLogmgf,
    EvtLimit,
    GaussOrderVar,
    ExpLowerTail,
    GaussMaxBernstein,
    GaussMedianBernstein,
    GaussMaxShifted,
    GaussSignedMaxVar,
};

inline constexpr std::string_view to_string(BoundKind k) {
    switch (k) {
        case BoundKind::EsVariance: return "ES_VARIANCE";
        case BoundKind::HazardVariance: return "HAZARD_VARIANCE";
        case BoundKind::ExpEsLogmgf: return "EXP_ES_LOGMGF";
        case BoundKind::EvtLimit: return "EVT_LIMIT";
        case BoundKind::GaussOrderVar: return "GAUSS_ORDER_VAR";
        case BoundKind::ExpLowerTail: return "EXP_LOWER_TAIL";
        case BoundKind::GaussMaxBernstein: return "GAUSS_MAX_BERNSTEIN";
        case BoundKind::GaussMedianBernstein: return "GAUSS_MEDIAN_BERNSTEIN";
        case BoundKind::GaussMaxShifted: return "GAUSS_MAX_SHIFTED";
        case BoundKind::GaussSignedMaxVar: return "GAUSS_SIGNED_MAX_VAR";
    }
    return "?";
}

inline BoundKind parse_bound_kind(std::string_view s) {
    for (int i = 0; i <= static_cast<int>(BoundKind::GaussSignedMaxVar); ++i) {
        const auto k = static_cast<BoundKind>(i);
        if (to_string(k) == s) return k;
    }
    throw InputError("unknown bound kind '" + std::string(s) + "'");
}

struct BoundInputs {
    std::uint64_t n = 0;
    std::uint64_t k = 0;
    /// lambda, t or z depending on the bound; NaN when unused.
    double param = std::numeric_limits<double>::quiet_NaN();
    double gamma = std::numeric_limits<double>::quiet_NaN();
};

/// A computed bound. Monte Carlo backed bounds carry the standard error of the estimate.
struct BoundValue {
    BoundKind kind;
    BoundInputs inputs;
    double value = 0.0;
    double stderr = 0.0;
};

struct Kernels {
    double tau;
    double psi;
};

/// tau(x) = e^x - x - 1, with a series near 0 to avoid cancellation.
inline double tau(double x) {
    if (x > 700.0) throw RangeError("tau: exponent overflow");
    if (std::abs(x) < 1e-3) {
        // x^2/2 + x^3/6 + x^4/24 + x^5/120
        return x * x * (0.5 + x * (1.0 / 6.0 + x * (1.0 / 24.0 + x / 120.0)));
    }
    return std::expm1(x) - x;
}

/// psi(x) = e^x tau(-x) = 1 + (x - 1) e^x.
inline double psi(double x) {
    if (x > 700.0) throw RangeError("psi: exponent overflow");
    return std::exp(x) * tau(-x);
}

inline Kernels kernels(double x) {
    if (!std::isfinite(x)) throw InputError("kernels: x must be finite");
    if (x > 700.0) throw RangeError("kernels: exponent overflow for x > 700");
    return {tau(x), psi(x)};
}

namespace detail {

inline void check_rank(std::uint64_t n, std::uint64_t k) {
    if (k < 1 || k + 1 > n) throw InputError("rank must satisfy 1 <= k <= n-1");
}

inline bool lower_half(std::uint64_t n, std::uint64_t k) { return 2 * k <= n; }

}  // namespace detail

/// Var X_(k) <= k E[Delta_k^2] (k <= n/2) or (n-k+1) E[Delta_{k-1}^2] (k > n/2).
/// `mean_sq_spacing` is the estimate of the matching E[Delta^2].
inline BoundValue efron_stein_spacing_bound(std::uint64_t n, std::uint64_t k, const McEstimate& mean_sq_spacing) {
    detail::check_rank(n, k);
    const double factor = detail::lower_half(n, k) ? static_cast<double>(k) : static_cast<double>(n - k + 1);
    return {BoundKind::EsVariance, {n, k}, factor * mean_sq_spacing.value, factor * mean_sq_spacing.stderr};
}

/// Var X_(k) <= (2/k) E[h(X_(k+1))^-2] for k <= n/2, and
/// Var X_(k) <= 2(n-k+1)/(k-1)^2 E[h(X_(k))^-2] above the median.
inline BoundValue hazard_variance_bound(const DistributionModel& d, std::uint64_t n, std::uint64_t k,
                                        const McEstimate& mean_inv_hazard_sq) {
    if (!d.monotone_hazard()) {
        throw PreconditionError("hazard_variance_bound: " + d.name() + " does not have a non-decreasing hazard rate");
    }
    detail::check_rank(n, k);
    double factor = 0.0;
    if (detail::lower_half(n, k)) {
        factor = 2.0 / static_cast<double>(k);
    } else {
        const double km1 = static_cast<double>(k - 1);
        factor = 2.0 * static_cast<double>(n - k + 1) / (km1 * km1);
    }
    return {BoundKind::HazardVariance, {n, k}, factor * mean_inv_hazard_sq.value, factor * mean_inv_hazard_sq.stderr};
}

/// Exponential Efron-Stein bound on the centered log-MGF of X_(k):
/// lambda (k/2) E[Delta_k (e^{lambda Delta_k} - 1)], estimated from spacing draws.
inline BoundValue exp_efron_stein_logmgf_bound(std::uint64_t n, std::uint64_t k, double lambda,
                                               std::span<const double> spacings) {
    if (!(lambda >= 0.0) || !std::isfinite(lambda)) throw InputError("exp_efron_stein_logmgf_bound: lambda must be >= 0");
    detail::check_rank(n, k);
    if (!detail::lower_half(n, k)) throw InputError("exp_efron_stein_logmgf_bound: requires k <= n/2");
    std::vector<double> terms(spacings.size());
    for (std::size_t i = 0; i < spacings.size(); ++i) {
        const double s = spacings[i];
        if (s < 0.0) throw InputError("exp_efron_stein_logmgf_bound: negative spacing");
        if (lambda * s > 700.0) throw RangeError("exp_efron_stein_logmgf_bound: exponent overflow");
        terms[i] = s * std::expm1(lambda * s);
    }
    const McEstimate m = mean_estimate(terms);
    const double factor = lambda * static_cast<double>(k) / 2.0;
    return {BoundKind::ExpEsLogmgf, {n, k, lambda}, factor * m.value, factor * m.stderr};
}

struct EvtLimits {
    double spacing;   // lim E[(X_(1)-X_(2))^2] / a(n)^2
    double variance;  // lim Var(X_(1)) / a(n)^2
    double ratio;     // spacing / variance
};

namespace detail {

/// lgamma(1-2g) - 2 lgamma(1-g) as a power series in g, sum_{k>=2} zeta(k)(2^k-2) g^k / k.
/// The linear terms cancel exactly; valid for |g| < 1/2, used for |g| <= 0.05.
inline double evt_log_gamma_gap_series(double g) {
    double sum = 0.0;
    double gk = g * g;
    double two_k = 4.0;
    for (int k = 2; k < 80; ++k) {
        const double term = std::riemann_zeta(static_cast<double>(k)) * (two_k - 2.0) * gk / k;
        sum += term;
        if (std::abs(term) <= 1e-18 * std::abs(sum)) break;
        gk *= g;
        two_k *= 2.0;
    }
    return sum;
}

}  // namespace detail

/// Limits of the top spacing and of the maximum's variance, both scaled by a(n)^2,
/// for a law in the max-domain of attraction with tail index gamma < 1/2.
inline EvtLimits evt_limits(double gamma) {
    if (!(gamma < 0.5) || std::isnan(gamma)) throw DomainError("evt_limits: requires gamma < 1/2");
    const double g = gamma;
    const double log_spacing = std::numbers::ln2 + log_gamma(2.0 - 2.0 * g) - std::log((1.0 - g) * (1.0 - 2.0 * g));
    const double spacing = std::exp(log_spacing);

    // variance = Gamma(1-g)^2 (exp(D) - 1) / g^2, D = lgamma(1-2g) - 2 lgamma(1-g).
    double variance = 0.0;
    double ratio = 0.0;
    if (std::abs(g) <= 0.05) {
        const double d = detail::evt_log_gamma_gap_series(g);
        const double d_over_g2 = g == 0.0 ? std::numbers::pi * std::numbers::pi / 6.0 : d / (g * g);
        const double expm1_ratio = d == 0.0 ? 1.0 : std::expm1(d) / d;
        variance = std::exp(2.0 * log_gamma(1.0 - g)) * d_over_g2 * expm1_ratio;
        ratio = spacing / variance;
    } else {
        const double lg1 = log_gamma(1.0 - g);
        const double lg2 = log_gamma(1.0 - 2.0 * g);
        const double frac = -std::expm1(2.0 * lg1 - lg2);  // 1 - Gamma(1-g)^2/Gamma(1-2g)
        variance = std::exp(lg2) * frac / (g * g);
        // Ratio simplified analytically so it stays finite when the limits overflow.
        ratio = 2.0 * g * g / ((1.0 - g) * frac);
    }
    if (!std::isfinite(ratio)) throw RangeError("evt_limits: ratio not representable");
    return {spacing, variance, ratio};
}

namespace detail {

inline double gauss_order_log_term(std::uint64_t n, std::uint64_t k) {
    if (n < 3) throw DomainError("gaussian_order_variance_bound: requires n >= 3");
    if (k < 1 || 2 * k > n) throw DomainError("gaussian_order_variance_bound: requires 1 <= k <= n/2");
    const double l = std::log(2.0 * static_cast<double>(n) / static_cast<double>(k));
    if (!(l > 1.0)) throw DomainError("gaussian_order_variance_bound: 2n/k must exceed e");
    return l;
}

}  // namespace detail

/// Var X_(k) <= 8 / (k log 2 (log(2n/k) - log(1 + (4/k) log log(2n/k)))) for |N(0,1)| samples.
inline BoundValue gaussian_order_variance_bound(std::uint64_t n, std::uint64_t k) {
    const double l = detail::gauss_order_log_term(n, k);
    const double kd = static_cast<double>(k);
    const double denom = l - std::log1p(4.0 / kd * std::log(l));
    if (!(denom > 0.0)) {
        throw DomainError("gaussian_order_variance_bound: non-positive denominator " + std::to_string(denom));
    }
    return {BoundKind::GaussOrderVar, {n, k}, 8.0 / (kd * std::numbers::ln2 * denom)};
}

/// The two-term expression the derivation ends with; never larger than the stated bound.
inline double gaussian_order_variance_proof_expression(std::uint64_t n, std::uint64_t k) {
    const double l = detail::gauss_order_log_term(n, k);
    const double kd = static_cast<double>(k);
    const double denom = l - std::log1p(4.0 / kd * std::log(l));
    if (!(denom > 0.0)) throw DomainError("gaussian_order_variance_proof_expression: non-positive denominator");
    return 4.0 / (kd * std::numbers::ln2 * l) + 4.0 / (kd * denom);
}

namespace detail {

inline void check_lower_tail_args(std::uint64_t n, std::uint64_t k, double z) {
    if (k < 1 || k >= n) throw DomainError("exponential_lower_tail_bound: requires 1 <= k < n");
    const double top = std::log(static_cast<double>(n) / static_cast<double>(k));
    if (!(z > std::numbers::ln2 && z < top)) {
        throw DomainError("exponential_lower_tail_bound: requires log 2 < z < log(n/k)");
    }
}

}  // namespace detail

/// P{Y_(k+1) <= log(n/k) - z} <= exp(-k (e^z - 1) / 4) for exponential samples.
inline double exponential_lower_tail_bound(std::uint64_t n, std::uint64_t k, double z) {
    detail::check_lower_tail_args(n, k, z);
    const double v = std::exp(-static_cast<double>(k) * std::expm1(z) / 4.0);
    return std::clamp(v, 0.0, 1.0);
}

/// The sharper intermediate exp(-k (e^z - 1)^2 / (2 e^z)) from the binomial argument.
inline double exponential_lower_tail_proof_expression(std::uint64_t n, std::uint64_t k, double z) {
    detail::check_lower_tail_args(n, k, z);
    const double em1 = std::expm1(z);
    return std::exp(-static_cast<double>(k) * em1 * em1 / (2.0 * std::exp(z)));
}

/// Variance factor for the maximum of |N(0,1)| samples: the root v_n of
/// 16/x + log(1 + 2/x + 4 log(4/x)) = log(2n). The bound applies when v_n < 1.
struct GaussianMaxParams {
    std::uint64_t n = 0;
    double v_n = 0.0;
    double residual = 0.0;
    bool applicable = false;
};

namespace detail {

inline double vn_lhs(double x) { return 16.0 / x + std::log(1.0 + 2.0 / x + 4.0 * std::log(4.0 / x)); }

}  // namespace detail

inline GaussianMaxParams gaussian_max_vn(std::uint64_t n) {
    if (n < 1) throw InputError("gaussian_max_vn: n must be at least 1");
    const double rhs = std::log(2.0 * static_cast<double>(n));

    // The log argument 1 + 2/x + 4 log(4/x) turns negative a little above x = 5;
    // the bracket stops at that point, where the left side tends to -infinity.
    double a_lo = 4.0;
    double a_hi = 1e6;
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (a_lo + a_hi);
        if (1.0 + 2.0 / mid + 4.0 * std::log(4.0 / mid) > 0.0) a_lo = mid; else a_hi = mid;
    }
    double lo = 1e-6;
    double hi = a_lo;

    // Check the left side decreases along the bracket before trusting bisection.
    double prev = detail::vn_lhs(lo);
    for (int i = 1; i <= 256; ++i) {
        const double x = lo * std::pow(hi / lo, i / 256.0);
        const double cur = detail::vn_lhs(x);
        if (!(cur < prev)) throw NumericalError("gaussian_max_vn: left side not decreasing on the bracket");
        prev = cur;
    }
    if (!(detail::vn_lhs(lo) > rhs) || !(detail::vn_lhs(hi) < rhs)) {
        throw NumericalError("gaussian_max_vn: no root in (1e-6, 1e6)");
    }
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        if (detail::vn_lhs(mid) > rhs) lo = mid; else hi = mid;
    }
    const double root = std::abs(detail::vn_lhs(lo) - rhs) <= std::abs(detail::vn_lhs(hi) - rhs) ? lo : hi;
    return {n, root, detail::vn_lhs(root) - rhs, root < 1.0};
}

/// Bernstein threshold sqrt(2 v t) + c t of a sub-gamma (v, c) variable.
inline double sub_gamma_tail_threshold(double v, double c, double t) {
    if (!(v >= 0.0 && c >= 0.0 && t >= 0.0)) throw InputError("sub_gamma_tail_threshold: v, c, t must be >= 0");
    return std::sqrt(2.0 * v * t) + c * t;
}

/// lambda^2 v / (2 (1 - c lambda)) for 0 <= lambda < 1/c.
inline double sub_gamma_logmgf_bound(double v, double c, double lambda) {
    if (!(lambda >= 0.0)) throw InputError("sub_gamma_logmgf_bound: lambda must be >= 0");
    if (c > 0.0 && !(lambda < 1.0 / c)) throw DomainError("sub_gamma_logmgf_bound: requires lambda < 1/c");
    return lambda * lambda * v / (2.0 * (1.0 - c * lambda));
}

/// sqrt(v_n) (t + sqrt(2t)). Evaluated whether or not params.applicable; callers check.
inline double gaussian_max_bernstein(const GaussianMaxParams& params, double t) {
    if (!(t >= 0.0)) throw InputError("gaussian_max_bernstein: t must be >= 0");
    return std::sqrt(params.v_n) * (t + std::sqrt(2.0 * t));
}

/// v_n lambda^2 / (2 (1 - sqrt(v_n) lambda)) for 0 <= lambda < 1/sqrt(v_n).
inline double gaussian_max_logmgf_bound(const GaussianMaxParams& params, double lambda) {
    return sub_gamma_logmgf_bound(params.v_n, std::sqrt(params.v_n), lambda);
}

struct MedianBernstein {
    double v_n;
    double threshold;
};

/// Median of |N(0,1)| samples, n even: v_n = 8/(n log 2), threshold sqrt(2 v_n t) + 2 sqrt(v_n/n) t.
inline MedianBernstein gaussian_median_bernstein(std::uint64_t n, double t) {
    if (n < 2 || n % 2 != 0) throw InputError("gaussian_median_bernstein: n must be even and >= 2");
    if (!(t >= 0.0)) throw InputError("gaussian_median_bernstein: t must be >= 0");
    const double nd = static_cast<double>(n);
    const double v = 8.0 / (nd * std::numbers::ln2);
    return {v, sub_gamma_tail_threshold(v, 2.0 * std::sqrt(v / nd), t)};
}

/// Companion log-MGF bound, 0 <= lambda < n / (2 sqrt(v_n)).
inline double gaussian_median_logmgf_bound(std::uint64_t n, double lambda) {
    const auto mb = gaussian_median_bernstein(n, 0.0);
    const double nd = static_cast<double>(n);
    return sub_gamma_logmgf_bound(mb.v_n, 2.0 * std::sqrt(mb.v_n / nd), lambda);
}

/// delta_n = U~(e^{H_n}) - E[U~(e^{Y_(1)})], with Y_(1) the maximum of n standard
/// exponentials (density n e^{-y} (1 - e^{-y})^{n-1}). Adaptive Gauss-Kronrod over
/// the central 1 - 2e-12 of the maximum's law, relative tolerance 1e-8.
inline double gaussian_max_shift(std::uint64_t n) {
    if (n < 2) throw InputError("gaussian_max_shift: requires n >= 2");
    const double nd = static_cast<double>(n);
    const double h_n = harmonic_number(n);
    const double anchor = u_exp(DistributionModel::abs_gaussian(), h_n);
    const double y_lo = -std::log(-std::expm1(std::log(1e-12) / nd));
    const double y_hi = -std::log(-std::expm1(std::log1p(-1e-12) / nd));
    const auto abs_gauss = DistributionModel::abs_gaussian();
    auto integrand = [&](double y) {
        const double log_density = std::log(nd) - y + (nd - 1.0) * std::log1p(-std::exp(-y));
        return (anchor - u_exp(abs_gauss, y)) * std::exp(log_density);
    };
    constexpr double rel_tol = 1e-8;
    double total = 0.0;
    double total_err = 0.0;
    // Split at the mode log n so each piece is unimodal.
    const double mid = std::clamp(std::log(nd), y_lo, y_hi);
    for (const auto& [a, b] : {std::pair{y_lo, mid}, std::pair{mid, y_hi}}) {
        if (!(b > a)) continue;
        double err = 0.0;
        total += boost::math::quadrature::gauss_kronrod<double, 15>::integrate(integrand, a, b, 20, 1e-12, &err);
        total_err += err;
    }
    if (!(total_err <= rel_tol * std::abs(total)) || !std::isfinite(total)) {
        throw NumericalError("gaussian_max_shift: quadrature did not reach relative error 1e-8");
    }
    return total;
}

struct ShiftedTail {
    double threshold;
    double delta_n;
};

/// t/(3 U~(n)) + sqrt(t)/U~(n) + delta_n.
inline ShiftedTail gaussian_max_shifted_tail(std::uint64_t n, double t) {
    if (n < 2) throw InputError("gaussian_max_shifted_tail: requires n >= 2");
    if (!(t >= 0.0)) throw InputError("gaussian_max_shifted_tail: t must be >= 0");
    const double delta = gaussian_max_shift(n);
    const double u = u_tilde(static_cast<double>(n));
    return {t / (3.0 * u) + std::sqrt(t) / u + delta, delta};
}

/// Variance bound for the maximum of n >= 11 standard Gaussians.
inline BoundValue gaussian_signed_max_variance_bound(std::uint64_t n) {
    if (n < 11) throw DomainError("gaussian_signed_max_variance_bound: requires n >= 11");
    const double nd = static_cast<double>(n);
    const double l = std::log(nd / 2.0);
    const double main = (8.0 / std::numbers::ln2) / (l - std::log1p(4.0 * std::log(l)));
    const double value = main + std::exp2(-nd) + std::exp(-nd / 8.0) + 4.0 * std::numbers::pi / nd;
    return {BoundKind::GaussSignedMaxVar, {n}, value};
}

}  // namespace ordstat
