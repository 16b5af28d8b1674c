#pragma once

// Parametric sampling laws and the quantile / U-transform / hazard machinery
// consumed by the samplers and bounds.

#include <charconv>
#include <cmath>
#include <numbers>
#include <string>

#include "ordstat/errors.hpp"
#include "ordstat/special.hpp"

namespace ordstat {

enum class Family { Exponential, StdGaussian, AbsGaussian, Gumbel, Gpd };

/// A sampling law. Exponential has rate 1; Gumbel is exp(-exp(-x));
/// Gpd(gamma) has survival (1 + gamma x)^(-1/gamma) on its support.
class DistributionModel {
public:
    static DistributionModel exponential() { return DistributionModel(Family::Exponential, 0.0); }
    static DistributionModel std_gaussian() { return DistributionModel(Family::StdGaussian, 0.0); }
    static DistributionModel abs_gaussian() { return DistributionModel(Family::AbsGaussian, 0.0); }
    static DistributionModel gumbel() { return DistributionModel(Family::Gumbel, 0.0); }
    static DistributionModel gpd(double gamma) {
        if (!std::isfinite(gamma)) throw InputError("gpd: tail index must be finite");
        return DistributionModel(Family::Gpd, gamma);
    }

    [[nodiscard]] Family family() const noexcept { return family_; }
    /// Tail index; meaningful for Gpd, 0 for the other families.
    [[nodiscard]] double gamma() const noexcept { return gamma_; }

    /// True exactly for the families whose hazard rate is non-decreasing.
    [[nodiscard]] bool monotone_hazard() const noexcept {
        return family_ != Family::Gpd || gamma_ <= 0.0;
    }

    /// Lower end of the support.
    [[nodiscard]] double support_lower() const noexcept {
        switch (family_) {
            case Family::StdGaussian:
            case Family::Gumbel: return -std::numeric_limits<double>::infinity();
            default: return 0.0;
        }
    }
    /// Upper end of the support (finite only for Gpd with gamma < 0).
    [[nodiscard]] double support_upper() const noexcept {
        if (family_ == Family::Gpd && gamma_ < 0.0) return -1.0 / gamma_;
        return std::numeric_limits<double>::infinity();
    }

    /// Canonical name, also the config/CSV spelling: "gpd:-1" etc.
    [[nodiscard]] std::string name() const {
        switch (family_) {
            case Family::Exponential: return "exponential";
            case Family::StdGaussian: return "gaussian";
            case Family::AbsGaussian: return "absgaussian";
            case Family::Gumbel: return "gumbel";
            case Family::Gpd: {
                // Shortest text that parses back to the same double.
                char buf[32];
                const auto res = std::to_chars(buf, buf + sizeof buf, gamma_);
                return "gpd:" + std::string(buf, res.ptr);
            }
        }
        return "?";
    }

    friend bool operator==(const DistributionModel&, const DistributionModel&) = default;

private:
    DistributionModel(Family f, double g) : family_(f), gamma_(g) {}
    Family family_;
    double gamma_;
};

/// Parse the canonical family spelling produced by DistributionModel::name().
inline DistributionModel parse_family(const std::string& text) {
    if (text == "exponential") return DistributionModel::exponential();
    if (text == "gaussian") return DistributionModel::std_gaussian();
    if (text == "absgaussian") return DistributionModel::abs_gaussian();
    if (text == "gumbel") return DistributionModel::gumbel();
    if (text.rfind("gpd:", 0) == 0) {
        const std::string arg = text.substr(4);
        std::size_t used = 0;
        double g = 0.0;
        try {
            g = std::stod(arg, &used);
        } catch (const std::exception&) {
            throw InputError("bad gpd tail index in '" + text + "'");
        }
        if (used != arg.size()) throw InputError("bad gpd tail index in '" + text + "'");
        return DistributionModel::gpd(g);
    }
    throw InputError("unknown family '" + text + "'");
}

struct Evaluation {
    double cdf;
    double survival;
    double density;
};

namespace detail {

// Survival (1 + g x)^(-1/g) and density for the GPD on its support.
inline double gpd_log_survival(double g, double x) {
    if (g == 0.0) return -x;
    return -std::log1p(g * x) / g;
}

}  // namespace detail

inline Evaluation evaluate(const DistributionModel& d, double x) {
    if (!std::isfinite(x)) throw InputError("evaluate: x must be finite");
    switch (d.family()) {
        case Family::Exponential:
            if (x <= 0.0) return {0.0, 1.0, x == 0.0 ? 1.0 : 0.0};
            return {-std::expm1(-x), std::exp(-x), std::exp(-x)};
        case Family::StdGaussian:
            return {gauss::cdf(x), gauss::sf(x), gauss::pdf(x)};
        case Family::AbsGaussian:
            if (x < 0.0) return {0.0, 1.0, 0.0};
            return {std::erf(x * gauss::kInvSqrt2), std::erfc(x * gauss::kInvSqrt2), 2.0 * gauss::pdf(x)};
        case Family::Gumbel: {
            const double u = std::exp(-x);
            if (!std::isfinite(u)) return {0.0, 1.0, 0.0};
            const double cdf = std::exp(-u);
            return {cdf, -std::expm1(-u), u * cdf};
        }
        case Family::Gpd: {
            const double g = d.gamma();
            if (x < 0.0) return {0.0, 1.0, 0.0};
            if (x >= d.support_upper()) return {1.0, 0.0, 0.0};
            const double ls = detail::gpd_log_survival(g, x);
            const double sf = std::exp(ls);
            const double dens = std::exp(ls - std::log1p(g * x));
            return {-std::expm1(ls), sf, dens};
        }
    }
    throw InputError("evaluate: unknown family");
}

/// Inverse of the survival function: smallest x with survival(x) <= q, q in (0,1).
/// Working from the upper-tail probability keeps full relative precision for q near 0.
inline double upper_quantile(const DistributionModel& d, double q) {
    if (!(q > 0.0 && q < 1.0)) throw InputError("upper_quantile: q must lie in (0,1)");
    switch (d.family()) {
        case Family::Exponential: return -std::log(q);
        case Family::StdGaussian: return gauss::upper_quantile(q);
        case Family::AbsGaussian: return gauss::upper_quantile(0.5 * q);
        case Family::Gumbel: return -std::log(-std::log1p(-q));
        case Family::Gpd: {
            const double g = d.gamma();
            if (g == 0.0) return -std::log(q);
            const double x = std::expm1(-g * std::log(q)) / g;
            return std::min(x, d.support_upper());
        }
    }
    throw InputError("upper_quantile: unknown family");
}

/// Generalized inverse of the CDF: smallest x with cdf(x) >= p, p in (0,1).
inline double quantile(const DistributionModel& d, double p) {
    if (!(p > 0.0 && p < 1.0)) throw InputError("quantile: p must lie in (0,1)");
    switch (d.family()) {
        case Family::Exponential: return -std::log1p(-p);
        case Family::StdGaussian: return gauss::quantile(p);
        case Family::Gumbel: return -std::log(-std::log(p));
        default:
            // 1 - p is exact for p >= 1/2; below that the relative loss is harmless.
            return upper_quantile(d, 1.0 - p);
    }
}

/// U(t) = F^{<-}(1 - 1/t), t > 1.
inline double u_transform(const DistributionModel& d, double t) {
    if (!(t > 1.0) || std::isnan(t)) throw InputError("u_transform: t must exceed 1");
    if (std::isinf(t)) return d.support_upper();
    return upper_quantile(d, 1.0 / t);
}

/// U(exp(y)) for y >= 0, evaluated without forming exp(y). This is the map
/// that turns exponential order statistics into order statistics of d.
inline double u_exp(const DistributionModel& d, double y) {
    if (!(y >= 0.0) || std::isinf(y)) throw InputError("u_exp: y must be finite and non-negative");
    switch (d.family()) {
        case Family::Exponential: return y;
        case Family::Gpd: {
            const double g = d.gamma();
            if (g == 0.0) return y;
            return std::min(std::expm1(g * y) / g, d.support_upper());
        }
        default: break;
    }
    if (y == 0.0) return d.support_lower();
    // Below log 2 the lower-tail probability 1 - e^{-y} carries the precision.
    if (y < std::numbers::ln2) return quantile(d, -std::expm1(-y));
    return upper_quantile(d, std::exp(-y));
}

/// density / survival.
inline double hazard(const DistributionModel& d, double x) {
    if (!std::isfinite(x)) throw InputError("hazard: x must be finite");
    switch (d.family()) {
        case Family::Exponential: return x < 0.0 ? 0.0 : 1.0;
        case Family::StdGaussian: return gauss::hazard(x);
        case Family::AbsGaussian: return x < 0.0 ? 0.0 : gauss::hazard(x);
        case Family::Gumbel: {
            const double u = std::exp(-x);
            if (!std::isfinite(u)) return 0.0;
            // u e^{-u} / (1 - e^{-u})
            return u * std::exp(-u) / -std::expm1(-u);
        }
        case Family::Gpd: {
            const double g = d.gamma();
            if (x < 0.0) return 0.0;
            if (g < 0.0 && x >= d.support_upper() - 1e-12) {
                throw DomainError("hazard: gpd hazard diverges at the upper endpoint");
            }
            return 1.0 / (1.0 + g * x);
        }
    }
    throw InputError("hazard: unknown family");
}

/// survival / density, i.e. 1/hazard, finite up to a finite upper endpoint where it vanishes.
inline double inverse_hazard(const DistributionModel& d, double x) {
    if (d.family() == Family::Gpd && x >= 0.0) return std::max(0.0, 1.0 + d.gamma() * x);
    if (d.family() == Family::Exponential && x >= 0.0) return 1.0;
    return 1.0 / hazard(d, x);
}

/// U~(t) = Phi^{<-}(1 - 1/(2t)), the U-transform of |N(0,1)|.
inline double u_tilde(double t) {
    if (!(t > 1.0) || !std::isfinite(t)) throw InputError("u_tilde: t must exceed 1");
    return gauss::upper_quantile(0.5 / t);
}

struct QuantileSandwich {
    double t;
    double lower;
    double upper;
};

/// Closed-form bracket on U~(t), valid for t >= 3:
/// sqrt(2 log 2t - log log 2t - log 4pi) <= U~(t) <= sqrt(2 log 2t - log log 2t - log pi).
inline QuantileSandwich u_tilde_sandwich(double t) {
    if (!(t >= 3.0) || !std::isfinite(t)) throw DomainError("u_tilde_sandwich: requires t >= 3");
    const double l = std::log(2.0 * t);
    const double core = 2.0 * l - std::log(l);
    const double log_pi = std::log(std::numbers::pi);
    return {t, std::sqrt(core - log_pi - std::log(4.0)), std::sqrt(core - log_pi)};
}

/// Lower bound sqrt(kappa1 (y + log 2)) on the |N(0,1)| hazard at U~(e^y), kappa1 = 1/2.
inline double gauss_abs_hazard_floor(double y) {
    if (!(y > 0.0) || !std::isfinite(y)) throw DomainError("gauss_abs_hazard_floor: requires y > 0");
    constexpr double kappa1 = 0.5;
    return std::sqrt(kappa1 * (y + std::numbers::ln2));
}

/// Auxiliary function a(t) = t^gamma of the extended-regular-variation limit.
inline double auxiliary_scale(const DistributionModel& d, double t) {
    if (!(t >= 1.0) || std::isnan(t)) throw InputError("auxiliary_scale: requires t >= 1");
    switch (d.family()) {
        case Family::Exponential: return 1.0;
        case Family::Gpd: return std::pow(t, d.gamma());
        default: throw UnsupportedError("auxiliary_scale: no closed form for " + d.name());
    }
}

}  // namespace ordstat
