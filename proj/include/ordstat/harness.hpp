#pragma once

// Verification suites: each pairs Monte Carlo estimates with the matching bound
// and emits one report row per comparison.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <string>
#include <vector>

#include "ordstat/bounds.hpp"
#include "ordstat/distributions.hpp"
#include "ordstat/errors.hpp"
#include "ordstat/estimators.hpp"
#include "ordstat/report.hpp"
#include "ordstat/rng.hpp"

namespace ordstat {

enum class Suite { Variance, Tails, Evt, Gaussian, Association, Entropy };

inline std::string_view to_string(Suite s) {
    switch (s) {
        case Suite::Variance: return "variance";
        case Suite::Tails: return "tails";
        case Suite::Evt: return "evt";
        case Suite::Gaussian: return "gaussian";
        case Suite::Association: return "association";
        case Suite::Entropy: return "entropy";
    }
    return "?";
}

inline Suite parse_suite(std::string_view s) {
    for (auto v : {Suite::Variance, Suite::Tails, Suite::Evt, Suite::Gaussian, Suite::Association, Suite::Entropy}) {
        if (to_string(v) == s) return v;
    }
    throw InputError("unknown suite '" + std::string(s) + "'");
}

/// A rank either fixed ("5") or a fraction of n ("n/2", "3n/4"), rounded up.
struct RankSpec {
    std::uint64_t value = 1;
    std::uint64_t divisor = 0;  // 0: fixed rank; otherwise rank = ceil(value * n / divisor)

    [[nodiscard]] std::uint64_t resolve(std::uint64_t n) const {
        return divisor == 0 ? value : (value * n + divisor - 1) / divisor;
    }
};

/// Per-suite sub-checks selectable with the `checks` key.
namespace check {
inline constexpr std::string_view kLowerTail = "lower-tail";
inline constexpr std::string_view kMedian = "median";
inline constexpr std::string_view kMaxShifted = "max-shifted";
inline constexpr std::string_view kMaxBernstein = "max-bernstein";
inline constexpr std::string_view kSignedMax = "signed-max";
inline constexpr std::string_view kSandwich = "sandwich";
inline constexpr std::string_view kDeltaTrend = "delta-trend";
}  // namespace check

struct ExperimentConfig {
    std::string name;
    Suite suite = Suite::Variance;
    std::vector<DistributionModel> families;
    std::vector<std::uint64_t> n_grid;
    std::vector<RankSpec> k_grid;
    std::vector<double> lambda_grid;
    std::vector<double> t_grid;
    std::vector<double> z_grid;
    std::vector<std::string> checks;
    std::size_t replicates = 10000;
    std::uint64_t seed = 42;
    /// CSV destination; empty means standard output.
    std::string output;
    /// lambda of the exp(lambda x) map in the association suite.
    double map_lambda = 0.1;
    /// Test hook: every bound is multiplied by this before judging. Leave at 1.
    double bound_scale = 1.0;

    [[nodiscard]] bool has_check(std::string_view c) const {
        return std::find(checks.begin(), checks.end(), c) != checks.end();
    }
};

namespace detail {

inline void fail_config(const ExperimentConfig& cfg, const std::string& what) {
    throw InputError("experiment '" + cfg.name + "': " + what);
}

inline std::vector<std::uint64_t> resolved_ranks(const ExperimentConfig& cfg, std::uint64_t n) {
    std::vector<std::uint64_t> ks;
    for (const auto& spec : cfg.k_grid) {
        const auto k = spec.resolve(n);
        if (std::find(ks.begin(), ks.end(), k) == ks.end()) ks.push_back(k);
    }
    return ks;
}

inline void require_checks(const ExperimentConfig& cfg, std::initializer_list<std::string_view> allowed) {
    for (const auto& c : cfg.checks) {
        if (std::find(allowed.begin(), allowed.end(), c) == allowed.end()) {
            fail_config(cfg, "check '" + c + "' does not belong to suite " + std::string(to_string(cfg.suite)));
        }
    }
}

inline void require_ranks_inside(const ExperimentConfig& cfg) {
    for (const auto n : cfg.n_grid) {
        for (const auto k : resolved_ranks(cfg, n)) {
            if (k < 1 || k + 1 > n) {
                fail_config(cfg, "rank " + std::to_string(k) + " outside [1, n-1] for n=" + std::to_string(n));
            }
        }
    }
}

}  // namespace detail

/// Check every grid value against the preconditions of the operations the suite
/// will call. Runs before any sampling.
inline void validate(const ExperimentConfig& cfg) {
    using detail::fail_config;
    if (cfg.replicates < 100) fail_config(cfg, "replicates must be at least 100");
    if (!(cfg.bound_scale >= 0.0)) fail_config(cfg, "bound_scale must be >= 0");
    for (const auto n : cfg.n_grid) {
        if (n < 1) fail_config(cfg, "n must be at least 1");
    }
    for (const auto& spec : cfg.k_grid) {
        if (spec.value < 1) fail_config(cfg, "k must be at least 1");
    }
    switch (cfg.suite) {
        case Suite::Variance:
        case Suite::Entropy:
            detail::require_checks(cfg, {});
            detail::require_ranks_inside(cfg);
            for (const double l : cfg.lambda_grid) {
                if (!std::isfinite(l)) fail_config(cfg, "lambda must be finite");
                if (cfg.suite == Suite::Variance && l < 0.0) fail_config(cfg, "lambda must be >= 0");
            }
            break;
        case Suite::Association:
            detail::require_checks(cfg, {});
            detail::require_ranks_inside(cfg);
            for (const auto& d : cfg.families) {
                if (!d.monotone_hazard()) fail_config(cfg, d.name() + " does not have a non-decreasing hazard rate");
            }
            if (!(cfg.map_lambda >= 0.0)) fail_config(cfg, "map_lambda must be >= 0");
            break;
        case Suite::Tails: {
            detail::require_checks(cfg, {check::kLowerTail, check::kMedian, check::kMaxShifted, check::kMaxBernstein});
            if (cfg.checks.empty()) fail_config(cfg, "tails suite needs at least one check");
            if (cfg.replicates < 1000) fail_config(cfg, "tail checks need at least 1000 replicates");
            for (const double t : cfg.t_grid) {
                if (!(t > 0.0) || !std::isfinite(t)) fail_config(cfg, "t must be positive");
            }
            for (const auto n : cfg.n_grid) {
                if (cfg.has_check(check::kLowerTail)) {
                    for (const auto k : detail::resolved_ranks(cfg, n)) {
                        for (const double z : cfg.z_grid) {
                            try {
                                exponential_lower_tail_bound(n, k, z);
                            } catch (const DomainError& e) {
                                fail_config(cfg, e.what());
                            }
                        }
                    }
                }
                if (cfg.has_check(check::kMedian) && (n < 2 || n % 2 != 0)) {
                    fail_config(cfg, "median check needs even n, got " + std::to_string(n));
                }
                if ((cfg.has_check(check::kMaxShifted) || cfg.has_check(check::kMaxBernstein)) && n < 2) {
                    fail_config(cfg, "maximum checks need n >= 2");
                }
            }
            break;
        }
        case Suite::Evt:
            detail::require_checks(cfg, {});
            for (const auto& d : cfg.families) {
                if (d.family() != Family::Gpd && d.family() != Family::Exponential) {
                    fail_config(cfg, "evt suite supports gpd and exponential families only");
                }
                if (!(d.gamma() < 0.5)) fail_config(cfg, "evt suite requires gamma < 1/2");
            }
            for (std::size_t i = 0; i < cfg.n_grid.size(); ++i) {
                if (cfg.n_grid[i] < 2) fail_config(cfg, "evt suite needs n >= 2");
                if (i > 0 && cfg.n_grid[i] <= cfg.n_grid[i - 1]) fail_config(cfg, "evt n grid must be increasing");
            }
            break;
        case Suite::Gaussian:
            detail::require_checks(cfg, {check::kSignedMax, check::kSandwich, check::kDeltaTrend});
            if (cfg.checks.empty()) fail_config(cfg, "gaussian suite needs at least one check");
            for (const auto n : cfg.n_grid) {
                if (n < 11 || n > 1000000) fail_config(cfg, "gaussian suite n must lie in [11, 1e6]");
            }
            if (cfg.has_check(check::kSandwich)) {
                for (const double t : cfg.t_grid) {
                    if (!(t >= 3.0) || !std::isfinite(t)) fail_config(cfg, "sandwich points need t >= 3");
                }
            }
            break;
    }
}

namespace detail {

/// Seed for one simulation cell; depends on the cell's identity, not its grid position.
inline std::uint64_t cell_seed(const ExperimentConfig& cfg, std::string_view purpose, const DistributionModel& d,
                               std::uint64_t n) {
    return derive_seed(cfg.seed, std::string(to_string(cfg.suite)) + "/" + std::string(purpose) + "/" + d.name() +
                                     "/" + std::to_string(n));
}

/// GPD with gamma > 0 has no exponential moments, so log-MGF and entropy of e^{lambda X}, lambda > 0, are infinite.
inline bool has_exponential_moments(const DistributionModel& d) {
    return !(d.family() == Family::Gpd && d.gamma() > 0.0);
}

inline double combined_stderr(double a, double b) { return std::sqrt(a * a + b * b); }

inline std::string row_id(const ExperimentConfig& cfg, std::string_view what) {
    return std::string(to_string(cfg.suite)) + "." + std::string(what);
}

inline ReportRow judge(const ExperimentConfig& cfg, std::string_view what, const DistributionModel& d, std::uint64_t n,
                       std::uint64_t k, double param, double empirical, double stderr, double bound) {
    return judged_row(row_id(cfg, what), d.name(), n, k, param, empirical, stderr, bound * cfg.bound_scale);
}

}  // namespace detail

/// Variance bounds: Efron-Stein spacing bound, hazard-rate bound (monotone-hazard
/// families), the closed-form |N(0,1)| bound, and the exponential Efron-Stein
/// log-MGF bound for each lambda (k <= n/2). Lambda is scaled by 1/sd(X_(k)) taken
/// from a pilot run, so one grid exercises every family at comparable strength.
inline BoundReport run_variance_suite(const ExperimentConfig& cfg) {
    validate(cfg);
    BoundReport report;
    const std::size_t pilot_reps = std::max<std::size_t>(100, cfg.replicates / 10);
    for (const auto& d : cfg.families) {
        for (const auto n : cfg.n_grid) {
            const auto ks = detail::resolved_ranks(cfg, n);
            if (ks.empty()) continue;
            std::vector<std::size_t> ranks;
            auto want = [&](std::size_t r) {
                if (std::find(ranks.begin(), ranks.end(), r) == ranks.end()) ranks.push_back(r);
            };
            for (const auto k : ks) {
                want(k);
                if (2 * k <= n) want(k + 1); else want(k - 1);
            }
            const auto draws = simulate_ranks(d, n, ranks, cfg.replicates, detail::cell_seed(cfg, "main", d, n));
            std::vector<std::size_t> pilot_ranks(ks.begin(), ks.end());
            const bool need_pilot = !cfg.lambda_grid.empty();
            const auto pilot = need_pilot ? simulate_ranks(d, n, pilot_ranks, pilot_reps, detail::cell_seed(cfg, "pilot", d, n))
                                          : RankDraws({}, 0);

            for (const auto k : ks) {
                const bool low = 2 * k <= n;
                const auto xk = draws.column_for_rank(k);
                const auto xo = draws.column_for_rank(low ? k + 1 : k - 1);
                std::vector<double> gaps(xk.size());
                std::vector<double> sq(xk.size());
                for (std::size_t r = 0; r < xk.size(); ++r) {
                    gaps[r] = low ? xk[r] - xo[r] : xo[r] - xk[r];
                    sq[r] = gaps[r] * gaps[r];
                }
                const McEstimate var = variance_estimate(xk);

                const BoundValue es = efron_stein_spacing_bound(n, k, mean_estimate(sq));
                report.rows.push_back(detail::judge(cfg, to_string(es.kind), d, n, k, std::nan(""), var.value,
                                                    detail::combined_stderr(var.stderr, es.stderr), es.value));

                if (d.monotone_hazard()) {
                    const auto& at = low ? xo : xk;
                    std::vector<double> inv_h_sq(at.size());
                    for (std::size_t r = 0; r < at.size(); ++r) {
                        const double ih = inverse_hazard(d, at[r]);
                        inv_h_sq[r] = ih * ih;
                    }
                    const BoundValue hz = hazard_variance_bound(d, n, k, mean_estimate(inv_h_sq));
                    report.rows.push_back(detail::judge(cfg, to_string(hz.kind), d, n, k, std::nan(""), var.value,
                                                        detail::combined_stderr(var.stderr, hz.stderr), hz.value));
                }

                if (d.family() == Family::AbsGaussian && low && n >= 3) {
                    try {
                        const BoundValue g = gaussian_order_variance_bound(n, k);
                        report.rows.push_back(detail::judge(cfg, to_string(g.kind), d, n, k, std::nan(""), var.value,
                                                            var.stderr, g.value));
                    } catch (const DomainError&) {
                        // outside the closed form's domain: no row
                    }
                }

                if (low && need_pilot && detail::has_exponential_moments(d)) {
                    const double sd = std::sqrt(variance_estimate(pilot.column_for_rank(k)).value);
                    for (const double lambda : cfg.lambda_grid) {
                        const double eff = sd > 0.0 ? lambda / sd : lambda;
                        try {
                            const LogMgfEstimate lhs = logmgf_estimate(xk, eff);
                            const BoundValue rhs = exp_efron_stein_logmgf_bound(n, k, eff, gaps);
                            const double se = detail::combined_stderr(lhs.estimate.stderr, rhs.stderr);
                            if (lhs.relative_stderr < 0.05) {
                                report.rows.push_back(detail::judge(cfg, to_string(rhs.kind), d, n, k, eff,
                                                                    lhs.estimate.value, se, rhs.value));
                            } else {
                                report.rows.push_back(informational_row(detail::row_id(cfg, to_string(rhs.kind)), d.name(),
                                                                        n, k, eff, lhs.estimate.value, se,
                                                                        rhs.value * cfg.bound_scale));
                            }
                        } catch (const RangeError&) {
                            report.rows.push_back(informational_row(detail::row_id(cfg, "EXP_ES_LOGMGF"), d.name(), n, k,
                                                                    eff, std::nan(""), std::nan(""), std::nan("")));
                        }
                    }
                }
            }
        }
    }
    return report;
}

/// Tail checks: the exponential lower-tail bound, the |N(0,1)| median and maximum
/// Bernstein inequalities. Exceedances are centered with an independent pilot run.
inline BoundReport run_tail_suite(const ExperimentConfig& cfg) {
    validate(cfg);
    BoundReport report;
    const auto expo = DistributionModel::exponential();
    const auto absg = DistributionModel::abs_gaussian();
    const double r = static_cast<double>(cfg.replicates);
    auto frequency = [&](std::span<const double> xs, double center, double threshold) {
        std::size_t hits = 0;
        for (double x : xs) hits += (x - center > threshold) ? 1 : 0;
        const double p = static_cast<double>(hits) / r;
        return McEstimate{p, std::sqrt(p * (1.0 - p) / r), cfg.replicates};
    };

    for (const auto n : cfg.n_grid) {
        if (cfg.has_check(check::kLowerTail)) {
            for (const auto k : detail::resolved_ranks(cfg, n)) {
                const auto ys = simulate_ranks(expo, n, {k + 1}, cfg.replicates, detail::cell_seed(cfg, "lower-tail/" + std::to_string(k), expo, n))
                                    .column_for_rank(k + 1);
                for (const double z : cfg.z_grid) {
                    const double cut = std::log(static_cast<double>(n) / static_cast<double>(k)) - z;
                    std::size_t hits = 0;
                    for (double y : ys) hits += y <= cut ? 1 : 0;
                    const double p = static_cast<double>(hits) / r;
                    report.rows.push_back(detail::judge(cfg, to_string(BoundKind::ExpLowerTail), expo, n, k, z, p,
                                                        std::sqrt(p * (1.0 - p) / r), exponential_lower_tail_bound(n, k, z)));
                }
            }
        }
        if (cfg.has_check(check::kMedian)) {
            const std::size_t k = n / 2;
            const double center =
                mean_estimate(simulate_ranks(absg, n, {k}, cfg.replicates, detail::cell_seed(cfg, "median-pilot", absg, n))
                                  .column_for_rank(k))
                    .value;
            const auto xs = simulate_ranks(absg, n, {k}, cfg.replicates, detail::cell_seed(cfg, "median", absg, n))
                                .column_for_rank(k);
            for (const double t : cfg.t_grid) {
                const auto mb = gaussian_median_bernstein(n, t);
                const McEstimate f = frequency(xs, center, mb.threshold);
                report.rows.push_back(detail::judge(cfg, to_string(BoundKind::GaussMedianBernstein), absg, n, k, t,
                                                    f.value, f.stderr, std::exp(-t)));
            }
        }
        if (cfg.has_check(check::kMaxShifted) || cfg.has_check(check::kMaxBernstein)) {
            const double center =
                mean_estimate(simulate_ranks(absg, n, {1}, cfg.replicates, detail::cell_seed(cfg, "max-pilot", absg, n))
                                  .column_for_rank(1))
                    .value;
            const auto xs =
                simulate_ranks(absg, n, {1}, cfg.replicates, detail::cell_seed(cfg, "max", absg, n)).column_for_rank(1);
            if (cfg.has_check(check::kMaxShifted)) {
                const double delta = gaussian_max_shift(n);
                const double u = u_tilde(static_cast<double>(n));
                for (const double t : cfg.t_grid) {
                    const double threshold = t / (3.0 * u) + std::sqrt(t) / u + delta;
                    const McEstimate f = frequency(xs, center, threshold);
                    report.rows.push_back(detail::judge(cfg, to_string(BoundKind::GaussMaxShifted), absg, n, 1, t,
                                                        f.value, f.stderr, std::exp(-t)));
                }
            }
            if (cfg.has_check(check::kMaxBernstein)) {
                const GaussianMaxParams params = gaussian_max_vn(n);
                for (const double t : cfg.t_grid) {
                    const McEstimate f = frequency(xs, center, gaussian_max_bernstein(params, t));
                    if (params.applicable) {
                        report.rows.push_back(detail::judge(cfg, to_string(BoundKind::GaussMaxBernstein), absg, n, 1, t,
                                                            f.value, f.stderr, std::exp(-t)));
                    } else {
                        report.rows.push_back(informational_row(detail::row_id(cfg, to_string(BoundKind::GaussMaxBernstein)),
                                                                absg.name(), n, 1, t, f.value, f.stderr,
                                                                std::exp(-t) * cfg.bound_scale));
                    }
                }
            }
        }
    }
    return report;
}

/// Convergence of the scaled top spacing and maximum variance toward their limits.
/// Rows are informational; margin = limit - estimate is the drift at each n.
inline BoundReport run_evt_convergence(const ExperimentConfig& cfg) {
    validate(cfg);
    BoundReport report;
    for (const auto& d : cfg.families) {
        const EvtLimits lim = evt_limits(d.gamma());
        for (const auto n : cfg.n_grid) {
            const auto draws = simulate_ranks(d, n, {1, 2}, cfg.replicates, detail::cell_seed(cfg, "top", d, n));
            const auto x1 = draws.column_for_rank(1);
            const auto x2 = draws.column_for_rank(2);
            const double a = auxiliary_scale(d, static_cast<double>(n));
            const double a2 = a * a;
            std::vector<double> sq(x1.size());
            for (std::size_t i = 0; i < x1.size(); ++i) sq[i] = (x1[i] - x2[i]) * (x1[i] - x2[i]) / a2;
            const McEstimate sp = mean_estimate(sq);
            const McEstimate var = variance_estimate(x1);
            report.rows.push_back(informational_row(detail::row_id(cfg, "SPACING_LIMIT"), d.name(), n, 1, d.gamma(),
                                                    sp.value, sp.stderr, lim.spacing));
            report.rows.push_back(informational_row(detail::row_id(cfg, "VARIANCE_LIMIT"), d.name(), n, 1, d.gamma(),
                                                    var.value / a2, var.stderr / a2, lim.variance));
        }
    }
    return report;
}

/// Gaussian-specific checks: variance of the signed maximum against its closed-form
/// bound and the unit Poincare bound; the U~ sandwich; the scaled shift U~(n)^3 delta_n.
inline BoundReport run_gaussian_suite(const ExperimentConfig& cfg) {
    validate(cfg);
    BoundReport report;
    const auto gauss = DistributionModel::std_gaussian();
    const auto absg = DistributionModel::abs_gaussian();
    if (cfg.has_check(check::kSignedMax)) {
        for (const auto n : cfg.n_grid) {
            const auto x1 = simulate_ranks(gauss, n, {1}, cfg.replicates, detail::cell_seed(cfg, "signed-max", gauss, n),
                                           SamplerKind::Direct)
                                .column_for_rank(1);
            const McEstimate var = variance_estimate(x1);
            const BoundValue b = gaussian_signed_max_variance_bound(n);
            report.rows.push_back(detail::judge(cfg, to_string(b.kind), gauss, n, 1, std::nan(""), var.value, var.stderr, b.value));
            report.rows.push_back(detail::judge(cfg, "POINCARE", gauss, n, 1, std::nan(""), var.value, var.stderr, 1.0));
        }
    }
    if (cfg.has_check(check::kSandwich)) {
        for (const double t : cfg.t_grid) {
            const QuantileSandwich s = u_tilde_sandwich(t);
            const double u = u_tilde(t);
            report.rows.push_back(detail::judge(cfg, "SANDWICH_UPPER", absg, 0, 0, t, u, 0.0, s.upper));
            report.rows.push_back(detail::judge(cfg, "SANDWICH_LOWER", absg, 0, 0, t, s.lower, 0.0, u));
        }
    }
    if (cfg.has_check(check::kDeltaTrend)) {
        const double limit = std::numbers::pi * std::numbers::pi / 12.0;
        double prev_distance = std::numeric_limits<double>::infinity();
        std::size_t breaks = 0;
        for (const auto n : cfg.n_grid) {
            const double u = u_tilde(static_cast<double>(n));
            const double scaled = u * u * u * gaussian_max_shift(n);
            const double distance = std::abs(scaled - limit);
            if (!(scaled > 0.0) || distance > prev_distance) ++breaks;
            prev_distance = distance;
            report.rows.push_back(informational_row(detail::row_id(cfg, "DELTA_SCALED"), absg.name(), n, 1, std::nan(""),
                                                    scaled, 0.0, limit));
        }
        // Count of grid steps where U~(n)^3 delta_n is non-positive or moves away from pi^2/12.
        report.rows.push_back(detail::judge(cfg, "DELTA_TREND", absg, cfg.n_grid.empty() ? 0 : cfg.n_grid.back(), 1,
                                            std::nan(""), static_cast<double>(breaks), 0.0, 0.0));
    }
    return report;
}

/// Negative association between X_(k+1) and Delta_k over every pair from the
/// monotone map menu {identity, exp(lambda x), 1{x > c}}. Indicator cut points are
/// medians from a pilot run.
inline BoundReport run_association_suite(const ExperimentConfig& cfg) {
    validate(cfg);
    BoundReport report;
    const std::size_t pilot_reps = std::max<std::size_t>(100, cfg.replicates / 10);
    auto median = [](std::vector<double> v) {
        auto mid = v.begin() + static_cast<std::ptrdiff_t>(v.size() / 2);
        std::nth_element(v.begin(), mid, v.end());
        return *mid;
    };
    for (const auto& d : cfg.families) {
        for (const auto n : cfg.n_grid) {
            for (const auto k : detail::resolved_ranks(cfg, n)) {
                const std::string tag = "k" + std::to_string(k);
                const auto draws = simulate_ranks(d, n, {k, k + 1}, cfg.replicates, detail::cell_seed(cfg, tag, d, n));
                const auto pilot = simulate_ranks(d, n, {k, k + 1}, pilot_reps, detail::cell_seed(cfg, tag + "/pilot", d, n));
                auto split = [&](const RankDraws& dr) {
                    auto top = dr.column_for_rank(k);
                    auto next = dr.column_for_rank(k + 1);
                    for (std::size_t i = 0; i < top.size(); ++i) top[i] -= next[i];
                    return std::pair{std::move(next), std::move(top)};
                };
                const auto [next, gaps] = split(draws);
                const auto [pilot_next, pilot_gaps] = split(pilot);
                const std::vector<MonotoneMap> first{MonotoneMap::identity(), MonotoneMap::exp(cfg.map_lambda),
                                                     MonotoneMap::indicator(median(pilot_next))};
                const std::vector<MonotoneMap> second{MonotoneMap::identity(), MonotoneMap::exp(cfg.map_lambda),
                                                      MonotoneMap::indicator(median(pilot_gaps))};
                for (const auto& g1 : first) {
                    for (const auto& g2 : second) {
                        const McEstimate cov = association_covariance(next, gaps, g1, g2);
                        const std::string what = std::string(to_string(g1.kind)) + "-" + std::string(to_string(g2.kind));
                        report.rows.push_back(detail::judge(cfg, what, d, n, k, cfg.map_lambda, cov.value, cov.stderr, 0.0));
                    }
                }
            }
        }
    }
    return report;
}

/// Entropy form of the spacing inequality: Ent[e^{lambda X_(k)}] against
/// k E[e^{lambda X_(k+1)} psi(lambda Delta_k)] (k <= n/2) or
/// (n-k+1) E[e^{lambda X_(k)} tau(lambda Delta_{k-1})] (k > n/2).
/// Both sides are reported multiplied by e^{-lambda mean(X_(k))}.
inline BoundReport run_entropy_suite(const ExperimentConfig& cfg) {
    validate(cfg);
    BoundReport report;
    for (const auto& d : cfg.families) {
        for (const auto n : cfg.n_grid) {
            const auto ks = detail::resolved_ranks(cfg, n);
            if (ks.empty()) continue;
            std::vector<std::size_t> ranks;
            for (const auto k : ks) {
                for (const std::size_t rk : {k - 1, k, k + 1}) {
                    if (rk >= 1 && rk <= n && std::find(ranks.begin(), ranks.end(), rk) == ranks.end()) ranks.push_back(rk);
                }
            }
            const auto draws = simulate_ranks(d, n, ranks, cfg.replicates, detail::cell_seed(cfg, "main", d, n));
            for (const auto k : ks) {
                const bool low = 2 * k <= n;
                const auto xk = draws.column_for_rank(k);
                const auto xo = draws.column_for_rank(low ? k + 1 : k - 1);
                const double shift = mean_estimate(xk).value;
                for (const double lambda : cfg.lambda_grid) {
                    if (lambda > 0.0 && !detail::has_exponential_moments(d)) continue;
                    try {
                        const McEstimate lhs = entropy_estimate(xk, lambda, shift);
                        std::vector<double> terms(xk.size());
                        for (std::size_t i = 0; i < xk.size(); ++i) {
                            if (low) {
                                terms[i] = std::exp(lambda * (xo[i] - shift)) * psi(lambda * (xk[i] - xo[i]));
                            } else {
                                terms[i] = std::exp(lambda * (xk[i] - shift)) * tau(lambda * (xo[i] - xk[i]));
                            }
                        }
                        const double factor = low ? static_cast<double>(k) : static_cast<double>(n - k + 1);
                        const McEstimate rhs = mean_estimate(terms);
                        report.rows.push_back(detail::judge(cfg, "ENTROPY_SPACING", d, n, k, lambda, lhs.value,
                                                            detail::combined_stderr(lhs.stderr, factor * rhs.stderr),
                                                            factor * rhs.value));
                    } catch (const RangeError&) {
                        report.rows.push_back(informational_row(detail::row_id(cfg, "ENTROPY_SPACING"), d.name(), n, k,
                                                                lambda, std::nan(""), std::nan(""), std::nan("")));
                    }
                }
            }
        }
    }
    return report;
}

inline BoundReport run_suite(const ExperimentConfig& cfg) {
    switch (cfg.suite) {
        case Suite::Variance: return run_variance_suite(cfg);
        case Suite::Tails: return run_tail_suite(cfg);
        case Suite::Evt: return run_evt_convergence(cfg);
        case Suite::Gaussian: return run_gaussian_suite(cfg);
        case Suite::Association: return run_association_suite(cfg);
        case Suite::Entropy: return run_entropy_suite(cfg);
    }
    throw InputError("unknown suite");
}

}  // namespace ordstat
