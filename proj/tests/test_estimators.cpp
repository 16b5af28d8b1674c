#include <catch_amalgamated.hpp>

#include <cmath>
#include <numbers>
#include <vector>

#include "oracles.hpp"
#include "ordstat.hpp"

using namespace ordstat;
using Catch::Approx;

namespace {

std::vector<double> even_grid(double a, double b, int m) {
    std::vector<double> g(m);
    for (int i = 0; i < m; ++i) g[i] = a + (b - a) * i / (m - 1);
    return g;
}

}  // namespace

TEST_CASE("jackknife variance on fixed samples", "[estimators]") {
    OrderStatSample s;
    s.values = {3.0, 2.0, 1.0};
    CHECK(jackknife_variance(s, 1) == 1.0);
    OrderStatSample t;
    t.values = {5.0, 1.0, 0.0, 0.0};
    CHECK(jackknife_variance(t, 3) == 2.0);
    CHECK_THROWS_AS(jackknife_variance(t, 4), InputError);
    CHECK_THROWS_AS(jackknife_variance(t, 0), InputError);
}

TEST_CASE("jackknife mean for exponential samples", "[estimators]") {
    const std::size_t reps = 100000;
    std::vector<double> v(reps);
    std::vector<double> y(reps);
    for (std::size_t r = 0; r < reps; ++r) {
        RngStream rng(123, r);
        const auto s = sample_exponential_order_stats(20, rng);
        v[r] = jackknife_variance(s, 4);
        y[r] = s.at(4);
    }
    const auto mv = mean_estimate(v);
    CHECK(std::abs(mv.value - 0.5) <= 4.0 * mv.stderr);
    const auto var = variance_estimate(y);
    CHECK(mv.value >= var.value - 3.0 * std::hypot(mv.stderr, var.stderr));
}

TEST_CASE("empirical order statistic variance", "[estimators]") {
    const auto e = empirical_order_stat_variance(DistributionModel::exponential(), 20, 5, 100000, 1);
    CHECK(e.replicates == 100000);
    CHECK(std::abs(e.value - oracle::inverse_square_sum(5, 20)) <= 4.0 * e.stderr);
    CHECK(e.value == Approx(0.17255).epsilon(0.02));

    const auto u = empirical_order_stat_variance(DistributionModel::gpd(-1.0), 2, 1, 100000, 2);
    CHECK(std::abs(u.value - 1.0 / 18.0) <= 4.0 * u.stderr);

    const auto one = empirical_order_stat_variance(DistributionModel::exponential(), 1, 1, 100000, 3);
    CHECK(std::abs(one.value - 1.0) <= 4.0 * one.stderr);

    CHECK_THROWS_AS(empirical_order_stat_variance(DistributionModel::exponential(), 20, 5, 99, 1), InputError);
}

TEST_CASE("variance standard error matches the replicate spread", "[estimators]") {
    // Spread of 200 independent variance estimates against the reported standard error.
    std::vector<double> vals;
    double se_sum = 0.0;
    for (std::uint64_t s = 0; s < 200; ++s) {
        const auto e = empirical_order_stat_variance(DistributionModel::gumbel(), 10, 2, 2000, 1000 + s);
        vals.push_back(e.value);
        se_sum += e.stderr;
    }
    const double spread = std::sqrt(variance_estimate(vals).value);
    CHECK(spread == Approx(se_sum / 200.0).epsilon(0.15));
}

TEST_CASE("empirical exceedance", "[estimators]") {
    const auto d = DistributionModel::abs_gaussian();
    CHECK(empirical_exceedance(d, 100, 50, INFINITY, 1000, 4).value == 0.0);
    CHECK(empirical_exceedance(d, 100, 50, -INFINITY, 1000, 4).value == 1.0);
    const auto mb = gaussian_median_bernstein(100, 2.0);
    const auto f = empirical_exceedance(d, 100, 50, mb.threshold, 100000, 5);
    CHECK(f.value <= std::exp(-2.0) + 3.0 * f.stderr);
    CHECK_THROWS_AS(empirical_exceedance(d, 100, 50, 0.0, 999, 4), InputError);
}

TEST_CASE("exceedance at the mean is close to one half for a symmetric law", "[estimators]") {
    const auto f = empirical_exceedance(DistributionModel::std_gaussian(), 9, 5, 0.0, 100000, 6);
    CHECK(f.value == Approx(0.5).margin(0.01));
}

TEST_CASE("negative association covariance", "[estimators]") {
    const auto id = MonotoneMap::identity();
    const auto e = negative_association_cov(DistributionModel::exponential(), 10, 3, id, id, 100000, 7);
    CHECK(std::abs(e.value) <= 3.0 * e.stderr);

    const auto u = negative_association_cov(DistributionModel::gpd(-1.0), 2, 1, id, id, 100000, 8);
    CHECK(std::abs(u.value + 1.0 / 36.0) <= 3.0 * u.stderr);

    const auto ex = MonotoneMap::exp(0.1);
    const auto a = negative_association_cov(DistributionModel::abs_gaussian(), 10, 2, ex, ex, 100000, 9);
    CHECK(a.value <= 3.0 * a.stderr);

    CHECK_THROWS_AS(negative_association_cov(DistributionModel::gpd(0.5), 10, 2, id, id, 1000, 1), PreconditionError);
    CHECK_THROWS_AS(MonotoneMap::exp(-1.0), InputError);
}

TEST_CASE("monotone maps", "[estimators]") {
    CHECK(MonotoneMap::identity()(2.5) == 2.5);
    CHECK(MonotoneMap::exp(0.5)(2.0) == Approx(std::numbers::e));
    CHECK(MonotoneMap::indicator(1.0)(1.0) == 0.0);
    CHECK(MonotoneMap::indicator(1.0)(1.5) == 1.0);
    CHECK(to_string(MonotoneMapKind::Indicator) == "ind");
}

TEST_CASE("empirical log-MGF", "[estimators]") {
    const std::vector<double> xs{0.3, 1.2, 2.0, 0.1};
    CHECK(empirical_logmgf(xs, 0.0) == 0.0);
    const std::vector<double> flat(50, 3.0);
    CHECK(empirical_logmgf(flat, 0.7) == Approx(0.0).margin(1e-15));
    CHECK(empirical_logmgf(flat, -2.0) == Approx(0.0).margin(1e-15));

    // Centered log-MGF of Exp(1) at 1/2: log 2 - 1/2.
    const auto draws = simulate_ranks(DistributionModel::exponential(), 1, {1}, 200000, 10);
    const auto est = logmgf_estimate(draws.column_for_rank(1), 0.5);
    CHECK(std::abs(est.estimate.value - (std::numbers::ln2 - 0.5)) <= 4.0 * est.estimate.stderr);
    CHECK(est.estimate.value == Approx(0.19315).margin(0.01));

    const std::vector<double> wide{0.0, 2000.0};
    CHECK_THROWS_AS(empirical_logmgf(wide, 1.0), RangeError);
}

TEST_CASE("empirical entropy", "[estimators]") {
    const std::vector<double> xs{0.3, 1.2, 2.0, 0.1};
    CHECK(empirical_entropy(xs, 0.0) == 0.0);
    const std::vector<double> flat(10, 1.7);
    CHECK(empirical_entropy(flat, 0.9) == Approx(0.0).margin(1e-14));

    // Two-point law: Ent of W in {1, e} with equal weights, computed directly.
    const std::vector<double> two{0.0, 1.0, 0.0, 1.0};
    const double m = (1.0 + std::numbers::e) / 2.0;
    const double ent = (0.0 + std::numbers::e * 1.0) / 2.0 - m * std::log(m);
    CHECK(empirical_entropy(two, 1.0) == Approx(ent).epsilon(1e-14));

    const std::vector<double> wide{0.0, 2000.0};
    CHECK_THROWS_AS(empirical_entropy(wide, 1.0), RangeError);
}

TEST_CASE("entropy inequality for exponential maxima", "[estimators]") {
    const std::size_t n = 5;
    const double lambda = 0.2;
    const auto draws = simulate_ranks(DistributionModel::exponential(), n, {1, 2}, 100000, 11);
    const auto x1 = draws.column_for_rank(1);
    const auto x2 = draws.column_for_rank(2);
    const double shift = mean_estimate(x1).value;
    const auto lhs = entropy_estimate(x1, lambda, shift);
    std::vector<double> terms(x1.size());
    for (std::size_t i = 0; i < x1.size(); ++i) terms[i] = std::exp(lambda * (x2[i] - shift)) * psi(lambda * (x1[i] - x2[i]));
    const auto rhs = mean_estimate(terms);
    CHECK(lhs.value <= rhs.value + 3.0 * std::hypot(lhs.stderr, rhs.stderr));
    CHECK(lhs.value > 0.0);
}

TEST_CASE("concavity probe", "[estimators]") {
    const auto grid = even_grid(0.05, 30.0, 1000);
    CHECK(std::abs(concavity_probe(DistributionModel::exponential(), grid)) <= 1e-12);
    CHECK(concavity_probe(DistributionModel::abs_gaussian(), grid) <= 1e-9);
    for (const auto& d : {DistributionModel::std_gaussian(), DistributionModel::gumbel(), DistributionModel::gpd(-1.0),
                          DistributionModel::gpd(-0.3)}) {
        INFO(d.name());
        CHECK(concavity_probe(d, even_grid(0.05, 20.0, 1000)) <= 1e-9);
    }
    CHECK(concavity_probe(DistributionModel::gpd(0.5), even_grid(0.05, 20.0, 200)) > 0.0);
    CHECK(concavity_probe(DistributionModel::gpd(0.1), even_grid(0.05, 20.0, 200)) > 0.0);
    CHECK_THROWS_AS(concavity_probe(DistributionModel::exponential(), even_grid(0.1, 1.0, 9)), InputError);
    std::vector<double> uneven = even_grid(0.1, 1.0, 12);
    uneven[5] += 0.01;
    CHECK_THROWS_AS(concavity_probe(DistributionModel::exponential(), uneven), InputError);
}

TEST_CASE("mean and covariance estimates", "[estimators]") {
    const std::vector<double> a{1.0, 2.0, 3.0, 4.0};
    const std::vector<double> b{2.0, 4.0, 6.0, 8.0};
    const auto m = mean_estimate(a);
    CHECK(m.value == 2.5);
    CHECK(m.stderr == Approx(std::sqrt(5.0 / 3.0 / 4.0)));
    CHECK(variance_estimate(a).value == Approx(5.0 / 3.0));
    CHECK(covariance_estimate(a, b).value == Approx(10.0 / 3.0));
}
