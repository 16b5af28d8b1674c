#include <catch_amalgamated.hpp>

#include <cmath>
#include <cstdlib>
#include <vector>

#include "oracles.hpp"
#include "ordstat.hpp"

using namespace ordstat;
using Catch::Approx;

TEST_CASE("philox known-answer vectors", "[rng]") {
    using C = Philox4x32::Counter;
    CHECK(Philox4x32::block({0, 0, 0, 0}, {0, 0}) == C{0x6627e8d5u, 0xe169c58du, 0xbc57ac4cu, 0x9b00dbd8u});
    CHECK(Philox4x32::block({0xffffffffu, 0xffffffffu, 0xffffffffu, 0xffffffffu}, {0xffffffffu, 0xffffffffu}) ==
          C{0x408f276du, 0x41c83b0eu, 0xa20bc7c6u, 0x6d5451fdu});
    CHECK(Philox4x32::block({0x243f6a88u, 0x85a308d3u, 0x13198a2eu, 0x03707344u}, {0xa4093822u, 0x299f31d0u}) ==
          C{0xd16cfe09u, 0x94fdccebu, 0x5001e420u, 0x24126ea1u});
}

TEST_CASE("streams are reproducible and distinct", "[rng]") {
    RngStream a(7, 3);
    RngStream b(7, 3);
    RngStream c(7, 4);
    RngStream d(8, 3);
    int same_c = 0;
    int same_d = 0;
    for (int i = 0; i < 1000; ++i) {
        const auto x = a.next_u64();
        CHECK(x == b.next_u64());
        same_c += x == c.next_u64();
        same_d += x == d.next_u64();
    }
    CHECK(same_c == 0);
    CHECK(same_d == 0);
}

TEST_CASE("uniforms stay inside the open unit interval and look uniform", "[rng]") {
    RngStream rng(1, 0);
    const int m = 200000;
    double sum = 0.0;
    double sum_sq = 0.0;
    for (int i = 0; i < m; ++i) {
        const double u = rng.uniform();
        REQUIRE(u > 0.0);
        REQUIRE(u < 1.0);
        sum += u;
        sum_sq += u * u;
    }
    CHECK(sum / m == Approx(0.5).margin(4.0 * std::sqrt(1.0 / 12.0 / m)));
    CHECK(sum_sq / m == Approx(1.0 / 3.0).margin(0.004));
}

TEST_CASE("derived seeds depend on parent and label", "[rng]") {
    CHECK(derive_seed(1, "a") != derive_seed(1, "b"));
    CHECK(derive_seed(1, "a") != derive_seed(2, "a"));
    CHECK(derive_seed(1, "a") == derive_seed(1, "a"));
}

TEST_CASE("exponential order statistics", "[renyi]") {
    RngStream one(11, 0);
    RngStream twin(11, 0);
    const auto s1 = sample_exponential_order_stats(1, one);
    CHECK(s1.n() == 1);
    CHECK(s1.at(1) == twin.exponential());

    RngStream bad(1, 1);
    CHECK_THROWS_AS(sample_exponential_order_stats(0, bad), InputError);

    const std::size_t reps = 100000;
    std::vector<double> y5(reps);
    std::vector<double> gap3(reps);
    for (std::size_t r = 0; r < reps; ++r) {
        RngStream rng(99, r);
        const auto s = sample_exponential_order_stats(20, rng);
        REQUIRE(std::is_sorted(s.values.begin(), s.values.end(), std::greater<>{}));
        y5[r] = s.at(5);
        gap3[r] = spacing(s, 3);
    }
    const auto v = variance_estimate(y5);
    CHECK(std::abs(v.value - oracle::inverse_square_sum(5, 20)) <= 4.0 * v.stderr);
    const auto g = mean_estimate(gap3);
    CHECK(std::abs(g.value - 1.0 / 3.0) <= 4.0 * g.stderr);
}

TEST_CASE("exponential spacing is independent of the next order statistic", "[renyi]") {
    const std::size_t n = 10;
    const std::size_t k = 3;
    const auto draws = simulate_ranks(DistributionModel::exponential(), n, {k, k + 1}, 50000, 5);
    auto top = draws.column_for_rank(k);
    const auto next = draws.column_for_rank(k + 1);
    for (std::size_t r = 0; r < top.size(); ++r) top[r] = static_cast<double>(k) * (top[r] - next[r]);
    const auto cov = covariance_estimate(next, top);
    CHECK(std::abs(cov.value) <= 3.0 * cov.stderr);
    CHECK(mean_estimate(top).value == Approx(1.0).margin(0.02));
}

TEST_CASE("renyi sampler is the identity map for exponentials", "[renyi]") {
    RngStream a(3, 9);
    RngStream b(3, 9);
    const auto e = sample_exponential_order_stats(50, a);
    const auto r = sample_order_stats_renyi(DistributionModel::exponential(), 50, b);
    CHECK(e.values == r.values);
}

TEST_CASE("uniform order statistic means", "[renyi]") {
    const auto draws = simulate_ranks(DistributionModel::gpd(-1.0), 2, {1, 2}, 100000, 17);
    const auto m1 = mean_estimate(draws.column_for_rank(1));
    const auto m2 = mean_estimate(draws.column_for_rank(2));
    CHECK(std::abs(m1.value - 2.0 / 3.0) <= 4.0 * m1.stderr);
    CHECK(std::abs(m2.value - 1.0 / 3.0) <= 4.0 * m2.stderr);
}

TEST_CASE("direct sampler", "[renyi]") {
    RngStream a(21, 0);
    RngStream b(21, 0);
    const auto s = sample_order_stats_direct(DistributionModel::gumbel(), 1, a);
    CHECK(s.at(1) == quantile(DistributionModel::gumbel(), b.uniform()));
    CHECK(s.sampler == SamplerKind::Direct);

    RngStream c(21, 5);
    RngStream d(21, 5);
    CHECK(sample_order_stats_direct(DistributionModel::std_gaussian(), 30, c).values ==
          sample_order_stats_direct(DistributionModel::std_gaussian(), 30, d).values);

    const auto draws =
        simulate_ranks(DistributionModel::exponential(), 20, {1}, 100000, 23, SamplerKind::Direct);
    const auto m = mean_estimate(draws.column_for_rank(1));
    CHECK(std::abs(m.value - harmonic_number(20)) <= 4.0 * m.stderr);
}

TEST_CASE("partial selection reproduces the full samplers", "[renyi]") {
    const auto d = DistributionModel::std_gaussian();
    const std::vector<std::size_t> ranks{1, 4, 17, 30};
    for (std::size_t r = 0; r < 50; ++r) {
        RngStream full_stream(4, r);
        RngStream sel_stream(4, r);
        const auto full = sample_order_stats_direct(d, 30, full_stream);
        std::vector<double> out(ranks.size());
        std::vector<double> scratch;
        direct_select(d, 30, sel_stream, ranks, out, scratch);
        for (std::size_t j = 0; j < ranks.size(); ++j) CHECK(out[j] == full.at(ranks[j]));

        RngStream full_r(4, r);
        RngStream sel_r(4, r);
        const auto full_renyi = sample_order_stats_renyi(d, 30, full_r);
        renyi_select(d, 30, sel_r, ranks, out, scratch);
        for (std::size_t j = 0; j < ranks.size(); ++j) CHECK(out[j] == full_renyi.at(ranks[j]));
    }
}

TEST_CASE("renyi and direct samplers agree in law", "[renyi]") {
    const std::size_t reps = 10000;
    const double critical = oracle::ks_critical(reps, 0.001);
    for (const auto& d : {DistributionModel::exponential(), DistributionModel::std_gaussian(),
                          DistributionModel::abs_gaussian(), DistributionModel::gumbel(), DistributionModel::gpd(-1.0),
                          DistributionModel::gpd(0.25)}) {
        for (std::size_t n : {2, 10, 100}) {
            const std::vector<std::size_t> ranks{1, (n + 1) / 2, n};
            const auto renyi = simulate_ranks(d, n, ranks, reps, 31, SamplerKind::Renyi);
            const auto direct = simulate_ranks(d, n, ranks, reps, 32, SamplerKind::Direct);
            for (const auto k : ranks) {
                const double ks = oracle::ks_statistic(renyi.column_for_rank(k), direct.column_for_rank(k));
                INFO(d.name() << " n=" << n << " k=" << k);
                CHECK(ks < critical);
            }
        }
    }
}

TEST_CASE("gaussian maximum KS check at n=100", "[renyi]") {
    const auto d = DistributionModel::std_gaussian();
    const auto renyi = simulate_ranks(d, 100, {1}, 10000, 41, SamplerKind::Renyi);
    const auto direct = simulate_ranks(d, 100, {1}, 10000, 42, SamplerKind::Direct);
    CHECK(oracle::ks_statistic(renyi.column_for_rank(1), direct.column_for_rank(1)) < oracle::ks_critical(10000, 0.01));
}

TEST_CASE("spacing and harmonic numbers", "[renyi]") {
    OrderStatSample s;
    s.values = {3.0, 2.0, 1.0};
    CHECK(spacing(s, 1) == 1.0);
    CHECK(spacing(s, 2) == 1.0);
    CHECK_THROWS_AS(spacing(s, 3), InputError);
    CHECK_THROWS_AS(spacing(s, 0), InputError);

    CHECK(harmonic_number(1) == 1.0);
    CHECK(harmonic_number(5) == Approx(137.0 / 60.0).epsilon(1e-15));
    long double h = 0.0L;
    for (int i = 20; i >= 1; --i) h += 1.0L / i;
    CHECK(harmonic_number(20) == Approx(static_cast<double>(h)).epsilon(1e-15));
    CHECK(harmonic_number(20) == Approx(3.59774).margin(1e-5));
    CHECK_THROWS_AS(harmonic_number(0), InputError);
}

TEST_CASE("simulation does not depend on the worker count", "[renyi]") {
    const auto d = DistributionModel::abs_gaussian();
    ::setenv("ORDSTAT_THREADS", "1", 1);
    const auto one = simulate_ranks(d, 50, {1, 2, 25}, 5000, 77);
    ::setenv("ORDSTAT_THREADS", "4", 1);
    const auto four = simulate_ranks(d, 50, {1, 2, 25}, 5000, 77);
    ::setenv("ORDSTAT_THREADS", "0", 1);
    for (std::size_t k : {1, 2, 25}) CHECK(one.column_for_rank(k) == four.column_for_rank(k));
}
