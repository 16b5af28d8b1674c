#pragma once

// Exact order-statistic sampling through Renyi's representation, a sort-based
// reference sampler, and spacings.

#include <algorithm>
#include <cassert>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "ordstat/distributions.hpp"
#include "ordstat/errors.hpp"
#include "ordstat/rng.hpp"
#include "ordstat/special.hpp"

namespace ordstat {

enum class SamplerKind { Renyi, Direct };

/// One replicate's order statistics, largest first: values[0] is X_(1).
struct OrderStatSample {
    std::vector<double> values;
    SamplerKind sampler = SamplerKind::Renyi;
    std::uint64_t seed = 0;
    std::uint64_t stream = 0;

    [[nodiscard]] std::size_t n() const noexcept { return values.size(); }
    /// X_(k), 1-based.
    [[nodiscard]] double at(std::size_t k) const {
        if (k < 1 || k > values.size()) throw InputError("order statistic rank out of range");
        return values[k - 1];
    }
};

namespace detail {

inline bool is_descending(std::span<const double> v) {
    return std::is_sorted(v.begin(), v.end(), std::greater<>{});
}

inline void check_ranks(std::size_t n, std::span<const std::size_t> ranks) {
    for (const auto k : ranks) {
        if (k < 1 || k > n) throw InputError("requested rank outside [1, n]");
    }
}

}  // namespace detail

/// Y_(k) = sum_{i=k}^{n} E_i / i written to out[k-1]; one pass from i = n down to 1.
inline void fill_exponential_order_stats(std::size_t n, RngStream& rng, std::span<double> out) {
    if (n == 0) throw InputError("sample size must be at least 1");
    if (out.size() < n) throw InputError("output buffer too small");
    double acc = 0.0;
    for (std::size_t i = n; i >= 1; --i) {
        acc += rng.exponential() / static_cast<double>(i);
        out[i - 1] = acc;
    }
}

inline OrderStatSample sample_exponential_order_stats(std::size_t n, RngStream& rng) {
    if (n == 0) throw InputError("sample size must be at least 1");
    OrderStatSample s;
    s.values.resize(n);
    fill_exponential_order_stats(n, rng, s.values);
    s.sampler = SamplerKind::Renyi;
    s.seed = rng.master_seed();
    s.stream = rng.stream_index();
    assert(detail::is_descending(s.values));
    return s;
}

/// X_(k) = U(exp(Y_(k))).
inline OrderStatSample sample_order_stats_renyi(const DistributionModel& d, std::size_t n, RngStream& rng) {
    OrderStatSample s = sample_exponential_order_stats(n, rng);
    for (double& v : s.values) v = u_exp(d, v);
    assert(detail::is_descending(s.values));
    return s;
}

/// Renyi draw that maps only the requested ranks. Produces the same values as
/// sample_order_stats_renyi on the same stream. `scratch` is reused across calls.
inline void renyi_select(const DistributionModel& d, std::size_t n, RngStream& rng,
                         std::span<const std::size_t> ranks, std::span<double> out, std::vector<double>& scratch) {
    detail::check_ranks(n, ranks);
    scratch.resize(n);
    fill_exponential_order_stats(n, rng, scratch);
    for (std::size_t j = 0; j < ranks.size(); ++j) out[j] = u_exp(d, scratch[ranks[j] - 1]);
}

/// n inverse-CDF draws sorted largest first.
inline OrderStatSample sample_order_stats_direct(const DistributionModel& d, std::size_t n, RngStream& rng) {
    if (n == 0) throw InputError("sample size must be at least 1");
    OrderStatSample s;
    s.values.resize(n);
    for (double& v : s.values) v = quantile(d, rng.uniform());
    std::sort(s.values.begin(), s.values.end(), std::greater<>{});
    s.sampler = SamplerKind::Direct;
    s.seed = rng.master_seed();
    s.stream = rng.stream_index();
    return s;
}

/// Direct draw that maps only the requested ranks. The quantile map is monotone, so
/// ordering the uniforms first gives bit-identical order statistics.
inline void direct_select(const DistributionModel& d, std::size_t n, RngStream& rng,
                          std::span<const std::size_t> ranks, std::span<double> out, std::vector<double>& scratch) {
    detail::check_ranks(n, ranks);
    scratch.resize(n);
    for (auto& u : scratch) u = rng.uniform();
    const std::size_t deepest = ranks.empty() ? 0 : *std::max_element(ranks.begin(), ranks.end());
    if (deepest == 1) {
        std::iter_swap(scratch.begin(), std::max_element(scratch.begin(), scratch.end()));
    } else if (deepest > 1) {
        std::partial_sort(scratch.begin(), scratch.begin() + static_cast<std::ptrdiff_t>(deepest), scratch.end(),
                          std::greater<>{});
    }
    for (std::size_t j = 0; j < ranks.size(); ++j) out[j] = quantile(d, scratch[ranks[j] - 1]);
}

/// Delta_k = X_(k) - X_(k+1), 1 <= k <= n-1.
inline double spacing(const OrderStatSample& s, std::size_t k) {
    if (k < 1 || k + 1 > s.n()) throw InputError("spacing: k must satisfy 1 <= k <= n-1");
    return s.values[k - 1] - s.values[k];
}

/// H_n = sum_{i=1}^n 1/i, summed smallest term first.
inline double harmonic_number(std::uint64_t n) {
    if (n == 0) throw InputError("harmonic_number: n must be at least 1");
    CompensatedSum sum;
    for (std::uint64_t i = n; i >= 1; --i) sum.add(1.0 / static_cast<double>(i));
    return sum.value();
}

}  // namespace ordstat
