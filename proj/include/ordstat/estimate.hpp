#pragma once

#include <cmath>
#include <cstddef>
#include <span>

#include "ordstat/special.hpp"

namespace ordstat {

/// Monte Carlo point estimate with its CLT standard error (sample sd / sqrt(replicates)).
struct McEstimate {
    double value = 0.0;
    double stderr = 0.0;
    std::size_t replicates = 0;
};

/// Sample mean with CLT standard error. Uses compensated sums in index order.
inline McEstimate mean_estimate(std::span<const double> xs) {
    McEstimate e;
    e.replicates = xs.size();
    if (xs.empty()) return e;
    CompensatedSum s;
    for (double x : xs) s.add(x);
    const double mean = s.value() / static_cast<double>(xs.size());
    e.value = mean;
    if (xs.size() >= 2) {
        CompensatedSum ss;
        for (double x : xs) ss.add((x - mean) * (x - mean));
        const double var = ss.value() / static_cast<double>(xs.size() - 1);
        e.stderr = std::sqrt(var / static_cast<double>(xs.size()));
    }
    return e;
}

/// Unbiased sample variance; standard error from the fourth central moment,
/// se^2 = (m4 - s^4) / R.
inline McEstimate variance_estimate(std::span<const double> xs) {
    McEstimate e;
    e.replicates = xs.size();
    if (xs.size() < 2) return e;
    const double r = static_cast<double>(xs.size());
    const double mean = mean_estimate(xs).value;
    CompensatedSum s2;
    CompensatedSum s4;
    for (double x : xs) {
        const double c = (x - mean) * (x - mean);
        s2.add(c);
        s4.add(c * c);
    }
    const double var = s2.value() / (r - 1.0);
    const double m2 = s2.value() / r;
    const double m4 = s4.value() / r;
    e.value = var;
    e.stderr = std::sqrt(std::max(0.0, m4 - m2 * m2) / r);
    return e;
}

/// Sample covariance; standard error from the spread of the centered products.
inline McEstimate covariance_estimate(std::span<const double> a, std::span<const double> b) {
    McEstimate e;
    e.replicates = a.size();
    if (a.size() < 2 || a.size() != b.size()) return e;
    const double r = static_cast<double>(a.size());
    const double ma = mean_estimate(a).value;
    const double mb = mean_estimate(b).value;
    CompensatedSum sp;
    for (std::size_t i = 0; i < a.size(); ++i) sp.add((a[i] - ma) * (b[i] - mb));
    const double cov_biased = sp.value() / r;
    CompensatedSum sd;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double dev = (a[i] - ma) * (b[i] - mb) - cov_biased;
        sd.add(dev * dev);
    }
    e.value = sp.value() / (r - 1.0);
    e.stderr = std::sqrt(sd.value() / (r - 1.0) / r);
    return e;
}

}  // namespace ordstat
