#pragma once

#include <functional>
#include <span>
#include <vector>

namespace fidnp::stats {

/// Empirical quantile by linear interpolation between order statistics with
/// plotting position (j - 1)/(m - 1), j = 1..m ("type 7"). `sorted` must be
/// ascending and nonempty; p in [0,1].
double quantile_sorted(std::span<const double> sorted, double p);

double mean(std::span<const double> xs);

/// Sample standard deviation, divisor m - 1. Zero when fewer than two values.
double sd(std::span<const double> xs);

/// Kolmogorov-Smirnov statistic sup |F_m - cdf|.
double ks_statistic(std::vector<double> xs, const std::function<double(double)>& cdf);

/// Kolmogorov-Smirnov statistic against Uniform(0,1).
double ks_uniform(std::vector<double> xs);

/// Two-sample Kolmogorov-Smirnov statistic sup |F_a - F_b|.
double ks_two_sample(std::vector<double> a, std::vector<double> b);

/// Asymptotic 1% critical values (c = 1.63).
double ks_critical_1pct(std::size_t m);
double ks_critical_1pct(std::size_t m1, std::size_t m2);

}  // namespace fidnp::stats
