#include "fidnp/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "fidnp/error.hpp"

namespace fidnp::stats {

namespace {
constexpr double kKs1pct = 1.63;
}

double quantile_sorted(std::span<const double> sorted, double p) {
  require(!sorted.empty(), ErrorKind::Inference, "quantile of an empty sample");
  require(p >= 0.0 && p <= 1.0, ErrorKind::Domain, "quantile level must lie in [0,1]");
  const double h = static_cast<double>(sorted.size() - 1) * p;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  const double frac = h - static_cast<double>(lo);
  if (frac == 0.0 || sorted[lo] == sorted[hi]) return sorted[lo];
  return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

double mean(std::span<const double> xs) {
  if (xs.empty()) return 0.0;
  return std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
}

double sd(std::span<const double> xs) {
  if (xs.size() < 2) return 0.0;
  const double mu = mean(xs);
  double ss = 0.0;
  for (double x : xs) ss += (x - mu) * (x - mu);
  return std::sqrt(ss / static_cast<double>(xs.size() - 1));
}

double ks_statistic(std::vector<double> xs, const std::function<double(double)>& cdf) {
  require(!xs.empty(), ErrorKind::Inference, "KS statistic of an empty sample");
  std::sort(xs.begin(), xs.end());
  const double m = static_cast<double>(xs.size());
  double d = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double f = cdf(xs[i]);
    d = std::max({d, static_cast<double>(i + 1) / m - f, f - static_cast<double>(i) / m});
  }
  return d;
}

double ks_uniform(std::vector<double> xs) {
  return ks_statistic(std::move(xs), [](double x) { return std::clamp(x, 0.0, 1.0); });
}

double ks_two_sample(std::vector<double> a, std::vector<double> b) {
  require(!a.empty() && !b.empty(), ErrorKind::Inference, "KS statistic of an empty sample");
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  std::size_t i = 0;
  std::size_t j = 0;
  double d = 0.0;
  while (i < a.size() && j < b.size()) {
    const double t = std::min(a[i], b[j]);
    while (i < a.size() && a[i] <= t) ++i;
    while (j < b.size() && b[j] <= t) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
  }
  return d;
}

double ks_critical_1pct(std::size_t m) { return kKs1pct / std::sqrt(static_cast<double>(m)); }

double ks_critical_1pct(std::size_t m1, std::size_t m2) {
  const double a = static_cast<double>(m1);
  const double b = static_cast<double>(m2);
  return kKs1pct * std::sqrt((a + b) / (a * b));
}

}  // namespace fidnp::stats
