#pragma once

#include <span>
#include <string_view>
#include <vector>

namespace fidnp {

/// How a fiducial CDF realization is completed between and beyond its knots.
enum class SelectionRule {
  StepLower,        // smallest right-continuous step through the knots
  StepUpper,        // largest step through the knots
  PiecewiseLinear,  // linear in F, exponential right tail
  LogLinear,        // linear in log S (piecewise-constant hazard)
  MonotoneSpline,   // Fritsch-Carlson monotone cubic Hermite, exponential right tail
};

std::string_view to_string(SelectionRule rule) noexcept;

/// Accepts the CLI names: step-lower, step-upper, linear, log-linear, spline.
SelectionRule parse_rule(std::string_view name);

constexpr bool is_continuous(SelectionRule rule) noexcept {
  return rule != SelectionRule::StepLower && rule != SelectionRule::StepUpper;
}

/// Constraint pairs F(xs[i]) = us[i]. xs > 0 strictly increasing; us strictly
/// increasing inside (0,1).
struct Knots {
  std::vector<double> xs;
  std::vector<double> us;

  std::size_t size() const noexcept { return xs.size(); }

  /// Throws ErrorKind::Constraint describing the first violated invariant.
  void validate() const;
};

/// One realization of the unknown CDF. Immutable; evaluation is thread safe.
class FiducialCurve {
 public:
  FiducialCurve(Knots knots, SelectionRule rule);

  const Knots& knots() const noexcept { return knots_; }
  SelectionRule rule() const noexcept { return rule_; }

  /// F(t) for t > 0. Returns us[i] exactly at t == xs[i].
  double cdf(double t) const;

  /// 1 - cdf(t).
  double survival(double t) const;

  /// inf{t > 0 : F(t) >= alpha}. +infinity when alpha exceeds sup F
  /// (StepLower above the last knot); 0 when F(0+) >= alpha (StepUpper).
  double quantile(double alpha) const;

  /// Hermite tangents at the nodes (0, xs[0], ..., xs[n-1]); empty unless
  /// the rule is MonotoneSpline.
  std::span<const double> spline_tangents() const noexcept { return tangents_; }

  /// Slope of log S used right of the last knot (continuous rules).
  double tail_log_slope() const noexcept { return tail_slope_; }

 private:
  double continuous_cdf(double t, std::size_t k) const;
  double spline_segment(std::size_t seg, double t) const;
  double tail_cdf(double t) const;

  Knots knots_;
  SelectionRule rule_;
  std::vector<double> log_surv_;  // log(1 - us[i])
  std::vector<double> tangents_;
  double tail_slope_ = 0.0;
};

FiducialCurve build_curve(Knots knots, SelectionRule rule);

}  // namespace fidnp
