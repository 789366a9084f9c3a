#include "fidnp/curve.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "fidnp/error.hpp"

namespace fidnp {

std::string_view to_string(SelectionRule rule) noexcept {
  switch (rule) {
    case SelectionRule::StepLower: return "step-lower";
    case SelectionRule::StepUpper: return "step-upper";
    case SelectionRule::PiecewiseLinear: return "linear";
    case SelectionRule::LogLinear: return "log-linear";
    case SelectionRule::MonotoneSpline: return "spline";
  }
  return "unknown";
}

SelectionRule parse_rule(std::string_view name) {
  for (auto rule : {SelectionRule::StepLower, SelectionRule::StepUpper, SelectionRule::PiecewiseLinear,
                    SelectionRule::LogLinear, SelectionRule::MonotoneSpline}) {
    if (to_string(rule) == name) return rule;
  }
  fail(ErrorKind::Usage, "unknown selection rule '" + std::string(name) +
                             "' (expected step-lower, step-upper, linear, log-linear or spline)");
}

void Knots::validate() const {
  require(!xs.empty(), ErrorKind::Constraint, "knots: at least one knot is required");
  require(xs.size() == us.size(), ErrorKind::Constraint, "knots: xs and us differ in length");
  const auto check = [](bool ok, const char* what, std::size_t i) {
    if (!ok) fail(ErrorKind::Constraint, std::string("knots: ") + what + " at index " + std::to_string(i));
  };
  for (std::size_t i = 0; i < xs.size(); ++i) {
    check(std::isfinite(xs[i]) && xs[i] > 0.0, "x must be finite and > 0", i);
    check(us[i] > 0.0 && us[i] < 1.0, "u must lie in (0,1)", i);
    if (i > 0) {
      check(xs[i] > xs[i - 1], "xs not strictly increasing", i);
      check(us[i] > us[i - 1], "us not strictly increasing", i);
    }
  }
}

namespace {

// Fritsch-Carlson tangents for strictly increasing data.
std::vector<double> monotone_tangents(std::span<const double> x, std::span<const double> y) {
  const std::size_t nodes = x.size();
  std::vector<double> secant(nodes - 1);
  for (std::size_t j = 0; j + 1 < nodes; ++j) secant[j] = (y[j + 1] - y[j]) / (x[j + 1] - x[j]);

  std::vector<double> m(nodes);
  m.front() = secant.front();
  m.back() = secant.back();
  for (std::size_t j = 1; j + 1 < nodes; ++j) m[j] = 0.5 * (secant[j - 1] + secant[j]);

  for (std::size_t j = 0; j + 1 < nodes; ++j) {
    const double a = m[j] / secant[j];
    const double b = m[j + 1] / secant[j];
    const double r2 = a * a + b * b;
    if (r2 > 9.0) {
      const double tau = 3.0 / std::sqrt(r2);
      m[j] = tau * a * secant[j];
      m[j + 1] = tau * b * secant[j];
    }
  }
  return m;
}

}  // namespace

FiducialCurve::FiducialCurve(Knots knots, SelectionRule rule) : knots_(std::move(knots)), rule_(rule) {
  knots_.validate();
  if (!is_continuous(rule_)) return;

  const auto& xs = knots_.xs;
  const std::size_t n = xs.size();
  log_surv_.resize(n);
  for (std::size_t i = 0; i < n; ++i) log_surv_[i] = std::log1p(-knots_.us[i]);
  tail_slope_ = n == 1 ? log_surv_[0] / xs[0]
                       : (log_surv_[n - 1] - log_surv_[n - 2]) / (xs[n - 1] - xs[n - 2]);

  if (rule_ == SelectionRule::MonotoneSpline) {
    std::vector<double> nx(n + 1, 0.0);
    std::vector<double> ny(n + 1, 0.0);
    std::copy(xs.begin(), xs.end(), nx.begin() + 1);
    std::copy(knots_.us.begin(), knots_.us.end(), ny.begin() + 1);
    tangents_ = monotone_tangents(nx, ny);
  }
}

FiducialCurve build_curve(Knots knots, SelectionRule rule) { return FiducialCurve(std::move(knots), rule); }

double FiducialCurve::tail_cdf(double t) const {
  const std::size_t last = knots_.size() - 1;
  return -std::expm1(log_surv_[last] + tail_slope_ * (t - knots_.xs[last]));
}

double FiducialCurve::spline_segment(std::size_t seg, double t) const {
  const double x0 = seg == 0 ? 0.0 : knots_.xs[seg - 1];
  const double y0 = seg == 0 ? 0.0 : knots_.us[seg - 1];
  const double x1 = knots_.xs[seg];
  const double y1 = knots_.us[seg];
  const double h = x1 - x0;
  const double s = (t - x0) / h;
  const double s2 = s * s;
  const double s3 = s2 * s;
  const double h00 = 2.0 * s3 - 3.0 * s2 + 1.0;
  const double h10 = s3 - 2.0 * s2 + s;
  const double h01 = -2.0 * s3 + 3.0 * s2;
  const double h11 = s3 - s2;
  const double v = h00 * y0 + h10 * h * tangents_[seg] + h01 * y1 + h11 * h * tangents_[seg + 1];
  return std::clamp(v, y0, y1);
}

// k = number of knots strictly below t (t is not a knot).
double FiducialCurve::continuous_cdf(double t, std::size_t k) const {
  const auto& xs = knots_.xs;
  const auto& us = knots_.us;
  if (k == xs.size()) return tail_cdf(t);
  switch (rule_) {
    case SelectionRule::LogLinear: {
      if (k == 0) return -std::expm1(log_surv_[0] * (t / xs[0]));
      const double w = (t - xs[k - 1]) / (xs[k] - xs[k - 1]);
      return -std::expm1(log_surv_[k - 1] + w * (log_surv_[k] - log_surv_[k - 1]));
    }
    case SelectionRule::PiecewiseLinear: {
      if (k == 0) return us[0] * (t / xs[0]);
      const double w = (t - xs[k - 1]) / (xs[k] - xs[k - 1]);
      return us[k - 1] + w * (us[k] - us[k - 1]);
    }
    case SelectionRule::MonotoneSpline:
      return spline_segment(k, t);
    default:
      break;
  }
  return std::numeric_limits<double>::quiet_NaN();
}

double FiducialCurve::cdf(double t) const {
  require(t > 0.0, ErrorKind::Domain, "cdf: t must be > 0");
  const auto& xs = knots_.xs;
  const auto& us = knots_.us;
  const auto k = static_cast<std::size_t>(std::upper_bound(xs.begin(), xs.end(), t) - xs.begin());
  if (k > 0 && xs[k - 1] == t) return us[k - 1];

  // From here t lies strictly between knots: xs[k-1] < t < xs[k].
  switch (rule_) {
    case SelectionRule::StepLower:
      return k == 0 ? 0.0 : us[k - 1];
    case SelectionRule::StepUpper:
      return k == xs.size() ? 1.0 : us[k];
    default:
      return continuous_cdf(t, k);
  }
}

double FiducialCurve::survival(double t) const { return 1.0 - cdf(t); }

double FiducialCurve::quantile(double alpha) const {
  require(alpha > 0.0 && alpha < 1.0, ErrorKind::Domain, "quantile: alpha must lie in (0,1)");
  const auto& xs = knots_.xs;
  const auto& us = knots_.us;
  const std::size_t n = xs.size();
  const auto i = static_cast<std::size_t>(std::lower_bound(us.begin(), us.end(), alpha) - us.begin());

  switch (rule_) {
    case SelectionRule::StepLower:
      return i == n ? std::numeric_limits<double>::infinity() : xs[i];
    case SelectionRule::StepUpper:
      return i == 0 ? 0.0 : xs[i - 1];
    default:
      break;
  }

  if (i < n && us[i] == alpha) return xs[i];
  const double target = std::log1p(-alpha);
  if (i == n) return xs[n - 1] + (target - log_surv_[n - 1]) / tail_slope_;

  const double lo_x = i == 0 ? 0.0 : xs[i - 1];
  const double lo_u = i == 0 ? 0.0 : us[i - 1];
  const double lo_ls = i == 0 ? 0.0 : log_surv_[i - 1];
  switch (rule_) {
    case SelectionRule::LogLinear:
      return lo_x + (target - lo_ls) / (log_surv_[i] - lo_ls) * (xs[i] - lo_x);
    case SelectionRule::PiecewiseLinear:
      return lo_x + (alpha - lo_u) / (us[i] - lo_u) * (xs[i] - lo_x);
    default:
      break;
  }

  // Monotone spline: bisection for the smallest t on the segment with F(t) >= alpha.
  double lo = lo_x;
  double hi = xs[i];
  for (int iter = 0; iter < 200; ++iter) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (spline_segment(i, mid) >= alpha) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return hi;
}

}  // namespace fidnp
