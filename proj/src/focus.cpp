#include "fidnp/focus.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <functional>

#include "fidnp/error.hpp"
#include "fidnp/parallel.hpp"
#include "fidnp/stats.hpp"

namespace fidnp {

namespace {

std::string num(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string group_suffix(const std::string& g) { return g.empty() ? "" : "," + g; }

std::string pair_suffix(const std::string& a, const std::string& b) {
  return "," + (a.empty() ? std::string("#0") : a) + "-" + (b.empty() ? std::string("#1") : b);
}

std::size_t resolve(std::span<const FiducialEnsemble> ens, const std::string& label, std::size_t fallback) {
  if (label.empty()) {
    require(fallback < ens.size(), ErrorKind::Config, "focus needs " + std::to_string(fallback + 1) + " groups");
    return fallback;
  }
  for (std::size_t i = 0; i < ens.size(); ++i) {
    if (ens[i].sample().label == label) return i;
  }
  fail(ErrorKind::Config, "focus references unknown group '" + label + "'");
}

}  // namespace

std::string describe(const FocusParameter& focus) {
  struct {
    std::string operator()(const CdfAt& f) const { return "cdf_at(" + num(f.t) + group_suffix(f.group) + ")"; }
    std::string operator()(const SurvivalAt& f) const {
      return "survival_at(" + num(f.t) + group_suffix(f.group) + ")";
    }
    std::string operator()(const Quantile& f) const {
      return "quantile(" + num(f.alpha) + group_suffix(f.group) + ")";
    }
    std::string operator()(const QuantileDiff& f) const {
      return "quantile_diff(" + num(f.alpha) + pair_suffix(f.group_a, f.group_b) + ")";
    }
    std::string operator()(const CdfDiffAt& f) const {
      return "cdf_diff_at(" + num(f.t) + pair_suffix(f.group_a, f.group_b) + ")";
    }
  } visitor;
  return std::visit(visitor, focus);
}

bool is_difference(const FocusParameter& focus) {
  return std::holds_alternative<QuantileDiff>(focus) || std::holds_alternative<CdfDiffAt>(focus);
}

void validate(const FocusParameter& focus) {
  auto check_t = [](double t) { require(std::isfinite(t) && t > 0.0, ErrorKind::Domain, "focus: t must be > 0"); };
  auto check_alpha = [](double a) {
    require(a > 0.0 && a < 1.0, ErrorKind::Domain, "focus: alpha must lie in (0,1)");
  };
  std::visit(
      [&](const auto& f) {
        using T = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<T, Quantile> || std::is_same_v<T, QuantileDiff>) {
          check_alpha(f.alpha);
        } else {
          check_t(f.t);
        }
      },
      focus);
}

std::size_t FiducialScalarSample::sentinel_count() const noexcept {
  return static_cast<std::size_t>(std::count(finite.begin(), finite.end(), std::uint8_t{0}));
}

std::vector<double> FiducialScalarSample::sorted_finite() const {
  std::vector<double> out;
  out.reserve(values.size());
  for (std::size_t j = 0; j < values.size(); ++j) {
    if (finite[j]) out.push_back(values[j]);
  }
  std::sort(out.begin(), out.end());
  return out;
}

FiducialScalarSample extract(std::span<const FiducialEnsemble> ensembles, const FocusParameter& focus,
                             std::size_t threads) {
  validate(focus);
  require(!ensembles.empty(), ErrorKind::Config, "extract: no ensembles");
  const std::size_t m = ensembles.front().draws();
  for (const auto& e : ensembles) {
    require(e.draws() == m, ErrorKind::Config, "extract: ensembles differ in number of draws");
  }

  FiducialScalarSample out{focus, std::vector<double>(m), std::vector<std::uint8_t>(m)};
  auto per_replicate = std::visit(
      [&](const auto& f) -> std::function<double(std::size_t)> {
        using T = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<T, CdfAt>) {
          const auto& e = ensembles[resolve(ensembles, f.group, 0)];
          return [&e, t = f.t](std::size_t j) { return e.curve(j).cdf(t); };
        } else if constexpr (std::is_same_v<T, SurvivalAt>) {
          const auto& e = ensembles[resolve(ensembles, f.group, 0)];
          return [&e, t = f.t](std::size_t j) { return e.curve(j).survival(t); };
        } else if constexpr (std::is_same_v<T, Quantile>) {
          const auto& e = ensembles[resolve(ensembles, f.group, 0)];
          return [&e, a = f.alpha](std::size_t j) { return e.curve(j).quantile(a); };
        } else if constexpr (std::is_same_v<T, QuantileDiff>) {
          const auto& a = ensembles[resolve(ensembles, f.group_a, 0)];
          const auto& b = ensembles[resolve(ensembles, f.group_b, 1)];
          return [&a, &b, p = f.alpha](std::size_t j) { return a.curve(j).quantile(p) - b.curve(j).quantile(p); };
        } else {
          const auto& a = ensembles[resolve(ensembles, f.group_a, 0)];
          const auto& b = ensembles[resolve(ensembles, f.group_b, 1)];
          return [&a, &b, t = f.t](std::size_t j) { return a.curve(j).cdf(t) - b.curve(j).cdf(t); };
        }
      },
      focus);

  parallel_for(m, threads, [&](std::size_t j) {
    const double v = per_replicate(j);
    out.values[j] = v;
    out.finite[j] = std::isfinite(v) ? 1 : 0;
  });
  return out;
}

IntervalEstimate interval_sorted(std::span<const double> sorted_finite, double level) {
  require(level > 0.0 && level < 1.0, ErrorKind::Domain, "interval: level must lie in (0,1)");
  const double tail = 0.5 * (1.0 - level);
  IntervalEstimate est;
  est.level = level;
  est.lower = stats::quantile_sorted(sorted_finite, tail);
  est.upper = stats::quantile_sorted(sorted_finite, 1.0 - tail);
  return est;
}

IntervalEstimate interval(const FiducialScalarSample& sample, double level) {
  const auto sorted = sample.sorted_finite();
  require(sorted.size() >= kMinIntervalDraws, ErrorKind::Inference,
          "interval for " + describe(sample.focus) + " needs at least " + std::to_string(kMinIntervalDraws) +
              " finite draws; got " + std::to_string(sorted.size()) + " (" +
              std::to_string(sample.sentinel_count()) + " sentinel)");
  return interval_sorted(sorted, level);
}

std::string_view to_string(Hypothesis h) noexcept {
  switch (h) {
    case Hypothesis::Greater: return "diff > 0";
    case Hypothesis::Less: return "diff < 0";
    case Hypothesis::TwoSided: return "diff != 0";
  }
  return "";
}

PValueReport p_value(const FiducialScalarSample& sample, Hypothesis hypothesis) {
  require(is_difference(sample.focus), ErrorKind::Usage,
          "p-values are defined for difference foci only; got " + describe(sample.focus));
  std::size_t used = 0;
  std::size_t le = 0;
  std::size_t ge = 0;
  for (std::size_t j = 0; j < sample.values.size(); ++j) {
    if (!sample.finite[j]) continue;
    ++used;
    if (sample.values[j] <= 0.0) ++le;
    if (sample.values[j] >= 0.0) ++ge;
  }
  require(used > 0, ErrorKind::Inference, "p-value: no finite draws for " + describe(sample.focus));
  const double p_le = static_cast<double>(le) / static_cast<double>(used);
  const double p_ge = static_cast<double>(ge) / static_cast<double>(used);

  PValueReport rep;
  rep.hypothesis = std::string(to_string(hypothesis));
  rep.m_effective = used;
  switch (hypothesis) {
    case Hypothesis::Greater: rep.fiducial_probability = p_le; break;
    case Hypothesis::Less: rep.fiducial_probability = p_ge; break;
    case Hypothesis::TwoSided: rep.fiducial_probability = std::min(1.0, 2.0 * std::min(p_le, p_ge)); break;
  }
  return rep;
}

Summary summarize(const FiducialScalarSample& sample) {
  const auto sorted = sample.sorted_finite();
  require(!sorted.empty(), ErrorKind::Inference,
          "summary of " + describe(sample.focus) + ": all " + std::to_string(sample.size()) +
              " draws are sentinels");
  Summary s;
  s.m = sample.size();
  s.m_effective = sorted.size();
  s.sentinels = sample.sentinel_count();
  s.mean = stats::mean(sorted);
  s.sd = stats::sd(sorted);
  for (double p : kSummaryProbabilities) s.quantiles.emplace_back(p, stats::quantile_sorted(sorted, p));
  return s;
}

}  // namespace fidnp
