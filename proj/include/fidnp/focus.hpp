#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "fidnp/ensemble.hpp"

namespace fidnp {

// Focus parameters. An empty group label refers to the first ensemble; for
// the difference foci the defaults are the first (a) and second (b) ensemble.
// Differences are always a - b.

struct CdfAt {
  double t = 1.0;
  std::string group;
};

struct SurvivalAt {
  double t = 1.0;
  std::string group;
};

struct Quantile {
  double alpha = 0.5;
  std::string group;
};

struct QuantileDiff {
  double alpha = 0.5;
  std::string group_a;
  std::string group_b;
};

struct CdfDiffAt {
  double t = 1.0;
  std::string group_a;
  std::string group_b;
};

using FocusParameter = std::variant<CdfAt, SurvivalAt, Quantile, QuantileDiff, CdfDiffAt>;

std::string describe(const FocusParameter& focus);
bool is_difference(const FocusParameter& focus);
void validate(const FocusParameter& focus);

/// Fiducial distribution of one focus parameter: one value per joint replicate.
/// Replicates whose value is not finite (quantile sentinel) are flagged in
/// `finite` and excluded from every estimate, but always counted.
struct FiducialScalarSample {
  FocusParameter focus;
  std::vector<double> values;
  std::vector<std::uint8_t> finite;

  std::size_t size() const noexcept { return values.size(); }
  std::size_t sentinel_count() const noexcept;

  /// Finite values, sorted ascending.
  std::vector<double> sorted_finite() const;
};

FiducialScalarSample extract(std::span<const FiducialEnsemble> ensembles, const FocusParameter& focus,
                             std::size_t threads = 1);

struct IntervalEstimate {
  double level = 0.95;
  double lower = 0.0;
  double upper = 0.0;
  std::string method = "equal-tailed";
};

/// Minimum number of finite replicates for an interval.
inline constexpr std::size_t kMinIntervalDraws = 20;

/// Equal-tailed interval from the type-7 empirical quantiles at (1-level)/2
/// and (1+level)/2 of the finite values.
IntervalEstimate interval(const FiducialScalarSample& sample, double level);
IntervalEstimate interval_sorted(std::span<const double> sorted_finite, double level);

enum class Hypothesis { Greater, Less, TwoSided };

std::string_view to_string(Hypothesis h) noexcept;

struct PValueReport {
  std::string hypothesis;
  double fiducial_probability = 1.0;
  std::size_t m_effective = 0;
};

/// Fiducial probability of the null-consistent region of a difference focus:
/// P(diff <= 0) for "> 0", P(diff >= 0) for "< 0", and min(1, 2 min(...))
/// for the two-sided alternative.
PValueReport p_value(const FiducialScalarSample& sample, Hypothesis hypothesis);

struct Summary {
  double mean = 0.0;
  double sd = 0.0;
  std::vector<std::pair<double, double>> quantiles;  // (probability, value)
  std::size_t m = 0;
  std::size_t m_effective = 0;
  std::size_t sentinels = 0;
};

inline constexpr double kSummaryProbabilities[] = {0.025, 0.05, 0.25, 0.5, 0.75, 0.95, 0.975};

/// Throws ErrorKind::Inference when no finite value is available.
Summary summarize(const FiducialScalarSample& sample);

}  // namespace fidnp
