#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "fidnp/curve.hpp"
#include "fidnp/focus.hpp"
#include "fidnp/sampling.hpp"

namespace fidnp {

inline constexpr std::size_t kMinReplications = 100;
inline constexpr std::size_t kMinSimulationDraws = 500;

struct SimulationConfig {
  TrueDistribution truth{Exponential{1.0}};
  std::size_t n = 100;
  std::size_t replications = 1000;
  std::size_t draws = 2000;
  SelectionRule rule = SelectionRule::LogLinear;
  std::vector<FocusParameter> foci;
  std::vector<double> levels{0.95};
  std::uint64_t seed = 1;
  std::size_t threads = 1;  // does not affect results

  void validate() const;
};

/// Analytic value of a single-sample focus under the truth. Difference foci
/// have no single-sample truth and raise ErrorKind::Config.
double true_focus_value(const TrueDistribution& truth, const FocusParameter& focus);

struct CoverageCell {
  std::string focus;
  double level = 0.0;
  double true_value = 0.0;
  double coverage = 0.0;
  double mc_se = 0.0;       // sqrt(level (1 - level) / R)
  double tolerance = 0.0;   // 3 mc_se + 2 / m
  double mean_width = 0.0;  // over replications with a finite interval
  std::size_t no_interval = 0;  // replications with too few finite draws (scored as misses)
  bool pass = false;
  std::vector<std::uint8_t> covered;  // per replication
};

struct CoverageReport {
  std::vector<CoverageCell> cells;  // focus-major, level-minor
  bool all_pass() const;
};

struct CalibrationSeries {
  std::string focus;
  double true_value = 0.0;
  std::vector<double> h;  // fraction of fiducial draws <= truth, per replication
  double mean_h = 0.0;
  double ks = 0.0;
  double critical = 0.0;  // 1.63 / sqrt(R)
  bool pass = false;
};

struct CalibrationReport {
  std::vector<CalibrationSeries> foci;
  bool all_pass() const;
};

struct SimulationResult {
  CoverageReport coverage;
  CalibrationReport calibration;
};

/// Replication r simulates data from fork(fork(seed, r), 0) and fits the
/// ensemble on fork(fork(seed, r), 1). Pure function of the config.
SimulationResult run_simulation(const SimulationConfig& config);
CoverageReport run_coverage(const SimulationConfig& config);
CalibrationReport run_calibration(const SimulationConfig& config);

/// Beta(i, n - i + 1): the law of the i-th of n uniform order statistics,
/// which is the StepLower fiducial law of F(t) for t in [x_i, x_{i+1}).
class BetaOrderOracle {
 public:
  BetaOrderOracle(std::size_t n, std::size_t i);

  double mean() const;
  double variance() const;
  double cdf(double p) const;
  double quantile(double q) const;

 private:
  double a_;
  double b_;
};

}  // namespace fidnp
