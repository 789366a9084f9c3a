#include "fidnp/coverage.hpp"

#include <algorithm>
#include <cmath>

#include <boost/math/distributions/beta.hpp>

#include "fidnp/ensemble.hpp"
#include "fidnp/error.hpp"
#include "fidnp/parallel.hpp"
#include "fidnp/stats.hpp"

namespace fidnp {

void SimulationConfig::validate() const {
  require(n >= 1, ErrorKind::Config, "simulation: n must be >= 1");
  require(replications >= kMinReplications, ErrorKind::Config,
          "simulation: replications must be >= " + std::to_string(kMinReplications));
  require(draws >= kMinSimulationDraws, ErrorKind::Config,
          "simulation: draws must be >= " + std::to_string(kMinSimulationDraws));
  require(!foci.empty(), ErrorKind::Config, "simulation: at least one focus is required");
  require(!levels.empty(), ErrorKind::Config, "simulation: at least one level is required");
  for (double l : levels) require(l > 0.0 && l < 1.0, ErrorKind::Config, "simulation: levels must lie in (0,1)");
  for (const auto& f : foci) {
    fidnp::validate(f);
    (void)true_focus_value(truth, f);
  }
}

double true_focus_value(const TrueDistribution& truth, const FocusParameter& focus) {
  if (const auto* f = std::get_if<CdfAt>(&focus)) return truth.cdf(f->t);
  if (const auto* f = std::get_if<SurvivalAt>(&focus)) return truth.survival(f->t);
  if (const auto* f = std::get_if<Quantile>(&focus)) return truth.quantile(f->alpha);
  fail(ErrorKind::Config, "no analytic true value for " + describe(focus) + " under a single truth");
}

bool CoverageReport::all_pass() const {
  return std::all_of(cells.begin(), cells.end(), [](const auto& c) { return c.pass; });
}

bool CalibrationReport::all_pass() const {
  return std::all_of(foci.begin(), foci.end(), [](const auto& f) { return f.pass; });
}

namespace {

struct ReplicateOutcome {
  std::vector<double> h;                // per focus
  std::vector<std::uint8_t> covered;    // per focus x level
  std::vector<std::uint8_t> has_interval;
  std::vector<double> width;
};

}  // namespace

SimulationResult run_simulation(const SimulationConfig& config) {
  config.validate();
  const std::size_t nf = config.foci.size();
  const std::size_t nl = config.levels.size();
  const RngStream root(config.seed, 0);

  std::vector<double> truths;
  for (const auto& f : config.foci) truths.push_back(true_focus_value(config.truth, f));

  std::vector<ReplicateOutcome> outcomes(config.replications);
  parallel_for(config.replications, config.threads, [&](std::size_t r) {
    const RngStream rep = fork_stream(root, r);
    RngStream data_stream = fork_stream(rep, 0);
    const auto sample = ObservedSample::make(sample_true(config.truth, data_stream, config.n));
    const auto ensemble = fit_ensemble(sample, config.rule, config.draws, fork_stream(rep, 1));
    const std::span<const FiducialEnsemble> ens(&ensemble, 1);

    ReplicateOutcome& out = outcomes[r];
    out.h.resize(nf);
    out.covered.assign(nf * nl, 0);
    out.has_interval.assign(nf * nl, 0);
    out.width.assign(nf * nl, 0.0);
    for (std::size_t f = 0; f < nf; ++f) {
      const auto fs = extract(ens, config.foci[f]);
      std::size_t below = 0;
      for (double v : fs.values) below += (v <= truths[f]) ? 1 : 0;
      out.h[f] = static_cast<double>(below) / static_cast<double>(fs.size());

      const auto sorted = fs.sorted_finite();
      if (sorted.size() < kMinIntervalDraws) continue;
      for (std::size_t l = 0; l < nl; ++l) {
        const auto iv = interval_sorted(sorted, config.levels[l]);
        const std::size_t cell = f * nl + l;
        out.has_interval[cell] = 1;
        out.width[cell] = iv.upper - iv.lower;
        out.covered[cell] = (iv.lower <= truths[f] && truths[f] <= iv.upper) ? 1 : 0;
      }
    }
  });

  const double R = static_cast<double>(config.replications);
  SimulationResult result;
  for (std::size_t f = 0; f < nf; ++f) {
    for (std::size_t l = 0; l < nl; ++l) {
      const std::size_t cell_index = f * nl + l;
      CoverageCell cell;
      cell.focus = describe(config.foci[f]);
      cell.level = config.levels[l];
      cell.true_value = truths[f];
      cell.covered.resize(config.replications);
      std::size_t hits = 0;
      std::size_t with_interval = 0;
      double width_sum = 0.0;
      for (std::size_t r = 0; r < config.replications; ++r) {
        const auto& o = outcomes[r];
        cell.covered[r] = o.covered[cell_index];
        hits += o.covered[cell_index];
        if (o.has_interval[cell_index]) {
          ++with_interval;
          width_sum += o.width[cell_index];
        }
      }
      cell.no_interval = config.replications - with_interval;
      cell.coverage = static_cast<double>(hits) / R;
      cell.mean_width = with_interval > 0 ? width_sum / static_cast<double>(with_interval) : 0.0;
      cell.mc_se = std::sqrt(cell.level * (1.0 - cell.level) / R);
      cell.tolerance = 3.0 * cell.mc_se + 2.0 / static_cast<double>(config.draws);
      cell.pass = std::abs(cell.coverage - cell.level) <= cell.tolerance;
      result.coverage.cells.push_back(std::move(cell));
    }

    CalibrationSeries series;
    series.focus = describe(config.foci[f]);
    series.true_value = truths[f];
    series.h.reserve(config.replications);
    for (const auto& o : outcomes) series.h.push_back(o.h[f]);
    series.mean_h = stats::mean(series.h);
    series.ks = stats::ks_uniform(series.h);
    series.critical = stats::ks_critical_1pct(config.replications);
    series.pass = series.ks < series.critical;
    result.calibration.foci.push_back(std::move(series));
  }
  return result;
}

CoverageReport run_coverage(const SimulationConfig& config) { return run_simulation(config).coverage; }

CalibrationReport run_calibration(const SimulationConfig& config) { return run_simulation(config).calibration; }

BetaOrderOracle::BetaOrderOracle(std::size_t n, std::size_t i) {
  require(n >= 1 && i >= 1 && i <= n, ErrorKind::Config, "beta oracle: need 1 <= i <= n");
  a_ = static_cast<double>(i);
  b_ = static_cast<double>(n - i + 1);
}

double BetaOrderOracle::mean() const { return a_ / (a_ + b_); }

double BetaOrderOracle::variance() const {
  const double s = a_ + b_;
  return a_ * b_ / (s * s * (s + 1.0));
}

double BetaOrderOracle::cdf(double p) const {
  if (p <= 0.0) return 0.0;
  if (p >= 1.0) return 1.0;
  return boost::math::cdf(boost::math::beta_distribution<double>(a_, b_), p);
}

double BetaOrderOracle::quantile(double q) const {
  require(q >= 0.0 && q <= 1.0, ErrorKind::Domain, "beta oracle: q must lie in [0,1]");
  return boost::math::quantile(boost::math::beta_distribution<double>(a_, b_), q);
}

}  // namespace fidnp
