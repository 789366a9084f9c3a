#include <doctest.h>

#include <cmath>
#include <numbers>

#include "fidnp/coverage.hpp"
#include "fidnp/ensemble.hpp"
#include "fidnp/error.hpp"
#include "fidnp/focus.hpp"
#include "fidnp/sampling.hpp"
#include "fidnp/stats.hpp"
#include "oracles.hpp"
#include "test_support.hpp"

using namespace fidnp;

namespace {

std::vector<double> column(const FiducialEnsemble& e, std::size_t col) {
  std::vector<double> out;
  for (std::size_t j = 0; j < e.draws(); ++j) out.push_back(e.u_row(j)[col]);
  return out;
}

double correlation(const std::vector<double>& x, const std::vector<double>& y) {
  const double mx = stats::mean(x);
  const double my = stats::mean(y);
  double c = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) c += (x[i] - mx) * (y[i] - my);
  return c / (static_cast<double>(x.size() - 1) * stats::sd(x) * stats::sd(y));
}

}  // namespace

TEST_SUITE("ensemble") {

TEST_CASE("observed samples are validated") {
  CHECK_THROWS_AS(ObservedSample::make({}), Error);
  CHECK_THROWS_AS(ObservedSample::make({1.0, 0.0}), Error);
  CHECK_THROWS_AS(ObservedSample::make({1.0, -2.0}), Error);
  CHECK_THROWS_AS(ObservedSample::make({1.0, std::nan("")}), Error);
  const auto s = ObservedSample::make({3.0, 1.0, 2.0}, "g");
  CHECK(s.values == std::vector<double>{1.0, 2.0, 3.0});
  try {
    ObservedSample::make({});
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Config);
  }
}

TEST_CASE("m must be positive") {
  const auto s = ObservedSample::make({1.0});
  CHECK_THROWS_AS(fit_ensemble(s, SelectionRule::LogLinear, 0, RngStream(1, 0)), Error);
}

TEST_CASE("n = 1: the fiducial of F(x1) is Uniform(0,1)") {
  const auto s = ObservedSample::make({1.0});
  const auto e = fit_ensemble(s, SelectionRule::LogLinear, 10000, RngStream(31, 0));
  std::vector<double> f;
  for (std::size_t j = 0; j < e.draws(); ++j) f.push_back(e.curve(j).cdf(1.0));
  CHECK(stats::ks_uniform(f) < stats::ks_critical_1pct(f.size()));
}

TEST_CASE("fixed seed gives bitwise identical ensembles, serial or parallel") {
  const auto s = ObservedSample::make({0.3, 1.1, 2.4, 2.4, 5.0});
  const auto a = fit_ensemble(s, SelectionRule::MonotoneSpline, 8, RngStream(5, 0));
  const auto b = fit_ensemble(s, SelectionRule::MonotoneSpline, 8, RngStream(5, 0));
  CHECK(std::ranges::equal(a.u_matrix(), b.u_matrix()));

  const auto serial = fit_ensemble(s, SelectionRule::LogLinear, 1000, RngStream(6, 0), 1);
  const auto parallel = fit_ensemble(s, SelectionRule::LogLinear, 1000, RngStream(6, 0), 4);
  CHECK(std::ranges::equal(serial.u_matrix(), parallel.u_matrix()));

  const auto other = fit_ensemble(s, SelectionRule::LogLinear, 8, RngStream(7, 0));
  CHECK_FALSE(std::ranges::equal(a.u_matrix(), other.u_matrix()));
}

TEST_CASE("replicate j draws from fork(rng, j)") {
  const auto s = ObservedSample::make({1.0, 2.0, 3.0});
  const RngStream root(88, 0);
  const auto e = fit_ensemble(s, SelectionRule::LogLinear, 5, root);
  for (std::size_t j = 0; j < 5; ++j) {
    RngStream child = fork_stream(root, j);
    const auto u = sample_uniform_order(child, 3).values;
    CHECK(std::ranges::equal(e.u_row(j), u));
  }
}

TEST_CASE("ties merge into one knot with the largest u") {
  const auto s = ObservedSample::make({1.0, 2.0, 2.0, 3.0});
  const auto e = fit_ensemble(s, SelectionRule::LogLinear, 20, RngStream(2, 0));
  REQUIRE(e.knot_xs().size() == 3);
  CHECK(e.knot_column(1) == 2);
  for (std::size_t j = 0; j < e.draws(); ++j) {
    const auto c = e.curve(j);
    CHECK(std::ranges::equal(c.knots().xs, e.knot_xs()));
    CHECK(c.cdf(2.0) == e.u_row(j)[2]);
    CHECK(c.cdf(1.0) == e.u_row(j)[0]);
  }
}

TEST_CASE("fiducial marginal at each data point is Beta(i, n-i+1) for every rule") {
  const std::size_t n = 6;
  const std::size_t m = 10000;
  RngStream data_rng(4, 0);
  const auto s = ObservedSample::make(sample_true(TrueDistribution(Exponential{1.0}), data_rng, n));
  for (auto rule : testing_support::kAllRules) {
    const auto e = fit_ensemble(s, rule, m, RngStream(1 + static_cast<int>(rule), 0));
    for (std::size_t i = 1; i <= n; ++i) {
      const std::vector<FiducialEnsemble> ens{e};
      const auto f = extract(ens, CdfAt{s.values[i - 1], {}});
      const double se = std::sqrt(oracle::uniform_order_variance(i, n) / m);
      CHECK(std::abs(stats::mean(f.values) - oracle::uniform_order_mean(i, n)) < 4.0 * se);
      const BetaOrderOracle beta(n, i);
      CHECK(stats::ks_statistic(f.values, [&](double p) { return beta.cdf(p); }) < stats::ks_critical_1pct(m));
    }
  }
}

TEST_CASE("StepLower fiducial of F(median) matches the order-statistic oracle") {
  const std::size_t n = 50;
  const std::size_t m = 2000;
  RngStream data_rng(50, 0);
  const auto s = ObservedSample::make(sample_true(TrueDistribution(Exponential{1.0}), data_rng, n));
  const double t = std::numbers::ln2;
  const auto i = static_cast<std::size_t>(std::upper_bound(s.values.begin(), s.values.end(), t) - s.values.begin());
  REQUIRE(i >= 1);
  const std::vector<FiducialEnsemble> ens{fit_ensemble(s, SelectionRule::StepLower, m, RngStream(51, 0))};
  const auto f = extract(ens, CdfAt{t, {}});
  const double se = std::sqrt(oracle::uniform_order_variance(i, n) / m);
  CHECK(std::abs(stats::mean(f.values) - oracle::uniform_order_mean(i, n)) < 4.0 * se);
}

TEST_CASE("exponential route: deterministic map and equality in law") {
  // v = [log 2, log 4] maps to u = [0.5, 0.75].
  const auto u = exp_order_to_uniform_order({{std::numbers::ln2, 2.0 * std::numbers::ln2}}).values;
  CHECK(u[0] == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(u[1] == doctest::Approx(0.75).epsilon(1e-15));
  const auto s = ObservedSample::make({1.0, 2.0});
  const FiducialEnsemble via_u(s, SelectionRule::LogLinear, RngStream(), 1, {0.5, 0.75});
  const FiducialEnsemble via_v(s, SelectionRule::LogLinear, RngStream(), 1, u);
  for (double t : {0.4, 1.0, 1.5, 2.0, 3.0}) {
    CHECK(via_u.curve(0).cdf(t) == doctest::Approx(via_v.curve(0).cdf(t)).epsilon(1e-14));
  }

  // m = 1 with the same underlying uniform draws: the routes coincide up to rounding.
  const auto sample = ObservedSample::make({0.5, 0.9, 1.4, 3.3});
  const auto a = fit_ensemble(sample, SelectionRule::LogLinear, 1, RngStream(12, 0));
  const auto b = fit_ensemble_via_exponential(sample, SelectionRule::LogLinear, 1, RngStream(12, 0));
  for (std::size_t i = 0; i < 4; ++i) CHECK(a.u_row(0)[i] == doctest::Approx(b.u_row(0)[i]).epsilon(1e-14));

  // Independent streams: equal in law on several functionals.
  RngStream data_rng(30, 0);
  const auto s30 = ObservedSample::make(sample_true(TrueDistribution(Weibull{1.5, 1.0}), data_rng, 30));
  const std::vector<FiducialEnsemble> eu{fit_ensemble(s30, SelectionRule::LogLinear, 5000, RngStream(102, 0))};
  const std::vector<FiducialEnsemble> ev{
      fit_ensemble_via_exponential(s30, SelectionRule::LogLinear, 5000, RngStream(202, 0))};
  for (const FocusParameter& f : {FocusParameter{CdfAt{0.8, {}}}, FocusParameter{Quantile{0.3, {}}},
                                  FocusParameter{SurvivalAt{1.7, {}}}}) {
    CHECK(stats::ks_two_sample(extract(eu, f).values, extract(ev, f).values) <
          stats::ks_critical_1pct(5000, 5000));
  }
}

TEST_CASE("joint fiducial over groups") {
  GroupedData one{{ObservedSample::make({1.0, 2.0, 4.0}, "a")}};
  const auto joint = fit_joint(one, SelectionRule::LogLinear, 50, RngStream(3, 0));
  const auto single = fit_ensemble(one.groups[0], SelectionRule::LogLinear, 50, RngStream(3, 0));
  CHECK(std::ranges::equal(joint[0].u_matrix(), single.u_matrix()));

  GroupedData dup{{ObservedSample::make({1.0}, "a"), ObservedSample::make({2.0}, "a")}};
  try {
    fit_joint(dup, SelectionRule::LogLinear, 10, RngStream(3, 0));
    FAIL("duplicate labels accepted");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Config);
  }
}

TEST_CASE("joint fiducial: identical groups are exchangeable and independent") {
  const std::size_t m = 10000;
  RngStream data_rng(41, 0);
  const auto x = sample_true(TrueDistribution(Exponential{1.0}), data_rng, 40);
  GroupedData g{{ObservedSample::make(x, "A"), ObservedSample::make(x, "B")}};
  const auto ens = fit_joint(g, SelectionRule::LogLinear, m, RngStream(42, 0));
  const auto diff = extract(ens, QuantileDiff{0.5, "A", "B"});
  std::size_t greater = 0;
  for (double d : diff.values) greater += d > 0.0 ? 1 : 0;
  CHECK(std::abs(static_cast<double>(greater) / m - 0.5) < 0.02);

  const auto fa = extract(ens, CdfAt{1.0, "A"});
  const auto fb = extract(ens, CdfAt{1.0, "B"});
  CHECK(std::abs(correlation(fa.values, fb.values)) < 4.0 / std::sqrt(static_cast<double>(m)));
}

TEST_CASE("joint fiducial separates Exponential(1) from Exponential(2) medians") {
  RngStream d1(61, 0);
  RngStream d2(62, 0);
  GroupedData g{{ObservedSample::make(sample_true(TrueDistribution(Exponential{1.0}), d1, 200), "slow"),
                 ObservedSample::make(sample_true(TrueDistribution(Exponential{2.0}), d2, 200), "fast")}};
  const auto ens = fit_joint(g, SelectionRule::LogLinear, 4000, RngStream(63, 0));
  const auto diff = extract(ens, QuantileDiff{0.5, "slow", "fast"});
  std::size_t greater = 0;
  for (double d : diff.values) greater += d > 0.0 ? 1 : 0;
  CHECK(static_cast<double>(greater) / 4000.0 > 0.95);
}

}  // TEST_SUITE
