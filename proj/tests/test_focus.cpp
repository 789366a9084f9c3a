#include <doctest.h>

#include <cmath>
#include <limits>

#include "fidnp/coverage.hpp"
#include "fidnp/error.hpp"
#include "fidnp/focus.hpp"
#include "fidnp/sampling.hpp"
#include "fidnp/stats.hpp"

using namespace fidnp;

namespace {

FiducialScalarSample from_values(std::vector<double> v, FocusParameter focus = CdfAt{1.0, {}}) {
  FiducialScalarSample s{std::move(focus), std::move(v), {}};
  for (double x : s.values) s.finite.push_back(std::isfinite(x) ? 1 : 0);
  return s;
}

ErrorKind kind_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("no error raised");
  return ErrorKind::Io;
}

}  // namespace

TEST_SUITE("focus") {

TEST_CASE("focus validation and description") {
  CHECK_THROWS_AS(validate(CdfAt{0.0, {}}), Error);
  CHECK_THROWS_AS(validate(Quantile{1.0, {}}), Error);
  CHECK_THROWS_AS(validate(QuantileDiff{0.0, "a", "b"}), Error);
  CHECK(describe(QuantileDiff{0.5, "B", "A"}) == "quantile_diff(0.5,B-A)");
  CHECK(describe(CdfAt{2.5, {}}) == "cdf_at(2.5)");
  CHECK(is_difference(CdfDiffAt{1.0, "a", "b"}));
  CHECK_FALSE(is_difference(SurvivalAt{1.0, {}}));
}

TEST_CASE("CdfAt at a knot reproduces the u column bit for bit") {
  const auto s = ObservedSample::make({0.4, 1.0, 1.9, 3.5});
  for (auto rule : {SelectionRule::StepLower, SelectionRule::LogLinear, SelectionRule::MonotoneSpline}) {
    const std::vector<FiducialEnsemble> ens{fit_ensemble(s, rule, 300, RngStream(9, 0))};
    for (std::size_t i = 0; i < 4; ++i) {
      const auto f = extract(ens, CdfAt{s.values[i], {}});
      for (std::size_t j = 0; j < 300; ++j) CHECK(f.values[j] == ens[0].u_row(j)[i]);
    }
  }
}

TEST_CASE("difference of a group with itself is zero") {
  GroupedData g{{ObservedSample::make({1.0, 2.0, 3.0}, "A")}};
  const auto ens = fit_joint(g, SelectionRule::LogLinear, 100, RngStream(1, 0));
  const auto d = extract(ens, QuantileDiff{0.5, "A", "A"});
  for (double v : d.values) CHECK(v == 0.0);
}

TEST_CASE("extract reports configuration errors") {
  const auto a = fit_ensemble(ObservedSample::make({1.0}, "a"), SelectionRule::LogLinear, 10, RngStream(1, 0));
  const auto b = fit_ensemble(ObservedSample::make({2.0}, "b"), SelectionRule::LogLinear, 11, RngStream(1, 0));
  const std::vector<FiducialEnsemble> mismatched{a, b};
  CHECK(kind_of([&] { extract(mismatched, CdfAt{1.0, "a"}); }) == ErrorKind::Config);
  const std::vector<FiducialEnsemble> one{a};
  CHECK(kind_of([&] { extract(one, CdfAt{1.0, "zzz"}); }) == ErrorKind::Config);
  CHECK(kind_of([&] { extract(one, QuantileDiff{0.5, {}, {}}); }) == ErrorKind::Config);
}

TEST_CASE("StepLower fiducial of F(t) between knots 3 and 4 is Beta(3, n-2)") {
  const auto s = ObservedSample::make({0.5, 1.0, 1.5, 2.0, 2.5});
  const std::vector<FiducialEnsemble> ens{fit_ensemble(s, SelectionRule::StepLower, 10000, RngStream(77, 0))};
  const auto f = extract(ens, CdfAt{1.75, {}});
  const BetaOrderOracle beta(5, 3);
  CHECK(stats::ks_statistic(f.values, [&](double p) { return beta.cdf(p); }) < stats::ks_critical_1pct(10000));
}

TEST_CASE("interval uses the type-7 empirical quantile") {
  std::vector<double> v;
  for (int i = 1; i <= 100; ++i) v.push_back(i);
  const auto iv = interval(from_values(v), 0.5);
  CHECK(iv.lower == doctest::Approx(25.75).epsilon(1e-15));
  CHECK(iv.upper == doctest::Approx(75.25).epsilon(1e-15));
  CHECK(iv.method == "equal-tailed");

  const auto c = interval(from_values(std::vector<double>(40, 3.25)), 0.9);
  CHECK(c.lower == 3.25);
  CHECK(c.upper == 3.25);
  CHECK_THROWS_AS(interval(from_values(v), 1.0), Error);
}

TEST_CASE("intervals are nested in the level") {
  RngStream rng(5, 0);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<double> v(20 + rng.next_u64() % 300);
    for (auto& x : v) x = rng.normal();
    const auto s = from_values(v);
    double prev_lo = std::numeric_limits<double>::infinity();
    double prev_hi = -std::numeric_limits<double>::infinity();
    for (double level = 0.05; level < 0.999; level += 0.05) {
      const auto iv = interval(s, level);
      CHECK(iv.lower <= iv.upper);
      CHECK(iv.lower <= prev_lo);
      CHECK(iv.upper >= prev_hi);
      prev_lo = iv.lower;
      prev_hi = iv.upper;
    }
  }
}

TEST_CASE("interval with too few finite draws names the sentinel count") {
  std::vector<double> v(30, std::numeric_limits<double>::infinity());
  for (int i = 0; i < 10; ++i) v[i] = i;
  try {
    interval(from_values(v, Quantile{0.9, {}}), 0.9);
    FAIL("expected an inference error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Inference);
    CHECK(std::string(e.what()).find("20 sentinel") != std::string::npos);
  }
}

TEST_CASE("sentinels are counted and excluded") {
  const auto s = ObservedSample::make({1.0, 2.0, 3.0});
  const std::vector<FiducialEnsemble> ens{fit_ensemble(s, SelectionRule::StepLower, 2000, RngStream(3, 0))};
  const auto q = extract(ens, Quantile{0.9, {}});
  // P(u_3 < 0.9) = 0.9^3 of replicates cannot reach 0.9.
  const double frac = static_cast<double>(q.sentinel_count()) / 2000.0;
  CHECK(frac == doctest::Approx(0.729).epsilon(0.05));
  const auto sum = summarize(q);
  CHECK(sum.sentinels == q.sentinel_count());
  CHECK(sum.m_effective + sum.sentinels == 2000);
  CHECK(std::isfinite(sum.mean));
}

TEST_CASE("p-value conventions") {
  const auto pos = from_values({0.1, 0.2, 0.5, 1.0}, QuantileDiff{0.5, "a", "b"});
  CHECK(p_value(pos, Hypothesis::Greater).fiducial_probability == 0.0);
  CHECK(p_value(pos, Hypothesis::Less).fiducial_probability == 1.0);
  CHECK(p_value(pos, Hypothesis::TwoSided).fiducial_probability == 0.0);

  RngStream rng(8, 0);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<double> v(40);
    for (auto& x : v) x = rng.normal() + 0.3;
    v[3] = 0.0;
    const auto s = from_values(v, CdfDiffAt{1.0, "a", "b"});
    const double g = p_value(s, Hypothesis::Greater).fiducial_probability;
    const double l = p_value(s, Hypothesis::Less).fiducial_probability;
    CHECK(p_value(s, Hypothesis::TwoSided).fiducial_probability == std::min(1.0, 2.0 * std::min(g, l)));
  }

  CHECK(kind_of([&] { p_value(from_values({1.0, 2.0}), Hypothesis::Greater); }) == ErrorKind::Usage);

  auto with_inf = from_values({1.0, -1.0, std::numeric_limits<double>::infinity()}, QuantileDiff{0.5, "a", "b"});
  const auto rep = p_value(with_inf, Hypothesis::Greater);
  CHECK(rep.m_effective == 2);
  CHECK(rep.fiducial_probability == 0.5);
}

TEST_CASE("p-values for identical and shifted groups") {
  RngStream data(20, 0);
  const auto x = sample_true(TrueDistribution(Exponential{1.0}), data, 30);
  GroupedData same{{ObservedSample::make(x, "A"), ObservedSample::make(x, "B")}};
  const auto ens = fit_joint(same, SelectionRule::LogLinear, 10000, RngStream(21, 0));
  const auto d = extract(ens, QuantileDiff{0.5, "B", "A"});
  CHECK(std::abs(p_value(d, Hypothesis::Greater).fiducial_probability - 0.5) < 0.02);
  CHECK(p_value(d, Hypothesis::TwoSided).fiducial_probability > 0.96);

  RngStream d1(22, 0);
  RngStream d2(23, 0);
  GroupedData apart{{ObservedSample::make(sample_true(TrueDistribution(Exponential{1.0}), d1, 200), "one"),
                     ObservedSample::make(sample_true(TrueDistribution(Exponential{2.0}), d2, 200), "two")}};
  const auto e2 = fit_joint(apart, SelectionRule::LogLinear, 4000, RngStream(24, 0));
  const auto diff = extract(e2, QuantileDiff{0.5, "one", "two"});
  CHECK(p_value(diff, Hypothesis::Greater).fiducial_probability < 0.05);
}

TEST_CASE("summaries") {
  const auto c = summarize(from_values(std::vector<double>(25, 2.0)));
  CHECK(c.mean == 2.0);
  CHECK(c.sd == 0.0);
  const auto two = summarize(from_values({0.0, 1.0}));
  CHECK(two.mean == 0.5);
  CHECK(two.sd == doctest::Approx(0.7071067811865476).epsilon(1e-15));
  CHECK(two.quantiles.size() == std::size(kSummaryProbabilities));
  const double inf = std::numeric_limits<double>::infinity();
  CHECK(kind_of([&] { summarize(from_values({inf, inf}, Quantile{0.9, {}})); }) == ErrorKind::Inference);
}

TEST_CASE("step rules are equivariant under increasing transforms of the data") {
  auto g = [](double x) { return x * x + 3.0 * x; };
  RngStream data(90, 0);
  const auto x = sample_true(TrueDistribution(Weibull{2.0, 1.0}), data, 25);
  std::vector<double> gx;
  for (double v : x) gx.push_back(g(v));
  for (auto rule : {SelectionRule::StepLower, SelectionRule::StepUpper}) {
    const std::vector<FiducialEnsemble> e{fit_ensemble(ObservedSample::make(x), rule, 500, RngStream(91, 0))};
    const std::vector<FiducialEnsemble> eg{fit_ensemble(ObservedSample::make(gx), rule, 500, RngStream(91, 0))};
    for (double t : {0.2, 0.7, 1.3, 2.9}) {
      CHECK(extract(e, CdfAt{t, {}}).values == extract(eg, CdfAt{g(t), {}}).values);
    }
    for (double a : {0.1, 0.5, 0.95}) {
      const auto q = extract(e, Quantile{a, {}}).values;
      const auto qg = extract(eg, Quantile{a, {}}).values;
      for (std::size_t j = 0; j < q.size(); ++j) CHECK(qg[j] == g(q[j]));
    }
  }
}

TEST_CASE("shifting one group by +1 shifts the quantile difference draw by draw") {
  const std::vector<double> a{0.3, 0.8, 1.1, 1.9, 2.6};
  std::vector<double> b1;
  for (double v : a) b1.push_back(v + 1.0);
  for (auto rule : {SelectionRule::StepLower, SelectionRule::StepUpper}) {
    const GroupedData base{{ObservedSample::make(a, "a"), ObservedSample::make(a, "b")}};
    const GroupedData shifted{{ObservedSample::make(a, "a"), ObservedSample::make(b1, "b")}};
    const auto e0 = fit_joint(base, rule, 2000, RngStream(17, 0));
    const auto e1 = fit_joint(shifted, rule, 2000, RngStream(17, 0));
    const auto d0 = extract(e0, QuantileDiff{0.5, "b", "a"});
    const auto d1 = extract(e1, QuantileDiff{0.5, "b", "a"});
    const auto qb = extract(e0, Quantile{0.5, "b"});
    std::size_t boundary = 0;
    for (std::size_t j = 0; j < d0.size(); ++j) {
      CHECK(d0.finite[j] == d1.finite[j]);
      if (!d0.finite[j]) continue;
      // StepUpper puts alpha <= u_1 at the support boundary 0, which a shift does not move.
      if (qb.values[j] == 0.0) {
        ++boundary;
        CHECK(rule == SelectionRule::StepUpper);
        continue;
      }
      CHECK(d1.values[j] - d0.values[j] == doctest::Approx(1.0).epsilon(1e-12));
    }
    MESSAGE(to_string(rule) << ": " << boundary << " boundary draws of " << d0.size());
  }
}

}  // TEST_SUITE
