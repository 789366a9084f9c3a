#include "fidnp/sampling.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>

#include <boost/math/distributions/normal.hpp>

#include "fidnp/error.hpp"

namespace fidnp {

UniformOrderSample sample_uniform_order(RngStream& rng, std::size_t n) {
  UniformOrderSample out;
  out.values.resize(n);
  for (auto& u : out.values) u = rng.uniform();
  std::sort(out.values.begin(), out.values.end());
  return out;
}

ExponentialOrderSample sample_exponential_order(RngStream& rng, std::size_t n) {
  ExponentialOrderSample out;
  out.values.resize(n);
  for (auto& v : out.values) v = -std::log1p(-rng.uniform());
  std::sort(out.values.begin(), out.values.end());
  return out;
}

UniformOrderSample exp_order_to_uniform_order(const ExponentialOrderSample& v) {
  UniformOrderSample out;
  out.values.reserve(v.values.size());
  for (double x : v.values) {
    out.values.push_back(std::clamp(-std::expm1(-x), kUnitEpsilon, 1.0 - kUnitEpsilon));
  }
  return out;
}

double normal_quantile(double p) {
  require(p > 0.0 && p < 1.0, ErrorKind::Domain, "normal_quantile: p must lie in (0,1)");
  return boost::math::quantile(boost::math::normal_distribution<double>(), p);
}

namespace {

bool positive(double v) { return std::isfinite(v) && v > 0.0; }

struct Validate {
  void operator()(const Exponential& d) const {
    require(positive(d.rate), ErrorKind::Parameter, "exponential rate must be > 0");
  }
  void operator()(const Weibull& d) const {
    require(positive(d.shape) && positive(d.scale), ErrorKind::Parameter,
            "weibull shape and scale must be > 0");
  }
  void operator()(const LogNormal& d) const {
    require(std::isfinite(d.mu), ErrorKind::Parameter, "lognormal mu must be finite");
    require(positive(d.sigma), ErrorKind::Parameter, "lognormal sigma must be > 0");
  }
};

std::string fmt_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::vector<double> parse_numbers(const std::string& text, const std::string& spec) {
  std::vector<double> out;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t comma = std::min(text.find(',', pos), text.size());
    double v = 0.0;
    const char* first = text.data() + pos;
    const char* last = text.data() + comma;
    auto res = std::from_chars(first, last, v);
    require(res.ec == std::errc() && res.ptr == last && first != last, ErrorKind::Parameter,
            "malformed distribution spec '" + spec + "'");
    out.push_back(v);
    pos = comma + 1;
  }
  return out;
}

}  // namespace

TrueDistribution::TrueDistribution(Kind kind) : kind_(kind) { std::visit(Validate{}, kind_); }

double TrueDistribution::cdf(double t) const {
  if (t <= 0.0) return 0.0;
  struct {
    double t;
    double operator()(const Exponential& d) const { return -std::expm1(-d.rate * t); }
    double operator()(const Weibull& d) const { return -std::expm1(-std::pow(t / d.scale, d.shape)); }
    double operator()(const LogNormal& d) const {
      return boost::math::cdf(boost::math::normal_distribution<double>(), (std::log(t) - d.mu) / d.sigma);
    }
  } visitor{t};
  return std::visit(visitor, kind_);
}

double TrueDistribution::survival(double t) const {
  if (t <= 0.0) return 1.0;
  struct {
    double t;
    double operator()(const Exponential& d) const { return std::exp(-d.rate * t); }
    double operator()(const Weibull& d) const { return std::exp(-std::pow(t / d.scale, d.shape)); }
    double operator()(const LogNormal& d) const {
      boost::math::normal_distribution<double> z;
      return boost::math::cdf(boost::math::complement(z, (std::log(t) - d.mu) / d.sigma));
    }
  } visitor{t};
  return std::visit(visitor, kind_);
}

double TrueDistribution::quantile(double p) const {
  require(p > 0.0 && p < 1.0, ErrorKind::Domain, "quantile: p must lie in (0,1)");
  struct {
    double p;
    double operator()(const Exponential& d) const { return -std::log1p(-p) / d.rate; }
    double operator()(const Weibull& d) const {
      return d.scale * std::pow(-std::log1p(-p), 1.0 / d.shape);
    }
    double operator()(const LogNormal& d) const {
      return std::exp(d.mu + d.sigma * normal_quantile(p));
    }
  } visitor{p};
  return std::visit(visitor, kind_);
}

double TrueDistribution::mean() const {
  struct {
    double operator()(const Exponential& d) const { return 1.0 / d.rate; }
    double operator()(const Weibull& d) const { return d.scale * std::tgamma(1.0 + 1.0 / d.shape); }
    double operator()(const LogNormal& d) const { return std::exp(d.mu + 0.5 * d.sigma * d.sigma); }
  } visitor;
  return std::visit(visitor, kind_);
}

double TrueDistribution::draw(RngStream& rng) const { return quantile(rng.uniform()); }

std::string TrueDistribution::describe() const {
  struct {
    std::string operator()(const Exponential& d) const { return "exp:" + fmt_double(d.rate); }
    std::string operator()(const Weibull& d) const {
      return "weibull:" + fmt_double(d.shape) + "," + fmt_double(d.scale);
    }
    std::string operator()(const LogNormal& d) const {
      return "lognormal:" + fmt_double(d.mu) + "," + fmt_double(d.sigma);
    }
  } visitor;
  return std::visit(visitor, kind_);
}

TrueDistribution TrueDistribution::parse(const std::string& spec) {
  const auto colon = spec.find(':');
  require(colon != std::string::npos, ErrorKind::Parameter,
          "distribution spec '" + spec + "' must look like family:params");
  const std::string family = spec.substr(0, colon);
  const auto params = parse_numbers(spec.substr(colon + 1), spec);
  if (family == "exp" || family == "exponential") {
    require(params.size() == 1, ErrorKind::Parameter, "exp takes one parameter (rate)");
    return TrueDistribution(Exponential{params[0]});
  }
  if (family == "weibull") {
    require(params.size() == 2, ErrorKind::Parameter, "weibull takes two parameters (shape,scale)");
    return TrueDistribution(Weibull{params[0], params[1]});
  }
  if (family == "lognormal") {
    require(params.size() == 2, ErrorKind::Parameter, "lognormal takes two parameters (mu,sigma)");
    return TrueDistribution(LogNormal{params[0], params[1]});
  }
  fail(ErrorKind::Parameter, "unknown distribution family '" + family + "'");
}

std::vector<double> sample_true(const TrueDistribution& dist, RngStream& rng, std::size_t n) {
  std::vector<double> out(n);
  for (auto& x : out) x = dist.draw(rng);
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace fidnp
