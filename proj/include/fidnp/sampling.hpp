#pragma once

#include <cstddef>
#include <string>
#include <variant>
#include <vector>

#include "fidnp/rng.hpp"

namespace fidnp {

/// Sorted iid Uniform(0,1) draws, each in [2^-53, 1 - 2^-53].
struct UniformOrderSample {
  std::vector<double> values;
};

/// Sorted iid standard exponential draws.
struct ExponentialOrderSample {
  std::vector<double> values;
};

/// Draws n uniforms from `rng` (exactly n draws) and sorts them.
UniformOrderSample sample_uniform_order(RngStream& rng, std::size_t n);

/// Draws n exponentials by inversion, v = -log(1 - p), and sorts them.
ExponentialOrderSample sample_exponential_order(RngStream& rng, std::size_t n);

/// u_i = 1 - exp(-v_i), clamped into [2^-53, 1 - 2^-53]. Order preserving.
UniformOrderSample exp_order_to_uniform_order(const ExponentialOrderSample& v);

// Ground-truth lifetime distributions for simulation.

struct Exponential {
  double rate = 1.0;
};

struct Weibull {
  double shape = 1.0;
  double scale = 1.0;
};

struct LogNormal {
  double mu = 0.0;
  double sigma = 1.0;
};

class TrueDistribution {
 public:
  using Kind = std::variant<Exponential, Weibull, LogNormal>;

  /// Throws ErrorKind::Parameter unless every parameter is strictly positive
  /// (mu of LogNormal is unrestricted).
  explicit TrueDistribution(Kind kind);

  const Kind& kind() const noexcept { return kind_; }

  double cdf(double t) const;
  double survival(double t) const;
  double quantile(double p) const;
  double mean() const;

  /// Inverse-CDF draw from one uniform.
  double draw(RngStream& rng) const;

  /// Spec string, e.g. "exp:2", "weibull:2,1", "lognormal:0,0.5".
  std::string describe() const;

  /// Parses the form produced by describe().
  static TrueDistribution parse(const std::string& spec);

 private:
  Kind kind_;
};

/// n iid draws sorted ascending; all strictly positive.
std::vector<double> sample_true(const TrueDistribution& dist, RngStream& rng, std::size_t n);

/// Standard normal quantile, Phi^{-1}(p).
double normal_quantile(double p);

}  // namespace fidnp
