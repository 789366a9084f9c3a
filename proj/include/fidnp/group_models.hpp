#pragma once

// Parametric fiducial models x = theta * u.
//
// SimpleScaleModel: x = theta * u on the positive reals. The map is
// invertible, so u^x has the law of u and theta^x = x / u.
//
// LocationModel: x = theta + u in R^d with theta restricted to a subspace
// and u ~ N(0, sigma^2 I). With P the orthogonal projection onto the
// subspace and Q = I - P, u^x follows the law of u given Qu = Qx, and
// theta^x = x - u^x ~ N(Px, sigma^2 P).

#include <cstddef>
#include <variant>

#include <Eigen/Dense>

#include "fidnp/rng.hpp"

namespace fidnp {

struct UnitNoise {};  // u == 1
struct ExponentialNoise {};
struct LogNormalNoise {
  double mu = 0.0;
  double sigma = 1.0;
};

using ScaleNoiseLaw = std::variant<UnitNoise, ExponentialNoise, LogNormalNoise>;

class SimpleScaleModel {
 public:
  explicit SimpleScaleModel(ScaleNoiseLaw law);

  double draw_noise(RngStream& rng) const;
  double noise_cdf(double u) const;

  /// Fiducial CDF of theta given x: P(x / u <= s) = P(u >= x / s).
  double fiducial_cdf(double x, double s) const;

 private:
  ScaleNoiseLaw law_;
};

/// theta^x = x / u with u drawn from the noise law. x must be > 0.
double simple_fiducial_draw(const SimpleScaleModel& model, double x, RngStream& rng);

class LocationModel {
 public:
  /// `design` is d x p; its column span is the parameter subspace. Columns are
  /// orthonormalized by modified Gram-Schmidt with one re-orthogonalization
  /// pass; numerically dependent columns are dropped.
  LocationModel(const Eigen::MatrixXd& design, double sigma);

  Eigen::Index dimension() const noexcept { return projection_.rows(); }
  Eigen::Index rank() const noexcept { return basis_.cols(); }
  double sigma() const noexcept { return sigma_; }

  const Eigen::MatrixXd& basis() const noexcept { return basis_; }
  const Eigen::MatrixXd& projection() const noexcept { return projection_; }
  const Eigen::MatrixXd& complement() const noexcept { return complement_; }

  /// max(|P^2 - P|, |PQ|) entrywise.
  double projection_defect() const;

  bool contains(const Eigen::VectorXd& v, double tol = 1e-10) const;

 private:
  Eigen::MatrixXd basis_;
  Eigen::MatrixXd projection_;
  Eigen::MatrixXd complement_;
  double sigma_;
};

struct LocationFiducialDraw {
  Eigen::VectorXd theta;
};

/// u^x = Qx + Pw with w ~ N(0, sigma^2 I_d); consumes d normal draws.
Eigen::VectorXd conditional_noise_draw(const LocationModel& model, const Eigen::VectorXd& x, RngStream& rng);

/// theta^x = x - u^x.
LocationFiducialDraw location_fiducial_draw(const LocationModel& model, const Eigen::VectorXd& x, RngStream& rng);

/// Posterior under the flat (right-invariant) prior, sampled in two stages:
/// u given x, then theta given (u, x), which is the point mass at x - u.
LocationFiducialDraw bayes_posterior_draw(const LocationModel& model, const Eigen::VectorXd& x, RngStream& rng);

struct LocationCoverage {
  double level = 0.95;
  std::size_t replications = 0;
  double coverage = 0.0;
  double width = 0.0;  // 2 z sigma |c|, identical in every replication
  double binomial_sd = 0.0;
};

/// Repeatedly simulates x = true_theta + noise (replication r uses
/// fork_stream(rng, r)) and scores the equal-tailed fiducial interval for
/// c'theta, which is exactly normal: c'Px +- z sigma |Pc|.
LocationCoverage location_coverage_check(const LocationModel& model, const Eigen::VectorXd& true_theta,
                                         const Eigen::VectorXd& functional, double level,
                                         std::size_t replications, const RngStream& rng,
                                         std::size_t threads = 1);

}  // namespace fidnp
