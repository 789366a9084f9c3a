#include "fidnp/group_models.hpp"

#include <cmath>
#include <vector>

#include "fidnp/error.hpp"
#include "fidnp/parallel.hpp"
#include "fidnp/sampling.hpp"

namespace fidnp {

SimpleScaleModel::SimpleScaleModel(ScaleNoiseLaw law) : law_(law) {
  if (const auto* ln = std::get_if<LogNormalNoise>(&law_)) {
    require(std::isfinite(ln->mu) && ln->sigma > 0.0, ErrorKind::Parameter, "log-normal noise needs sigma > 0");
  }
}

double SimpleScaleModel::draw_noise(RngStream& rng) const {
  struct {
    RngStream& rng;
    double operator()(UnitNoise) const { return 1.0; }
    double operator()(ExponentialNoise) const { return -std::log1p(-rng.uniform()); }
    double operator()(const LogNormalNoise& ln) const { return std::exp(ln.mu + ln.sigma * rng.normal()); }
  } visitor{rng};
  return std::visit(visitor, law_);
}

double SimpleScaleModel::noise_cdf(double u) const {
  struct {
    double u;
    double operator()(UnitNoise) const { return u >= 1.0 ? 1.0 : 0.0; }
    double operator()(ExponentialNoise) const { return u <= 0.0 ? 0.0 : -std::expm1(-u); }
    double operator()(const LogNormalNoise& ln) const {
      if (u <= 0.0) return 0.0;
      return 0.5 * std::erfc(-(std::log(u) - ln.mu) / (ln.sigma * std::sqrt(2.0)));
    }
  } visitor{u};
  return std::visit(visitor, law_);
}

double SimpleScaleModel::fiducial_cdf(double x, double s) const {
  require(x > 0.0, ErrorKind::Domain, "fiducial_cdf: x must be > 0");
  if (s <= 0.0) return 0.0;
  // P(u >= x/s); the noise laws used here are continuous except UnitNoise.
  const double q = x / s;
  if (std::holds_alternative<UnitNoise>(law_)) return q <= 1.0 ? 1.0 : 0.0;
  return 1.0 - noise_cdf(q);
}

double simple_fiducial_draw(const SimpleScaleModel& model, double x, RngStream& rng) {
  require(x > 0.0, ErrorKind::Domain, "simple_fiducial_draw: x must be > 0");
  return x / model.draw_noise(rng);
}

LocationModel::LocationModel(const Eigen::MatrixXd& design, double sigma) : sigma_(sigma) {
  require(design.rows() >= 1, ErrorKind::Config, "location model: dimension must be >= 1");
  require(std::isfinite(sigma) && sigma > 0.0, ErrorKind::Parameter, "location model: sigma must be > 0");
  require(design.allFinite(), ErrorKind::Config, "location model: design matrix has non-finite entries");

  const Eigen::Index d = design.rows();
  std::vector<Eigen::VectorXd> kept;
  for (Eigen::Index c = 0; c < design.cols(); ++c) {
    Eigen::VectorXd v = design.col(c);
    const double norm0 = v.norm();
    if (norm0 == 0.0) continue;
    for (int pass = 0; pass < 2; ++pass) {
      for (const auto& q : kept) v -= q.dot(v) * q;
    }
    const double norm = v.norm();
    if (norm <= 1e-12 * norm0) continue;
    kept.push_back(v / norm);
  }
  basis_.resize(d, static_cast<Eigen::Index>(kept.size()));
  for (std::size_t c = 0; c < kept.size(); ++c) basis_.col(static_cast<Eigen::Index>(c)) = kept[c];

  projection_ = basis_ * basis_.transpose();
  complement_ = Eigen::MatrixXd::Identity(d, d) - projection_;
  require(projection_defect() <= 1e-10, ErrorKind::Config, "location model: projection identities fail");
}

double LocationModel::projection_defect() const {
  const double idem = (projection_ * projection_ - projection_).cwiseAbs().maxCoeff();
  const double ortho = (projection_ * complement_).cwiseAbs().maxCoeff();
  return std::max(idem, ortho);
}

bool LocationModel::contains(const Eigen::VectorXd& v, double tol) const {
  return v.size() == dimension() && (complement_ * v).norm() <= tol * std::max(1.0, v.norm());
}

Eigen::VectorXd conditional_noise_draw(const LocationModel& model, const Eigen::VectorXd& x, RngStream& rng) {
  require(x.size() == model.dimension(), ErrorKind::Config,
          "observation has dimension " + std::to_string(x.size()) + ", model has " +
              std::to_string(model.dimension()));
  Eigen::VectorXd w(model.dimension());
  for (Eigen::Index i = 0; i < w.size(); ++i) w[i] = model.sigma() * rng.normal();
  return model.complement() * x + model.projection() * w;
}

LocationFiducialDraw location_fiducial_draw(const LocationModel& model, const Eigen::VectorXd& x, RngStream& rng) {
  const Eigen::VectorXd u = conditional_noise_draw(model, x, rng);
  return {x - u};
}

LocationFiducialDraw bayes_posterior_draw(const LocationModel& model, const Eigen::VectorXd& x, RngStream& rng) {
  // Stage 1: u from its conditional law given x.
  const Eigen::VectorXd u = conditional_noise_draw(model, x, rng);
  // Stage 2: theta given (u, x) is degenerate at the solution of x = theta + u.
  LocationFiducialDraw draw;
  draw.theta = x - u;
  return draw;
}

LocationCoverage location_coverage_check(const LocationModel& model, const Eigen::VectorXd& true_theta,
                                         const Eigen::VectorXd& functional, double level,
                                         std::size_t replications, const RngStream& rng, std::size_t threads) {
  require(level > 0.0 && level < 1.0, ErrorKind::Domain, "coverage level must lie in (0,1)");
  require(replications >= 1, ErrorKind::Config, "coverage needs at least one replication");
  require(model.contains(true_theta), ErrorKind::Config, "true theta does not lie in the parameter subspace");
  require(functional.size() == model.dimension(), ErrorKind::Config, "functional has the wrong dimension");
  require(model.contains(functional), ErrorKind::Config, "functional does not lie in the parameter subspace");

  const Eigen::VectorXd pc = model.projection() * functional;
  const double half = normal_quantile(0.5 * (1.0 + level)) * model.sigma() * pc.norm();
  const double truth = functional.dot(true_theta);

  std::vector<std::uint8_t> hit(replications);
  parallel_for(replications, threads, [&](std::size_t r) {
    RngStream s = fork_stream(rng, r);
    Eigen::VectorXd x(model.dimension());
    for (Eigen::Index i = 0; i < x.size(); ++i) x[i] = true_theta[i] + model.sigma() * s.normal();
    const double centre = pc.dot(x);
    hit[r] = (centre - half <= truth && truth <= centre + half) ? 1 : 0;
  });

  LocationCoverage out;
  out.level = level;
  out.replications = replications;
  std::size_t covered = 0;
  for (auto h : hit) covered += h;
  out.coverage = static_cast<double>(covered) / static_cast<double>(replications);
  out.width = 2.0 * half;
  out.binomial_sd = std::sqrt(level * (1.0 - level) / static_cast<double>(replications));
  return out;
}

}  // namespace fidnp
