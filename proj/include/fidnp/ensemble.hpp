#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "fidnp/curve.hpp"
#include "fidnp/rng.hpp"

namespace fidnp {

/// Observed lifetimes for one group: sorted ascending, all > 0, n >= 1.
struct ObservedSample {
  std::vector<double> values;
  std::string label;

  /// Sorts `values` and validates them.
  static ObservedSample make(std::vector<double> values, std::string label = "all");

  void validate() const;
};

/// k >= 1 observed samples with distinct labels.
struct GroupedData {
  std::vector<ObservedSample> groups;

  void validate() const;
  std::size_t index_of(const std::string& label) const;
};

/// Monte Carlo fiducial distribution of F for one observed sample.
///
/// Stores the m x n matrix of uniform order draws (row j = replicate j) and
/// rebuilds curve j on demand. Tied observations are merged into one knot
/// carrying the largest u drawn for the tie block.
class FiducialEnsemble {
 public:
  /// Wraps an existing u-matrix (row-major, m rows of n sorted values).
  FiducialEnsemble(ObservedSample sample, SelectionRule rule, RngStream seed, std::size_t m,
                   std::vector<double> u_matrix);

  const ObservedSample& sample() const noexcept { return sample_; }
  SelectionRule rule() const noexcept { return rule_; }
  const RngStream& seed() const noexcept { return seed_; }

  std::size_t draws() const noexcept { return m_; }
  std::size_t sample_size() const noexcept { return sample_.values.size(); }

  /// Distinct observed values, i.e. the knot abscissae shared by every curve.
  std::span<const double> knot_xs() const noexcept { return knot_xs_; }

  /// Column of the u-matrix that supplies knot k.
  std::size_t knot_column(std::size_t k) const noexcept { return knot_cols_[k]; }

  std::span<const double> u_row(std::size_t j) const;
  std::span<const double> u_matrix() const noexcept { return u_; }

  Knots knots(std::size_t j) const;
  FiducialCurve curve(std::size_t j) const;

 private:
  ObservedSample sample_;
  SelectionRule rule_;
  RngStream seed_;
  std::size_t m_;
  std::vector<double> u_;
  std::vector<double> knot_xs_;
  std::vector<std::size_t> knot_cols_;
};

/// Replicate j of group g draws from fork_stream(rng, g * m + j); the uniform
/// route draws sorted uniforms directly.
FiducialEnsemble fit_ensemble(const ObservedSample& sample, SelectionRule rule, std::size_t m,
                              const RngStream& rng, std::size_t threads = 1,
                              std::uint64_t stream_offset = 0);

/// Same replicate-to-stream mapping, but each row is drawn as sorted standard
/// exponentials and mapped through u = 1 - exp(-v).
FiducialEnsemble fit_ensemble_via_exponential(const ObservedSample& sample, SelectionRule rule,
                                              std::size_t m, const RngStream& rng,
                                              std::size_t threads = 1, std::uint64_t stream_offset = 0);

/// One ensemble per group; group g uses stream offset g * m, so replicate j
/// across groups is one joint fiducial draw with independent components.
std::vector<FiducialEnsemble> fit_joint(const GroupedData& grouped, SelectionRule rule, std::size_t m,
                                        const RngStream& rng, std::size_t threads = 1);

}  // namespace fidnp
