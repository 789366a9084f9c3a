#include "fidnp/ensemble.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "fidnp/error.hpp"
#include "fidnp/parallel.hpp"
#include "fidnp/sampling.hpp"

namespace fidnp {

ObservedSample ObservedSample::make(std::vector<double> values, std::string label) {
  std::sort(values.begin(), values.end());
  ObservedSample s{std::move(values), std::move(label)};
  s.validate();
  return s;
}

void ObservedSample::validate() const {
  require(!values.empty(), ErrorKind::Config, "sample '" + label + "' is empty; at least one observation is required");
  for (std::size_t i = 0; i < values.size(); ++i) {
    require(std::isfinite(values[i]) && values[i] > 0.0, ErrorKind::Config,
            "sample '" + label + "': observations must be finite and > 0");
    require(i == 0 || values[i] >= values[i - 1], ErrorKind::Config, "sample '" + label + "' is not sorted");
  }
}

void GroupedData::validate() const {
  require(!groups.empty(), ErrorKind::Config, "grouped data holds no groups");
  std::set<std::string> seen;
  for (const auto& g : groups) {
    g.validate();
    require(seen.insert(g.label).second, ErrorKind::Config, "duplicate group label '" + g.label + "'");
  }
}

std::size_t GroupedData::index_of(const std::string& label) const {
  for (std::size_t i = 0; i < groups.size(); ++i) {
    if (groups[i].label == label) return i;
  }
  fail(ErrorKind::Config, "unknown group label '" + label + "'");
}

FiducialEnsemble::FiducialEnsemble(ObservedSample sample, SelectionRule rule, RngStream seed, std::size_t m,
                                   std::vector<double> u_matrix)
    : sample_(std::move(sample)), rule_(rule), seed_(seed), m_(m), u_(std::move(u_matrix)) {
  sample_.validate();
  require(m_ >= 1, ErrorKind::Config, "ensemble size m must be >= 1");
  const std::size_t n = sample_.values.size();
  require(u_.size() == m_ * n, ErrorKind::Config, "u-matrix shape does not match m x n");
  for (std::size_t j = 0; j < m_; ++j) {
    const auto row = u_row(j);
    for (std::size_t i = 0; i < n; ++i) {
      require(row[i] > 0.0 && row[i] < 1.0, ErrorKind::Constraint, "u-matrix entries must lie in (0,1)");
      require(i == 0 || row[i] >= row[i - 1], ErrorKind::Constraint, "u-matrix rows must be sorted");
    }
  }
  // Tie merge: the last index of each run of equal values carries the knot.
  const auto& xs = sample_.values;
  for (std::size_t i = 0; i < n; ++i) {
    if (i + 1 < n && xs[i + 1] == xs[i]) continue;
    knot_xs_.push_back(xs[i]);
    knot_cols_.push_back(i);
  }
}

std::span<const double> FiducialEnsemble::u_row(std::size_t j) const {
  require(j < m_, ErrorKind::Config, "replicate index out of range");
  const std::size_t n = sample_.values.size();
  return std::span<const double>(u_).subspan(j * n, n);
}

Knots FiducialEnsemble::knots(std::size_t j) const {
  const auto row = u_row(j);
  Knots k;
  k.xs = knot_xs_;
  k.us.reserve(knot_cols_.size());
  for (std::size_t c : knot_cols_) k.us.push_back(row[c]);
  return k;
}

FiducialCurve FiducialEnsemble::curve(std::size_t j) const { return FiducialCurve(knots(j), rule_); }

namespace {

// Sorted draws may tie at 53-bit resolution; knots need strict increase.
void make_strictly_increasing(std::span<double> row) {
  for (std::size_t i = 1; i < row.size(); ++i) {
    if (row[i] <= row[i - 1]) row[i] = std::nextafter(row[i - 1], 1.0);
  }
  require(row.empty() || row.back() < 1.0, ErrorKind::Constraint, "uniform order draw reached 1");
}

template <typename DrawRow>
FiducialEnsemble fit_with(const ObservedSample& sample, SelectionRule rule, std::size_t m, const RngStream& rng,
                          std::size_t threads, std::uint64_t stream_offset, DrawRow draw_row) {
  sample.validate();
  require(m >= 1, ErrorKind::Config, "ensemble size m must be >= 1");
  const std::size_t n = sample.values.size();
  std::vector<double> u(m * n);
  parallel_for(m, threads, [&](std::size_t j) {
    RngStream child = fork_stream(rng, stream_offset + j);
    const std::vector<double> row = draw_row(child, n);
    std::span<double> dst(u.data() + j * n, n);
    std::copy(row.begin(), row.end(), dst.begin());
    make_strictly_increasing(dst);
  });
  return FiducialEnsemble(sample, rule, rng, m, std::move(u));
}

}  // namespace

FiducialEnsemble fit_ensemble(const ObservedSample& sample, SelectionRule rule, std::size_t m,
                              const RngStream& rng, std::size_t threads, std::uint64_t stream_offset) {
  return fit_with(sample, rule, m, rng, threads, stream_offset, [](RngStream& s, std::size_t n) {
    return sample_uniform_order(s, n).values;
  });
}

FiducialEnsemble fit_ensemble_via_exponential(const ObservedSample& sample, SelectionRule rule, std::size_t m,
                                              const RngStream& rng, std::size_t threads,
                                              std::uint64_t stream_offset) {
  return fit_with(sample, rule, m, rng, threads, stream_offset, [](RngStream& s, std::size_t n) {
    return exp_order_to_uniform_order(sample_exponential_order(s, n)).values;
  });
}

std::vector<FiducialEnsemble> fit_joint(const GroupedData& grouped, SelectionRule rule, std::size_t m,
                                        const RngStream& rng, std::size_t threads) {
  grouped.validate();
  require(m >= 1, ErrorKind::Config, "ensemble size m must be >= 1");
  std::vector<FiducialEnsemble> out;
  out.reserve(grouped.groups.size());
  for (std::size_t g = 0; g < grouped.groups.size(); ++g) {
    out.push_back(fit_ensemble(grouped.groups[g], rule, m, rng, threads, static_cast<std::uint64_t>(g) * m));
  }
  return out;
}

}  // namespace fidnp
