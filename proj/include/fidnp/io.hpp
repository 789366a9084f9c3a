#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "fidnp/coverage.hpp"
#include "fidnp/ensemble.hpp"
#include "fidnp/focus.hpp"

namespace fidnp::io {

using Json = nlohmann::ordered_json;

/// Reads a headered CSV with a numeric "time" column and, when `group_column`
/// is given, a label column. Groups keep their order of first appearance.
/// Malformed rows, non-numeric or nonpositive times are errors, never dropped.
GroupedData read_grouped_csv(const std::string& path, const std::optional<std::string>& group_column,
                             const std::string& time_column = "time");

/// Parse-from-memory variant; `source` names the input in error messages.
GroupedData parse_grouped_csv(const std::string& text, const std::optional<std::string>& group_column,
                              const std::string& time_column = "time", const std::string& source = "<input>");

/// "MIN:MAX:POINTS" -> strictly increasing positive grid (POINTS >= 1).
std::vector<double> parse_grid(const std::string& spec);

/// %.17g formatting, exact for round trips.
std::string format_double(double v);

/// FNV-1a 64 over the labels and bit patterns of the observed values.
std::string data_digest(const GroupedData& data);

void write_file(const std::string& path, const std::string& content);
std::string read_file(const std::string& path);

/// Long-format pointwise band: level,t,F_lower,F_median,F_upper.
std::string band_csv(const FiducialEnsemble& ensemble, std::span<const double> grid, std::span<const double> levels,
                     std::size_t threads = 1);

/// u-matrix dump: header replicate_index,u_1..u_n then one row per replicate.
std::string ensemble_csv(const FiducialEnsemble& ensemble);
Json ensemble_metadata(const FiducialEnsemble& ensemble, const std::string& digest);

/// Rebuilds an ensemble from a dump produced by ensemble_csv.
FiducialEnsemble parse_ensemble_csv(const std::string& text, const ObservedSample& sample, SelectionRule rule,
                                    const RngStream& seed);

/// {focus, m, m_effective, sentinels, mean, sd, quantiles, intervals, p_values}
Json focus_report(const FiducialScalarSample& sample, std::span<const double> levels,
                  std::span<const PValueReport> p_values = {});

Json coverage_json(const SimulationConfig& config, const SimulationResult& result);
std::string coverage_csv(const SimulationResult& result);

}  // namespace fidnp::io
