#include "fidnp/io.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <map>
#include <sstream>

#include "fidnp/error.hpp"
#include "fidnp/parallel.hpp"
#include "fidnp/stats.hpp"

namespace fidnp::io {

namespace {

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(first, last - first + 1));
}

struct Field {
  std::string text;
  std::size_t column;  // 1-based character column where the field starts
};

// RFC 4180-style split of one line; quotes may wrap a field and "" escapes a quote.
std::vector<Field> split_csv_line(const std::string& line, std::size_t line_no, const std::string& source) {
  std::vector<Field> out;
  std::size_t i = 0;
  while (true) {
    Field f{{}, i + 1};
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
    if (i < line.size() && line[i] == '"') {
      ++i;
      bool closed = false;
      while (i < line.size()) {
        if (line[i] == '"') {
          if (i + 1 < line.size() && line[i + 1] == '"') {
            f.text.push_back('"');
            i += 2;
            continue;
          }
          closed = true;
          ++i;
          break;
        }
        f.text.push_back(line[i++]);
      }
      require(closed, ErrorKind::Parse,
              source + ":" + std::to_string(line_no) + ":" + std::to_string(f.column) + ": unterminated quote");
      while (i < line.size() && line[i] != ',') {
        require(line[i] == ' ' || line[i] == '\t' || line[i] == '\r', ErrorKind::Parse,
                source + ":" + std::to_string(line_no) + ":" + std::to_string(i + 1) +
                    ": unexpected character after closing quote");
        ++i;
      }
    } else {
      const auto comma = std::min(line.find(',', i), line.size());
      f.text = trim(std::string_view(line).substr(i, comma - i));
      i = comma;
    }
    out.push_back(std::move(f));
    if (i >= line.size()) break;
    ++i;  // skip comma
  }
  return out;
}

bool parse_number(const std::string& s, double& out) {
  if (s.empty()) return false;
  const char* first = s.data();
  const char* last = s.data() + s.size();
  if (*first == '+') ++first;
  auto res = std::from_chars(first, last, out);
  return res.ec == std::errc() && res.ptr == last;
}

}  // namespace

GroupedData parse_grouped_csv(const std::string& text, const std::optional<std::string>& group_column,
                              const std::string& time_column, const std::string& source) {
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  std::vector<std::string> header;
  std::size_t time_idx = 0;
  std::size_t group_idx = 0;

  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    for (auto& f : split_csv_line(line, line_no, source)) header.push_back(f.text);
    break;
  }
  require(!header.empty(), ErrorKind::Config, source + ": no header line; expected a '" + time_column + "' column");
  auto find_col = [&](const std::string& name) -> std::optional<std::size_t> {
    for (std::size_t c = 0; c < header.size(); ++c) {
      if (header[c] == name) return c;
    }
    return std::nullopt;
  };
  const auto t_col = find_col(time_column);
  require(t_col.has_value(), ErrorKind::Config, source + ": missing required column '" + time_column + "'");
  time_idx = *t_col;
  if (group_column) {
    const auto g_col = find_col(*group_column);
    require(g_col.has_value(), ErrorKind::Config, source + ": missing group column '" + *group_column + "'");
    group_idx = *g_col;
  }

  std::vector<std::string> order;
  std::map<std::string, std::vector<double>> values;
  std::vector<std::size_t> nonpositive;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto fields = split_csv_line(line, line_no, source);
    require(fields.size() == header.size(), ErrorKind::Parse,
            source + ":" + std::to_string(line_no) + ": expected " + std::to_string(header.size()) +
                " fields, found " + std::to_string(fields.size()));
    const auto& tf = fields[time_idx];
    double t = 0.0;
    require(parse_number(tf.text, t) && std::isfinite(t), ErrorKind::Parse,
            source + ":" + std::to_string(line_no) + ":" + std::to_string(tf.column) + ": '" + tf.text +
                "' is not a finite number");
    if (t <= 0.0) {
      nonpositive.push_back(line_no);
      continue;
    }
    const std::string label = group_column ? fields[group_idx].text : std::string("all");
    require(!label.empty(), ErrorKind::Parse, source + ":" + std::to_string(line_no) + ": empty group label");
    auto [it, inserted] = values.try_emplace(label);
    if (inserted) order.push_back(label);
    it->second.push_back(t);
  }

  if (!nonpositive.empty()) {
    std::string rows;
    for (std::size_t k = 0; k < nonpositive.size() && k < 20; ++k) {
      rows += (k ? ", " : "") + std::to_string(nonpositive[k]);
    }
    if (nonpositive.size() > 20) rows += ", ...";
    fail(ErrorKind::Parse, source + ": " + std::to_string(nonpositive.size()) +
                               " nonpositive time value(s) on line(s) " + rows);
  }
  require(!order.empty(), ErrorKind::Config, source + ": no data rows");

  GroupedData data;
  for (const auto& label : order) data.groups.push_back(ObservedSample::make(std::move(values[label]), label));
  data.validate();
  return data;
}

GroupedData read_grouped_csv(const std::string& path, const std::optional<std::string>& group_column,
                             const std::string& time_column) {
  return parse_grouped_csv(read_file(path), group_column, time_column, path);
}

std::vector<double> parse_grid(const std::string& spec) {
  const auto c1 = spec.find(':');
  const auto c2 = c1 == std::string::npos ? std::string::npos : spec.find(':', c1 + 1);
  require(c2 != std::string::npos, ErrorKind::Usage, "grid '" + spec + "' must look like MIN:MAX:POINTS");
  double lo = 0.0;
  double hi = 0.0;
  double pts = 0.0;
  require(parse_number(spec.substr(0, c1), lo) && parse_number(spec.substr(c1 + 1, c2 - c1 - 1), hi) &&
              parse_number(spec.substr(c2 + 1), pts),
          ErrorKind::Usage, "grid '" + spec + "' has a non-numeric field");
  require(pts >= 1.0 && pts == std::floor(pts) && pts <= 1e6, ErrorKind::Usage, "grid POINTS must be a positive integer");
  require(lo > 0.0, ErrorKind::Usage, "grid MIN must be > 0");
  const auto points = static_cast<std::size_t>(pts);
  if (points == 1) return {lo};
  require(hi > lo, ErrorKind::Usage, "grid MAX must exceed MIN");
  std::vector<double> grid(points);
  for (std::size_t k = 0; k < points; ++k) {
    grid[k] = lo + (hi - lo) * static_cast<double>(k) / static_cast<double>(points - 1);
  }
  grid.back() = hi;
  return grid;
}

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string data_digest(const GroupedData& data) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  auto feed = [&h](const void* p, std::size_t len) {
    const auto* bytes = static_cast<const unsigned char*>(p);
    for (std::size_t i = 0; i < len; ++i) {
      h ^= bytes[i];
      h *= 0x100000001b3ULL;
    }
  };
  for (const auto& g : data.groups) {
    feed(g.label.data(), g.label.size());
    feed("\0", 1);
    for (double v : g.values) feed(&v, sizeof v);
  }
  char buf[32];
  std::snprintf(buf, sizeof buf, "fnv1a64:%016llx", static_cast<unsigned long long>(h));
  return buf;
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  require(static_cast<bool>(out), ErrorKind::Io, "cannot open '" + path + "' for writing");
  out << content;
  out.flush();
  require(static_cast<bool>(out), ErrorKind::Io, "failed writing '" + path + "'");
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  require(static_cast<bool>(in), ErrorKind::Io, "cannot open '" + path + "' for reading");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string band_csv(const FiducialEnsemble& ensemble, std::span<const double> grid, std::span<const double> levels,
                     std::size_t threads) {
  const std::size_t m = ensemble.draws();
  std::vector<FiducialCurve> curves;
  curves.reserve(m);
  for (std::size_t j = 0; j < m; ++j) curves.push_back(ensemble.curve(j));

  // rows[level][grid point] = (lower, median, upper)
  std::vector<std::vector<std::array<double, 3>>> rows(levels.size(), std::vector<std::array<double, 3>>(grid.size()));
  parallel_for(grid.size(), threads, [&](std::size_t g) {
    std::vector<double> f(m);
    for (std::size_t j = 0; j < m; ++j) f[j] = curves[j].cdf(grid[g]);
    std::sort(f.begin(), f.end());
    const double median = stats::quantile_sorted(f, 0.5);
    for (std::size_t l = 0; l < levels.size(); ++l) {
      const auto iv = interval_sorted(f, levels[l]);
      rows[l][g] = {iv.lower, median, iv.upper};
    }
  });

  std::string out = "level,t,F_lower,F_median,F_upper\n";
  for (std::size_t l = 0; l < levels.size(); ++l) {
    for (std::size_t g = 0; g < grid.size(); ++g) {
      out += format_double(levels[l]) + "," + format_double(grid[g]) + "," + format_double(rows[l][g][0]) + "," +
             format_double(rows[l][g][1]) + "," + format_double(rows[l][g][2]) + "\n";
    }
  }
  return out;
}

std::string ensemble_csv(const FiducialEnsemble& ensemble) {
  const std::size_t n = ensemble.sample_size();
  std::string out = "replicate_index";
  for (std::size_t i = 1; i <= n; ++i) out += ",u_" + std::to_string(i);
  out += "\n";
  for (std::size_t j = 0; j < ensemble.draws(); ++j) {
    out += std::to_string(j);
    for (double u : ensemble.u_row(j)) out += "," + format_double(u);
    out += "\n";
  }
  return out;
}

Json ensemble_metadata(const FiducialEnsemble& ensemble, const std::string& digest) {
  Json meta;
  meta["seed"] = ensemble.seed().seed();
  meta["stream_index"] = ensemble.seed().stream_index();
  meta["rule"] = std::string(to_string(ensemble.rule()));
  meta["m"] = ensemble.draws();
  meta["n"] = ensemble.sample_size();
  meta["generator"] = std::string(kGeneratorName);
  meta["generator_version"] = std::string(kGeneratorVersion);
  meta["data_digest"] = digest;
  return meta;
}

FiducialEnsemble parse_ensemble_csv(const std::string& text, const ObservedSample& sample, SelectionRule rule,
                                    const RngStream& seed) {
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  const std::size_t n = sample.values.size();
  std::vector<double> u;
  std::size_t rows = 0;
  bool header_seen = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto fields = split_csv_line(line, line_no, "ensemble dump");
    require(fields.size() == n + 1, ErrorKind::Parse,
            "ensemble dump:" + std::to_string(line_no) + ": expected " + std::to_string(n + 1) + " fields");
    if (!header_seen) {
      header_seen = true;
      require(fields[0].text == "replicate_index", ErrorKind::Parse, "ensemble dump: bad header");
      continue;
    }
    double idx = 0.0;
    require(parse_number(fields[0].text, idx) && idx == static_cast<double>(rows), ErrorKind::Parse,
            "ensemble dump:" + std::to_string(line_no) + ": replicate index out of sequence");
    for (std::size_t i = 1; i <= n; ++i) {
      double v = 0.0;
      require(parse_number(fields[i].text, v), ErrorKind::Parse,
              "ensemble dump:" + std::to_string(line_no) + ":" + std::to_string(fields[i].column) + ": bad number");
      u.push_back(v);
    }
    ++rows;
  }
  return FiducialEnsemble(sample, rule, seed, rows, std::move(u));
}

Json focus_report(const FiducialScalarSample& sample, std::span<const double> levels,
                  std::span<const PValueReport> p_values) {
  const Summary s = summarize(sample);
  Json j;
  j["focus"] = describe(sample.focus);
  j["m"] = s.m;
  j["m_effective"] = s.m_effective;
  j["sentinels"] = s.sentinels;
  j["mean"] = s.mean;
  j["sd"] = s.sd;
  Json q = Json::array();
  for (const auto& [p, v] : s.quantiles) q.push_back(Json{{"p", p}, {"value", v}});
  j["quantiles"] = q;
  Json iv = Json::array();
  for (double level : levels) {
    const auto est = interval(sample, level);
    iv.push_back(Json{{"level", est.level}, {"lower", est.lower}, {"upper", est.upper}, {"method", est.method}});
  }
  j["intervals"] = iv;
  Json pv = Json::array();
  for (const auto& p : p_values) {
    pv.push_back(Json{{"hypothesis", p.hypothesis},
                      {"fiducial_probability", p.fiducial_probability},
                      {"m_effective", p.m_effective}});
  }
  j["p_values"] = pv;
  return j;
}

Json coverage_json(const SimulationConfig& config, const SimulationResult& result) {
  Json j;
  Json cfg;
  cfg["truth"] = config.truth.describe();
  cfg["n"] = config.n;
  cfg["replications"] = config.replications;
  cfg["m"] = config.draws;
  cfg["rule"] = std::string(to_string(config.rule));
  Json foci = Json::array();
  for (const auto& f : config.foci) foci.push_back(describe(f));
  cfg["foci"] = foci;
  cfg["levels"] = config.levels;
  cfg["seed"] = config.seed;
  cfg["generator"] = std::string(kGeneratorName);
  cfg["generator_version"] = std::string(kGeneratorVersion);
  j["config"] = cfg;

  Json cells = Json::array();
  for (const auto& c : result.coverage.cells) {
    Json cell;
    cell["focus"] = c.focus;
    cell["level"] = c.level;
    cell["true_value"] = c.true_value;
    cell["coverage"] = c.coverage;
    cell["mc_se"] = c.mc_se;
    cell["tolerance"] = c.tolerance;
    cell["threshold_rule"] = "|coverage - level| <= 3 mc_se + 2/m";
    cell["mean_width"] = c.mean_width;
    cell["no_interval"] = c.no_interval;
    cell["pass"] = c.pass;
    cells.push_back(cell);
  }
  j["coverage"] = cells;

  Json cal = Json::array();
  for (const auto& s : result.calibration.foci) {
    Json e;
    e["focus"] = s.focus;
    e["true_value"] = s.true_value;
    e["mean_h"] = s.mean_h;
    e["ks"] = s.ks;
    e["critical"] = s.critical;
    e["threshold_rule"] = "ks < 1.63 / sqrt(R)";
    e["pass"] = s.pass;
    e["h"] = s.h;
    cal.push_back(e);
  }
  j["calibration"] = cal;
  j["all_pass"] = result.coverage.all_pass() && result.calibration.all_pass();
  return j;
}

std::string coverage_csv(const SimulationResult& result) {
  std::string out = "focus,level,true_value,coverage,mc_se,tolerance,mean_width,no_interval,pass\n";
  for (const auto& c : result.coverage.cells) {
    out += "\"" + c.focus + "\"," + format_double(c.level) + "," + format_double(c.true_value) + "," +
           format_double(c.coverage) + "," + format_double(c.mc_se) + "," + format_double(c.tolerance) + "," +
           format_double(c.mean_width) + "," + std::to_string(c.no_interval) + "," + (c.pass ? "1" : "0") + "\n";
  }
  return out;
}

}  // namespace fidnp::io
