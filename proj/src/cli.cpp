#include "fidnp/cli.hpp"

#include <charconv>
#include <cmath>
#include <cstdlib>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "fidnp/coverage.hpp"
#include "fidnp/ensemble.hpp"
#include "fidnp/error.hpp"
#include "fidnp/focus.hpp"
#include "fidnp/io.hpp"

namespace fidnp::cli {

namespace {

using io::Json;

constexpr std::uint64_t kDefaultSeed = 1;
constexpr std::size_t kDefaultDraws = 2000;
constexpr const char* kDefaultRule = "log-linear";
constexpr double kDefaultLevel = 0.95;

struct Options {
  std::string input;
  std::string group_col;
  std::string group;
  std::string rule = kDefaultRule;
  std::size_t draws = kDefaultDraws;
  std::uint64_t seed = kDefaultSeed;
  std::vector<double> levels;
  std::vector<double> cdf_at;
  std::vector<double> quantiles;
  std::string grid;
  std::string out;
  std::string bands;
  std::string csv;
  std::string config;
  std::string truth = "exp:1";
  std::size_t n = 100;
  std::size_t reps = 1000;
  std::size_t threads = 0;
};

struct SeedInfo {
  std::uint64_t seed;
  std::string source;
};

SeedInfo resolve_seed(const CLI::App& cmd, const Options& o) {
  if (cmd.count("--seed") > 0) return {o.seed, "flag"};
  if (const char* env = std::getenv("FIDNP_SEED"); env != nullptr && *env != '\0') {
    std::uint64_t v = 0;
    const std::string s(env);
    auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    require(res.ec == std::errc() && res.ptr == s.data() + s.size(), ErrorKind::Usage,
            "FIDNP_SEED='" + s + "' is not an unsigned integer");
    return {v, "FIDNP_SEED"};
  }
  return {kDefaultSeed, "default"};
}

std::vector<double> levels_or_default(const Options& o) {
  std::vector<double> levels = o.levels.empty() ? std::vector<double>{kDefaultLevel} : o.levels;
  for (double l : levels) require(l > 0.0 && l < 1.0, ErrorKind::Usage, "--level values must lie in (0,1)");
  return levels;
}

std::optional<std::string> group_column(const Options& o) {
  if (o.group_col.empty()) return std::nullopt;
  return o.group_col;
}

Json metadata(const std::string& command, const Options& o, const SeedInfo& seed, const std::vector<double>& levels,
              const GroupedData* data) {
  Json meta;
  meta["command"] = command;
  meta["seed"] = seed.seed;
  meta["seed_source"] = seed.source;
  meta["rule"] = o.rule;
  meta["m"] = o.draws;
  meta["levels"] = levels;
  meta["generator"] = std::string(kGeneratorName);
  meta["generator_version"] = std::string(kGeneratorVersion);
  if (data != nullptr) {
    meta["input"] = o.input;
    meta["data_digest"] = io::data_digest(*data);
  }
  meta["defaults"] = Json{{"rule", kDefaultRule}, {"m", kDefaultDraws}, {"seed", kDefaultSeed}, {"level", kDefaultLevel}};
  return meta;
}

void emit(const std::string& path, const std::string& content, std::ostream& out) {
  if (path.empty() || path == "-") {
    out << content;
  } else {
    io::write_file(path, content);
  }
}

std::string dump_json(const Json& j) { return j.dump(2) + "\n"; }

int cmd_analyze(const CLI::App& cmd, const Options& o, std::ostream& out) {
  const auto seed = resolve_seed(cmd, o);
  const auto rule = parse_rule(o.rule);
  const auto levels = levels_or_default(o);
  require(o.draws >= 1, ErrorKind::Usage, "--draws must be >= 1");
  std::vector<double> grid;
  if (!o.grid.empty()) grid = io::parse_grid(o.grid);
  const auto data = io::read_grouped_csv(o.input, group_column(o));
  const auto ensembles = fit_joint(data, rule, o.draws, RngStream(seed.seed, 0), o.threads);

  Json report;
  report["metadata"] = metadata("analyze", o, seed, levels, &data);
  Json groups = Json::array();
  std::string bands;
  for (const auto& e : ensembles) {
    std::vector<FocusParameter> foci;
    for (double t : o.cdf_at) foci.push_back(CdfAt{t, e.sample().label});
    for (double a : o.quantiles) foci.push_back(Quantile{a, e.sample().label});
    if (foci.empty()) foci.push_back(Quantile{0.5, e.sample().label});

    Json g;
    g["label"] = e.sample().label;
    g["n"] = e.sample_size();
    g["distinct"] = e.knot_xs().size();
    Json fj = Json::array();
    for (const auto& f : foci) {
      fj.push_back(io::focus_report(extract(std::span(&e, 1), f, o.threads), levels));
    }
    g["foci"] = fj;
    groups.push_back(g);

    if (!grid.empty()) {
      std::string csv = io::band_csv(e, grid, levels, o.threads);
      if (ensembles.size() > 1) {
        // Prefix a group column when several groups share one file.
        std::istringstream lines(csv);
        std::string line;
        std::string prefixed;
        bool header = true;
        while (std::getline(lines, line)) {
          prefixed += (header ? std::string("group") : e.sample().label) + "," + line + "\n";
          header = false;
        }
        csv = bands.empty() ? prefixed : prefixed.substr(prefixed.find('\n') + 1);
      }
      bands += csv;
    }
  }
  report["groups"] = groups;

  emit(o.out, dump_json(report), out);
  if (!grid.empty()) {
    std::string band_path = o.bands;
    if (band_path.empty() && !o.out.empty() && o.out != "-") band_path = o.out + ".bands.csv";
    emit(band_path, bands, out);
  }
  return kSuccess;
}

int cmd_compare(const CLI::App& cmd, const Options& o, std::ostream& out) {
  const auto seed = resolve_seed(cmd, o);
  const auto rule = parse_rule(o.rule);
  const auto levels = levels_or_default(o);
  require(o.draws >= 1, ErrorKind::Usage, "--draws must be >= 1");
  require(!o.group_col.empty(), ErrorKind::Usage, "compare needs --group-col");
  const auto data = io::read_grouped_csv(o.input, group_column(o));
  require(data.groups.size() == 2, ErrorKind::Usage,
          "compare needs exactly two groups; found " + std::to_string(data.groups.size()));
  const auto ensembles = fit_joint(data, rule, o.draws, RngStream(seed.seed, 0), o.threads);
  const std::string& first = data.groups[0].label;
  const std::string& second = data.groups[1].label;

  std::vector<FocusParameter> foci;
  for (double a : o.quantiles) foci.push_back(QuantileDiff{a, second, first});
  for (double t : o.cdf_at) foci.push_back(CdfDiffAt{t, second, first});
  if (foci.empty()) foci.push_back(QuantileDiff{0.5, second, first});

  Json report;
  report["metadata"] = metadata("compare", o, seed, levels, &data);
  report["difference"] = second + " - " + first;
  Json groups = Json::array();
  for (const auto& g : data.groups) {
    groups.push_back(Json{{"label", g.label}, {"n", g.values.size()}});
  }
  report["groups"] = groups;
  Json fj = Json::array();
  for (const auto& f : foci) {
    const auto sample = extract(ensembles, f, o.threads);
    std::vector<PValueReport> pv;
    for (auto h : {Hypothesis::Greater, Hypothesis::Less, Hypothesis::TwoSided}) pv.push_back(p_value(sample, h));
    fj.push_back(io::focus_report(sample, levels, pv));
  }
  report["foci"] = fj;
  emit(o.out, dump_json(report), out);
  return kSuccess;
}

// key = value lines; '#' starts a comment. Values fill options not given on the command line.
void apply_config_file(const CLI::App& cmd, Options& o) {
  const std::string text = io::read_file(o.config);
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  auto number_list = [&](const std::string& v) {
    std::vector<double> out;
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ',')) {
      std::size_t used = 0;
      double d = 0.0;
      try {
        d = std::stod(item, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      require(used > 0, ErrorKind::Parse, o.config + ":" + std::to_string(line_no) + ": bad number '" + item + "'");
      out.push_back(d);
    }
    return out;
  };
  auto count_value = [&](const std::string& v) {
    const auto xs = number_list(v);
    require(xs.size() == 1 && xs[0] >= 0 && xs[0] == std::floor(xs[0]), ErrorKind::Parse,
            o.config + ":" + std::to_string(line_no) + ": expected a nonnegative integer");
    return static_cast<std::uint64_t>(xs[0]);
  };
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const auto eq = line.find('=');
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    require(eq != std::string::npos, ErrorKind::Parse, o.config + ":" + std::to_string(line_no) + ": expected key = value");
    auto strip = [](std::string s) {
      s.erase(0, s.find_first_not_of(" \t\r"));
      s.erase(s.find_last_not_of(" \t\r") + 1);
      return s;
    };
    const std::string key = strip(line.substr(0, eq));
    const std::string value = strip(line.substr(eq + 1));
    auto unset = [&](const char* flag) { return cmd.count(flag) == 0; };
    if (key == "truth") {
      if (unset("--truth")) o.truth = value;
    } else if (key == "n") {
      if (unset("--n")) o.n = count_value(value);
    } else if (key == "reps") {
      if (unset("--reps")) o.reps = count_value(value);
    } else if (key == "draws") {
      if (unset("--draws")) o.draws = count_value(value);
    } else if (key == "seed") {
      if (unset("--seed")) o.seed = count_value(value);
    } else if (key == "rule") {
      if (unset("--rule")) o.rule = value;
    } else if (key == "level") {
      if (unset("--level")) o.levels = number_list(value);
    } else if (key == "cdf-at") {
      if (unset("--cdf-at")) o.cdf_at = number_list(value);
    } else if (key == "quantile") {
      if (unset("--quantile")) o.quantiles = number_list(value);
    } else if (key == "out") {
      if (unset("--out")) o.out = value;
    } else if (key == "csv") {
      if (unset("--csv")) o.csv = value;
    } else {
      fail(ErrorKind::Parse, o.config + ":" + std::to_string(line_no) + ": unknown key '" + key + "'");
    }
  }
}

int cmd_coverage(const CLI::App& cmd, Options o, std::ostream& out) {
  bool seed_from_config = false;
  if (!o.config.empty()) {
    const auto before = o.seed;
    apply_config_file(cmd, o);
    seed_from_config = cmd.count("--seed") == 0 && o.seed != before;
  }
  SeedInfo seed = seed_from_config ? SeedInfo{o.seed, "config"} : resolve_seed(cmd, o);

  SimulationConfig config;
  config.truth = TrueDistribution::parse(o.truth);
  config.n = o.n;
  config.replications = o.reps;
  config.draws = o.draws;
  config.rule = parse_rule(o.rule);
  config.levels = levels_or_default(o);
  for (double t : o.cdf_at) config.foci.push_back(CdfAt{t, {}});
  for (double a : o.quantiles) config.foci.push_back(Quantile{a, {}});
  if (config.foci.empty()) config.foci.push_back(Quantile{0.5, {}});
  config.seed = seed.seed;
  config.threads = o.threads;

  const auto result = run_simulation(config);
  Json report = io::coverage_json(config, result);
  report["config"]["seed_source"] = seed.source;
  emit(o.out, dump_json(report), out);
  if (!o.csv.empty()) io::write_file(o.csv, io::coverage_csv(result));
  return report["all_pass"].get<bool>() ? kSuccess : kCheckFailed;
}

int cmd_ensemble_dump(const CLI::App& cmd, const Options& o, std::ostream& out) {
  const auto seed = resolve_seed(cmd, o);
  const auto rule = parse_rule(o.rule);
  require(o.draws >= 1, ErrorKind::Usage, "--draws must be >= 1");
  const auto data = io::read_grouped_csv(o.input, group_column(o));
  std::size_t g = 0;
  if (!o.group.empty()) {
    g = data.index_of(o.group);
  } else {
    require(data.groups.size() == 1, ErrorKind::Usage, "several groups present; choose one with --group");
  }
  // Same stream layout as analyze, so a dump matches the analysis it came from.
  const auto ensemble = fit_ensemble(data.groups[g], rule, o.draws, RngStream(seed.seed, 0), o.threads,
                                     static_cast<std::uint64_t>(g) * o.draws);
  GroupedData one{{data.groups[g]}};
  Json meta = io::ensemble_metadata(ensemble, io::data_digest(one));
  meta["group"] = data.groups[g].label;
  meta["seed_source"] = seed.source;
  emit(o.out, io::ensemble_csv(ensemble), out);
  if (!o.out.empty() && o.out != "-") io::write_file(o.out + ".meta.json", dump_json(meta));
  return kSuccess;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Nonparametric fiducial inference for lifetime distributions"};
  app.require_subcommand(1);
  Options o;

  auto add_common = [&o](CLI::App* cmd) {
    cmd->add_option("--rule", o.rule, "Selection rule: step-lower|step-upper|linear|log-linear|spline");
    cmd->add_option("--draws", o.draws, "Fiducial draws per ensemble (m)");
    cmd->add_option("--seed", o.seed, "Random seed (falls back to FIDNP_SEED)");
    cmd->add_option("--level", o.levels, "Interval level, repeatable")->take_all()->allow_extra_args(false);
    cmd->add_option("--cdf-at", o.cdf_at, "Focus F(t), repeatable")->allow_extra_args(false);
    cmd->add_option("--quantile", o.quantiles, "Focus quantile x_alpha, repeatable")->allow_extra_args(false);
    cmd->add_option("--out", o.out, "Output path (stdout when omitted)");
    cmd->add_option("--threads", o.threads, "Worker threads, 0 = all cores; results do not depend on it");
  };
  auto add_input = [&o](CLI::App* cmd) {
    cmd->add_option("--input", o.input, "CSV with a 'time' column")->required();
    cmd->add_option("--group-col", o.group_col, "Column holding group labels");
  };

  auto* analyze = app.add_subcommand("analyze", "Fiducial summaries, intervals and bands for each group");
  add_input(analyze);
  add_common(analyze);
  analyze->add_option("--grid", o.grid, "Band grid MIN:MAX:POINTS");
  analyze->add_option("--bands", o.bands, "Band CSV path (default <out>.bands.csv)");

  auto* compare = app.add_subcommand("compare", "Two-sample fiducial differences and p-values");
  add_input(compare);
  add_common(compare);

  auto* coverage = app.add_subcommand("coverage", "Repeated-sampling coverage and calibration check");
  add_common(coverage);
  coverage->add_option("--truth", o.truth, "exp:RATE | weibull:SHAPE,SCALE | lognormal:MU,SIGMA");
  coverage->add_option("--n", o.n, "Sample size per replication");
  coverage->add_option("--reps", o.reps, "Replications R");
  coverage->add_option("--csv", o.csv, "Flat per-cell CSV path");
  coverage->add_option("--config", o.config, "key = value file with defaults for the flags above");

  auto* dump = app.add_subcommand("ensemble-dump", "Write the u-matrix of a fiducial ensemble");
  add_input(dump);
  add_common(dump);
  dump->add_option("--group", o.group, "Group to dump when several are present");

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    if (!rev.empty()) rev.pop_back();  // program name
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kSuccess : kUserError;
  }

  try {
    if (analyze->parsed()) return cmd_analyze(*analyze, o, out);
    if (compare->parsed()) return cmd_compare(*compare, o, out);
    if (coverage->parsed()) return cmd_coverage(*coverage, o, out);
    if (dump->parsed()) return cmd_ensemble_dump(*dump, o, out);
  } catch (const Error& e) {
    err << "fidnp: " << to_string(e.kind()) << ": " << e.what() << "\n";
    return e.kind() == ErrorKind::Io ? kIoError : kUserError;
  } catch (const std::exception& e) {
    err << "fidnp: " << e.what() << "\n";
    return kUserError;
  }
  return kUserError;
}

}  // namespace fidnp::cli
