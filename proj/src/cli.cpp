#include "treepressure/cli.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "treepressure/exceptional.hpp"
#include "treepressure/json_io.hpp"
#include "treepressure/pressure.hpp"

namespace treepressure {

using nlohmann::json;

std::string format_real(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace {

// Defaults for every tunable; overridden by the config.
struct Limits {
  int tree_depth_cap = kDefaultTreeDepthCap;
  int periodic_cap = kDefaultPeriodicCap;
};

Limits limits_from(const json& config) {
  Limits l;
  if (!config.contains("limits")) return l;
  const json& j = config.at("limits");
  l.tree_depth_cap = get_or(j, "tree_depth_cap", l.tree_depth_cap);
  l.periodic_cap = get_or(j, "periodic_cap", l.periodic_cap);
  return l;
}

SampleOptions sampling_from(const json& config) {
  SampleOptions s;
  s.seed = get_or<std::uint64_t>(config, "seed", s.seed);
  if (!config.contains("sampling")) return s;
  const json& j = config.at("sampling");
  s.per_interval = get_or(j, "per_interval", s.per_interval);
  s.cantor_depth = get_or(j, "cantor_depth", s.cantor_depth);
  s.seed = get_or<std::uint64_t>(j, "seed", s.seed);
  return s;
}

std::vector<Interval> intervals_from(const json& j, const std::string& field) {
  std::vector<Interval> out;
  const json& arr = require(j, field);
  if (!arr.is_array()) throw ConfigError("field \"" + field + "\" must be a list of [lo, hi] pairs");
  for (const auto& p : arr) {
    if (!p.is_array() || p.size() != 2 || !p[0].is_number() || !p[1].is_number() || !(p[0] < p[1]))
      throw ConfigError("field \"" + field + "\" must be a list of [lo, hi] pairs with lo < hi");
    out.push_back({p[0].get<double>(), p[1].get<double>()});
  }
  return out;
}

std::vector<double> reals_from(const json& j, const std::string& field) {
  const json& arr = require(j, field);
  if (!arr.is_array()) throw ConfigError("field \"" + field + "\" must be a list of numbers");
  std::vector<double> out;
  for (const auto& v : arr) {
    if (!v.is_number()) throw ConfigError("field \"" + field + "\" must be a list of numbers");
    out.push_back(v.get<double>());
  }
  return out;
}

double point_in_domain(const json& j, const std::string& field, const SmoothIntervalMap& map) {
  const double x = get_required<double>(j, field);
  if (!map.in_domain(x)) throw ConfigError("field \"" + field + "\" lies outside the domain of " + map.name());
  return x;
}

int positive_int(const json& j, const std::string& field, std::optional<int> fallback = std::nullopt) {
  const int v = fallback ? get_or(j, field, *fallback) : get_required<int>(j, field);
  if (v < 1) throw ConfigError("field \"" + field + "\" must be at least 1");
  return v;
}

struct EstimatorSpec {
  PressureMethod method = PressureMethod::Tree;
  int n = 0;
  double x = 0.0;
  UlamOptions ulam;
  std::string parameters;
};

EstimatorSpec estimator_from(const json& j, const SmoothIntervalMap& map) {
  EstimatorSpec e;
  const auto method = get_required<std::string>(j, "method");
  if (method == "tree") {
    e.method = PressureMethod::Tree;
    e.n = positive_int(j, "n");
    e.x = point_in_domain(j, "x", map);
    e.parameters = "n=" + std::to_string(e.n) + ";x=" + format_real(e.x);
  } else if (method == "ulam") {
    if (map.julia_structure() != JuliaStructure::FullInterval)
      throw ConfigError("estimator \"ulam\" is unavailable for " + map.name() + " (julia structure " +
                        to_string(map.julia_structure()) + ")");
    e.method = PressureMethod::Ulam;
    e.ulam.bins = get_or(j, "bins", e.ulam.bins);
    e.ulam.max_iterations = get_or(j, "max_iterations", e.ulam.max_iterations);
    e.ulam.tolerance = get_or(j, "tolerance", e.ulam.tolerance);
    e.ulam.nodes = get_or(j, "nodes", e.ulam.nodes);
    e.ulam.pole_nodes = get_or(j, "pole_nodes", e.ulam.pole_nodes);
    if (e.ulam.bins < kMinUlamBins)
      throw ConfigError("field \"bins\" must be at least " + std::to_string(kMinUlamBins));
    e.parameters = "bins=" + std::to_string(e.ulam.bins);
  } else if (method == "periodic") {
    e.method = PressureMethod::Periodic;
    e.n = positive_int(j, "n");
    e.parameters = "n=" + std::to_string(e.n);
  } else {
    throw ConfigError("unknown estimator method \"" + method + "\"");
  }
  return e;
}

// Default oracle: Ulam on a full interval, periodic orbits on a repeller.
EstimatorSpec default_oracle(const SmoothIntervalMap& map) {
  json j = map.julia_structure() == JuliaStructure::FullInterval ? json{{"method", "ulam"}, {"bins", 1024}}
                                                                 : json{{"method", "periodic"}, {"n", 12}};
  return estimator_from(j, map);
}

PressureEstimate run_estimator(const EstimatorSpec& e, const SmoothIntervalMap& map, const SingularPotential& G,
                               FoldMode mode, const Limits& limits) {
  switch (e.method) {
    case PressureMethod::Tree: {
      const FoldOptions fo{mode, limits.tree_depth_cap};
      if (e.n > fo.depth_cap)
        throw CapExceeded("tree estimator: n=" + std::to_string(e.n) + " exceeds depth cap " +
                          std::to_string(fo.depth_cap));
      const TreeFoldResult r = preimage_tree_fold(map, G, e.x, e.n, fo);
      PressureEstimate est;
      est.method = PressureMethod::Tree;
      est.size = e.n;
      est.value = r.log_sum.value() / e.n;
      est.tree = r;
      est.map_name = map.name();
      est.potential_name = G.name();
      return est;
    }
    case PressureMethod::Ulam: return ulam_pressure(map, G, e.ulam);
    case PressureMethod::Periodic: return periodic_orbit_pressure(map, G, e.n, limits.periodic_cap);
    case PressureMethod::Exact: break;
  }
  throw ConfigError("unsupported estimator");
}

class Csv {
 public:
  explicit Csv(const std::vector<std::string>& columns) {
    os_ << kCsvSchemaColumn;
    for (const auto& c : columns) os_ << ',' << c;
    os_ << '\n';
  }
  Csv& row() {
    os_ << '1';
    return *this;
  }
  Csv& cell(const std::string& s) {
    os_ << ',' << s;
    return *this;
  }
  Csv& real(double v) { return cell(format_real(v)); }
  Csv& real(const std::optional<double>& v) { return cell(v ? format_real(*v) : std::string()); }
  Csv& integer(long long v) { return cell(std::to_string(v)); }
  void end() { os_ << '\n'; }
  [[nodiscard]] std::string str() const { return os_.str(); }

 private:
  std::ostringstream os_;
};

struct Context {
  const json& config;
  FoldMode mode;
  Limits limits;
  SampleOptions sampling;
};

SmoothIntervalMap map_of(const Context& c) { return map_from_json(require(c.config, "map")); }

SingularPotential potential_of(const Context& c, const SmoothIntervalMap& map) {
  return potential_from_json(require(c.config, "potential"), map);
}

// Each handler parses its parameters (ConfigError) before computing.
std::string cmd_tree_pressure(const Context& c) {
  const auto map = map_of(c);
  const auto G = potential_of(c, map);
  const double x = point_in_domain(c.config, "x", map);
  const int n_max = positive_int(c.config, "n_max");

  const TreePressureRun run = tree_pressure(map, G, x, n_max, FoldOptions{c.mode, c.limits.tree_depth_cap});
  Csv csv({"n", "estimate", "log_sum", "leaf_count", "pole_hits", "min_pole_distance", "cauchy_increment",
           "elapsed_ms"});
  for (const auto& e : run.estimates) {
    csv.row()
        .integer(e.size)
        .real(e.value)
        .real(e.tree->log_sum.value())
        .integer(static_cast<long long>(e.tree->leaf_count))
        .integer(static_cast<long long>(e.tree->pole_hits))
        .real(e.tree->min_pole_distance)
        .real(e.cauchy_increment)
        .real(e.tree->elapsed.count())
        .end();
  }
  return csv.str();
}

std::string cmd_compare(const Context& c) {
  const auto map = map_of(c);
  const auto G = potential_of(c, map);
  const json& list = require(c.config, "estimators");
  if (!list.is_array() || list.size() < 2) throw ConfigError("field \"estimators\" must list at least 2 estimators");
  std::vector<EstimatorSpec> specs;
  for (const auto& j : list) specs.push_back(estimator_from(j, map));

  Csv csv({"method", "value", "parameters", "discrepancy"});
  double reference = 0.0;
  for (std::size_t i = 0; i < specs.size(); ++i) {
    const PressureEstimate e = run_estimator(specs[i], map, G, c.mode, c.limits);
    if (i == 0) reference = e.value;
    csv.row().cell(to_string(e.method)).real(e.value).cell(specs[i].parameters).real(e.value - reference).end();
  }
  return csv.str();
}

json cmd_exceptional(const Context& c) {
  const auto map = map_of(c);
  const auto G = potential_of(c, map);
  ExceptionalSearchOptions opt;
  opt.p_max = get_or(c.config, "p_max", opt.p_max);
  opt.size_max = get_or(c.config, "size_max", opt.size_max);
  opt.snap = get_or(c.config, "snap", opt.snap);
  return to_json(is_exceptional(map, G, opt));
}

json cmd_normality(const Context& c) {
  const auto map = map_of(c);
  std::vector<double> lambda;
  if (c.config.contains("lambda"))
    lambda = reals_from(c.config, "lambda");
  else if (c.config.contains("potential"))
    lambda = potential_of(c, map).singular_set();
  else
    throw ConfigError("missing required field \"lambda\" (or \"potential\")");
  const double x = point_in_domain(c.config, "x", map);
  const int n = positive_int(c.config, "n");
  const double eps = get_or(c.config, "epsilon", 1e-9);
  if (!(eps > 0)) throw ConfigError("field \"epsilon\" must be positive");
  json r = to_json(lambda_normal(map, lambda, x, n, eps));
  r["lambda"] = lambda;
  return r;
}

struct HyperbolicityParams {
  int n = 4;
  std::size_t grid_size = 2001;
  double slack = kDefaultHyperbolicitySlack;
  EstimatorSpec oracle;
};

HyperbolicityParams hyperbolicity_params(const json& j, const SmoothIntervalMap& map) {
  HyperbolicityParams p;
  p.n = positive_int(j, "n", p.n);
  p.grid_size = get_or(j, "grid_size", p.grid_size);
  p.slack = get_or(j, "slack", p.slack);
  if (p.grid_size < 2) throw ConfigError("field \"grid_size\" must be at least 2");
  p.oracle = j.contains("oracle") ? estimator_from(j.at("oracle"), map) : default_oracle(map);
  if (p.oracle.method == PressureMethod::Tree) throw ConfigError("field \"oracle\" must be ulam or periodic");
  return p;
}

HyperbolicityReport run_hyperbolicity(const Context& c, const HyperbolicityParams& p, const SmoothIntervalMap& map,
                                      const SingularPotential& G) {
  const PressureEstimate oracle = run_estimator(p.oracle, map, G, c.mode, c.limits);
  return hyperbolicity_check(map, G, p.n, p.grid_size, oracle, p.slack);
}

json cmd_hyperbolicity(const Context& c) {
  const auto map = map_of(c);
  const auto G = potential_of(c, map);
  return to_json(run_hyperbolicity(c, hyperbolicity_params(c.config, map), map, G));
}

json cmd_cohomology(const Context& c) {
  const auto map = map_of(c);
  const auto G = potential_of(c, map);
  const int N = positive_int(c.config, "N");
  const auto samples = static_cast<std::size_t>(positive_int(c.config, "samples", 100));
  const int n_max = positive_int(c.config, "n_max", 20);
  const double radius = get_or(c.config, "excision_radius", 1e-3);
  std::vector<Interval> K{{0.05, 0.45}, {0.55, 0.95}};
  if (c.config.contains("K")) K = intervals_from(c.config, "K");

  const auto points = julia_samples(map, samples, c.sampling);
  json out;
  out["cohomology"] = to_json(verify_cohomology(G, map, N, points));

  const auto lambda = G.singular_set();
  const auto cut = excise_points(K, backward_orbit_union(map, lambda, N), radius);
  json k = json::array();
  for (const auto& piece : cut) k.push_back({piece.lo, piece.hi});
  out["K"] = k;
  json rows = json::array();
  bool all = true;
  double telescoping = 0.0;
  for (int n = 1; n <= n_max; ++n) {
    const SupBoundCheck s = verify_snbound(G, map, N, cut, n, c.sampling);
    json r = to_json(s);
    r["n"] = n;
    rows.push_back(r);
    all = all && s.holds();
    telescoping = std::max(telescoping, s.telescoping_residual);
  }
  out["snbound"] = rows;
  out["snbound_holds"] = all;
  out["max_telescoping_residual"] = json_real(telescoping);
  return out;
}

json cmd_sigma_prime(const Context& c) {
  const auto map = map_of(c);
  const auto G = potential_of(c, map);
  const int N = positive_int(c.config, "N");
  const auto tilde = reals_from(c.config, "sigma_tilde");
  const double snap = get_or(c.config, "snap", kSetSnapTolerance);
  return to_json(sigma_prime_construction(map, G, N, tilde, snap));
}

json cmd_lower_bound(const Context& c) {
  const auto map = map_of(c);
  const auto G = potential_of(c, map);
  const int N = positive_int(c.config, "N", 1);
  const double x = point_in_domain(c.config, "x", map);
  const double eps = get_required<double>(c.config, "epsilon");
  int lo = 0, hi = 0;
  if (c.config.contains("n_range")) {
    const auto r = reals_from(c.config, "n_range");
    if (r.size() != 2 || r[0] < 1 || r[1] < r[0]) throw ConfigError("field \"n_range\" must be [lo, hi] with 1 ≤ lo ≤ hi");
    lo = static_cast<int>(r[0]);
    hi = static_cast<int>(r[1]);
  } else {
    lo = hi = positive_int(c.config, "n");
  }
  const HyperbolicityParams hp =
      hyperbolicity_params(c.config.contains("hyperbolicity") ? c.config.at("hyperbolicity") : json::object(), map);
  LowerBoundOptions opt;
  opt.neighbourhood = get_or(c.config, "neighbourhood", opt.neighbourhood);
  opt.fold = FoldOptions{c.mode, c.limits.tree_depth_cap};
  opt.sampling = c.sampling;

  const HyperbolicityReport verdict = run_hyperbolicity(c, hp, map, G);
  json rows = json::array();
  bool all = true;
  for (int n = lo; n <= hi; ++n) {
    const LowerBoundDiagnostic d = lower_bound_diagnostic(map, G, verdict, N, x, n, eps, opt);
    all = all && d.holds;
    rows.push_back(to_json(d));
  }
  return {{"hyperbolicity", to_json(verdict)}, {"diagnostics", rows}, {"holds_for_all", all}};
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw Error("cannot open output file " + path);
  os << content;
  if (!os) throw Error("failed writing output file " + path);
}

}  // namespace

int run_command(const std::string& command, const json& config, const std::string& out_path, FoldMode mode,
                std::ostream& err) {
  try {
    if (!config.is_object()) throw ConfigError("configuration must be a JSON object");
    const Context c{config, mode, limits_from(config), sampling_from(config)};
    std::string output;
    if (command == "tree-pressure") {
      output = cmd_tree_pressure(c);
    } else if (command == "compare") {
      output = cmd_compare(c);
    } else {
      json result;
      if (command == "exceptional")
        result = cmd_exceptional(c);
      else if (command == "normality")
        result = cmd_normality(c);
      else if (command == "hyperbolicity")
        result = cmd_hyperbolicity(c);
      else if (command == "cohomology")
        result = cmd_cohomology(c);
      else if (command == "sigma-prime")
        result = cmd_sigma_prime(c);
      else if (command == "lower-bound")
        result = cmd_lower_bound(c);
      else
        throw ConfigError("unknown command \"" + command + "\"");
      const json report{{"schema", kReportSchema},
                        {"command", command},
                        {"mode", mode == FoldMode::Serial ? "serial" : "parallel"},
                        {"config", config},
                        {"result", result}};
      output = report.dump(2) + "\n";
    }
    write_file(out_path, output);
    return kExitOk;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    err << "runtime error: " << e.what() << '\n';
    return kExitRuntime;
  }
}

int run_cli(int argc, char** argv) {
  CLI::App app{"Tree-pressure experiments for interval maps"};
  std::string config_path, out_path, command, mode = "serial";
  app.add_option("--config", config_path, "JSON experiment configuration")->required();
  app.add_option("--out", out_path, "output CSV or JSON path")->required();
  app.add_option("--command", command,
                 "tree-pressure | compare | exceptional | normality | hyperbolicity | cohomology | sigma-prime | "
                 "lower-bound (default: the config's \"command\")");
  app.add_option("--mode", mode, "fold mode")->check(CLI::IsMember({"serial", "parallel"}));
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  json config;
  {
    std::ifstream is(config_path);
    if (!is) {
      std::cerr << "config error: cannot read " << config_path << '\n';
      return kExitConfig;
    }
    try {
      config = json::parse(is);
    } catch (const json::parse_error& e) {
      std::cerr << "config error: " << config_path << " is not valid JSON: " << e.what() << '\n';
      return kExitConfig;
    }
  }
  if (command.empty()) {
    if (!config.is_object() || !config.contains("command") || !config.at("command").is_string()) {
      std::cerr << "config error: no --command given and missing field \"command\"\n";
      return kExitConfig;
    }
    command = config.at("command").get<std::string>();
  }
  return run_command(command, config, out_path, mode == "parallel" ? FoldMode::ParallelDeterministic : FoldMode::Serial,
                     std::cerr);
}

}  // namespace treepressure
