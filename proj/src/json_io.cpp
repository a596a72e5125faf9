#include "treepressure/json_io.hpp"

#include <cmath>
#include <limits>

namespace treepressure {

using nlohmann::json;

const json& require(const json& j, const std::string& field) {
  if (!j.is_object() || !j.contains(field)) throw ConfigError("missing required field \"" + field + "\"");
  return j.at(field);
}

namespace {

std::vector<double> real_list(const json& j, const std::string& field) {
  const json& arr = require(j, field);
  if (!arr.is_array()) throw ConfigError("field \"" + field + "\" must be an array of numbers");
  std::vector<double> out;
  for (const auto& v : arr) {
    if (!v.is_number()) throw ConfigError("field \"" + field + "\" must be an array of numbers");
    out.push_back(v.get<double>());
  }
  return out;
}

HoelderPart hoelder_from_json(const json& j) {
  const auto kind = get_required<std::string>(j, "kind");
  HoelderPart h;
  if (kind == "constant") {
    h.poly = {get_required<double>(j, "value")};
  } else if (kind == "polynomial") {
    h.poly = real_list(j, "coeffs");
  } else {
    throw ConfigError("unknown hoelder kind \"" + kind + "\"");
  }
  return h;
}

}  // namespace

SmoothIntervalMap map_from_json(const json& j) {
  const auto family = get_required<std::string>(j, "family");
  try {
    if (family == "chebyshev") return SmoothIntervalMap::chebyshev();
    if (family == "logistic") return SmoothIntervalMap::logistic(get_required<double>(j, "a"));
    if (family == "polynomial") {
      const auto dom = real_list(j, "domain");
      if (dom.size() != 2) throw ConfigError("field \"domain\" must be [lo, hi]");
      return SmoothIntervalMap::polynomial(real_list(j, "coeffs"), Interval{dom[0], dom[1]});
    }
  } catch (const PreconditionError& e) {
    throw ConfigError(std::string("map: ") + e.what());
  }
  throw ConfigError("unknown map family \"" + family + "\"");
}

SingularPotential potential_from_json(const json& j, const SmoothIntervalMap& map) {
  const auto kind = get_required<std::string>(j, "kind");
  try {
    if (kind == "constant") return SingularPotential::constant(get_required<double>(j, "value"));
    if (kind == "polynomial") return SingularPotential::polynomial(real_list(j, "coeffs"));
    if (kind == "geometric") return SingularPotential::geometric(map, get_required<double>(j, "t"));
    if (kind == "custom") {
      HoelderPart h = hoelder_from_json(require(j, "hoelder"));
      std::vector<SingularTerm> terms;
      if (j.contains("singular")) {
        for (const auto& t : j.at("singular"))
          terms.push_back({get_required<double>(t, "c"), get_required<double>(t, "b")});
      }
      return SingularPotential::custom(map, std::move(h), std::move(terms));
    }
  } catch (const PreconditionError& e) {
    throw ConfigError(std::string("potential: ") + e.what());
  }
  throw ConfigError("unknown potential kind \"" + kind + "\"");
}

json json_real(double v) {
  if (std::isnan(v)) return nullptr;
  if (v == std::numeric_limits<double>::infinity()) return "inf";
  if (v == -std::numeric_limits<double>::infinity()) return "-inf";
  return v;
}

double real_from_json(const json& j) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
  }
  if (j.is_null()) return std::numeric_limits<double>::quiet_NaN();
  throw ConfigError("expected a real number");
}

namespace {

json real_array(const std::vector<double>& v) {
  json a = json::array();
  for (double x : v) a.push_back(json_real(x));
  return a;
}

}  // namespace

json to_json(const TreeFoldResult& r) {
  return {{"depth", r.depth},
          {"log_sum", json_real(r.log_sum.value())},
          {"leaf_count", r.leaf_count},
          {"pole_hits", r.pole_hits},
          {"min_pole_distance", json_real(r.min_pole_distance)},
          {"elapsed_ms", r.elapsed.count()}};
}

json to_json(const PressureEstimate& e) {
  json j{{"method", to_string(e.method)},
         {"value", json_real(e.value)},
         {"size", e.size},
         {"map", e.map_name},
         {"potential", e.potential_name}};
  if (e.cauchy_increment) j["cauchy_increment"] = json_real(*e.cauchy_increment);
  if (e.tree) j["tree"] = to_json(*e.tree);
  if (e.spectral)
    j["spectral"] = {{"bins", e.spectral->bins},
                     {"nonzeros", e.spectral->nonzeros},
                     {"iterations", e.spectral->iterations},
                     {"eigenvalue", json_real(e.spectral->eigenvalue)},
                     {"residual", json_real(e.spectral->residual)}};
  if (e.periodic)
    j["periodic"] = {{"period", e.periodic->period},
                     {"points", e.periodic->points},
                     {"pole_terms", e.periodic->pole_terms},
                     {"exact_points", e.periodic->exact_points}};
  return j;
}

json to_json(const ExceptionalReport& r) {
  json trace = json::array();
  for (const auto& s : r.trace) trace.push_back({{"processed", json_real(s.processed)}, {"added", real_array(s.added)}});
  return {{"status", to_string(r.status)},
          {"sigma", real_array(r.sigma)},
          {"seed_cycle", real_array(r.seed_cycle)},
          {"seed_period", r.seed_period},
          {"closure_trace", trace},
          {"forward_defect", json_real(r.forward_defect)},
          {"backward_defect", json_real(r.backward_defect)},
          {"seeds_searched", r.seeds_searched}};
}

json to_json(const NormalityCertificate& c) {
  json j{{"point", json_real(c.point)}, {"depth", c.depth}, {"normal", c.normal}};
  if (c.normal)
    j["witness"] = real_array(c.witness);
  else
    j["blocking_depth"] = c.blocking_depth;
  return j;
}

json to_json(const SupEstimate& s) {
  return {{"n", s.n},
          {"value", json_real(s.value)},
          {"argmax", json_real(s.argmax)},
          {"grid_size", s.grid_size},
          {"evaluated", s.evaluated},
          {"refined", s.refined}};
}

json to_json(const HyperbolicityReport& r) {
  json sups = json::array();
  for (const auto& s : r.sups) sups.push_back(to_json(s));
  return {{"sup_estimate", json_real(r.sup_estimate)},
          {"pressure_estimate", json_real(r.pressure_estimate)},
          {"oracle_method", to_string(r.oracle_method)},
          {"n_used", r.n_used},
          {"margin", json_real(r.margin)},
          {"slack", r.slack},
          {"verdict", r.hyperbolic ? "hyperbolic" : "inconclusive"},
          {"sups", sups}};
}

json to_json(const CohomologyCheck& c) {
  return {{"max_residual", json_real(c.max_residual)}, {"used", c.used}, {"filtered", c.filtered}};
}

json to_json(const SupBoundCheck& c) {
  return {{"lhs", json_real(c.lhs)},
          {"bound", json_real(c.bound)},
          {"holds", c.holds()},
          {"telescoping_residual", json_real(c.telescoping_residual)},
          {"samples", c.samples}};
}

json to_json(const SigmaPrimeResult& r) {
  return {{"sigma_prime", real_array(r.sigma_prime)},
          {"escaping_preimages", real_array(r.escaping)},
          {"last_pole_index", r.last_pole_index},
          {"anchors", real_array(r.anchors)},
          {"forward_defect", json_real(r.defects.forward)},
          {"backward_defect", json_real(r.defects.backward)},
          {"verified_exceptional", true}};
}

json to_json(const LowerBoundDiagnostic& d) {
  return {{"holds", d.holds},
          {"log_lhs", json_real(d.log_lhs)},
          {"log_rhs", json_real(d.log_rhs)},
          {"c_khat", json_real(d.c_khat)},
          {"pressure", json_real(d.pressure)},
          {"N", d.N},
          {"n", d.n},
          {"epsilon", d.epsilon},
          {"fold", to_json(d.fold)}};
}

}  // namespace treepressure
