#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "treepressure/errors.hpp"
#include "treepressure/exceptional.hpp"
#include "treepressure/maps.hpp"
#include "treepressure/potentials.hpp"
#include "treepressure/preimage.hpp"
#include "treepressure/pressure.hpp"

namespace treepressure {

// A malformed or inconsistent configuration.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// {"family": "chebyshev"} | {"family": "logistic", "a": 4.5} |
// {"family": "polynomial", "coeffs": [...], "domain": [lo, hi]}
SmoothIntervalMap map_from_json(const nlohmann::json& j);

// {"kind": "constant", "value": v} | {"kind": "polynomial", "coeffs": [...]} |
// {"kind": "geometric", "t": -0.5} |
// {"kind": "custom", "hoelder": {...}, "singular": [{"c": 0.5, "b": 1.0}]}
SingularPotential potential_from_json(const nlohmann::json& j, const SmoothIntervalMap& map);

// Required member lookup; throws ConfigError naming the missing field.
const nlohmann::json& require(const nlohmann::json& j, const std::string& field);

template <class T>
T get_or(const nlohmann::json& j, const std::string& field, T fallback) {
  if (!j.contains(field)) return fallback;
  try {
    return j.at(field).get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("field \"" + field + "\" has the wrong type: " + e.what());
  }
}

template <class T>
T get_required(const nlohmann::json& j, const std::string& field) {
  try {
    return require(j, field).get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("field \"" + field + "\" has the wrong type: " + e.what());
  }
}

// Finite reals become numbers; ±inf become the strings "inf"/"-inf".
nlohmann::json json_real(double v);
double real_from_json(const nlohmann::json& j);

nlohmann::json to_json(const TreeFoldResult& r);
nlohmann::json to_json(const PressureEstimate& e);
nlohmann::json to_json(const ExceptionalReport& r);
nlohmann::json to_json(const NormalityCertificate& c);
nlohmann::json to_json(const SupEstimate& s);
nlohmann::json to_json(const HyperbolicityReport& r);
nlohmann::json to_json(const CohomologyCheck& c);
nlohmann::json to_json(const SupBoundCheck& c);
nlohmann::json to_json(const SigmaPrimeResult& r);
nlohmann::json to_json(const LowerBoundDiagnostic& d);

}  // namespace treepressure
