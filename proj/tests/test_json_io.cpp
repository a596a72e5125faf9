#include <doctest.h>

#include <cmath>
#include <limits>
#include <string>

#include "treepressure/json_io.hpp"

using namespace treepressure;
using nlohmann::json;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// message of the ConfigError thrown by `fn`, or "" when none is thrown
template <class F>
std::string config_error(F&& fn) {
  try {
    fn();
  } catch (const ConfigError& e) {
    return e.what();
  }
  return "";
}

json reparse(const json& j) { return json::parse(j.dump()); }

}  // namespace

TEST_CASE("reals survive a text round trip") {
  for (double v : {0.0, -0.0, 1.0 / 3.0, std::log(2.0), 1e-300, -1.7976931348623157e308, kInf, -kInf}) {
    const json j = reparse(json{{"v", json_real(v)}});
    const double back = real_from_json(j.at("v"));
    CHECK(back == v);
  }
  CHECK(json_real(-kInf) == "-inf");
  CHECK(json_real(kInf) == "inf");
  CHECK(json_real(std::nan("")).is_null());
  CHECK(std::isnan(real_from_json(json(nullptr))));
  CHECK_THROWS_AS(real_from_json(json("minus infinity")), ConfigError);
  CHECK_THROWS_AS(real_from_json(json::array()), ConfigError);
}

TEST_CASE("map configs") {
  CHECK(map_from_json(json{{"family", "chebyshev"}}).name() == SmoothIntervalMap::chebyshev().name());
  const auto g = map_from_json(json{{"family", "logistic"}, {"a", 4.5}});
  CHECK(g.eval(0.5) == doctest::Approx(4.5 * 0.25));
  const auto p = map_from_json(json{{"family", "polynomial"}, {"coeffs", {0.0, 4.0, -4.0}}, {"domain", {0.0, 1.0}}});
  CHECK(p.eval(0.25) == doctest::Approx(0.75));

  CHECK(config_error([] { map_from_json(json::object()); }).find("\"family\"") != std::string::npos);
  CHECK(config_error([] { map_from_json(json{{"family", "logistic"}}); }).find("\"a\"") != std::string::npos);
  CHECK(config_error([] { map_from_json(json{{"family", "tent"}}); }).find("tent") != std::string::npos);
  CHECK(config_error([] { map_from_json(json{{"family", "logistic"}, {"a", "big"}}); }).find("\"a\"") !=
        std::string::npos);
  CHECK(config_error([] {
          map_from_json(json{{"family", "polynomial"}, {"coeffs", {0.0, 4.0, -4.0}}, {"domain", {0.0}}});
        }).find("\"domain\"") != std::string::npos);
  CHECK(config_error([] {
          map_from_json(json{{"family", "polynomial"}, {"coeffs", {0.0, "x"}}, {"domain", {0.0, 1.0}}});
        }).find("\"coeffs\"") != std::string::npos);
  // logistic below 4 is not a supported repeller
  CHECK_FALSE(config_error([] { map_from_json(json{{"family", "logistic"}, {"a", 3.0}}); }).empty());
}

TEST_CASE("potential configs") {
  const auto f = SmoothIntervalMap::chebyshev();
  const auto c = potential_from_json(json{{"kind", "constant"}, {"value", 0.25}}, f);
  CHECK(c(0.3).value() == 0.25);
  const auto p = potential_from_json(json{{"kind", "polynomial"}, {"coeffs", {0.0, 0.5}}}, f);
  CHECK(p(0.3).value() == doctest::Approx(0.15));
  const auto geo = potential_from_json(json{{"kind", "geometric"}, {"t", -0.5}}, f);
  CHECK(geo(0.5).is_neg_infinity());
  CHECK(geo.singular_set() == std::vector<double>{0.5});
  const auto cu = potential_from_json(
      json{{"kind", "custom"},
           {"hoelder", {{"kind", "polynomial"}, {"coeffs", {1.0, 2.0}}}},
           {"singular", json::array({{{"c", 0.5}, {"b", 1.0}}})}},
      f);
  CHECK(cu(0.25).value() == doctest::Approx(1.5 + std::log(0.25)));
  CHECK(cu.singular_set() == std::vector<double>{0.5});

  CHECK(config_error([&] { potential_from_json(json{{"kind", "geometric"}}, f); }).find("\"t\"") != std::string::npos);
  CHECK(config_error([&] { potential_from_json(json{{"kind", "custom"}}, f); }).find("\"hoelder\"") !=
        std::string::npos);
  CHECK(config_error([&] {
          potential_from_json(json{{"kind", "custom"},
                                   {"hoelder", {{"kind", "constant"}, {"value", 0.0}}},
                                   {"singular", json::array({{{"c", 0.5}}})}},
                              f);
        }).find("\"b\"") != std::string::npos);
  CHECK(config_error([&] { potential_from_json(json{{"kind", "wavelet"}}, f); }).find("wavelet") !=
        std::string::npos);
  // a pole off the critical set is rejected as a configuration problem
  CHECK_FALSE(config_error([&] {
                potential_from_json(json{{"kind", "custom"},
                                         {"hoelder", {{"kind", "constant"}, {"value", 0.0}}},
                                         {"singular", json::array({{{"c", 0.3}, {"b", 1.0}}})}},
                                    f);
              }).empty());
}

TEST_CASE("field helpers") {
  const json j{{"n", 12}, {"x", 0.3}, {"name", "a"}};
  CHECK(get_or<int>(j, "n", 4) == 12);
  CHECK(get_or<int>(j, "missing", 4) == 4);
  CHECK(get_required<double>(j, "x") == 0.3);
  CHECK(config_error([&] { get_required<double>(j, "epsilon"); }) == "missing required field \"epsilon\"");
  CHECK(config_error([&] { get_or<int>(j, "name", 0); }).find("\"name\"") != std::string::npos);
}

TEST_CASE("tree fold and estimate reports") {
  TreeFoldResult r;
  r.depth = 3;
  r.leaf_count = 6;
  r.pole_hits = 2;
  const json empty = reparse(to_json(r));
  CHECK(empty.at("log_sum") == "-inf");
  CHECK(empty.at("min_pole_distance") == "inf");
  CHECK(real_from_json(empty.at("log_sum")) == -kInf);

  r.log_sum = ExtendedReal(std::log(6.0));
  r.min_pole_distance = 0.125;
  const json j = reparse(to_json(r));
  CHECK(j.at("depth") == 3);
  CHECK(j.at("leaf_count") == 6);
  CHECK(j.at("pole_hits") == 2);
  CHECK(j.at("log_sum").get<double>() == std::log(6.0));
  CHECK(j.at("min_pole_distance").get<double>() == 0.125);
  CHECK(j.contains("elapsed_ms"));

  PressureEstimate e;
  e.method = PressureMethod::Ulam;
  e.value = std::log(2.0);
  e.size = 1024;
  e.spectral = SpectralDiagnostics{1024, 4096, 33, 2.0, 1e-13};
  e.map_name = "chebyshev";
  e.potential_name = "zero";
  const json je = reparse(to_json(e));
  CHECK(je.at("method") == "ulam");
  CHECK(je.at("value").get<double>() == std::log(2.0));
  CHECK(je.at("spectral").at("bins") == 1024);
  CHECK(je.at("spectral").at("iterations") == 33);
  CHECK_FALSE(je.contains("tree"));
  CHECK_FALSE(je.contains("periodic"));
  CHECK_FALSE(je.contains("cauchy_increment"));
}

TEST_CASE("exceptional and hyperbolicity reports") {
  ExceptionalReport r;
  r.status = ExceptionalStatus::Exceptional;
  r.sigma = {0.0, 1.0};
  r.seed_cycle = {0.0};
  r.seed_period = 1;
  r.trace = {{0.0, {1.0}}, {1.0, {}}};
  const json j = reparse(to_json(r));
  CHECK(j.at("status") == "exceptional");
  CHECK(j.at("sigma") == json::array({0.0, 1.0}));
  CHECK(j.at("closure_trace").size() == 2);
  CHECK(j.at("closure_trace")[0].at("added") == json::array({1.0}));

  HyperbolicityReport h;
  h.sup_estimate = 0.1;
  h.pressure_estimate = std::log(2.0);
  h.margin = h.pressure_estimate - h.sup_estimate;
  h.hyperbolic = true;
  h.oracle_method = PressureMethod::Ulam;
  h.n_used = 2;
  CHECK(reparse(to_json(h)).at("verdict") == "hyperbolic");
  h.hyperbolic = false;
  const json jh = reparse(to_json(h));
  CHECK(jh.at("verdict") == "inconclusive");
  CHECK(jh.at("oracle_method") == "ulam");
  CHECK(jh.at("n_used") == 2);

  NormalityCertificate c;
  c.point = 1.0;
  c.depth = 1;
  c.normal = false;
  c.blocking_depth = 1;
  const json jc = reparse(to_json(c));
  CHECK(jc.at("normal") == false);
  CHECK(jc.at("blocking_depth") == 1);
  CHECK_FALSE(jc.contains("witness"));
}
