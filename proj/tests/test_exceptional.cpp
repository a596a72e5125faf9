#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "treepressure/errors.hpp"
#include "treepressure/exceptional.hpp"
#include "treepressure/preimage.hpp"

using namespace treepressure;

namespace {

// closed-form preimages of 4x(1-x)
std::vector<double> cheb_pre(double y) {
  const double r = std::sqrt(1.0 - y);
  return {(1.0 - r) / 2.0, (1.0 + r) / 2.0};
}

double dist(const std::vector<double>& s, double y) {
  double d = INFINITY;
  for (double v : s) d = std::min(d, std::abs(v - y));
  return d;
}

void check_invariants(const SmoothIntervalMap& f, const std::vector<double>& sigma, const std::vector<double>& lambda) {
  REQUIRE_FALSE(sigma.empty());
  for (double s : sigma) {
    CHECK(dist(sigma, f.eval(s)) < 1e-9);
    for (double y : preimages(f, s)) CHECK((dist(sigma, y) < 1e-9 || dist(lambda, y) < 1e-9));
  }
}

bool contains_set(const std::vector<ExceptionalReport>& rs, const std::vector<double>& sigma) {
  for (const auto& r : rs) {
    if (r.status != ExceptionalStatus::Exceptional || r.sigma.size() != sigma.size()) continue;
    bool same = true;
    for (std::size_t i = 0; i < sigma.size(); ++i) same = same && std::abs(r.sigma[i] - sigma[i]) < 1e-9;
    if (same) return true;
  }
  return false;
}

}  // namespace

TEST_CASE("chebyshev with a pole at the critical point") {
  const auto f = SmoothIntervalMap::chebyshev();
  const std::vector<double> lambda{0.5};
  // two-step closure by hand: f^-1(0) = {0,1}, f^-1(1) = {1/2}
  CHECK(cheb_pre(0.0) == std::vector<double>{0.0, 1.0});
  CHECK(cheb_pre(1.0) == std::vector<double>{0.5, 0.5});

  const auto rs = find_exceptional_sets(f, lambda);
  REQUIRE(contains_set(rs, {0.0, 1.0}));
  for (const auto& r : rs)
    if (r.status == ExceptionalStatus::Exceptional) {
      CHECK(r.sigma == std::vector<double>{0.0, 1.0});
      CHECK(r.seed_cycle == std::vector<double>{0.0});
      CHECK(r.seed_period == 1);
      REQUIRE(r.trace.size() == 2);
      CHECK(r.trace[0].processed == 0.0);
      CHECK(r.trace[0].added == std::vector<double>{1.0});
      CHECK(r.trace[1].added.empty());
      CHECK(r.forward_defect < 1e-9);
      CHECK(r.backward_defect < 1e-9);
    }

  const auto rep = is_exceptional(f, SingularPotential::geometric(f, -0.5));
  CHECK(rep.status == ExceptionalStatus::Exceptional);
  CHECK(rep.sigma == std::vector<double>{0.0, 1.0});
  CHECK(to_string(rep.status) == "exceptional");
}

TEST_CASE("empty singular set is trivially non-exceptional") {
  const auto f = SmoothIntervalMap::chebyshev();
  const auto r1 = is_exceptional(f, SingularPotential::polynomial({0.0, 0.5}));
  CHECK(r1.status == ExceptionalStatus::NonExceptionalTrivial);
  CHECK(to_string(r1.status) == "non_exceptional_certified_trivially");
  const auto g = SmoothIntervalMap::logistic(4.5);
  CHECK(is_exceptional(g, SingularPotential::geometric(g, -0.5)).status == ExceptionalStatus::NonExceptionalTrivial);
  CHECK(find_exceptional_sets(g, std::vector<double>{}).size() == 1);
}

TEST_CASE("fixed point 3/4 closes when its other preimage is a pole") {
  // f^-1(3/4) = {1/4, 3/4}
  const auto f = SmoothIntervalMap::chebyshev();
  CHECK(cheb_pre(0.75)[0] == doctest::Approx(0.25).epsilon(1e-15));
  const std::vector<double> lambda{0.25};
  const auto rs = find_exceptional_sets(f, lambda);
  bool found = false;
  for (const auto& r : rs)
    if (r.status == ExceptionalStatus::Exceptional && r.sigma.size() == 1) {
      CHECK(r.sigma[0] == doctest::Approx(0.75).epsilon(1e-12));
      found = true;
    }
  CHECK(found);
}

TEST_CASE("no exceptional set when the pole is off every backward orbit closure") {
  const auto f = SmoothIntervalMap::chebyshev();
  const std::vector<double> lambda{0.3};
  const auto rs = find_exceptional_sets(f, lambda, {3, 16});
  for (const auto& r : rs) CHECK(r.status == ExceptionalStatus::NoSetFound);
  const auto agg = is_exceptional(f, SingularPotential::custom(f, HoelderPart{{0.0}}, {}));
  CHECK(agg.status == ExceptionalStatus::NonExceptionalTrivial);
}

TEST_CASE("returned sets satisfy forward and backward invariance") {
  const auto f = SmoothIntervalMap::chebyshev();
  const auto g = SmoothIntervalMap::logistic(4.5);
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<std::vector<double>> lambdas{{0.5}, {0.25}, {0.25, 0.5}, {0.0}, {1.0}, {0.5, 0.75}};
  for (int k = 0; k < 10; ++k) lambdas.push_back({0.5, u(rng)});
  std::size_t exceptional = 0;
  for (const auto& lam : lambdas) {
    for (const auto* m : {&f, &g}) {
      for (const auto& r : find_exceptional_sets(*m, lam, {4, 32})) {
        if (r.status != ExceptionalStatus::Exceptional) continue;
        ++exceptional;
        check_invariants(*m, r.sigma, lam);
        CHECK(r.forward_defect < 1e-9);
        CHECK(r.backward_defect < 1e-9);
      }
    }
  }
  CHECK(exceptional > 0);
}

TEST_CASE("search is monotone in p_max and size_max") {
  const auto f = SmoothIntervalMap::chebyshev();
  for (const std::vector<double>& lam : {std::vector<double>{0.5}, {0.25}, {0.25, 0.5}}) {
    for (int p = 1; p < 6; ++p)
      for (std::size_t s : {2u, 4u, 16u}) {
        const auto small = find_exceptional_sets(f, lam, {p, s});
        const auto big_p = find_exceptional_sets(f, lam, {p + 1, s});
        const auto big_s = find_exceptional_sets(f, lam, {p, 2 * s});
        for (const auto& r : small) {
          if (r.status != ExceptionalStatus::Exceptional) continue;
          CHECK(contains_set(big_p, r.sigma));
          CHECK(contains_set(big_s, r.sigma));
        }
      }
  }
}

TEST_CASE("search caps") {
  const auto f = SmoothIntervalMap::chebyshev();
  const std::vector<double> lam{0.5};
  CHECK_THROWS_AS(find_exceptional_sets(f, lam, {9, 16}), CapExceeded);
  CHECK_THROWS_AS(find_exceptional_sets(f, lam, {0, 16}), CapExceeded);
  CHECK_THROWS_AS(find_exceptional_sets(f, lam, {4, 65}), CapExceeded);
  CHECK_NOTHROW(find_exceptional_sets(f, lam, {8, 64}));
}

TEST_CASE("set defects") {
  const auto f = SmoothIntervalMap::chebyshev();
  const std::vector<double> lam{0.5};
  const auto good = exceptional_set_defects(f, std::vector<double>{0.0, 1.0}, lam);
  CHECK(good.forward == 0.0);
  CHECK(good.backward < 1e-12);
  // {0} alone is forward invariant but 1 escapes
  const auto bad = exceptional_set_defects(f, std::vector<double>{0.0}, lam);
  CHECK(bad.forward == 0.0);
  CHECK(bad.backward == doctest::Approx(0.5));
}

TEST_CASE("sigma-prime construction, examples") {
  const auto f = SmoothIntervalMap::chebyshev();
  const auto G = SingularPotential::geometric(f, -0.5);
  const std::vector<double> tilde{0.0, 1.0};
  for (int N : {1, 2, 3}) {
    const auto r = sigma_prime_construction(f, G, N, tilde);
    CHECK(r.sigma_prime == std::vector<double>{0.0, 1.0});
    CHECK(r.escaping == std::vector<double>{0.5});
    CHECK(r.last_pole_index == std::vector<int>{0});
    CHECK(r.anchors == std::vector<double>{0.5});
    check_invariants(f, r.sigma_prime, G.singular_set());
  }
}

TEST_CASE("sigma-prime preconditions") {
  const auto f = SmoothIntervalMap::chebyshev();
  const auto G = SingularPotential::geometric(f, -0.5);
  // 3/4 is fixed but 1/4 never reaches the pole
  CHECK_THROWS_AS(sigma_prime_construction(f, G, 2, std::vector<double>{0.75}), PreconditionError);
  // {0} alone: 1 escapes and never hits 1/2 forward
  CHECK_THROWS_AS(sigma_prime_construction(f, G, 3, std::vector<double>{0.0}), PreconditionError);
  // not forward invariant
  CHECK_THROWS_AS(sigma_prime_construction(f, G, 2, std::vector<double>{1.0}), PreconditionError);
  CHECK_THROWS_AS(sigma_prime_construction(f, G, 0, std::vector<double>{0.0, 1.0}), PreconditionError);
  CHECK_THROWS_AS(sigma_prime_construction(f, G, 2, std::vector<double>{}), PreconditionError);
}

TEST_CASE("sigma-prime soundness over t and N") {
  const auto f = SmoothIntervalMap::chebyshev();
  for (double t : {-0.5, -1.0, -2.0}) {
    const auto G = SingularPotential::geometric(f, t);
    const auto rep = is_exceptional(f, G);
    REQUIRE(rep.status == ExceptionalStatus::Exceptional);
    for (int N = 1; N <= 5; ++N) {
      const auto r = sigma_prime_construction(f, G, N, rep.sigma);
      CHECK(r.defects.forward < 1e-9);
      CHECK(r.defects.backward < 1e-9);
      check_invariants(f, r.sigma_prime, G.singular_set());
    }
  }
}
