#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "treepressure/errors.hpp"
#include "treepressure/potentials.hpp"
#include "treepressure/preimage.hpp"

using namespace treepressure;

namespace {

const double kLog2 = std::numbers::ln2;

std::vector<SingularPotential> builtin_potentials(const SmoothIntervalMap& f) {
  return {SingularPotential::constant(0.0), SingularPotential::polynomial({0.0, 0.5}),
          SingularPotential::geometric(f, -0.5), SingularPotential::geometric(f, -1.0)};
}

// h(x) = -(1/N) sum_j (N-1-j) G(f^j x) by plain forward iteration.
double h_reference(const SingularPotential& G, const SmoothIntervalMap& f, int N, double x) {
  double s = 0.0;
  for (int j = 0; j < N; ++j) {
    s += (N - 1 - j) * G(x).value();
    x = f.eval(x);
  }
  return -s / N;
}

}  // namespace

TEST_CASE("geometric potential on chebyshev") {
  const auto f = SmoothIntervalMap::chebyshev();
  const auto G = SingularPotential::geometric(f, -1.0);
  CHECK(G.name() == "geometric(t=-1)");
  REQUIRE(G.hoelder().poly.size() == 1);
  CHECK(G.hoelder().poly[0] == doctest::Approx(std::log(8.0)).epsilon(1e-15));
  REQUIRE(G.singular_terms().size() == 1);
  CHECK(G.singular_terms()[0].center == 0.5);
  CHECK(G.singular_terms()[0].weight == 1.0);
  CHECK(G(0.5).is_neg_infinity());
  CHECK(G(0.0).value() == doctest::Approx(std::log(4.0)).epsilon(1e-15));
  CHECK(eval_potential(G, f, 1.0).value() == doctest::Approx(std::log(4.0)).epsilon(1e-15));

  const auto zero = SingularPotential::geometric(f, 0.0);
  CHECK(zero(0.3).value() == 0.0);
  CHECK(zero(0.5).value() == 0.0);
  CHECK(zero.singular_set().empty());
  CHECK_THROWS_AS(SingularPotential::geometric(f, 0.5), PreconditionError);
}

TEST_CASE("singular sets") {
  const auto f = SmoothIntervalMap::chebyshev();
  CHECK(SingularPotential::geometric(f, -0.5).singular_set() == std::vector<double>{0.5});
  CHECK(SingularPotential::polynomial({0.0, 0.5}).singular_set().empty());
  const auto l = SmoothIntervalMap::logistic(4.5);
  CHECK(SingularPotential::geometric(l, -0.5).singular_set().empty());
}

TEST_CASE("geometric decomposition is exact away from the critical point") {
  for (const auto& f : {SmoothIntervalMap::chebyshev(), SmoothIntervalMap::logistic(4.5)}) {
    for (double t : {-0.25, -0.5, -1.0, -2.0}) {
      const auto G = SingularPotential::geometric(f, t);
      for (int i = 0; i <= 2000; ++i) {
        const double x = i / 2000.0;
        if (std::abs(x - 0.5) <= 1e-6) continue;
        CHECK(std::abs(G(x).value() - (-t) * std::log(std::abs(f.deriv(x)))) < 1e-12);
      }
    }
  }
}

TEST_CASE("class U gate") {
  const auto f = SmoothIntervalMap::chebyshev();
  HoelderPart g;
  g.poly = {0.1};
  CHECK_NOTHROW(SingularPotential::custom(f, g, {{0.5, 2.0}}));
  CHECK_THROWS_AS(SingularPotential::custom(f, g, {{0.5, -1.0}}), PreconditionError);
  CHECK_THROWS_AS(SingularPotential::custom(f, g, {{0.3, 1.0}}), PreconditionError);
  const auto l = SmoothIntervalMap::logistic(4.5);
  CHECK_THROWS_AS(SingularPotential::custom(l, g, {{0.5, 1.0}}), PreconditionError);
}

TEST_CASE("weight decreases monotonically to zero at a pole") {
  const auto f = SmoothIntervalMap::chebyshev();
  for (double t : {-0.5, -1.0}) {
    const auto G = SingularPotential::geometric(f, t);
    for (double side : {-1.0, 1.0}) {
      double prev = std::numeric_limits<double>::infinity();
      for (int k = 4; k <= 12; ++k) {
        const double w = eval_potential(G, f, 0.5 + side * std::pow(10.0, -k)).weight();
        CHECK(w < prev);
        if (k < 12) CHECK(w > 0.0);  // c ± 1e-12 rounds inside the pole-snap radius
        prev = w;
      }
      CHECK(prev < 1e-5);
      CHECK(eval_potential(G, f, 0.5).weight() == 0.0);
    }
  }
}

TEST_CASE("birkhoff sums") {
  const auto f = SmoothIntervalMap::chebyshev();
  const auto G = SingularPotential::geometric(f, -1.0);
  CHECK(birkhoff_sum(SingularPotential::constant(0.0), f, 0.37, 9).value() == 0.0);
  CHECK(birkhoff_sum(G, f, 0.75, 2).value() == doctest::Approx(2 * kLog2).epsilon(1e-14));
  CHECK(birkhoff_sum(G, f, 0.5, 1).is_neg_infinity());
  CHECK_THROWS_AS((void)birkhoff_sum(SingularPotential::constant(0.0), SmoothIntervalMap::logistic(4.5), 0.5, 3),
                  DomainError);
}

TEST_CASE("coboundary_h and the averaged potential") {
  const auto f = SmoothIntervalMap::chebyshev();
  const auto G = SingularPotential::geometric(f, -1.0);
  CHECK(*coboundary_h(G, f, 1, 0.3) == 0.0);
  CHECK(*coboundary_h(SingularPotential::constant(1.7), f, 3, 0.3) == doctest::Approx(-1.7).epsilon(1e-15));
  CHECK(*coboundary_h(G, f, 2, 0.75) == doctest::Approx(-0.5 * kLog2).epsilon(1e-14));

  for (double x : {0.0, 0.21, 0.5, 0.9})
    CHECK(averaged_potential_eval(G, f, 1, x) == G(x));
  const double pre_pole = (2.0 + std::sqrt(2.0)) / 4.0;
  CHECK(averaged_potential_eval(G, f, 2, pre_pole).is_neg_infinity());
  CHECK_FALSE(coboundary_h(G, f, 3, pre_pole).has_value());
  CHECK(averaged_potential_eval(SingularPotential::constant(0.0), f, 5, 0.61).value() == 0.0);

  const AveragedPotential avg(G, f, 3);
  CHECK(avg(0.2).value() == doctest::Approx(averaged_potential_eval(G, f, 3, 0.2).value()).epsilon(1e-15));
  CHECK(avg.pole_distance(pre_pole) < 1e-12);
}

TEST_CASE("coboundary_h matches plain forward iteration") {
  for (const auto& f : {SmoothIntervalMap::chebyshev(), SmoothIntervalMap::logistic(4.5)}) {
    const auto pts = julia_samples(f, 50);
    for (const auto& G : builtin_potentials(f)) {
      for (int N = 1; N <= 5; ++N) {
        for (double x : pts) {
          const auto h = coboundary_h(G, f, N, x);
          if (!h) continue;
          CHECK(std::abs(*h - h_reference(G, f, N, x)) < 1e-12 * (1.0 + std::abs(*h)));
        }
      }
    }
  }
}

TEST_CASE("cohomology identity on every built-in combination") {
  for (const auto& f : {SmoothIntervalMap::chebyshev(), SmoothIntervalMap::logistic(4.5)}) {
    const auto pts = julia_samples(f, 100);
    REQUIRE(pts.size() == 100);
    for (const auto& G : builtin_potentials(f)) {
      for (int N = 1; N <= 5; ++N) {
        const auto c = verify_cohomology(G, f, N, pts);
        CHECK(c.max_residual < 1e-10);
        CHECK(c.used + c.filtered == 100);
        CHECK(c.used > 50);
        if (N == 1) CHECK(c.max_residual == 0.0);
      }
    }
  }
  const auto f = SmoothIntervalMap::chebyshev();
  const std::vector<double> only_pole{0.5};
  CHECK_THROWS_AS((void)verify_cohomology(SingularPotential::geometric(f, -1.0), f, 2, only_pole), PreconditionError);
}

TEST_CASE("sup bound and telescoping identity") {
  const auto f = SmoothIntervalMap::chebyshev();
  const std::vector<Interval> K{{0.05, 0.45}, {0.55, 0.95}};
  const auto c0 = verify_snbound(SingularPotential::constant(-2.0), f, 3, K, 10);
  CHECK(c0.lhs == 0.0);
  CHECK(c0.bound == 0.0);
  CHECK(c0.holds());

  const auto half = SingularPotential::polynomial({0.0, 0.5});
  const auto c = verify_snbound(half, f, 3, K, 10);
  CHECK(c.holds());
  CHECK(c.bound == doctest::Approx(2 * 0.5 * (0.95 - 0.05)).epsilon(0.01));
  CHECK(c.telescoping_residual < 1e-8);
  // n < N
  for (int n = 1; n < 5; ++n) CHECK(verify_snbound(half, f, 5, K, n).telescoping_residual < 1e-8);
}

TEST_CASE("telescoping identity on all built-ins, n <= 20") {
  const std::vector<Interval> K0{{0.05, 0.45}, {0.55, 0.95}};
  for (const auto& f : {SmoothIntervalMap::chebyshev(), SmoothIntervalMap::logistic(4.5)}) {
    for (const auto& G : builtin_potentials(f)) {
      for (int N = 1; N <= 5; ++N) {
        const auto K = excise_points(K0, backward_orbit_union(f, G.singular_set(), N), 1e-3);
        for (int n = 1; n <= 20; ++n) CHECK(verify_snbound(G, f, N, K, n).telescoping_residual < 1e-8);
      }
    }
  }
}

TEST_CASE("pole inside K is a precondition violation") {
  const auto f = SmoothIntervalMap::chebyshev();
  SampleOptions opt;
  opt.per_interval = 1;  // the single sample is the midpoint 1/2
  const std::vector<Interval> at_pole{{0.49, 0.51}};
  CHECK_THROWS_AS((void)verify_snbound(SingularPotential::geometric(f, -1.0), f, 1, at_pole, 3, opt),
                  PreconditionError);
}

TEST_CASE("sup of Birkhoff averages") {
  const auto f = SmoothIntervalMap::chebyshev();
  for (int n : {1, 3, 6}) CHECK(sup_birkhoff_average(SingularPotential::constant(0.0), f, n, 101).value == 0.0);
  CHECK(sup_birkhoff_average(SingularPotential::constant(-5.0), f, 4, 101).value == doctest::Approx(-5.0));
  const auto s = sup_birkhoff_average(SingularPotential::geometric(f, -1.0), f, 1, 1001);
  CHECK(s.value == doctest::Approx(std::log(4.0)).epsilon(1e-12));
  CHECK((s.argmax == 0.0 || s.argmax == 1.0));
  CHECK(s.refined > 0);
  CHECK_THROWS_AS((void)sup_birkhoff_average(SingularPotential::constant(0.0), f, 0, 10), PreconditionError);

  const auto l = SmoothIntervalMap::logistic(4.5);
  const auto sl = sup_birkhoff_average(SingularPotential::polynomial({0.0, 1.0}), l, 1, 2);
  CHECK(sl.value <= 1.0);
  CHECK(sl.value > 0.99);
}

TEST_CASE("sampled orbits on the repeller stay in K and follow the map") {
  const auto l = SmoothIntervalMap::logistic(4.5);
  const std::vector<Interval> K{{0.05, 0.45}, {0.55, 0.95}};
  const auto orbits = sample_orbits(l, K, 6);
  REQUIRE(!orbits.empty());
  for (const auto& o : orbits) {
    REQUIRE(o.size() == 7);
    CHECK((K[0].contains(o[0]) || K[1].contains(o[0])));
    for (std::size_t k = 0; k + 1 < o.size(); ++k) CHECK(std::abs(l.eval(o[k]) - o[k + 1]) < 1e-11);
  }
}

TEST_CASE("shifted potentials") {
  const auto f = SmoothIntervalMap::chebyshev();
  const auto G = SingularPotential::geometric(f, -0.5);
  const auto H = G.shifted(0.25);
  CHECK(H(0.3).value() == doctest::Approx(G(0.3).value() + 0.25).epsilon(1e-15));
  CHECK(H(0.5).is_neg_infinity());
  CHECK(H.singular_set() == G.singular_set());
}
