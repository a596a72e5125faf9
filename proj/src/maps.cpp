#include "treepressure/maps.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <sstream>

#include "treepressure/errors.hpp"
#include "treepressure/root_finding.hpp"

namespace treepressure {

std::string to_string(JuliaStructure s) {
  return s == JuliaStructure::FullInterval ? "full_interval" : "cantor_repeller";
}

double TentConjugacy::to_interval(double theta) {
  const double s = std::sin(std::numbers::pi * theta / 2.0);
  return s * s;
}

double TentConjugacy::tent(double theta) { return theta <= 0.5 ? 2.0 * theta : 2.0 - 2.0 * theta; }

namespace {

std::string format_real(double a) {
  std::ostringstream os;
  os.precision(17);
  os << a;
  return os.str();
}

// Smallest k ≥ 2 with a non-vanishing k-th derivative at c.
int critical_order(const Polynomial& p, double c) {
  Polynomial d = p.derivative().derivative();
  double factorial = 2.0;
  for (int k = 2; k <= std::max(2, p.degree()); ++k) {
    if (std::abs(d(c) / factorial) > 1e-9) return k;
    d = d.derivative();
    factorial *= (k + 1);
  }
  return std::max(2, p.degree());
}

void dedup_sorted(std::vector<PeriodicPoint>& pts) {
  std::sort(pts.begin(), pts.end(),
            [](const PeriodicPoint& a, const PeriodicPoint& b) { return a.point < b.point; });
  std::vector<PeriodicPoint> out;
  out.reserve(pts.size());
  // Points near the endpoints can sit closer than any fixed tolerance; only
  // drop a point when its whole orbit shadows one already kept.
  auto same_orbit = [](const PeriodicPoint& a, const PeriodicPoint& b) {
    if (a.orbit.size() != b.orbit.size()) return false;
    for (std::size_t j = 0; j < a.orbit.size(); ++j)
      if (std::abs(a.orbit[j] - b.orbit[j]) >= kPeriodicDedupTolerance) return false;
    return true;
  };
  for (auto& p : pts) {
    bool dup = false;
    for (auto it = out.rbegin(); it != out.rend() && p.point - it->point < kPeriodicDedupTolerance; ++it)
      if (same_orbit(p, *it)) {
        dup = true;
        break;
      }
    if (!dup) out.push_back(std::move(p));
  }
  pts = std::move(out);
}

}  // namespace

SmoothIntervalMap SmoothIntervalMap::chebyshev() {
  SmoothIntervalMap m;
  m.name_ = "chebyshev";
  m.domain_ = {0.0, 1.0};
  m.quadratic_a_ = 4.0;
  m.poly_ = Polynomial({0.0, 4.0, -4.0});
  m.dpoly_ = m.poly_.derivative();
  m.critical_ = {CriticalPoint{0.5, 2, true}};
  m.julia_ = JuliaStructure::FullInterval;
  m.conjugacy_ = TentConjugacy{};
  m.certified_ = true;
  m.build_branches();
  return m;
}

SmoothIntervalMap SmoothIntervalMap::logistic(double a) {
  if (!(a >= 4.4))
    throw PreconditionError("logistic: parameter a=" + format_real(a) +
                            " below 4.4; repeller hyperbolicity is not certified");
  SmoothIntervalMap m;
  m.name_ = "logistic(a=" + format_real(a) + ")";
  m.domain_ = {0.0, 1.0};
  m.quadratic_a_ = a;
  m.poly_ = Polynomial({0.0, a, -a});
  m.dpoly_ = m.poly_.derivative();
  // f(1/2) = a/4 > 1 escapes, so 1/2 ∉ J.
  m.critical_ = {CriticalPoint{0.5, 2, false}};
  m.julia_ = JuliaStructure::CantorRepeller;
  m.certified_ = true;
  m.build_branches();
  return m;
}

SmoothIntervalMap SmoothIntervalMap::polynomial(std::vector<double> coeffs, Interval domain) {
  if (!(domain.lo < domain.hi)) throw PreconditionError("polynomial map: empty domain");
  SmoothIntervalMap m;
  m.poly_ = Polynomial(std::move(coeffs));
  if (m.poly_.degree() < 2) throw PreconditionError("polynomial map: degree must be at least 2");
  m.dpoly_ = m.poly_.derivative();
  m.domain_ = domain;
  {
    std::ostringstream os;
    os.precision(17);
    os << "polynomial[";
    const auto c = m.poly_.coefficients();
    for (std::size_t k = 0; k < c.size(); ++k) os << (k ? "," : "") << c[k];
    os << "] on [" << domain.lo << "," << domain.hi << "]";
    m.name_ = os.str();
  }

  std::vector<double> crit;
  for (double c : real_roots_in(m.dpoly_, domain.lo, domain.hi))
    if (c > domain.lo && c < domain.hi) crit.push_back(c);
  if (crit.empty()) throw PreconditionError("polynomial map: injective on its domain (no interior critical point)");

  double fmin = std::min(m.poly_(domain.lo), m.poly_(domain.hi));
  double fmax = std::max(m.poly_(domain.lo), m.poly_(domain.hi));
  for (double c : crit) {
    fmin = std::min(fmin, m.poly_(c));
    fmax = std::max(fmax, m.poly_(c));
  }
  const bool self_map = fmin >= domain.lo - kDomainSlack && fmax <= domain.hi + kDomainSlack;
  m.julia_ = self_map ? JuliaStructure::FullInterval : JuliaStructure::CantorRepeller;

  for (double c : crit) {
    bool stays = true;
    if (!self_map) {
      double x = c;
      for (int k = 0; k < 64 && stays; ++k) {
        x = m.poly_(x);
        stays = domain.contains(x, kDomainSlack);
        x = domain.clamp(x);
      }
    }
    m.critical_.push_back(CriticalPoint{c, critical_order(m.poly_, c), stays});
  }
  m.certified_ = false;
  m.build_branches();
  return m;
}

void SmoothIntervalMap::build_branches() {
  std::vector<double> knots{domain_.lo};
  for (const auto& c : critical_) knots.push_back(c.location);
  knots.push_back(domain_.hi);
  branches_.clear();
  for (std::size_t k = 0; k + 1 < knots.size(); ++k) {
    MonotoneBranch b;
    b.domain = {knots[k], knots[k + 1]};
    const double mid = 0.5 * (knots[k] + knots[k + 1]);
    b.orientation = raw_deriv(mid) > 0 ? Orientation::Increasing : Orientation::Decreasing;
    const double fa = raw_eval(knots[k]);
    const double fb = raw_eval(knots[k + 1]);
    b.image = {std::min(fa, fb), std::max(fa, fb)};
    branches_.push_back(b);
  }
}

double SmoothIntervalMap::raw_eval(double x) const {
  if (quadratic_a_) return *quadratic_a_ * x * (1.0 - x);
  return poly_(x);
}

double SmoothIntervalMap::raw_deriv(double x) const {
  if (quadratic_a_) return *quadratic_a_ * (1.0 - 2.0 * x);
  return dpoly_(x);
}

void SmoothIntervalMap::check_domain(double x, const char* what) const {
  if (!in_domain(x)) {
    throw DomainError(std::string(what) + ": x=" + format_real(x) + " outside domain [" +
                      format_real(domain_.lo) + ", " + format_real(domain_.hi) + "] of " + name_);
  }
}

double SmoothIntervalMap::eval(double x) const {
  check_domain(x, "eval");
  return raw_eval(domain_.clamp(x));
}

double SmoothIntervalMap::deriv(double x) const {
  check_domain(x, "deriv");
  return raw_deriv(domain_.clamp(x));
}

Orbit SmoothIntervalMap::iterate(double x, int n) const {
  if (n < 0) throw PreconditionError("iterate: n must be nonnegative");
  check_domain(x, "iterate");
  Orbit orbit;
  orbit.points.reserve(static_cast<std::size_t>(n) + 1);
  double cur = domain_.clamp(x);
  orbit.points.push_back(cur);
  for (int j = 1; j <= n; ++j) {
    cur = raw_eval(cur);
    orbit.points.push_back(cur);
    if (!in_domain(cur)) {
      orbit.escape_index = static_cast<std::size_t>(j);
      break;
    }
    cur = domain_.clamp(cur);
  }
  return orbit;
}

std::size_t SmoothIntervalMap::branch_index(double x) const {
  check_domain(x, "branch_index");
  for (std::size_t b = 0; b < branches_.size(); ++b)
    if (branches_[b].domain.contains(x)) return b;
  return x < domain_.lo ? 0 : branches_.size() - 1;
}

double SmoothIntervalMap::branch_inverse(std::size_t b, double x) const {
  if (b >= branches_.size()) throw PreconditionError("branch_inverse: no such branch");
  const MonotoneBranch& br = branches_[b];
  if (!br.image.contains(x, kDomainSlack))
    throw DomainError("branch_inverse: x=" + format_real(x) + " outside the image of branch " +
                      std::to_string(b));
  x = br.image.clamp(x);
  if (quadratic_a_) {
    // Cancellation-free form of (1 - sqrt(1 - 4x/a)) / 2 and its mirror image.
    const double a = *quadratic_a_;
    const double disc = std::max(0.0, 1.0 - 4.0 * x / a);
    const double y = (2.0 * x / a) / (1.0 + std::sqrt(disc));
    return b == 0 ? y : 1.0 - y;
  }
  const double fa = raw_eval(br.domain.lo);
  const double fb = raw_eval(br.domain.hi);
  if (x == fa) return br.domain.lo;
  if (x == fb) return br.domain.hi;
  auto root = bracketed_newton([&](double y) { return raw_eval(y) - x; },
                               [&](double y) { return raw_deriv(y); }, br.domain.lo, br.domain.hi);
  if (!root) {
    // x sits within rounding of an image endpoint
    return std::abs(x - fa) < std::abs(x - fb) ? br.domain.lo : br.domain.hi;
  }
  return *root;
}

double SmoothIntervalMap::apply_inverse_word(std::span<const std::size_t> word, double z) const {
  for (auto it = word.rbegin(); it != word.rend(); ++it) z = branch_inverse(*it, z);
  return z;
}

std::vector<double> SmoothIntervalMap::coded_orbit(std::span<const std::size_t> word, double base,
                                                   std::size_t length) const {
  if (length > word.size()) throw PreconditionError("coded_orbit: orbit longer than the code");
  std::vector<double> z(word.size() + 1);
  z[word.size()] = base;
  for (std::size_t k = word.size(); k-- > 0;) z[k] = branch_inverse(word[k], z[k + 1]);
  z.resize(length + 1);
  return z;
}

double SmoothIntervalMap::julia_base_point() const {
  const auto fixed = periodic_points(1);
  for (auto it = fixed.rbegin(); it != fixed.rend(); ++it)
    if (it->point > domain_.lo && it->point < domain_.hi) return it->point;
  if (fixed.empty()) throw DomainError("julia_base_point: map has no fixed point in its domain");
  return fixed.back().point;
}

std::vector<PeriodicPoint> SmoothIntervalMap::periodic_points(int n, int cap) const {
  if (n < 1) throw PreconditionError("periodic_points: period must be at least 1");
  if (n > cap) throw CapExceeded("periodic_points: period " + std::to_string(n) + " exceeds cap " + std::to_string(cap));
  if (!conjugacy_) return periodic_points_by_isolation(n, cap);

  // Tent-map laps [k/2^n, (k+1)/2^n] each hold one fixed point of T^n:
  // θ = k/(2^n - 1) on even laps, θ = (k+1)/(2^n + 1) on odd laps. The orbit
  // of θ = m/q stays in (1/q)Z, so it is carried in integers.
  const std::int64_t laps = std::int64_t{1} << n;
  std::vector<PeriodicPoint> pts;
  pts.reserve(static_cast<std::size_t>(laps));
  for (std::int64_t k = 0; k < laps; ++k) {
    const std::int64_t q = (k % 2 == 0) ? laps - 1 : laps + 1;
    std::int64_t m = (k % 2 == 0) ? k : k + 1;
    PeriodicPoint p;
    p.exact = true;
    p.orbit.reserve(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j) {
      p.orbit.push_back(TentConjugacy::to_interval(static_cast<double>(m) / static_cast<double>(q)));
      m = (2 * m <= q) ? 2 * m : 2 * q - 2 * m;
    }
    p.point = p.orbit.front();
    pts.push_back(std::move(p));
  }
  dedup_sorted(pts);
  return pts;
}

std::vector<PeriodicPoint> SmoothIntervalMap::periodic_points_by_isolation(int n, int cap) const {
  if (n < 1) throw PreconditionError("periodic_points: period must be at least 1");
  if (n > cap) throw CapExceeded("periodic_points: period " + std::to_string(n) + " exceeds cap " + std::to_string(cap));

  std::vector<PeriodicPoint> pts;
  std::vector<std::size_t> word(static_cast<std::size_t>(n));

  auto fn_minus_x = [&](double x) {
    double y = x;
    for (int j = 0; j < n; ++j) y = raw_eval(y);
    return y - x;
  };

  // Cylinder of the word w = (b_0..b_{n-1}) built from the back:
  // D_n = domain, D_j = ψ_{b_j}(D_{j+1} ∩ image(b_j)). On D_0 the iterate f^n
  // is monotone, so f^n(x) - x has at most one transversal zero there.
  auto descend = [&](auto&& self, std::size_t idx, Interval target) -> void {
    for (std::size_t b = 0; b < branches_.size(); ++b) {
      const Interval& img = branches_[b].image;
      const double lo = std::max(target.lo, img.lo);
      const double hi = std::min(target.hi, img.hi);
      if (lo > hi) continue;
      const double ya = branch_inverse(b, lo);
      const double yb = branch_inverse(b, hi);
      const Interval cyl{std::min(ya, yb), std::max(ya, yb)};
      word[idx] = b;
      if (idx > 0) {
        self(self, idx - 1, cyl);
        continue;
      }
      auto root = bisect(fn_minus_x, cyl.lo, cyl.hi);
      if (!root) continue;
      double p = *root;
      // Inverse-word iteration contracts onto the fixed point.
      for (int k = 0; k < 3; ++k) {
        const double q = apply_inverse_word(word, p);
        if (!cyl.contains(q, 1e-12)) break;
        p = q;
      }
      PeriodicPoint pp;
      pp.point = p;
      pp.exact = false;
      pp.orbit.assign(static_cast<std::size_t>(n), p);
      for (std::size_t j = static_cast<std::size_t>(n) - 1; j >= 1; --j) {
        const double next = pp.orbit[(j + 1) % static_cast<std::size_t>(n)];
        pp.orbit[j] = branch_inverse(word[j], branches_[word[j]].image.clamp(next));
      }
      pts.push_back(std::move(pp));
    }
  };
  descend(descend, static_cast<std::size_t>(n) - 1, domain_);
  dedup_sorted(pts);
  return pts;
}

}  // namespace treepressure
