#include "treepressure/exceptional.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "treepressure/errors.hpp"
#include "treepressure/preimage.hpp"

namespace treepressure {

std::string to_string(ExceptionalStatus s) {
  switch (s) {
    case ExceptionalStatus::NonExceptionalTrivial: return "non_exceptional_certified_trivially";
    case ExceptionalStatus::Exceptional: return "exceptional";
    case ExceptionalStatus::NoSetFound: return "no_set_found";
  }
  return "unknown";
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double distance_to(std::span<const double> set, double y) {
  double d = kInf;
  for (double s : set) d = std::min(d, std::abs(y - s));
  return d;
}

// Exactly representable landmarks (domain endpoints, critical points and
// critical values, exact fixed points). Points within rounding of one are
// replaced by it so closures do not drift.
std::vector<double> landmarks(const SmoothIntervalMap& map) {
  std::vector<double> out{map.domain().lo, map.domain().hi};
  for (const auto& c : map.critical_points()) {
    out.push_back(c.location);
    const double v = map.eval(c.location);
    if (map.in_domain(v)) out.push_back(v);
  }
  for (const auto& p : map.periodic_points(1))
    if (p.exact) out.push_back(p.point);
  return out;
}

double snap_to(std::span<const double> marks, double y) {
  for (double m : marks)
    if (std::abs(y - m) < 1e-12) return m;
  return y;
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

}  // namespace

SetDefects exceptional_set_defects(const SmoothIntervalMap& map, std::span<const double> sigma,
                                   std::span<const double> lambda) {
  SetDefects d;
  for (double s : sigma) {
    d.forward = std::max(d.forward, distance_to(sigma, map.eval(s)));
    for (double y : preimages(map, s)) {
      if (distance_to(sigma, y) < kSetSnapTolerance) continue;
      d.backward = std::max(d.backward, distance_to(lambda, y));
    }
  }
  return d;
}

std::vector<ExceptionalReport> find_exceptional_sets(const SmoothIntervalMap& map, std::span<const double> lambda,
                                                     const ExceptionalSearchOptions& opt) {
  if (opt.p_max < 1 || opt.p_max > kMaxSeedPeriod)
    throw CapExceeded("find_exceptional_sets: p_max must lie in [1, " + std::to_string(kMaxSeedPeriod) + "]");
  if (opt.size_max < 1 || opt.size_max > kMaxExceptionalSize)
    throw CapExceeded("find_exceptional_sets: size_max must lie in [1, " + std::to_string(kMaxExceptionalSize) + "]");

  if (lambda.empty()) {
    ExceptionalReport r;
    r.status = ExceptionalStatus::NonExceptionalTrivial;
    return {r};
  }

  const auto marks = landmarks(map);

  // Distinct periodic cycles, by period then by smallest point.
  struct Seed {
    int period;
    std::vector<double> cycle;
  };
  std::vector<Seed> seeds;
  std::vector<double> seen;
  for (int p = 1; p <= opt.p_max; ++p) {
    for (const auto& pp : map.periodic_points(p)) {
      if (distance_to(seen, pp.point) < opt.snap) continue;
      std::vector<double> cycle;
      for (double y : pp.orbit) {
        const double s = snap_to(marks, y);
        if (distance_to(cycle, s) >= opt.snap) cycle.push_back(s);
      }
      std::sort(cycle.begin(), cycle.end());
      seen.insert(seen.end(), cycle.begin(), cycle.end());
      seeds.push_back({static_cast<int>(cycle.size()), std::move(cycle)});
    }
  }

  std::vector<ExceptionalReport> reports;
  for (const Seed& seed : seeds) {
    ExceptionalReport r;
    r.seed_cycle = seed.cycle;
    r.seed_period = seed.period;
    r.seeds_searched = 1;
    std::vector<double> sigma = seed.cycle;
    bool closed = true;
    for (std::size_t k = 0; k < sigma.size(); ++k) {
      ClosureStep step;
      step.processed = sigma[k];
      for (double y : preimages(map, sigma[k])) {
        y = snap_to(marks, y);
        if (distance_to(sigma, y) < opt.snap || distance_to(lambda, y) < opt.snap) continue;
        sigma.push_back(y);
        step.added.push_back(y);
      }
      r.trace.push_back(std::move(step));
      if (sigma.size() > opt.size_max) {
        closed = false;
        break;
      }
    }
    std::sort(sigma.begin(), sigma.end());
    r.sigma = std::move(sigma);
    if (closed) {
      r.status = ExceptionalStatus::Exceptional;
      const SetDefects d = exceptional_set_defects(map, r.sigma, lambda);
      r.forward_defect = d.forward;
      r.backward_defect = d.backward;
      const bool duplicate = std::any_of(reports.begin(), reports.end(), [&](const ExceptionalReport& o) {
        if (o.status != ExceptionalStatus::Exceptional || o.sigma.size() != r.sigma.size()) return false;
        for (std::size_t i = 0; i < o.sigma.size(); ++i)
          if (std::abs(o.sigma[i] - r.sigma[i]) >= opt.snap) return false;
        return true;
      });
      if (duplicate) continue;
    } else {
      r.status = ExceptionalStatus::NoSetFound;
    }
    reports.push_back(std::move(r));
  }
  return reports;
}

ExceptionalReport is_exceptional(const SmoothIntervalMap& map, const SingularPotential& G,
                                 const ExceptionalSearchOptions& opt) {
  const auto lambda = G.singular_set();
  auto reports = find_exceptional_sets(map, lambda, opt);
  for (auto& r : reports)
    if (r.status != ExceptionalStatus::NoSetFound) return r;
  ExceptionalReport agg;
  agg.status = ExceptionalStatus::NoSetFound;
  agg.seeds_searched = reports.size();
  return agg;
}

SigmaPrimeResult sigma_prime_construction(const SmoothIntervalMap& map, const SingularPotential& G, int N,
                                          std::span<const double> sigma_tilde, double snap) {
  if (N < 1) throw PreconditionError("sigma_prime_construction: N must be at least 1");
  if (sigma_tilde.empty()) throw PreconditionError("sigma_prime_construction: empty set");
  const auto lambda = G.singular_set();
  const auto marks = landmarks(map);
  std::vector<double> tilde(sigma_tilde.begin(), sigma_tilde.end());

  for (double s : tilde)
    if (distance_to(tilde, map.eval(s)) >= snap)
      throw PreconditionError("sigma_prime_construction: set is not forward invariant at " + fmt(s));

  // Forward orbit with every hit of Λ snapped onto the pole itself.
  auto step = [&](double y) {
    y = map.eval(y);
    for (double c : lambda)
      if (std::abs(y - c) < snap) return c;
    return snap_to(marks, y);
  };
  auto in_lambda = [&](double y) { return distance_to(lambda, y) < snap; };

  SigmaPrimeResult res;
  for (double s : tilde)
    for (double y : preimages(map, s)) {
      y = snap_to(marks, y);
      if (distance_to(tilde, y) >= snap && distance_to(res.escaping, y) >= snap) res.escaping.push_back(y);
    }
  std::sort(res.escaping.begin(), res.escaping.end());

  // f^{-1}(Σ̃) \ Σ̃ must lie in ⋃_{j<N} f^{-j}(Λ(G)).
  for (double z : res.escaping) {
    double y = z;
    bool hit = false;
    for (int j = 0; j < N && !hit; ++j) {
      if (j > 0) y = step(y);
      hit = in_lambda(y);
    }
    if (!hit)
      throw PreconditionError("sigma_prime_construction: preimage " + fmt(z) +
                              " avoids the poles of the averaged potential; the set is not exceptional for it");
  }

  const int horizon = 2 * static_cast<int>(tilde.size()) + N;
  for (double z : res.escaping) {
    double y = z;
    int last = -1;
    double anchor = 0.0;
    for (int j = 0; j <= horizon; ++j) {
      if (j > 0) y = step(y);
      if (in_lambda(y)) {
        last = j;
        anchor = y;
      }
    }
    if (last < 0) throw Error("sigma_prime_construction: no pole index found for " + fmt(z));
    res.last_pole_index.push_back(last);
    if (distance_to(res.anchors, anchor) >= snap) res.anchors.push_back(anchor);
  }

  for (double a : res.anchors) {
    double y = a;
    for (std::size_t guard = 0; guard <= tilde.size() + 1; ++guard) {
      y = map.eval(y);
      const double d = distance_to(tilde, y);
      if (d >= snap) throw Error("sigma_prime_construction: orbit of " + fmt(a) + " leaves the exceptional set");
      y = *std::min_element(tilde.begin(), tilde.end(),
                            [&](double p, double q) { return std::abs(p - y) < std::abs(q - y); });
      if (distance_to(res.sigma_prime, y) < snap) break;
      res.sigma_prime.push_back(y);
    }
  }
  std::sort(res.sigma_prime.begin(), res.sigma_prime.end());

  res.defects = exceptional_set_defects(map, res.sigma_prime, lambda);
  if (res.sigma_prime.empty() || res.defects.forward >= snap || res.defects.backward >= snap)
    throw Error("sigma_prime_construction: constructed set failed the exceptional-set check");
  return res;
}

}  // namespace treepressure
