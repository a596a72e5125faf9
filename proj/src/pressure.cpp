#include "treepressure/pressure.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "treepressure/errors.hpp"
#include "treepressure/log_sum_exp.hpp"

namespace treepressure {

std::string to_string(PressureMethod m) {
  switch (m) {
    case PressureMethod::Tree: return "tree";
    case PressureMethod::Ulam: return "ulam";
    case PressureMethod::Periodic: return "periodic";
    case PressureMethod::Exact: return "exact";
  }
  return "unknown";
}

TreePressureRun tree_pressure(const SmoothIntervalMap& map, const SingularPotential& G, double x, int n_max,
                              const FoldOptions& opt) {
  if (n_max < 1) throw PreconditionError("tree_pressure: n_max must be at least 1");
  if (n_max > opt.depth_cap)
    throw CapExceeded("tree_pressure: n_max " + std::to_string(n_max) + " exceeds cap " +
                      std::to_string(opt.depth_cap));
  TreePressureRun run;
  int small_run = 0;
  for (int n = 1; n <= n_max; ++n) {
    TreeFoldResult fold = preimage_tree_fold(map, G, x, n, opt);
    if (fold.log_sum.is_neg_infinity()) {
      run.truncated_at = n;
      break;
    }
    PressureEstimate e;
    e.method = PressureMethod::Tree;
    e.size = n;
    e.value = fold.log_sum.value() / n;
    e.map_name = map.name();
    e.potential_name = G.name();
    if (!run.estimates.empty()) {
      e.cauchy_increment = std::abs(e.value - run.estimates.back().value);
      small_run = *e.cauchy_increment < kConvergenceIncrement ? small_run + 1 : 0;
      if (small_run >= kConvergenceRun && !run.converged_at) run.converged_at = n;
    }
    e.tree = fold;
    run.estimates.push_back(std::move(e));
  }
  return run;
}

GridFunction GridFunction::constant(const Interval& domain, double v) {
  return GridFunction{domain.lo, domain.hi, {v, v}};
}

double GridFunction::operator()(double x) const {
  if (values.empty()) throw PreconditionError("GridFunction: no values");
  if (values.size() == 1) return values.front();
  const double t = (std::clamp(x, lo, hi) - lo) / (hi - lo) * static_cast<double>(values.size() - 1);
  const auto k = std::min(static_cast<std::size_t>(t), values.size() - 2);
  const double frac = t - static_cast<double>(k);
  return values[k] + frac * (values[k + 1] - values[k]);
}

double transfer_apply(const SmoothIntervalMap& map, const SingularPotential& G, const GridFunction& psi, double x) {
  double s = 0.0;
  for (double y : preimages(map, x)) s += G(y).weight() * psi(y);
  return s;
}

PressureEstimate periodic_orbit_pressure(const SmoothIntervalMap& map, const SingularPotential& G, int n, int cap) {
  const auto points = map.periodic_points(n, cap);
  LogSumExp lse;
  PeriodicDiagnostics diag;
  diag.period = n;
  diag.points = points.size();
  diag.exact_points = !points.empty() && points.front().exact;
  for (const auto& p : points) {
    const ExtendedReal s = birkhoff_sum_on_orbit(G, p.orbit, 0, n);
    if (s.is_neg_infinity())
      ++diag.pole_terms;
    else
      lse.add(s.value());
  }
  if (lse.count() == 0)
    throw Error("periodic_orbit_pressure: no periodic orbit of period " + std::to_string(n) + " carries weight");
  PressureEstimate e;
  e.method = PressureMethod::Periodic;
  e.size = n;
  e.value = lse.value() / n;
  e.periodic = diag;
  e.map_name = map.name();
  e.potential_name = G.name();
  return e;
}

HyperbolicityReport hyperbolicity_check(const SmoothIntervalMap& map, const SingularPotential& G, int n,
                                        std::size_t grid_size, const PressureEstimate& oracle, double slack) {
  if (n < 1) throw PreconditionError("hyperbolicity_check: n must be at least 1");
  HyperbolicityReport r;
  r.pressure_estimate = oracle.value;
  r.oracle_method = oracle.method;
  r.slack = slack;
  r.sup_estimate = std::numeric_limits<double>::infinity();
  for (int k = 1; k <= n; ++k) {
    SupEstimate s = sup_birkhoff_average(G, map, k, grid_size);
    if (s.value < r.sup_estimate) {
      r.sup_estimate = s.value;
      r.n_used = k;
    }
    r.sups.push_back(s);
  }
  r.margin = r.pressure_estimate - r.sup_estimate;
  r.hyperbolic = r.margin > slack;
  return r;
}

LowerBoundDiagnostic lower_bound_diagnostic(const SmoothIntervalMap& map, const SingularPotential& G,
                                            const HyperbolicityReport& verdict, int N, double x, int n,
                                            double epsilon, const LowerBoundOptions& opt) {
  if (!verdict.hyperbolic) throw PreconditionError("lower_bound_diagnostic: potential not verified hyperbolic");
  if (N < 1 || n < 1) throw PreconditionError("lower_bound_diagnostic: N and n must be at least 1");
  if (!map.in_domain(x)) throw DomainError("lower_bound_diagnostic: x outside the domain");

  const Orbit window = map.iterate(x, N - 1);
  if (window.escaped()) throw DomainError("lower_bound_diagnostic: orbit of x escapes");
  for (double y : window.points)
    if (G.pole_distance(y) < kPoleSnapTolerance)
      throw DomainError("lower_bound_diagnostic: pole on the orbit of x");

  LowerBoundDiagnostic d;
  d.N = N;
  d.n = n;
  d.epsilon = epsilon;
  d.pressure = verdict.pressure_estimate;

  if (N > 1) {
    if (map.julia_structure() == JuliaStructure::FullInterval) {
      std::vector<Interval> khat;
      for (double y : window.points)
        khat.push_back({std::max(map.domain().lo, y - opt.neighbourhood), std::min(map.domain().hi, y + opt.neighbourhood)});
      d.c_khat = verify_snbound(G, map, N, khat, n, opt.sampling).bound;
    } else {
      // On a repeller K̂ is the finite orbit window itself.
      double lo = std::numeric_limits<double>::infinity(), hi = -lo;
      for (double y : window.points) {
        const double g = G(y).value();
        lo = std::min(lo, g);
        hi = std::max(hi, g);
      }
      d.c_khat = (N - 1) * (hi - lo);
    }
  }

  d.fold = preimage_tree_fold(map, AveragedPotential(G, map, N), x, n, opt.fold);
  d.log_lhs = d.fold.log_sum.value();
  d.log_rhs = d.c_khat + n * (d.pressure - epsilon);
  d.holds = d.fold.log_sum.is_finite() && d.log_lhs >= d.log_rhs;
  return d;
}

}  // namespace treepressure
