#include <algorithm>
#include <cmath>
#include <thread>

#include "treepressure/errors.hpp"
#include "treepressure/pressure.hpp"
#include "treepressure/quadrature.hpp"

namespace treepressure {

namespace {

struct Entry {
  std::size_t row;  // target bin i
  std::size_t col;  // source bin j
  double value;
};

// Column j of the Galerkin matrix: M[i][j] = (1/|I|) ∫_{I_j ∩ f^{-1}(I_i)} exp(G(y)) |Df(y)| dy.
// Each branch piece of I_j is cut at the preimages of bin edges, so every
// sub-piece maps into a single target bin.
void build_column(const SmoothIntervalMap& map, const SingularPotential& G, std::size_t j, std::size_t bins,
                  const GaussLegendre& rule, const GaussLegendre& pole_rule, std::vector<Entry>& out) {
  const Interval& dom = map.domain();
  const double hw = dom.width() / static_cast<double>(bins);
  const Interval cell{dom.lo + static_cast<double>(j) * hw,
                      j + 1 == bins ? dom.hi : dom.lo + static_cast<double>(j + 1) * hw};
  const auto lambda = G.singular_set();
  const bool cell_has_pole =
      std::any_of(lambda.begin(), lambda.end(), [&](double c) { return cell.contains(c); });
  const GaussLegendre& q = cell_has_pole ? pole_rule : rule;

  auto bin_of = [&](double v) {
    const double t = std::floor((v - dom.lo) / hw);
    return static_cast<std::size_t>(std::clamp(t, 0.0, static_cast<double>(bins - 1)));
  };
  auto integrand = [&](double y) { return G(y).weight() * std::abs(map.deriv(y)); };

  const auto& branches = map.branches();
  for (std::size_t b = 0; b < branches.size(); ++b) {
    const double lo = std::max(cell.lo, branches[b].domain.lo);
    const double hi = std::min(cell.hi, branches[b].domain.hi);
    if (!(hi > lo)) continue;
    const double flo = map.eval(lo), fhi = map.eval(hi);
    const double tlo = std::min(flo, fhi), thi = std::max(flo, fhi);

    std::vector<double> cuts{lo, hi};
    const auto first = static_cast<long long>(std::floor((tlo - dom.lo) / hw)) + 1;
    const auto last = static_cast<long long>(std::ceil((thi - dom.lo) / hw)) - 1;
    for (long long k = first; k <= last; ++k) {
      const double edge = dom.lo + static_cast<double>(k) * hw;
      if (edge <= tlo || edge >= thi) continue;
      cuts.push_back(std::clamp(map.branch_inverse(b, edge), lo, hi));
    }
    std::sort(cuts.begin(), cuts.end());
    for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
      const double u = cuts[k], v = cuts[k + 1];
      if (!(v > u)) continue;
      const std::size_t row = bin_of(map.eval(0.5 * (u + v)));
      out.push_back({row, j, q.integrate(integrand, u, v) / hw});
    }
  }
}

}  // namespace

PressureEstimate ulam_pressure(const SmoothIntervalMap& map, const SingularPotential& G, const UlamOptions& opt) {
  if (opt.bins < kMinUlamBins)
    throw PreconditionError("ulam_pressure: bins=" + std::to_string(opt.bins) + " below minimum " +
                            std::to_string(kMinUlamBins));
  if (map.julia_structure() != JuliaStructure::FullInterval)
    throw PreconditionError("ulam_pressure: only full-interval maps are supported");

  const std::size_t bins = opt.bins;
  const GaussLegendre rule(opt.nodes);
  const GaussLegendre pole_rule(opt.pole_nodes);

  // Columns are built on worker threads in contiguous chunks and concatenated
  // in column order, so the entry list is the same for any thread count.
  unsigned threads = opt.threads ? opt.threads : std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, bins));
  std::vector<std::vector<Entry>> chunks(threads);
  {
    std::vector<std::thread> pool;
    const std::size_t per = (bins + threads - 1) / threads;
    for (unsigned t = 0; t < threads; ++t) {
      pool.emplace_back([&, t] {
        const std::size_t begin = t * per, end = std::min(bins, begin + per);
        for (std::size_t j = begin; j < end; ++j) build_column(map, G, j, bins, rule, pole_rule, chunks[t]);
      });
    }
    for (auto& th : pool) th.join();
  }
  std::vector<Entry> entries;
  for (auto& c : chunks) entries.insert(entries.end(), c.begin(), c.end());

  std::vector<double> v(bins, 1.0 / static_cast<double>(bins));
  std::vector<double> w(bins);
  double lambda = 0.0;
  int it = 0;
  bool converged = false;
  for (; it < opt.max_iterations; ++it) {
    std::fill(w.begin(), w.end(), 0.0);
    for (const Entry& e : entries) w[e.row] += e.value * v[e.col];
    double norm = 0.0;
    for (double x : w) norm += x;
    if (!(norm > 0.0)) throw ConvergenceError("ulam_pressure: transfer matrix annihilated the iterate");
    const double prev = lambda;
    lambda = norm;  // ||v||_1 = 1
    for (std::size_t i = 0; i < bins; ++i) v[i] = w[i] / norm;
    if (it > 0 && std::abs(lambda - prev) <= opt.tolerance * lambda) {
      converged = true;
      ++it;
      break;
    }
  }
  if (!converged)
    throw ConvergenceError("ulam_pressure: power iteration did not reach tolerance in " +
                           std::to_string(opt.max_iterations) + " iterations");

  std::fill(w.begin(), w.end(), 0.0);
  for (const Entry& e : entries) w[e.row] += e.value * v[e.col];
  double residual = 0.0;
  for (std::size_t i = 0; i < bins; ++i) residual += std::abs(w[i] - lambda * v[i]);

  PressureEstimate est;
  est.method = PressureMethod::Ulam;
  est.size = static_cast<int>(bins);
  est.value = std::log(lambda);
  est.spectral = SpectralDiagnostics{bins, entries.size(), it, lambda, residual};
  est.map_name = map.name();
  est.potential_name = G.name();
  return est;
}

}  // namespace treepressure
