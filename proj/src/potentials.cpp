#include "treepressure/potentials.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <sstream>

#include "treepressure/errors.hpp"

namespace treepressure {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

std::vector<double> forward_orbit(const SmoothIntervalMap& map, double x, int steps, const char* what) {
  Orbit o = map.iterate(x, steps);
  if (o.escaped())
    throw DomainError(std::string(what) + ": orbit of x=" + fmt(x) + " escapes the domain at step " +
                      std::to_string(*o.escape_index));
  return std::move(o.points);
}

// All words of the given depth over `alphabet` symbols, lexicographic order.
std::vector<std::vector<std::size_t>> all_words(std::size_t alphabet, int depth) {
  std::vector<std::vector<std::size_t>> words{{}};
  for (int d = 0; d < depth; ++d) {
    std::vector<std::vector<std::size_t>> next;
    next.reserve(words.size() * alphabet);
    for (const auto& w : words)
      for (std::size_t b = 0; b < alphabet; ++b) {
        next.push_back(w);
        next.back().push_back(b);
      }
    words = std::move(next);
  }
  return words;
}

}  // namespace

ExtendedReal HoelderPart::operator()(double x) const {
  double acc = 0.0;
  for (auto it = poly.rbegin(); it != poly.rend(); ++it) acc = acc * x + *it;
  if (log_term && log_term->coefficient != 0.0) {
    const double d = std::abs(x - log_term->center);
    if (d < kPoleSnapTolerance) {
      if (log_term->coefficient < 0)
        throw DomainError("Hoelder part: log rule with negative coefficient evaluated at its center");
      return ExtendedReal::neg_infinity();
    }
    acc += log_term->coefficient * std::log(d);
  }
  return ExtendedReal(acc);
}

SingularPotential SingularPotential::constant(double v) {
  SingularPotential G;
  G.hoelder_.poly = {v};
  G.name_ = "constant(" + fmt(v) + ")";
  return G;
}

SingularPotential SingularPotential::polynomial(std::vector<double> coeffs) {
  SingularPotential G;
  std::ostringstream os;
  os.precision(17);
  os << "polynomial[";
  for (std::size_t k = 0; k < coeffs.size(); ++k) os << (k ? "," : "") << coeffs[k];
  os << "]";
  G.name_ = os.str();
  G.hoelder_.poly = std::move(coeffs);
  return G;
}

SingularPotential SingularPotential::geometric(const SmoothIntervalMap& map, double t) {
  if (t > 0.0)
    throw PreconditionError("geometric potential: t=" + fmt(t) +
                            " > 0 needs a negative log weight, outside the admissible class");
  const auto a = map.quadratic_parameter();
  if (!a) throw PreconditionError("geometric potential: only the built-in quadratic family is supported");

  SingularPotential G;
  G.provenance_ = PotentialProvenance::Geometric;
  G.geometric_t_ = t;
  G.name_ = "geometric(t=" + fmt(t) + ")";
  if (t == 0.0) {
    G.hoelder_.poly = {0.0};
    return G;
  }
  const double b = -t;
  G.hoelder_.poly = {b * std::log(2.0 * *a)};
  const CriticalPoint& c = map.critical_points().front();
  if (c.in_julia)
    G.singular_.push_back(SingularTerm{c.location, b});
  else
    G.hoelder_.log_term = LogDistanceTerm{b, c.location};
  return G;
}

SingularPotential SingularPotential::custom(const SmoothIntervalMap& map, HoelderPart hoelder,
                                            std::vector<SingularTerm> singular) {
  for (const auto& term : singular) {
    if (!(term.weight >= 0.0))
      throw PreconditionError("potential: singular weight b=" + fmt(term.weight) + " at c=" + fmt(term.center) +
                              " is negative");
    const auto& crit = map.critical_points();
    auto it = std::find_if(crit.begin(), crit.end(),
                           [&](const CriticalPoint& c) { return std::abs(c.location - term.center) < 1e-9; });
    if (it == crit.end())
      throw PreconditionError("potential: pole c=" + fmt(term.center) + " is not a critical point of " + map.name());
    if (!it->in_julia)
      throw PreconditionError("potential: critical point c=" + fmt(term.center) + " is not in the Julia set");
  }
  SingularPotential G;
  G.hoelder_ = std::move(hoelder);
  G.singular_ = std::move(singular);
  std::ostringstream os;
  os.precision(17);
  os << "custom(g=[";
  for (std::size_t k = 0; k < G.hoelder_.poly.size(); ++k) os << (k ? "," : "") << G.hoelder_.poly[k];
  os << "]";
  if (G.hoelder_.log_term) os << "+" << G.hoelder_.log_term->coefficient << "log|x-" << G.hoelder_.log_term->center << "|";
  for (const auto& s : G.singular_) os << ";" << s.weight << "log|x-" << s.center << "|";
  os << ")";
  G.name_ = os.str();
  return G;
}

ExtendedReal SingularPotential::operator()(double x) const {
  ExtendedReal value = hoelder_(x);
  if (value.is_neg_infinity()) return value;
  double acc = value.value();
  for (const auto& term : singular_) {
    if (term.weight == 0.0) continue;
    const double d = std::abs(x - term.center);
    if (d < kPoleSnapTolerance) return ExtendedReal::neg_infinity();
    acc += term.weight * std::log(d);
  }
  return ExtendedReal(acc);
}

std::vector<double> SingularPotential::singular_set() const {
  std::vector<double> out;
  for (const auto& term : singular_)
    if (term.weight > 0.0) out.push_back(term.center);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

double SingularPotential::pole_distance(double x) const {
  double d = kInf;
  for (const auto& term : singular_)
    if (term.weight > 0.0) d = std::min(d, std::abs(x - term.center));
  return d;
}

SingularPotential SingularPotential::shifted(double c0) const {
  SingularPotential G = *this;
  if (G.hoelder_.poly.empty()) G.hoelder_.poly.push_back(0.0);
  G.hoelder_.poly[0] += c0;
  G.name_ = name_ + "+" + fmt(c0);
  G.provenance_ = PotentialProvenance::User;
  return G;
}

ExtendedReal eval_potential(const SingularPotential& G, const SmoothIntervalMap& map, double x) {
  if (!map.in_domain(x)) throw DomainError("eval_potential: x=" + fmt(x) + " outside the domain");
  return G(x);
}

ExtendedReal birkhoff_sum_on_orbit(const SingularPotential& G, std::span<const double> orbit,
                                   std::size_t start, int n) {
  if (start + static_cast<std::size_t>(n) > orbit.size())
    throw PreconditionError("birkhoff_sum_on_orbit: orbit too short");
  ExtendedReal s(0.0);
  for (int j = 0; j < n; ++j) {
    s += G(orbit[start + static_cast<std::size_t>(j)]);
    if (s.is_neg_infinity()) break;
  }
  return s;
}

ExtendedReal birkhoff_sum(const SingularPotential& G, const SmoothIntervalMap& map, double x, int n) {
  if (n < 1) throw PreconditionError("birkhoff_sum: n must be at least 1");
  const auto orbit = forward_orbit(map, x, n - 1, "birkhoff_sum");
  return birkhoff_sum_on_orbit(G, orbit, 0, n);
}

AveragedPotential::AveragedPotential(SingularPotential base, SmoothIntervalMap map, int N)
    : base_(std::move(base)), map_(std::move(map)), N_(N) {
  if (N < 1) throw PreconditionError("averaged potential: N must be at least 1");
}

ExtendedReal AveragedPotential::operator()(double x) const {
  const auto orbit = forward_orbit(map_, x, N_ - 1, "averaged potential");
  const ExtendedReal s = birkhoff_sum_on_orbit(base_, orbit, 0, N_);
  if (s.is_neg_infinity()) return s;
  return ExtendedReal(s.value() / N_);
}

double AveragedPotential::pole_distance(double x) const {
  const Orbit o = map_.iterate(x, N_ - 1);
  double d = kInf;
  for (double y : o.points) d = std::min(d, base_.pole_distance(y));
  return d;
}

ExtendedReal averaged_potential_eval(const SingularPotential& G, const SmoothIntervalMap& map, int N,
                                     double x) {
  if (!map.in_domain(x)) throw DomainError("averaged_potential_eval: x=" + fmt(x) + " outside the domain");
  return AveragedPotential(G, map, N)(x);
}

std::optional<double> coboundary_h_on_orbit(const SingularPotential& G, std::span<const double> orbit,
                                            std::size_t start, int N) {
  if (N < 1) throw PreconditionError("coboundary_h: N must be at least 1");
  double acc = 0.0;
  for (int j = 0; j + 1 < N; ++j) {
    const ExtendedReal g = G(orbit[start + static_cast<std::size_t>(j)]);
    if (g.is_neg_infinity()) return std::nullopt;
    acc += static_cast<double>(N - 1 - j) * g.value();
  }
  return -acc / N;
}

std::optional<double> coboundary_h(const SingularPotential& G, const SmoothIntervalMap& map, int N, double x) {
  if (N < 1) throw PreconditionError("coboundary_h: N must be at least 1");
  const auto orbit = forward_orbit(map, x, std::max(0, N - 2), "coboundary_h");
  return coboundary_h_on_orbit(G, orbit, 0, N);
}

CohomologyCheck verify_cohomology(const SingularPotential& G, const SmoothIntervalMap& map, int N,
                                  std::span<const double> samples) {
  if (N < 1) throw PreconditionError("verify_cohomology: N must be at least 1");
  CohomologyCheck check;
  for (double x : samples) {
    const Orbit o = map.iterate(x, N);
    bool keep = !o.escaped();
    for (std::size_t j = 0; keep && j < o.points.size(); ++j)
      keep = G.pole_distance(o.points[j]) > kCohomologyFilterDistance;
    if (!keep) {
      ++check.filtered;
      continue;
    }
    const auto& orbit = o.points;
    const ExtendedReal s = birkhoff_sum_on_orbit(G, orbit, 0, N);
    const double averaged = s.value() / N;
    const double g = G(orbit[0]).value();
    const double h0 = *coboundary_h_on_orbit(G, orbit, 0, N);
    const double h1 = *coboundary_h_on_orbit(G, orbit, 1, N);
    check.max_residual = std::max(check.max_residual, std::abs(averaged - (g + h0 - h1)));
    ++check.used;
  }
  if (check.used == 0) throw PreconditionError("verify_cohomology: every sample was filtered out");
  return check;
}

std::vector<std::vector<double>> sample_orbits(const SmoothIntervalMap& map, std::span<const Interval> K,
                                               std::size_t length, const SampleOptions& opt) {
  std::vector<std::vector<double>> out;
  if (map.julia_structure() == JuliaStructure::FullInterval) {
    for (const Interval& k : K) {
      for (std::size_t i = 0; i < opt.per_interval; ++i) {
        const double x = k.lo + (static_cast<double>(i) + 0.5) / static_cast<double>(opt.per_interval) * k.width();
        Orbit o = map.iterate(x, static_cast<int>(length));
        if (!o.escaped()) out.push_back(std::move(o.points));
      }
    }
    return out;
  }

  const double base = map.julia_base_point();
  std::mt19937_64 rng(opt.seed);
  std::uniform_int_distribution<std::size_t> symbol(0, map.branches().size() - 1);
  for (auto& word : all_words(map.branches().size(), opt.cantor_depth)) {
    for (std::size_t k = 0; k < length; ++k) word.push_back(symbol(rng));
    auto orbit = map.coded_orbit(word, base, length);
    const bool inside = std::any_of(K.begin(), K.end(), [&](const Interval& k) { return k.contains(orbit[0]); });
    if (inside) out.push_back(std::move(orbit));
  }
  return out;
}

std::vector<double> julia_samples(const SmoothIntervalMap& map, std::size_t count, const SampleOptions& opt) {
  if (count == 0) return {};
  const Interval& d = map.domain();
  std::vector<double> out;
  if (map.julia_structure() == JuliaStructure::FullInterval) {
    for (std::size_t i = 0; i < count; ++i)
      out.push_back(d.lo + (static_cast<double>(i) + 0.5) / static_cast<double>(count) * d.width());
    return out;
  }
  const std::vector<Interval> whole{d};
  const auto orbits = sample_orbits(map, whole, 0, opt);
  const std::size_t stride = std::max<std::size_t>(1, orbits.size() / count);
  for (std::size_t i = 0; i < orbits.size() && out.size() < count; i += stride) out.push_back(orbits[i][0]);
  std::sort(out.begin(), out.end());
  return out;
}

SupBoundCheck verify_snbound(const SingularPotential& G, const SmoothIntervalMap& map, int N,
                             std::span<const Interval> K, int n, const SampleOptions& opt) {
  if (N < 1 || n < 1) throw PreconditionError("verify_snbound: N and n must be at least 1");
  if (K.empty()) throw PreconditionError("verify_snbound: K is empty");
  const std::size_t len = static_cast<std::size_t>(n + N);
  const auto orbits = sample_orbits(map, K, len, opt);
  if (orbits.empty()) throw PreconditionError("verify_snbound: no sample of K found in J");

  SupBoundCheck check;
  double g_sup = -kInf, g_inf = kInf;
  for (const auto& orbit : orbits) {
    for (int j = 0; j < N; ++j) {
      if (G.pole_distance(orbit[static_cast<std::size_t>(j)]) < kPoleSnapTolerance)
        throw PreconditionError("verify_snbound: sample x=" + fmt(orbit[0]) + " of K is a pole of the averaged potential");
    }
    const double g0 = G(orbit[0]).value();
    g_sup = std::max(g_sup, g0);
    g_inf = std::min(g_inf, g0);

    std::vector<double> g(orbit.size());
    bool pole = false;
    for (std::size_t k = 0; k + 1 < orbit.size(); ++k) {
      const ExtendedReal v = G(orbit[k]);
      if (v.is_neg_infinity()) {
        pole = true;
        break;
      }
      g[k] = v.value();
    }
    if (pole) continue;  // a later orbit point hits Λ(G) exactly; both sums are -inf

    // S_n(G̃) - S_n(G) = Σ_j (1/N) Σ_i (G(x_{j+i}) - G(x_j)), summed from the
    // definitions without going through h.
    double diff = 0.0, sn_g = 0.0, sn_avg = 0.0;
    for (int j = 0; j < n; ++j) {
      double inner = 0.0, window = 0.0;
      for (int i = 0; i < N; ++i) {
        inner += g[static_cast<std::size_t>(j + i)] - g[static_cast<std::size_t>(j)];
        window += g[static_cast<std::size_t>(j + i)];
      }
      diff += inner / N;
      sn_g += g[static_cast<std::size_t>(j)];
      sn_avg += window / N;
    }
    check.lhs = std::max(check.lhs, std::abs(diff));
    const auto h0 = coboundary_h_on_orbit(G, orbit, 0, N);
    const auto hn = coboundary_h_on_orbit(G, orbit, static_cast<std::size_t>(n), N);
    if (h0 && hn)
      check.telescoping_residual = std::max(check.telescoping_residual, std::abs(sn_avg - sn_g - (*h0 - *hn)));
    ++check.samples;
  }
  check.bound = (N - 1) * (g_sup - g_inf);
  return check;
}

SupEstimate sup_birkhoff_average(const SingularPotential& G, const SmoothIntervalMap& map, int n,
                                 std::size_t grid_size, const SampleOptions& opt) {
  if (n < 1) throw PreconditionError("sup_birkhoff_average: n must be at least 1");
  if (grid_size < 2) throw PreconditionError("sup_birkhoff_average: grid needs at least 2 points");
  SupEstimate est;
  est.n = n;
  est.value = -kInf;

  auto consider = [&](std::span<const double> orbit, bool refinement) {
    const ExtendedReal s = birkhoff_sum_on_orbit(G, orbit, 0, n);
    if (s.is_neg_infinity()) return -kInf;
    const double avg = s.value() / n;
    ++est.evaluated;
    if (refinement) ++est.refined;
    if (avg > est.value) {
      est.value = avg;
      est.argmax = orbit[0];
    }
    return avg;
  };

  struct Scored {
    double value;
    std::size_t index;
  };
  std::vector<Scored> scores;

  if (map.julia_structure() == JuliaStructure::FullInterval) {
    const Interval& d = map.domain();
    const double h = d.width() / static_cast<double>(grid_size - 1);
    est.grid_size = grid_size;
    for (std::size_t i = 0; i < grid_size; ++i) {
      const double x = i + 1 == grid_size ? d.hi : d.lo + static_cast<double>(i) * h;
      const auto orbit = forward_orbit(map, x, n - 1, "sup_birkhoff_average");
      scores.push_back({consider(orbit, false), i});
    }
    std::sort(scores.begin(), scores.end(), [](const Scored& a, const Scored& b) {
      return a.value > b.value || (a.value == b.value && a.index < b.index);
    });
    const std::size_t top = (grid_size + 9) / 10;
    for (std::size_t k = 0; k < top && k < scores.size(); ++k) {
      if (scores[k].value == -kInf) break;
      const double center = d.lo + static_cast<double>(scores[k].index) * h;
      for (int s = -5; s <= 5; ++s) {
        if (s == 0) continue;
        const double x = center + h * s / 5.0;
        if (!d.contains(x)) continue;
        const auto orbit = forward_orbit(map, x, n - 1, "sup_birkhoff_average");
        consider(orbit, true);
      }
    }
    return est;
  }

  const double base = map.julia_base_point();
  const std::size_t alphabet = map.branches().size();
  std::mt19937_64 rng(opt.seed);
  std::uniform_int_distribution<std::size_t> symbol(0, alphabet - 1);
  auto words = all_words(alphabet, opt.cantor_depth);
  est.grid_size = words.size();
  const auto tail_len = static_cast<std::size_t>(n);
  for (std::size_t i = 0; i < words.size(); ++i) {
    auto word = words[i];
    for (std::size_t k = 0; k < tail_len; ++k) word.push_back(symbol(rng));
    const auto orbit = map.coded_orbit(word, base, std::min(word.size(), tail_len));
    scores.push_back({consider(orbit, false), i});
  }
  std::sort(scores.begin(), scores.end(), [](const Scored& a, const Scored& b) {
    return a.value > b.value || (a.value == b.value && a.index < b.index);
  });
  const std::size_t top = (words.size() + 9) / 10;
  const auto extensions = all_words(alphabet, 2);
  for (std::size_t k = 0; k < top && k < scores.size(); ++k) {
    if (scores[k].value == -kInf) break;
    for (const auto& ext : extensions) {
      auto word = words[scores[k].index];
      word.insert(word.end(), ext.begin(), ext.end());
      for (std::size_t t = 0; t < tail_len; ++t) word.push_back(symbol(rng));
      const auto orbit = map.coded_orbit(word, base, tail_len);
      consider(orbit, true);
    }
  }
  return est;
}

}  // namespace treepressure
