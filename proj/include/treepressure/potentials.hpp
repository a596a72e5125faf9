#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "treepressure/extended_real.hpp"
#include "treepressure/maps.hpp"

namespace treepressure {

// |x - c| below this counts as hitting the pole c.
inline constexpr double kPoleSnapTolerance = 1e-12;

// b(c) · log|x - c| with b ≥ 0 at a critical point c in J.
struct SingularTerm {
  double center = 0.0;
  double weight = 0.0;
};

// coefficient · log|x - center|, used for smooth-on-J rules whose center lies
// outside the Julia set (geometric potentials on a Cantor repeller).
struct LogDistanceTerm {
  double coefficient = 0.0;
  double center = 0.0;
};

// The Hölder part g: a polynomial (ascending coefficients) plus an optional
// log-distance rule.
struct HoelderPart {
  std::vector<double> poly;
  std::optional<LogDistanceTerm> log_term;

  [[nodiscard]] ExtendedReal operator()(double x) const;
};

enum class PotentialProvenance { User, Geometric };

// A potential of the form g(x) + Σ b(c) log|x - c|.
class SingularPotential {
 public:
  // G ≡ v.
  static SingularPotential constant(double v);
  // G = polynomial in x, ascending coefficients.
  static SingularPotential polynomial(std::vector<double> coeffs);
  // G = -t log|Df| for the quadratic family, t ≤ 0. Since |Df(x)| = 2a|x - 1/2|
  // the split is exact: g ≡ -t log(2a) and one singular term (1/2, -t) when
  // 1/2 ∈ J; otherwise the log factor is kept as a rule smooth on J.
  static SingularPotential geometric(const SmoothIntervalMap& map, double t);
  // General member; every b must be ≥ 0 and every center a critical point of
  // `map` lying in J.
  static SingularPotential custom(const SmoothIntervalMap& map, HoelderPart hoelder,
                                  std::vector<SingularTerm> singular);

  [[nodiscard]] ExtendedReal operator()(double x) const;

  // Λ(G) = {c : b(c) > 0}, ascending.
  [[nodiscard]] std::vector<double> singular_set() const;
  // Distance from x to Λ(G); +inf when Λ(G) is empty.
  [[nodiscard]] double pole_distance(double x) const;

  // G + c0.
  [[nodiscard]] SingularPotential shifted(double c0) const;

  [[nodiscard]] const HoelderPart& hoelder() const { return hoelder_; }
  [[nodiscard]] const std::vector<SingularTerm>& singular_terms() const { return singular_; }
  [[nodiscard]] PotentialProvenance provenance() const { return provenance_; }
  [[nodiscard]] std::optional<double> geometric_t() const { return geometric_t_; }
  [[nodiscard]] const std::string& name() const { return name_; }

 private:
  SingularPotential() = default;

  HoelderPart hoelder_;
  std::vector<SingularTerm> singular_;
  PotentialProvenance provenance_ = PotentialProvenance::User;
  std::optional<double> geometric_t_;
  std::string name_;
};

// G evaluated at x ∈ domain(map).
ExtendedReal eval_potential(const SingularPotential& G, const SmoothIntervalMap& map, double x);

// S_n(G)(x) = Σ_{j<n} G(f^j x). Throws DomainError if the orbit escapes.
ExtendedReal birkhoff_sum(const SingularPotential& G, const SmoothIntervalMap& map, double x, int n);

// Σ_{j<n} G(orbit[start + j]) over a precomputed orbit.
ExtendedReal birkhoff_sum_on_orbit(const SingularPotential& G, std::span<const double> orbit,
                                   std::size_t start, int n);

// G̃ = (1/N) S_N(G). Its poles lie in ⋃_{j<N} f^{-j}(Λ(G)); they are found
// lazily along orbits, never enumerated.
class AveragedPotential {
 public:
  AveragedPotential(SingularPotential base, SmoothIntervalMap map, int N);

  [[nodiscard]] ExtendedReal operator()(double x) const;
  // min_{j<N} dist(f^j x, Λ(G)).
  [[nodiscard]] double pole_distance(double x) const;

  [[nodiscard]] const SingularPotential& base() const { return base_; }
  [[nodiscard]] const SmoothIntervalMap& map() const { return map_; }
  [[nodiscard]] int N() const { return N_; }

 private:
  SingularPotential base_;
  SmoothIntervalMap map_;
  int N_;
};

ExtendedReal averaged_potential_eval(const SingularPotential& G, const SmoothIntervalMap& map, int N,
                                     double x);

// h = -(1/N) Σ_{j<N} (N-1-j) G∘f^j, so that G̃ = G + h - h∘f.
// Empty at a pole of h, where h = +inf (a G-pole carrying positive weight).
std::optional<double> coboundary_h(const SingularPotential& G, const SmoothIntervalMap& map, int N,
                                   double x);

// The same sum over a precomputed orbit starting at orbit[start].
std::optional<double> coboundary_h_on_orbit(const SingularPotential& G, std::span<const double> orbit,
                                            std::size_t start, int N);

struct CohomologyCheck {
  double max_residual = 0.0;
  std::size_t used = 0;
  std::size_t filtered = 0;
};

// Samples closer than this to the relevant pole preimages are skipped.
inline constexpr double kCohomologyFilterDistance = 1e-6;

// max |G̃(x) - (G(x) + h(x) - h(f x))| over samples whose orbit segment
// x, ..., f^N(x) stays away from Λ(G).
CohomologyCheck verify_cohomology(const SingularPotential& G, const SmoothIntervalMap& map, int N,
                                  std::span<const double> samples);

struct SupBoundCheck {
  double lhs = 0.0;                   // sampled sup_K |S_n(G) - S_n(G̃)|
  double bound = 0.0;                 // C_K = (N-1)(sup_K G - inf_K G)
  double telescoping_residual = 0.0;  // max |S_n(G̃) - S_n(G) - (h - h∘f^n)|
  std::size_t samples = 0;

  [[nodiscard]] bool holds() const { return lhs <= bound; }
};

struct SampleOptions {
  std::size_t per_interval = 100;  // uniform samples per interval of K (full-interval maps)
  int cantor_depth = 10;           // cylinder depth for representatives on a repeller
  std::uint64_t seed = 0x5eed;     // tails of coded orbits on a repeller
};

// Sample orbits of length `length` starting in K ∩ J. On full-interval maps
// the starts are uniform in each interval and orbits are iterated forward; on
// a repeller the starts are depth-d cylinder representatives and the orbits
// are coded backward, since forward iteration there escapes within a few
// dozen steps.
std::vector<std::vector<double>> sample_orbits(const SmoothIntervalMap& map, std::span<const Interval> K,
                                               std::size_t length, const SampleOptions& opt = {});

// `count` points of J: cell midpoints on a full interval, evenly strided
// cylinder representatives on a repeller.
std::vector<double> julia_samples(const SmoothIntervalMap& map, std::size_t count, const SampleOptions& opt = {});

// Checks sup_K |S_n(G) - S_n(G̃)| against C_K and the telescoping identity
// S_n(G̃) = S_n(G) + h - h∘f^n at every sample. Throws PreconditionError when a
// sample of K sits on a pole of G̃.
SupBoundCheck verify_snbound(const SingularPotential& G, const SmoothIntervalMap& map, int N,
                             std::span<const Interval> K, int n, const SampleOptions& opt = {});

struct SupEstimate {
  double value = 0.0;     // a lower estimate of sup (1/n) S_n(G); -inf if every sample is a pole
  double argmax = 0.0;
  int n = 1;
  std::size_t grid_size = 0;
  std::size_t evaluated = 0;  // finite samples, including refinement
  std::size_t refined = 0;    // refinement samples
};

// Max of (1/n) S_n(G) on a uniform grid of J (cylinder representatives on a
// repeller), refined once around the top decile.
SupEstimate sup_birkhoff_average(const SingularPotential& G, const SmoothIntervalMap& map, int n,
                                 std::size_t grid_size, const SampleOptions& opt = {});

}  // namespace treepressure
