#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "treepressure/maps.hpp"
#include "treepressure/potentials.hpp"
#include "treepressure/preimage.hpp"

namespace treepressure {

enum class PressureMethod { Tree, Ulam, Periodic, Exact };

std::string to_string(PressureMethod m);

struct SpectralDiagnostics {
  std::size_t bins = 0;
  std::size_t nonzeros = 0;
  int iterations = 0;
  double eigenvalue = 0.0;
  double residual = 0.0;  // ||M v - λ v||_1 with ||v||_1 = 1
};

struct PeriodicDiagnostics {
  int period = 0;
  std::size_t points = 0;
  std::size_t pole_terms = 0;  // orbits annihilated by a pole
  bool exact_points = false;
};

struct PressureEstimate {
  PressureMethod method = PressureMethod::Tree;
  double value = 0.0;
  int size = 0;  // depth n, bin count, or period
  std::optional<TreeFoldResult> tree;
  std::optional<double> cauchy_increment;  // |P_n - P_{n-1}|, tree runs only
  std::optional<SpectralDiagnostics> spectral;
  std::optional<PeriodicDiagnostics> periodic;
  std::string map_name;
  std::string potential_name;
};

// A run of tree-pressure estimates P_n = (1/n) log Σ_{y∈f^{-n}(x)} exp(S_n(G)(y)).
struct TreePressureRun {
  std::vector<PressureEstimate> estimates;  // n = 1, 2, ...
  std::optional<int> truncated_at;          // depth at which every path hit a pole
  std::optional<int> converged_at;          // first n closing 3 consecutive increments < threshold
};

inline constexpr double kConvergenceIncrement = 5e-3;
inline constexpr int kConvergenceRun = 3;

TreePressureRun tree_pressure(const SmoothIntervalMap& map, const SingularPotential& G, double x, int n_max,
                              const FoldOptions& opt = {});

// Piecewise-linear function sampled on a uniform grid over [lo, hi].
struct GridFunction {
  double lo = 0.0;
  double hi = 1.0;
  std::vector<double> values;

  static GridFunction constant(const Interval& domain, double v);
  [[nodiscard]] double operator()(double x) const;
};

// ℒ_G(ψ)(x) = Σ_{y∈f^{-1}(x)} exp(G(y)) ψ(y).
double transfer_apply(const SmoothIntervalMap& map, const SingularPotential& G, const GridFunction& psi, double x);

struct UlamOptions {
  std::size_t bins = 1024;
  int max_iterations = 20000;
  double tolerance = 1e-10;    // relative change of the eigenvalue estimate
  std::size_t nodes = 32;      // Gauss points per piece
  std::size_t pole_nodes = 64; // Gauss points per piece in cells holding a pole
  unsigned threads = 0;        // 0: hardware concurrency
};

inline constexpr std::size_t kMinUlamBins = 64;

// log of the leading eigenvalue of the Galerkin projection of ℒ_G onto
// piecewise constants on uniform bins, by power iteration. Full-interval maps
// only.
PressureEstimate ulam_pressure(const SmoothIntervalMap& map, const SingularPotential& G, const UlamOptions& opt = {});

// (1/n) log Σ_{f^n p = p} exp(S_n(G)(p)).
PressureEstimate periodic_orbit_pressure(const SmoothIntervalMap& map, const SingularPotential& G, int n,
                                         int cap = kDefaultPeriodicCap);

inline constexpr double kDefaultHyperbolicitySlack = 1e-2;

struct HyperbolicityReport {
  double sup_estimate = 0.0;       // smallest sup (1/n') S_n'(G) found over n' ≤ n
  double pressure_estimate = 0.0;  // oracle value
  int n_used = 1;                  // n' achieving sup_estimate
  double margin = 0.0;             // pressure_estimate - sup_estimate
  double slack = kDefaultHyperbolicitySlack;
  bool hyperbolic = false;         // margin > slack; otherwise inconclusive
  std::vector<SupEstimate> sups;   // one per n'
  PressureMethod oracle_method = PressureMethod::Ulam;
};

HyperbolicityReport hyperbolicity_check(const SmoothIntervalMap& map, const SingularPotential& G, int n,
                                        std::size_t grid_size, const PressureEstimate& oracle,
                                        double slack = kDefaultHyperbolicitySlack);

struct LowerBoundOptions {
  double neighbourhood = 1e-3;  // half-width of the intervals forming K̂ around orbit points
  FoldOptions fold;
  SampleOptions sampling;
};

struct LowerBoundDiagnostic {
  bool holds = false;
  double log_lhs = 0.0;  // log ℒ^n_{G̃}(1)(x)
  double log_rhs = 0.0;  // C_K̂ + n (P - ε)
  double c_khat = 0.0;
  double pressure = 0.0;
  int N = 1;
  int n = 1;
  double epsilon = 0.0;
  TreeFoldResult fold;
};

// Tests ℒ^n_{G̃}(1)(x) ≥ exp(C_K̂) exp(n(P(f,G̃) - ε)) with P taken from a
// hyperbolic verdict (P(f,G̃) = P(f,G)) and K̂ a neighbourhood of the orbit
// window x, ..., f^{N-1}(x).
LowerBoundDiagnostic lower_bound_diagnostic(const SmoothIntervalMap& map, const SingularPotential& G,
                                            const HyperbolicityReport& verdict, int N, double x, int n,
                                            double epsilon, const LowerBoundOptions& opt = {});

}  // namespace treepressure
