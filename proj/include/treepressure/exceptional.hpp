#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "treepressure/maps.hpp"
#include "treepressure/potentials.hpp"

namespace treepressure {

// Two points closer than this are the same point of a candidate set.
inline constexpr double kSetSnapTolerance = 1e-9;
inline constexpr int kMaxSeedPeriod = 8;
inline constexpr std::size_t kMaxExceptionalSize = 64;

enum class ExceptionalStatus { NonExceptionalTrivial, Exceptional, NoSetFound };

std::string to_string(ExceptionalStatus s);

struct ClosureStep {
  double processed = 0.0;      // σ whose preimages were examined
  std::vector<double> added;   // preimages outside Σ ∪ Λ appended to Σ
};

struct ExceptionalReport {
  ExceptionalStatus status = ExceptionalStatus::NoSetFound;
  std::vector<double> sigma;       // ascending; the closed set when exceptional
  std::vector<double> seed_cycle;  // periodic cycle the closure started from
  int seed_period = 0;
  std::vector<ClosureStep> trace;
  double forward_defect = 0.0;     // max_σ dist(f(σ), Σ)
  double backward_defect = 0.0;    // max over y ∈ f^{-1}(Σ) \ Σ of dist(y, Λ)
  std::size_t seeds_searched = 0;
};

struct ExceptionalSearchOptions {
  int p_max = kMaxSeedPeriod;
  std::size_t size_max = kMaxExceptionalSize;
  double snap = kSetSnapTolerance;
};

struct SetDefects {
  double forward = 0.0;
  double backward = 0.0;
};

// Forward-invariance and backward-closure defects of `sigma` relative to Λ.
SetDefects exceptional_set_defects(const SmoothIntervalMap& map, std::span<const double> sigma,
                                   std::span<const double> lambda);

// Backward-closure search seeded by every periodic cycle of period ≤ p_max.
// Preimages of the current set that are neither in it nor in Λ are appended
// until the set is closed (exceptional) or grows past size_max (no set from
// that seed). With Λ empty a single trivial report is returned.
std::vector<ExceptionalReport> find_exceptional_sets(const SmoothIntervalMap& map, std::span<const double> lambda,
                                                     const ExceptionalSearchOptions& opt = {});

// First exceptional set for Λ(G), or an aggregate NoSetFound report, which is
// a bounded-search statement and not a proof of non-exceptionality.
ExceptionalReport is_exceptional(const SmoothIntervalMap& map, const SingularPotential& G,
                                 const ExceptionalSearchOptions& opt = {});

struct SigmaPrimeResult {
  std::vector<double> sigma_prime;   // ascending
  std::vector<double> escaping;      // f^{-1}(Σ̃) \ Σ̃
  std::vector<int> last_pole_index;  // j* for each escaping point
  std::vector<double> anchors;       // A = {f^{j*}(x)}
  SetDefects defects;                // of Σ' relative to Λ(G)
};

// Builds Σ' = ⋃_{i≥1} f^i(A) from a set Σ̃ exceptional for the averaged
// potential (1/N) S_N(G) and verifies that Σ' is Λ(G)-exceptional.
SigmaPrimeResult sigma_prime_construction(const SmoothIntervalMap& map, const SingularPotential& G, int N,
                                          std::span<const double> sigma_tilde, double snap = kSetSnapTolerance);

}  // namespace treepressure
