#pragma once

#include <chrono>
#include <cstdint>
#include <limits>
#include <span>
#include <vector>

#include "treepressure/extended_real.hpp"
#include "treepressure/maps.hpp"
#include "treepressure/potentials.hpp"

namespace treepressure {

inline constexpr int kDefaultTreeDepthCap = 24;
// Branch inverses meeting closer than this (tangency at a critical value) are one preimage.
inline constexpr double kPreimageMergeTolerance = 1e-12;

// Calls fn(y) for every solution of f(y) = x, ascending, one per branch whose
// image contains x.
template <class F>
void for_each_preimage(const SmoothIntervalMap& map, double x, F&& fn) {
  const auto& branches = map.branches();
  double prev = 0.0;
  bool have_prev = false;
  for (std::size_t b = 0; b < branches.size(); ++b) {
    if (!branches[b].image.contains(x, kDomainSlack)) continue;
    const double y = map.branch_inverse(b, x);
    if (have_prev && std::abs(y - prev) < kPreimageMergeTolerance) continue;
    fn(y);
    prev = y;
    have_prev = true;
  }
}

// f^{-1}(x), ascending. Empty for points outside the image of a repeller.
std::vector<double> preimages(const SmoothIntervalMap& map, double x);

enum class FoldMode { Serial, ParallelDeterministic };

struct FoldOptions {
  FoldMode mode = FoldMode::Serial;
  int depth_cap = kDefaultTreeDepthCap;
};

// Log-domain aggregation of exp(S_n(G)(y)) over y ∈ f^{-n}(x).
struct TreeFoldResult {
  int depth = 0;
  ExtendedReal log_sum = ExtendedReal::neg_infinity();
  std::uint64_t leaf_count = 0;  // surviving depth-n paths
  std::uint64_t pole_hits = 0;   // path prefixes cut by a pole (zero weight)
  double min_pole_distance = std::numeric_limits<double>::infinity();
  std::chrono::duration<double, std::milli> elapsed{0};
};

// Depth-first over all preimage paths y_n → ... → y_1 → x with ascending
// preimages at every level. Streaming: memory is O(n).
TreeFoldResult preimage_tree_fold(const SmoothIntervalMap& map, const SingularPotential& G, double x, int n,
                                  const FoldOptions& opt = {});
// Same fold with the averaged potential G̃ = (1/N) S_N(G). G̃ at a node is
// read off the path (its forward orbit is the chain of ancestors), so no
// forward iteration is needed inside the tree.
TreeFoldResult preimage_tree_fold(const SmoothIntervalMap& map, const AveragedPotential& G, double x, int n,
                                  const FoldOptions& opt = {});

struct NormalityCertificate {
  double point = 0.0;
  int depth = 0;
  bool normal = false;
  // [y, f(y), ..., f^{n-1}(y)] when normal
  std::vector<double> witness;
  // depth at which every path had died; 0 when normal
  int blocking_depth = 0;
};

// Searches f^{-n}(x) for a path whose points all stay farther than eps from
// Λ. Returns at the first surviving path.
NormalityCertificate lambda_normal(const SmoothIntervalMap& map, std::span<const double> lambda, double x, int n,
                                   double eps);

// All points of ⋃_{j<depth} f^{-j}(lambda), ascending.
std::vector<double> backward_orbit_union(const SmoothIntervalMap& map, std::span<const double> lambda, int depth);

// K with the open delta-neighbourhoods of `points` removed. Pieces shorter
// than delta are dropped.
std::vector<Interval> excise_points(std::span<const Interval> K, std::span<const double> points, double delta);

}  // namespace treepressure
