#include "treepressure/preimage.hpp"

#include <algorithm>
#include <cmath>
#include <future>

#include "treepressure/errors.hpp"
#include "treepressure/log_sum_exp.hpp"

namespace treepressure {

std::vector<double> preimages(const SmoothIntervalMap& map, double x) {
  if (!map.in_domain(x)) throw DomainError("preimages: x outside the domain of " + map.name());
  std::vector<double> out;
  for_each_preimage(map, x, [&](double y) { out.push_back(y); });
  return out;
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct FoldState {
  LogSumExp lse;
  std::uint64_t leaves = 0;
  std::uint64_t pole_hits = 0;
  double min_dist = kInf;

  void merge(const FoldState& o) {
    lse.merge(o.lse);
    leaves += o.leaves;
    pole_hits += o.pole_hits;
    min_dist = std::min(min_dist, o.min_dist);
  }
};

// Node weights for a plain potential.
class PlainWeigher {
 public:
  PlainWeigher(const SingularPotential& G, double /*root*/, int /*n*/) : G_(&G) {}
  ExtendedReal enter(int /*depth*/, double y) { return (*G_)(y); }
  [[nodiscard]] double pole_distance(double y) const { return G_->pole_distance(y); }

 private:
  const SingularPotential* G_;
};

// Node weights for G̃ = (1/N) S_N(G). Slot N-1+k holds G at the depth-k node
// of the current path; slots below N-1 hold G along the forward orbit of the
// root (depth -m is f^m(x)).
class AveragedWeigher {
 public:
  AveragedWeigher(const AveragedPotential& G, double root, int n) : G_(&G), N_(G.N()) {
    slots_.assign(static_cast<std::size_t>(N_ + n), 0.0);
    const Orbit o = G.map().iterate(root, std::max(0, N_ - 2));
    if (o.escaped()) throw DomainError("tree fold: forward orbit of the root escapes");
    for (int m = 0; m + 1 < N_; ++m) {
      const ExtendedReal g = G.base()(o.points[static_cast<std::size_t>(m)]);
      slots_[static_cast<std::size_t>(N_ - 1 - m)] = g.value();
    }
  }

  ExtendedReal enter(int depth, double y) {
    const ExtendedReal g = G_->base()(y);
    const auto k = static_cast<std::size_t>(N_ - 1 + depth);
    slots_[k] = g.value();
    if (g.is_neg_infinity()) return g;
    double s = 0.0;
    for (int i = 0; i < N_; ++i) s += slots_[k - static_cast<std::size_t>(i)];
    if (s == -kInf) return ExtendedReal::neg_infinity();
    return ExtendedReal(s / N_);
  }

  [[nodiscard]] double pole_distance(double y) const { return G_->base().pole_distance(y); }

 private:
  const AveragedPotential* G_;
  int N_;
  std::vector<double> slots_;
};

template <class W>
void fold_subtree(const SmoothIntervalMap& map, W& w, double point, int depth, int n, double path, FoldState& st) {
  for_each_preimage(map, point, [&](double y) {
    const ExtendedReal g = w.enter(depth, y);
    if (g.is_neg_infinity()) {
      ++st.pole_hits;
      return;
    }
    st.min_dist = std::min(st.min_dist, w.pole_distance(y));
    const double v = path + g.value();
    if (depth == n) {
      st.lse.add(v);
      ++st.leaves;
    } else {
      fold_subtree(map, w, y, depth + 1, n, v, st);
    }
  });
}

template <class W, class P>
TreeFoldResult run_fold(const SmoothIntervalMap& map, const P& G, double x, int n, const FoldOptions& opt) {
  if (n < 1) throw PreconditionError("preimage_tree_fold: depth must be at least 1");
  if (n > opt.depth_cap)
    throw CapExceeded("preimage_tree_fold: depth " + std::to_string(n) + " exceeds cap " +
                      std::to_string(opt.depth_cap));
  if (!map.in_domain(x)) throw DomainError("preimage_tree_fold: x outside the domain of " + map.name());
  x = map.domain().clamp(x);

  const auto start = std::chrono::steady_clock::now();
  FoldState total;
  if (opt.mode == FoldMode::Serial) {
    W w(G, x, n);
    fold_subtree(map, w, x, 1, n, 0.0, total);
  } else {
    // Each root subtree is folded on its own task; partial results are
    // combined in ascending-preimage order.
    const auto children = preimages(map, x);
    std::vector<std::future<FoldState>> tasks;
    tasks.reserve(children.size());
    for (double y : children) {
      tasks.push_back(std::async(std::launch::async, [&map, &G, x, y, n] {
        FoldState st;
        W w(G, x, n);
        const ExtendedReal g = w.enter(1, y);
        if (g.is_neg_infinity()) {
          ++st.pole_hits;
          return st;
        }
        st.min_dist = w.pole_distance(y);
        if (n == 1) {
          st.lse.add(g.value());
          ++st.leaves;
        } else {
          fold_subtree(map, w, y, 2, n, g.value(), st);
        }
        return st;
      }));
    }
    for (auto& t : tasks) total.merge(t.get());
  }

  TreeFoldResult r;
  r.depth = n;
  r.log_sum = total.leaves == 0 ? ExtendedReal::neg_infinity() : ExtendedReal(total.lse.value());
  r.leaf_count = total.leaves;
  r.pole_hits = total.pole_hits;
  r.min_pole_distance = total.min_dist;
  r.elapsed = std::chrono::steady_clock::now() - start;
  return r;
}

}  // namespace

TreeFoldResult preimage_tree_fold(const SmoothIntervalMap& map, const SingularPotential& G, double x, int n,
                                  const FoldOptions& opt) {
  return run_fold<PlainWeigher>(map, G, x, n, opt);
}

TreeFoldResult preimage_tree_fold(const SmoothIntervalMap& map, const AveragedPotential& G, double x, int n,
                                  const FoldOptions& opt) {
  return run_fold<AveragedWeigher>(map, G, x, n, opt);
}

NormalityCertificate lambda_normal(const SmoothIntervalMap& map, std::span<const double> lambda, double x, int n,
                                   double eps) {
  if (n < 1) throw PreconditionError("lambda_normal: depth must be at least 1");
  if (!(eps > 0.0)) throw PreconditionError("lambda_normal: eps must be positive");
  if (!map.in_domain(x)) throw DomainError("lambda_normal: x outside the domain of " + map.name());

  auto blocked = [&](double y) {
    return std::any_of(lambda.begin(), lambda.end(), [&](double c) { return std::abs(y - c) <= eps; });
  };

  NormalityCertificate cert;
  cert.point = x;
  cert.depth = n;
  std::vector<double> path(static_cast<std::size_t>(n) + 1);
  path[0] = map.domain().clamp(x);
  int deepest = 0;

  auto search = [&](auto&& self, int depth) -> bool {
    for (double y : preimages(map, path[static_cast<std::size_t>(depth - 1)])) {
      if (blocked(y)) continue;
      path[static_cast<std::size_t>(depth)] = y;
      deepest = std::max(deepest, depth);
      if (depth == n || self(self, depth + 1)) return true;
    }
    return false;
  };

  cert.normal = search(search, 1);
  if (cert.normal) {
    for (int k = n; k >= 1; --k) cert.witness.push_back(path[static_cast<std::size_t>(k)]);
  } else {
    cert.blocking_depth = deepest + 1;
  }
  return cert;
}

std::vector<double> backward_orbit_union(const SmoothIntervalMap& map, std::span<const double> lambda, int depth) {
  std::vector<double> out;
  std::vector<double> layer;
  for (double c : lambda)
    if (map.in_domain(c)) layer.push_back(c);
  for (int j = 0; j < depth && !layer.empty(); ++j) {
    out.insert(out.end(), layer.begin(), layer.end());
    if (j + 1 == depth) break;
    std::vector<double> next;
    for (double y : layer) for_each_preimage(map, y, [&](double z) { next.push_back(z); });
    layer = std::move(next);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end(), [](double a, double b) { return std::abs(a - b) < kPreimageMergeTolerance; }),
            out.end());
  return out;
}

std::vector<Interval> excise_points(std::span<const Interval> K, std::span<const double> points, double delta) {
  std::vector<Interval> out;
  for (const Interval& piece : K) {
    std::vector<Interval> parts{piece};
    for (double p : points) {
      std::vector<Interval> next;
      for (const Interval& q : parts) {
        if (p + delta <= q.lo || p - delta >= q.hi) {
          next.push_back(q);
          continue;
        }
        if (p - delta > q.lo) next.push_back({q.lo, p - delta});
        if (p + delta < q.hi) next.push_back({p + delta, q.hi});
      }
      parts = std::move(next);
    }
    for (const Interval& q : parts)
      if (q.width() >= delta) out.push_back(q);
  }
  return out;
}

}  // namespace treepressure
