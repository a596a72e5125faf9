#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "treepressure/polynomial.hpp"

namespace treepressure {

inline constexpr int kDefaultPeriodicCap = 16;
// Points within this distance outside the domain are snapped onto it.
inline constexpr double kDomainSlack = 1e-12;
// Periodic points closer than this are treated as one.
inline constexpr double kPeriodicDedupTolerance = 1e-9;

struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  [[nodiscard]] double width() const { return hi - lo; }
  [[nodiscard]] bool contains(double x, double slack = 0.0) const {
    return x >= lo - slack && x <= hi + slack;
  }
  [[nodiscard]] double clamp(double x) const { return x < lo ? lo : (x > hi ? hi : x); }
};

enum class JuliaStructure { FullInterval, CantorRepeller };
enum class Orientation { Increasing, Decreasing };

std::string to_string(JuliaStructure s);

struct CriticalPoint {
  double location = 0.0;
  int order = 2;  // local model |psi∘f| = |phi|^order
  bool in_julia = true;
};

struct MonotoneBranch {
  Interval domain;
  Orientation orientation = Orientation::Increasing;
  Interval image;
};

// Conjugacy h(θ) = sin²(πθ/2) between the tent map and the full quadratic map.
struct TentConjugacy {
  [[nodiscard]] static double to_interval(double theta);
  [[nodiscard]] static double tent(double theta);
};

struct Orbit {
  std::vector<double> points;             // x, f(x), ..., stops after an escape
  std::optional<std::size_t> escape_index;  // first index outside the domain

  [[nodiscard]] bool escaped() const { return escape_index.has_value(); }
};

struct PeriodicPoint {
  double point = 0.0;
  bool exact = false;           // computed from an exact symbolic representation
  std::vector<double> orbit;    // f^j(point), j = 0..n-1
};

// A piecewise-monotone differentiable self-map of a compact interval with
// tagged critical points and a branch decomposition. Immutable after
// construction.
class SmoothIntervalMap {
 public:
  // x ↦ 4x(1-x) on [0,1].
  static SmoothIntervalMap chebyshev();
  // x ↦ a x(1-x) on [0,1] with a ≥ 4.4: the invariant set is a Cantor repeller.
  static SmoothIntervalMap logistic(double a);
  // User polynomial, coefficients in ascending powers. Class membership is not
  // verified; certified() reports false.
  static SmoothIntervalMap polynomial(std::vector<double> coeffs, Interval domain);

  [[nodiscard]] double eval(double x) const;
  [[nodiscard]] double deriv(double x) const;
  [[nodiscard]] Orbit iterate(double x, int n) const;

  // Solutions of f^n(p) = p in J(f), ascending.
  [[nodiscard]] std::vector<PeriodicPoint> periodic_points(int n, int cap = kDefaultPeriodicCap) const;
  // Same solutions by branchwise cylinder isolation, ignoring any conjugacy.
  [[nodiscard]] std::vector<PeriodicPoint> periodic_points_by_isolation(int n,
                                                                        int cap = kDefaultPeriodicCap) const;

  // Inverse of the map restricted to branch b, for x in that branch's image.
  [[nodiscard]] double branch_inverse(std::size_t b, double x) const;
  // Branch containing x; at a shared endpoint the lower index wins.
  [[nodiscard]] std::size_t branch_index(double x) const;

  // Applies ψ_{w[0]} ∘ ψ_{w[1]} ∘ ... ∘ ψ_{w[k-1]} to z.
  [[nodiscard]] double apply_inverse_word(std::span<const std::size_t> word, double z) const;
  // Orbit of the point coded by `word` over `base`, computed by backward
  // inverse application: entry j is ψ_{w[j]}∘...∘ψ_{w[k-1]}(base). Stable on
  // repellers where forward iteration is not. Returns `length` + 1 points;
  // requires length ≤ word.size().
  [[nodiscard]] std::vector<double> coded_orbit(std::span<const std::size_t> word, double base,
                                                std::size_t length) const;
  // A repelling fixed point inside J used as a base for inverse coding.
  [[nodiscard]] double julia_base_point() const;

  [[nodiscard]] const Interval& domain() const { return domain_; }
  [[nodiscard]] const std::vector<CriticalPoint>& critical_points() const { return critical_; }
  [[nodiscard]] const std::vector<MonotoneBranch>& branches() const { return branches_; }
  [[nodiscard]] JuliaStructure julia_structure() const { return julia_; }
  [[nodiscard]] const std::optional<TentConjugacy>& conjugacy() const { return conjugacy_; }
  // Parameter a for the quadratic family x ↦ a x(1-x); empty otherwise.
  [[nodiscard]] std::optional<double> quadratic_parameter() const { return quadratic_a_; }
  // True for built-in families whose class membership holds by construction.
  [[nodiscard]] bool certified() const { return certified_; }
  [[nodiscard]] const std::string& name() const { return name_; }

  [[nodiscard]] bool in_domain(double x) const { return domain_.contains(x, kDomainSlack); }

 private:
  SmoothIntervalMap() = default;

  [[nodiscard]] double raw_eval(double x) const;
  [[nodiscard]] double raw_deriv(double x) const;
  void check_domain(double x, const char* what) const;
  void build_branches();

  std::string name_;
  Interval domain_{0.0, 1.0};
  std::optional<double> quadratic_a_;
  Polynomial poly_;
  Polynomial dpoly_;
  std::vector<CriticalPoint> critical_;
  std::vector<MonotoneBranch> branches_;
  JuliaStructure julia_ = JuliaStructure::FullInterval;
  std::optional<TentConjugacy> conjugacy_;
  bool certified_ = false;
};

}  // namespace treepressure
