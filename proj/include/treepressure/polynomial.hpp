#pragma once

#include <span>
#include <vector>

namespace treepressure {

// Dense real polynomial, coefficients in ascending powers: c0 + c1 x + ...
class Polynomial {
 public:
  Polynomial() = default;
  explicit Polynomial(std::vector<double> coeffs);

  [[nodiscard]] double operator()(double x) const;
  [[nodiscard]] Polynomial derivative() const;
  [[nodiscard]] int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
  [[nodiscard]] std::span<const double> coefficients() const { return coeffs_; }
  [[nodiscard]] bool is_zero() const { return coeffs_.empty(); }

 private:
  std::vector<double> coeffs_;  // trailing zeros trimmed
};

// All real roots of p in [lo, hi], ascending. Roots are isolated recursively:
// between consecutive roots of p' the polynomial is monotone, so each such
// interval holds at most one root, found by bracketed refinement. Multiple
// roots (touching zeros) are reported once.
std::vector<double> real_roots_in(const Polynomial& p, double lo, double hi);

}  // namespace treepressure
