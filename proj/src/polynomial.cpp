#include "treepressure/polynomial.hpp"

#include <algorithm>
#include <cmath>

#include "treepressure/root_finding.hpp"

namespace treepressure {

Polynomial::Polynomial(std::vector<double> coeffs) : coeffs_(std::move(coeffs)) {
  while (!coeffs_.empty() && coeffs_.back() == 0.0) coeffs_.pop_back();
}

double Polynomial::operator()(double x) const {
  double acc = 0.0;
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * x + *it;
  return acc;
}

Polynomial Polynomial::derivative() const {
  if (coeffs_.size() <= 1) return Polynomial{};
  std::vector<double> d(coeffs_.size() - 1);
  for (std::size_t k = 1; k < coeffs_.size(); ++k) d[k - 1] = static_cast<double>(k) * coeffs_[k];
  return Polynomial(std::move(d));
}

std::vector<double> real_roots_in(const Polynomial& p, double lo, double hi) {
  std::vector<double> roots;
  if (p.is_zero() || p.degree() == 0 || lo > hi) return roots;
  if (p.degree() == 1) {
    const auto c = p.coefficients();
    const double r = -c[0] / c[1];
    if (r >= lo && r <= hi) roots.push_back(r);
    return roots;
  }

  const Polynomial dp = p.derivative();
  std::vector<double> knots{lo};
  for (double r : real_roots_in(dp, lo, hi))
    if (r > knots.back()) knots.push_back(r);
  if (hi > knots.back()) knots.push_back(hi);

  const double scale = [&] {
    double s = 0.0;
    for (double c : p.coefficients()) s = std::max(s, std::abs(c));
    return s;
  }();
  const double touch_tol = 1e-13 * std::max(1.0, scale);

  for (std::size_t k = 0; k + 1 < knots.size(); ++k) {
    const double a = knots[k], b = knots[k + 1];
    auto root = bracketed_newton(p, dp, a, b);
    if (!root) {
      // a critical point that touches zero without a sign change
      if (std::abs(p(a)) <= touch_tol) root = a;
      else if (std::abs(p(b)) <= touch_tol) root = b;
    }
    if (root && (roots.empty() || std::abs(*root - roots.back()) > 1e-12)) roots.push_back(*root);
  }
  return roots;
}

}  // namespace treepressure
