#pragma once

#include <cmath>
#include <limits>
#include <ostream>

#include "treepressure/errors.hpp"

namespace treepressure {

// A value in R ∪ {-inf}. Potentials and Birkhoff sums live here; +inf and NaN
// are rejected on construction so arithmetic never produces inf - inf.
class ExtendedReal {
 public:
  constexpr ExtendedReal() = default;

  ExtendedReal(double v) : value_(v) {  // NOLINT(google-explicit-constructor)
    if (std::isnan(v) || v == std::numeric_limits<double>::infinity())
      throw DomainError("ExtendedReal: value must be finite or -inf");
  }

  static constexpr ExtendedReal neg_infinity() {
    ExtendedReal r;
    r.value_ = -std::numeric_limits<double>::infinity();
    return r;
  }

  [[nodiscard]] constexpr bool is_neg_infinity() const {
    return value_ == -std::numeric_limits<double>::infinity();
  }
  [[nodiscard]] constexpr bool is_finite() const { return !is_neg_infinity(); }

  // Raw double; -inf for the distinguished value.
  [[nodiscard]] constexpr double value() const { return value_; }

  // exp(v), with exp(-inf) = 0 exactly.
  [[nodiscard]] double weight() const { return is_neg_infinity() ? 0.0 : std::exp(value_); }

  friend ExtendedReal operator+(ExtendedReal a, ExtendedReal b) {
    if (a.is_neg_infinity() || b.is_neg_infinity()) return neg_infinity();
    return ExtendedReal(a.value_ + b.value_);
  }
  ExtendedReal& operator+=(ExtendedReal other) { return *this = *this + other; }

  // Scaling by a nonnegative factor; 0 * (-inf) is treated as -inf (a pole
  // stays a pole under averaging).
  friend ExtendedReal scale(ExtendedReal a, double factor) {
    if (factor < 0) throw PreconditionError("ExtendedReal: negative scale factor");
    if (a.is_neg_infinity()) return neg_infinity();
    return ExtendedReal(a.value_ * factor);
  }

  friend constexpr bool operator==(ExtendedReal a, ExtendedReal b) { return a.value_ == b.value_; }
  friend constexpr bool operator<(ExtendedReal a, ExtendedReal b) { return a.value_ < b.value_; }

  friend std::ostream& operator<<(std::ostream& os, ExtendedReal v) {
    if (v.is_neg_infinity()) return os << "-inf";
    return os << v.value_;
  }

 private:
  double value_ = 0.0;
};

}  // namespace treepressure
