#pragma once

#include <cmath>
#include <limits>

namespace treepressure {

// Streaming log(sum exp(v_i)). The running sum is kept relative to the
// largest term seen so far, with Neumaier compensation on the scaled sum.
// -inf terms are ignored; an empty accumulator reports -inf.
class LogSumExp {
 public:
  void add(double v) {
    if (v == -std::numeric_limits<double>::infinity()) return;
    if (v > max_) {
      const double factor = std::exp(max_ - v);  // 0 when max_ == -inf
      sum_ *= factor;
      comp_ *= factor;
      max_ = v;
      accumulate(1.0);
    } else {
      accumulate(std::exp(v - max_));
    }
    ++count_;
  }

  void merge(const LogSumExp& other) {
    if (other.count_ == 0) return;
    if (count_ == 0) {
      *this = other;
      return;
    }
    if (other.max_ > max_) {
      const double factor = std::exp(max_ - other.max_);
      sum_ *= factor;
      comp_ *= factor;
      max_ = other.max_;
      accumulate(other.sum_);
      accumulate(other.comp_);
    } else {
      const double factor = std::exp(other.max_ - max_);
      accumulate(other.sum_ * factor);
      accumulate(other.comp_ * factor);
    }
    count_ += other.count_;
  }

  [[nodiscard]] double value() const {
    if (count_ == 0) return -std::numeric_limits<double>::infinity();
    return max_ + std::log(sum_ + comp_);
  }

  [[nodiscard]] unsigned long long count() const { return count_; }

 private:
  void accumulate(double term) {
    const double t = sum_ + term;
    if (std::abs(sum_) >= std::abs(term))
      comp_ += (sum_ - t) + term;
    else
      comp_ += (term - t) + sum_;
    sum_ = t;
  }

  double max_ = -std::numeric_limits<double>::infinity();
  double sum_ = 0.0;
  double comp_ = 0.0;
  unsigned long long count_ = 0;
};

}  // namespace treepressure
