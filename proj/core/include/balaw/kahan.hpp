#pragma once

#include <cstddef>
#include <span>

namespace balaw {

/// Compensated (Kahan) accumulator. All grid reductions in this library sum
/// through this class in a fixed lexicographic cell order, so results are
/// reproducible bit-for-bit across runs and thread counts.
class KahanSum {
 public:
  void add(double x) {
    const double y = x - compensation_;
    const double t = sum_ + y;
    compensation_ = (t - sum_) - y;
    sum_ = t;
  }

  double value() const { return sum_; }

 private:
  double sum_ = 0.0;
  double compensation_ = 0.0;
};

inline double kahan_total(std::span<const double> xs) {
  KahanSum s;
  for (double x : xs) s.add(x);
  return s.value();
}

}  // namespace balaw
