#pragma once

#include <cmath>

namespace lyz {

/// Neumaier's compensated sum.
template <typename T>
class CompensatedSum {
 public:
  void add(T x) {
    const T s = sum_ + x;
    if (std::abs(sum_) >= std::abs(x))
      comp_ += (sum_ - s) + x;
    else
      comp_ += (x - s) + sum_;
    sum_ = s;
  }
  T value() const { return sum_ + comp_; }

 private:
  T sum_{};
  T comp_{};
};

}  // namespace lyz
