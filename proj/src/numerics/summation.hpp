#pragma once

#include <cmath>

namespace qrem::numerics {

// Neumaier's variant of Kahan summation; also correct when a term is larger
// than the running sum.
class CompensatedSum {
 public:
  void add(double term) noexcept {
    const double t = sum_ + term;
    if (std::fabs(sum_) >= std::fabs(term)) {
      comp_ += (sum_ - t) + term;
    } else {
      comp_ += (term - t) + sum_;
    }
    sum_ = t;
  }
  CompensatedSum& operator+=(double term) noexcept {
    add(term);
    return *this;
  }
  double value() const noexcept { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

}  // namespace qrem::numerics
