#pragma once

#include <charconv>
#include <cmath>
#include <string>
#include <vector>

namespace wavipm {

/// Compensated (Neumaier) accumulator; summation order still matters for
/// bit-reproducibility, callers keep a fixed order.
class CompensatedSum {
 public:
  void add(double value) {
    const double t = sum_ + value;
    if (std::abs(sum_) >= std::abs(value))
      comp_ += (sum_ - t) + value;
    else
      comp_ += (value - t) + sum_;
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

struct LineFit {
  double slope = 0;
  double intercept = 0;
  double r_squared = 0;
};

/// Ordinary least squares of y against x.
LineFit least_squares(const std::vector<double>& x,
                      const std::vector<double>& y);

/// Shortest decimal that round-trips to the same double.
inline std::string format_double(double v) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

}  // namespace wavipm
