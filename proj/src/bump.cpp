#include "wavipm/bump.hpp"

#include <algorithm>
#include <stdexcept>

namespace wavipm {

double smoothstep(double u, int m) {
  if (m < 1) throw std::invalid_argument("smoothstep order must be >= 1");
  // S_m(u) = u^m sum_{k<m} C(m-1+k, k) (1-u)^k.
  double um = 1.0;
  for (int i = 0; i < m; ++i) um *= u;
  double binom = 1.0, onemu = 1.0, sum = 0.0;
  for (int k = 0; k < m; ++k) {
    if (k > 0) {
      binom *= static_cast<double>(m - 1 + k) / k;
      onemu *= 1.0 - u;
    }
    sum += binom * onemu;
  }
  return um * sum;
}

double bump_lambda(double x, int m) {
  if (x < 0.0 || x > 1.0) throw std::domain_error("bump_lambda: x outside [0,1]");
  const double rise = std::clamp(4.0 * x, 0.0, 1.0);
  const double fall = std::clamp(4.0 * (1.0 - x), 0.0, 1.0);
  return smoothstep(rise, m) * smoothstep(fall, m);
}

}  // namespace wavipm
