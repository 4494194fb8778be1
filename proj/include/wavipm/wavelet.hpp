#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

namespace wavipm {

/// Dyadic tensor wavelet index: level j, block l in {1,...,2^p}, translation w.
/// l = 2^p is the pure-scaling block and only exists at level 0; for l < 2^p
/// the i-th base-2 digit of l selects wavelet (1) or scaling (0) on axis i.
struct TensorIndex {
  int32_t j = 0;
  int32_t l = 1;
  std::array<int32_t, 3> w{0, 0, 0};

  friend auto operator<=>(const TensorIndex&, const TensorIndex&) = default;
};

bool valid_index(const TensorIndex& idx, int dim);

/// Compactly supported Daubechies-N pair (phi, psi), tabulated on a dyadic
/// grid of spacing 2^-D over the common support [0, 2N-1]. Immutable after
/// construction; evaluation is pure and thread-safe.
class WaveletFamily {
 public:
  /// Synthesizes the order-N refinement filter by spectral factorization,
  /// tabulates phi by exact dyadic refinement to depth D and psi by the
  /// quadrature-mirror relation. Throws std::invalid_argument on order < 1
  /// or cascade_depth < 4.
  static WaveletFamily build(int order, int cascade_depth);

  int order() const { return order_; }
  int cascade_depth() const { return depth_; }
  const std::vector<double>& low_pass() const { return low_pass_; }
  const std::vector<double>& scaling_table() const { return scaling_; }
  const std::vector<double>& wavelet_table() const { return wavelet_; }

  /// Length of the support [0, 2N-1] of both phi and psi.
  double support_length() const { return 2.0 * order_ - 1.0; }

  /// phi(x); linear interpolation between grid points, 0 outside [0, 2N-1).
  double scaling(double x) const;
  /// psi(x); same conventions as scaling().
  double wavelet(double x) const;

  /// psi_{jlw}(x) = 2^{jp/2} prod_i psi_{l_i}(2^j x_i - w_i); the l = 2^p
  /// block is prod_i phi(x_i - w_i) at j = 0. Exactly 0 outside the support
  /// box. Dimension p is taken from x.size().
  double eval_tensor(const TensorIndex& idx, std::span<const double> x) const;

  /// All level-j indices whose (half-open) support box intersects
  /// [lo, hi], in lexicographic (l, w) order. Includes the scaling block
  /// when j = 0. Degenerate boxes give an empty list.
  std::vector<TensorIndex> active_indices(int j, std::span<const double> lo,
                                          std::span<const double> hi) const;

  /// Inclusive range [first, last] of translations w whose 1-D support
  /// [w, w+2N-1) contains the scaled coordinate u = 2^j x.
  std::pair<int32_t, int32_t> covering_translations(double u) const;

 private:
  WaveletFamily() = default;

  int order_ = 0;
  int depth_ = 0;
  std::vector<double> low_pass_;
  std::vector<double> scaling_;
  std::vector<double> wavelet_;
  double grid_step_ = 0;
};

}  // namespace wavipm
