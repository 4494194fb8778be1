#pragma once

#include <array>
#include <functional>
#include <map>
#include <span>
#include <string>

#include "wavipm/measure.hpp"
#include "wavipm/wavelet.hpp"

namespace wavipm {

/// Smoothness s, logarithmic exponent b and the two summation exponents of
/// a Besov norm. Infinite q's are suprema.
struct BesovParams {
  double s = 0.0;
  double b = 0.0;
  double q1 = 1.0;
  double q2 = 1.0;
};

/// Sparse wavelet expansion of a measure (or function) up to a maximum
/// level. Canonical form: no exactly-zero entries, indices valid and sorted.
class CoefficientField {
 public:
  CoefficientField(int dim, int max_level) : dim_(dim), max_level_(max_level) {}

  int dim() const { return dim_; }
  int max_level() const { return max_level_; }
  const std::map<TensorIndex, double>& entries() const { return entries_; }

  /// Inserts or drops per the sparsity threshold. Index must be valid and
  /// within max_level.
  void set(const TensorIndex& idx, double value);
  double at(const TensorIndex& idx) const;

  std::array<double, 3> box_lo{0, 0, 0};
  std::array<double, 3> box_hi{0, 0, 0};

  /// CSV `j,l,w1,...,wp,value`, sorted by (j, l, w).
  std::string to_csv() const;

  static constexpr double kPruneThreshold = 1e-15;

 private:
  int dim_;
  int max_level_;
  std::map<TensorIndex, double> entries_;
};

/// Wavelet coefficients <mu, psi_jlw> = sum_i w_i psi_jlw(x_i) for every
/// index up to level J whose support meets the atoms. Bit-reproducible:
/// per-index accumulation runs in ascending atom order with compensated
/// summation regardless of thread count. The _serial variant is the
/// reference implementation the OpenMP kernel is checked against.
CoefficientField analyze_measure(const DiscreteMeasure& m,
                                 const WaveletFamily& fam, int max_level);
CoefficientField analyze_measure_serial(const DiscreteMeasure& m,
                                        const WaveletFamily& fam,
                                        int max_level);

/// Coefficient-wise rescaling by 2^{j gamma} (1+j)^c.
CoefficientField gamma_op(const CoefficientField& f, double gamma, double c);

/// Truncated Besov norm of the stored expansion.
double besov_norm(const CoefficientField& f, const BesovParams& params);

/// Dual-norm IPM surrogate ||a - b||_{B^{-gamma}_{1,1}}.
double ipm_dual(const CoefficientField& a, const CoefficientField& b,
                double gamma);

/// Same dual sum, entries above level_cut dropped and every level damped by
/// (1+j)^-c; the integer-smoothness variant.
double ipm_log_weighted(const CoefficientField& a, const CoefficientField& b,
                        double gamma, double c, int level_cut);

/// int h dm1 - int h dm2 for a candidate potential h; a certified lower
/// bound on the IPM when h lies in the unit ball.
double potential_pairing(
    const DiscreteMeasure& m1, const DiscreteMeasure& m2,
    const std::function<double(std::span<const double>)>& h);

}  // namespace wavipm
