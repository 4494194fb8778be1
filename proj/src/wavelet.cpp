#include "wavipm/wavelet.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <numeric>
#include <stdexcept>

namespace wavipm {
namespace {

// Roots of a real polynomial (ascending coefficients) via the companion
// matrix. Leading coefficient must be nonzero.
std::vector<std::complex<double>> poly_roots(const std::vector<double>& coef) {
  const int deg = static_cast<int>(coef.size()) - 1;
  if (deg < 1) return {};
  Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(deg, deg);
  for (int i = 0; i < deg; ++i) {
    companion(i, deg - 1) = -coef[i] / coef[deg];
    if (i > 0) companion(i, i - 1) = 1.0;
  }
  Eigen::EigenSolver<Eigen::MatrixXd> solver(companion);
  std::vector<std::complex<double>> roots(deg);
  for (int i = 0; i < deg; ++i) roots[i] = solver.eigenvalues()[i];
  return roots;
}

// Daubechies-N refinement filter, minimal-phase spectral factorization of
// m0(z) = ((1+z)/2)^N Q(z) with the roots of Q inside the unit disk.
std::vector<double> daubechies_filter(int order) {
  const double sqrt2 = std::sqrt(2.0);
  if (order == 1) return {sqrt2 / 2.0, sqrt2 / 2.0};

  // P(y) = sum_{k<N} C(N-1+k, k) y^k.
  std::vector<double> poly(order);
  poly[0] = 1.0;
  for (int k = 1; k < order; ++k)
    poly[k] = poly[k - 1] * static_cast<double>(order - 1 + k) / k;

  std::vector<std::complex<double>> factored{1.0};
  auto mul = [&factored](std::complex<double> c0, std::complex<double> c1) {
    std::vector<std::complex<double>> out(factored.size() + 1);
    for (size_t i = 0; i < factored.size(); ++i) {
      out[i] += c0 * factored[i];
      out[i + 1] += c1 * factored[i];
    }
    factored = std::move(out);
  };

  for (int k = 0; k < order; ++k) mul(0.5, 0.5);
  for (const auto& y : poly_roots(poly)) {
    // y = (2 - z - 1/z)/4, so z^2 + (4y-2) z + 1 = 0; the two z-roots are
    // reciprocal, keep the one inside the disk.
    const std::complex<double> b = 4.0 * y - 2.0;
    const std::complex<double> disc = std::sqrt(b * b - 4.0);
    std::complex<double> z = (-b + disc) / 2.0;
    if (std::abs(z) > 1.0) z = (-b - disc) / 2.0;
    mul(-z / (1.0 - z), 1.0 / (1.0 - z));
  }

  std::vector<double> filter(factored.size());
  for (size_t i = 0; i < factored.size(); ++i) filter[i] = factored[i].real();
  const double total = std::accumulate(filter.begin(), filter.end(), 0.0);
  for (double& h : filter) h *= sqrt2 / total;
  return filter;
}

int64_t strict_floor(double a) {
  const double f = std::floor(a);
  return static_cast<int64_t>(f == a ? f - 1.0 : f);
}

int64_t strict_ceil(double a) {
  return static_cast<int64_t>(std::floor(a)) + 1;
}

}  // namespace

bool valid_index(const TensorIndex& idx, int dim) {
  if (idx.j < 0 || dim < 1 || dim > 3) return false;
  const int32_t scaling_block = 1 << dim;
  if (idx.l < 1 || idx.l > scaling_block) return false;
  if (idx.j >= 1 && idx.l == scaling_block) return false;
  return true;
}

WaveletFamily WaveletFamily::build(int order, int cascade_depth) {
  if (order < 1) throw std::invalid_argument("wavelet order must be >= 1");
  if (cascade_depth < 4)
    throw std::invalid_argument("cascade depth must be >= 4");

  WaveletFamily fam;
  fam.order_ = order;
  fam.depth_ = cascade_depth;
  fam.grid_step_ = std::exp2(-cascade_depth);
  fam.low_pass_ = daubechies_filter(order);

  const int taps = 2 * order;
  const size_t table_size =
      static_cast<size_t>(taps - 1) * (1u << cascade_depth) + 1;

  if (order == 1) {
    fam.scaling_.assign(table_size, 1.0);
    fam.scaling_.back() = 0.0;
    fam.wavelet_.assign(table_size, 1.0);
    for (size_t k = table_size / 2; k < table_size; ++k) fam.wavelet_[k] = -1.0;
    fam.wavelet_.back() = 0.0;
    return fam;
  }

  // phi at integers: eigenvector of M[i][j] = sqrt(2) h_{2i-j} for
  // eigenvalue 1, normalized to sum 1. Endpoints of the support are 0.
  const int inner = taps - 2;
  Eigen::MatrixXd refine = Eigen::MatrixXd::Zero(inner, inner);
  for (int i = 1; i <= inner; ++i)
    for (int j = 1; j <= inner; ++j) {
      const int k = 2 * i - j;
      if (k >= 0 && k < taps) refine(i - 1, j - 1) = std::sqrt(2.0) * fam.low_pass_[k];
    }
  Eigen::FullPivLU<Eigen::MatrixXd> lu(refine - Eigen::MatrixXd::Identity(inner, inner));
  lu.setThreshold(1e-8);
  Eigen::MatrixXd kernel = lu.kernel();
  Eigen::VectorXd values = kernel.col(0);
  values /= values.sum();

  // Exact dyadic refinement: values at odd multiples of 2^-d come from the
  // two-scale relation applied to the previous (coarser) grid.
  std::vector<double> coarse(taps);
  for (int i = 1; i <= inner; ++i) coarse[i] = values[i - 1];
  for (int d = 1; d <= cascade_depth; ++d) {
    const int64_t prev_len = static_cast<int64_t>(coarse.size()) - 1;
    std::vector<double> fine(2 * prev_len + 1, 0.0);
    for (int64_t k = 0; k <= 2 * prev_len; ++k) {
      if (k % 2 == 0) {
        fine[k] = coarse[k / 2];
        continue;
      }
      double acc = 0.0;
      for (int m = 0; m < taps; ++m) {
        const int64_t src = k - m * (prev_len / (taps - 1));
        if (src >= 0 && src <= prev_len) acc += fam.low_pass_[m] * coarse[src];
      }
      fine[k] = std::sqrt(2.0) * acc;
    }
    coarse = std::move(fine);
  }
  fam.scaling_ = std::move(coarse);

  // psi(x) = sqrt(2) sum_m g_m phi(2x - m), g_m = (-1)^m h_{2N-1-m}.
  const int64_t steps = int64_t{1} << cascade_depth;
  fam.wavelet_.assign(table_size, 0.0);
  for (int64_t k = 0; k < static_cast<int64_t>(table_size); ++k) {
    double acc = 0.0;
    for (int m = 0; m < taps; ++m) {
      const double g = (m % 2 == 0 ? 1.0 : -1.0) * fam.low_pass_[taps - 1 - m];
      const int64_t src = 2 * k - m * steps;
      if (src >= 0 && src < static_cast<int64_t>(table_size))
        acc += g * fam.scaling_[src];
    }
    fam.wavelet_[k] = std::sqrt(2.0) * acc;
  }
  return fam;
}

double WaveletFamily::scaling(double x) const {
  if (order_ == 1) return (x >= 0.0 && x < 1.0) ? 1.0 : 0.0;
  const double len = support_length();
  if (x <= 0.0 || x >= len) return 0.0;
  const double t = x / grid_step_;
  const size_t i = static_cast<size_t>(t);
  const double frac = t - static_cast<double>(i);
  return scaling_[i] * (1.0 - frac) + scaling_[i + 1] * frac;
}

double WaveletFamily::wavelet(double x) const {
  if (order_ == 1) {
    if (x >= 0.0 && x < 0.5) return 1.0;
    if (x >= 0.5 && x < 1.0) return -1.0;
    return 0.0;
  }
  const double len = support_length();
  if (x <= 0.0 || x >= len) return 0.0;
  const double t = x / grid_step_;
  const size_t i = static_cast<size_t>(t);
  const double frac = t - static_cast<double>(i);
  return wavelet_[i] * (1.0 - frac) + wavelet_[i + 1] * frac;
}

double WaveletFamily::eval_tensor(const TensorIndex& idx,
                                  std::span<const double> x) const {
  const int p = static_cast<int>(x.size());
  if (!valid_index(idx, p)) throw std::invalid_argument("invalid tensor index");

  const int32_t scaling_block = 1 << p;
  if (idx.l == scaling_block) {
    double prod = 1.0;
    for (int i = 0; i < p; ++i) {
      prod *= scaling(x[i] - idx.w[i]);
      if (prod == 0.0) return 0.0;
    }
    return prod;
  }
  const double scale = std::exp2(idx.j);
  double prod = 1.0;
  for (int i = 0; i < p; ++i) {
    const double u = scale * x[i] - idx.w[i];
    prod *= ((idx.l >> i) & 1) ? wavelet(u) : scaling(u);
    if (prod == 0.0) return 0.0;
  }
  return prod * std::exp2(0.5 * idx.j * p);
}

std::vector<TensorIndex> WaveletFamily::active_indices(
    int j, std::span<const double> lo, std::span<const double> hi) const {
  const int p = static_cast<int>(lo.size());
  if (j < 0 || p < 1 || p > 3 || hi.size() != lo.size())
    throw std::invalid_argument("active_indices: bad arguments");

  const double scale = std::exp2(j);
  const double len = support_length();
  std::array<int64_t, 3> wmin{}, wmax{};
  for (int i = 0; i < p; ++i) {
    if (lo[i] > hi[i]) return {};
    // Support [w, w+len) must meet [lo, hi] in positive measure.
    wmin[i] = strict_ceil(scale * lo[i] - len);
    wmax[i] = strict_floor(scale * hi[i]);
    if (wmin[i] > wmax[i]) return {};
  }

  const int32_t scaling_block = 1 << p;
  const int32_t lmax = (j == 0) ? scaling_block : scaling_block - 1;
  std::vector<TensorIndex> out;
  for (int32_t l = 1; l <= lmax; ++l) {
    std::array<int32_t, 3> w{};
    for (int i = 0; i < p; ++i) w[i] = static_cast<int32_t>(wmin[i]);
    while (true) {
      out.push_back(TensorIndex{j, l, w});
      int axis = p - 1;
      while (axis >= 0) {
        if (++w[axis] <= wmax[axis]) break;
        w[axis] = static_cast<int32_t>(wmin[axis]);
        --axis;
      }
      if (axis < 0) break;
    }
  }
  return out;
}

std::pair<int32_t, int32_t> WaveletFamily::covering_translations(
    double u) const {
  const auto base = static_cast<int32_t>(std::floor(u));
  return {base - (2 * order_ - 2), base};
}

}  // namespace wavipm
