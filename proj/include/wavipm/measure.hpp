#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace wavipm {

/// Weighted atoms in R^p. Probability measures carry total mass 1; all
/// operations treat the type as immutable.
struct DiscreteMeasure {
  enum class Kind { quadrature, empirical };

  int dim = 2;
  Kind kind = Kind::quadrature;
  std::vector<double> points;  // dim-strided, atom i at [i*dim, (i+1)*dim)
  std::vector<double> weights;

  size_t size() const { return weights.size(); }
  std::span<const double> atom(size_t i) const {
    return {points.data() + i * dim, static_cast<size_t>(dim)};
  }

  /// Axis-aligned bounding box of the atoms.
  void bounding_box(std::span<double> lo, std::span<double> hi) const;

  /// CSV with header x1,...,xp,weight; shortest round-trip decimals.
  std::string to_csv() const;
};

/// Closed-form closed curves in R^2, parameterized periodically on [0,1):
/// the unit circle modulated either by a frequency-n radial oscillation of
/// amplitude (2 pi n)^-(beta+1) or by a constant radius offset 1+eps.
struct ParametricCurve {
  enum class Kind { perturbed_circle, circle_radius };

  Kind kind = Kind::circle_radius;
  double beta = 0.0;
  int n = 1;
  double eps = 0.0;

  std::array<double, 2> at(double t) const;
  std::array<double, 2> velocity(double t) const;
  double speed(double t) const;
};

ParametricCurve make_perturbed_circle(double beta, int n);
ParametricCurve make_circle(double eps);

/// Arc-length (volume) measure of the curve: m equispaced parameter nodes,
/// weights proportional to speed, normalized to mass 1. Requires m >= 8n so
/// the radial oscillation is resolved.
DiscreteMeasure quadrature_measure(const ParametricCurve& curve, int m);

/// Empirical measure of n_samples i.i.d. draws from the arc-length-uniform
/// law, by inverse CDF on a dense arc-length table. Same seed, same atoms.
DiscreteMeasure sample_iid(const ParametricCurve& curve, int n_samples,
                           uint64_t seed);

/// Pushforward under x -> x/||x||. Throws on atoms at the origin.
DiscreteMeasure project_to_circle(const DiscreteMeasure& m);

/// sum_i w_i ||x_i - x_i/||x_i|| ||; equals W1(mu, T_# mu) for the radial
/// projection T.
double displacement_cost(const DiscreteMeasure& m);

/// Exact W1 between measures on the unit circle (atoms are projected
/// radially), geodesic ground metric. Throws on total-mass mismatch.
double circular_w1(const DiscreteMeasure& a, const DiscreteMeasure& b);

/// Hausdorff distance between two point clouds (dim-strided).
double hausdorff_distance(std::span<const double> a, std::span<const double> b,
                          int dim);

}  // namespace wavipm
