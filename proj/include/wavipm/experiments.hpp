#pragma once

#include <vector>

#include "wavipm/coefficients.hpp"
#include "wavipm/measure.hpp"

namespace wavipm {

struct SmoothnessPair {
  double gamma = 1.0;
  double eta = 1.0;
};

/// A family of measure pairs indexed by frequency n (perturbed circle vs its
/// radial projection) or by radius offset eps (unit circle vs offset circle),
/// evaluated through the dual-norm surrogate at several smoothness levels.
struct ExperimentSpec {
  enum class Family { perturbed_circle, circle_radius };

  Family family = Family::perturbed_circle;
  double beta = 0.0;
  std::vector<double> indices;  // n values (integers) or eps values
  std::vector<SmoothnessPair> pairs;
  int max_level = 10;
  int nodes = 512;
  /// (1+j)^-c damping applied when the smoothness exponent is an integer;
  /// 0 disables and every distance uses the plain dual norm.
  double integer_log_c = 0.0;

  void validate() const;
};

struct FamilyRow {
  double index = 0;
  double gamma = 0;
  double eta = 0;
  double d_gamma = 0;
  double d_eta = 0;
};

/// Log-log least-squares fit of d_gamma against d_eta.
struct ExponentFit {
  double slope = 0;
  double intercept = 0;
  double r_squared = 0;
};

/// Predicted interpolation exponent, piecewise in (beta, gamma, eta); the
/// branches agree at gamma = 1 and eta = 1.
double predicted_delta(double beta, double gamma, double eta);

/// Builds the measure pair for each index, analyzes both sides to max_level
/// and records the surrogate distance at every smoothness pair. Rows come
/// back in ascending index order; indices run in parallel.
std::vector<FamilyRow> run_family(const ExperimentSpec& spec);

/// OLS of log d_gamma on log d_eta. Throws on fewer than 3 rows or any
/// nonpositive distance.
ExponentFit fit_exponent(const std::vector<FamilyRow>& rows);

struct InterpolationReport {
  double lhs = 0;
  double rhs = 0;
  bool holds = false;
};

/// Checks ||f||_{B^-gamma_{1,1}} <= ||f||_{B^{beta,2}_{1,1}}^{(alpha-gamma)/(beta+alpha)}
/// * ||f||_{B^-alpha_{1,1}}^{(beta+gamma)/(beta+alpha)} on the truncated field.
InterpolationReport check_coeff_interpolation(const CoefficientField& f,
                                              double beta, double gamma,
                                              double alpha);

/// Synthetic full-dimension densities on [0,1]: a fixed smooth bump either
/// translated by the separation or modulated by an oscillation of that
/// wavelength with amplitude matched to keep the B^beta norm bounded.
struct DensityPairSpec {
  enum class Kind { translate, modulate };
  Kind kind = Kind::modulate;
  double beta = 1.0;
  std::vector<double> separations;
  int grid = 2048;
};

struct ClassicalReport {
  std::vector<FamilyRow> rows;
  ExponentFit fit;
};

/// Full-dimension sanity check of the classical interpolation inequality on
/// gridded 1-D densities analyzed as quadrature measures.
ClassicalReport check_classical(const DensityPairSpec& spec, double beta,
                                double gamma, double alpha, int max_level);

}  // namespace wavipm
