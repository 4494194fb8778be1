#include "wavipm/experiments.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "wavipm/bump.hpp"
#include "wavipm/numeric.hpp"

namespace wavipm {
namespace {

constexpr int kCascadeDepth = 12;

bool is_integer(double x) { return x == std::floor(x); }

int order_for(double smoothness_max) {
  return static_cast<int>(std::ceil(smoothness_max)) + 3;
}

double surrogate_distance(const CoefficientField& a, const CoefficientField& b,
                          double s, double integer_log_c) {
  if (integer_log_c > 0.0 && is_integer(s))
    return ipm_log_weighted(a, b, s, integer_log_c, a.max_level());
  return ipm_dual(a, b, s);
}

// Gridded 1-D probability density as a quadrature measure on [lo, hi].
DiscreteMeasure gridded_density(const std::function<double(double)>& density,
                                double lo, double hi, int grid) {
  DiscreteMeasure m;
  m.dim = 1;
  m.kind = DiscreteMeasure::Kind::quadrature;
  CompensatedSum total;
  for (int i = 0; i < grid; ++i) {
    const double x = lo + (hi - lo) * (i + 0.5) / grid;
    const double f = density(x);
    m.points.push_back(x);
    m.weights.push_back(f);
    total.add(f);
  }
  const double norm = total.value();
  if (norm <= 0.0) throw std::invalid_argument("density is not positive");
  for (double& w : m.weights) w /= norm;
  return m;
}

}  // namespace

void ExperimentSpec::validate() const {
  if (indices.size() < 3)
    throw std::invalid_argument("experiment needs at least 3 indices");
  for (size_t i = 1; i < indices.size(); ++i)
    if (indices[i] <= indices[i - 1])
      throw std::invalid_argument("index list must be strictly increasing");
  if (pairs.empty())
    throw std::invalid_argument("experiment needs at least one smoothness pair");
  for (const auto& pr : pairs)
    if (!(pr.gamma > 0.0 && pr.gamma <= pr.eta))
      throw std::invalid_argument("smoothness pair must satisfy 0 < gamma <= eta");
  if (beta < 0.0) throw std::invalid_argument("beta must be >= 0");
  if (max_level < 0 || nodes < 8)
    throw std::invalid_argument("bad level or node count");
}

double predicted_delta(double beta, double gamma, double eta) {
  if (!(gamma > 0.0) || gamma > eta || beta < 0.0)
    throw std::invalid_argument("predicted_delta: need 0 < gamma <= eta");
  if (gamma >= 1.0) return (beta + gamma) / (beta + eta);
  if (eta >= 1.0) return (beta * gamma + gamma) / (beta + eta);
  return gamma / eta;
}

std::vector<FamilyRow> run_family(const ExperimentSpec& spec) {
  spec.validate();
  double smax = 0.0;
  for (const auto& pr : spec.pairs) smax = std::max(smax, pr.eta);
  const WaveletFamily fam = WaveletFamily::build(order_for(smax), kCascadeDepth);

  const int count = static_cast<int>(spec.indices.size());
  std::vector<std::vector<FamilyRow>> per_index(count);

#pragma omp parallel for schedule(dynamic)
  for (int i = 0; i < count; ++i) {
    DiscreteMeasure mu, nu;
    if (spec.family == ExperimentSpec::Family::perturbed_circle) {
      const int n = static_cast<int>(std::lround(spec.indices[i]));
      mu = quadrature_measure(make_perturbed_circle(spec.beta, n), spec.nodes);
      nu = project_to_circle(mu);
    } else {
      mu = quadrature_measure(make_circle(spec.indices[i]), spec.nodes);
      nu = quadrature_measure(make_circle(0.0), spec.nodes);
    }
    const CoefficientField fa = analyze_measure_serial(mu, fam, spec.max_level);
    const CoefficientField fb = analyze_measure_serial(nu, fam, spec.max_level);
    for (const auto& pr : spec.pairs) {
      FamilyRow row;
      row.index = spec.indices[i];
      row.gamma = pr.gamma;
      row.eta = pr.eta;
      row.d_gamma = surrogate_distance(fa, fb, pr.gamma, spec.integer_log_c);
      row.d_eta = surrogate_distance(fa, fb, pr.eta, spec.integer_log_c);
      per_index[i].push_back(row);
    }
  }

  std::vector<FamilyRow> rows;
  for (const auto& chunk : per_index)
    rows.insert(rows.end(), chunk.begin(), chunk.end());
  return rows;
}

ExponentFit fit_exponent(const std::vector<FamilyRow>& rows) {
  if (rows.size() < 3)
    throw std::invalid_argument("fit_exponent: need at least 3 rows");
  std::vector<double> x, y;
  for (const auto& row : rows) {
    if (!(row.d_gamma > 0.0) || !(row.d_eta > 0.0))
      throw std::invalid_argument("fit_exponent: degenerate (nonpositive) distance");
    x.push_back(std::log(row.d_eta));
    y.push_back(std::log(row.d_gamma));
  }
  const LineFit fit = least_squares(x, y);
  return ExponentFit{fit.slope, fit.intercept, fit.r_squared};
}

InterpolationReport check_coeff_interpolation(const CoefficientField& f,
                                              double beta, double gamma,
                                              double alpha) {
  if (!(gamma > 0.0 && gamma < alpha) || beta < 0.0)
    throw std::invalid_argument(
        "check_coeff_interpolation: need 0 < gamma < alpha, beta >= 0");
  const double lhs = besov_norm(f, {.s = -gamma, .b = 0, .q1 = 1, .q2 = 1});
  const double upper = besov_norm(f, {.s = beta, .b = 2, .q1 = 1, .q2 = 1});
  const double lower = besov_norm(f, {.s = -alpha, .b = 0, .q1 = 1, .q2 = 1});
  const double theta = (alpha - gamma) / (beta + alpha);
  const double rhs = std::pow(upper, theta) * std::pow(lower, 1.0 - theta);
  return InterpolationReport{lhs, rhs, lhs <= rhs * (1.0 + 1e-12)};
}

ClassicalReport check_classical(const DensityPairSpec& spec, double beta,
                                double gamma, double alpha, int max_level) {
  if (spec.separations.empty())
    throw std::invalid_argument("check_classical: empty separation list");
  if (!(gamma > 0.0 && gamma < alpha))
    throw std::invalid_argument("check_classical: need 0 < gamma < alpha");

  const int bump_order = static_cast<int>(std::ceil(beta)) + 2;
  const auto base = [bump_order](double x) {
    return (x >= 0.0 && x <= 1.0) ? bump_lambda(x, bump_order) : 0.0;
  };
  const WaveletFamily fam =
      WaveletFamily::build(order_for(std::max(alpha, beta)), kCascadeDepth);

  ClassicalReport report;
  for (double s : spec.separations) {
    std::function<double(double)> other;
    if (spec.kind == DensityPairSpec::Kind::translate) {
      other = [&base, s](double x) { return base(x - s); };
    } else {
      // Oscillation of wavelength s, amplitude matched so the modulated
      // density keeps a bounded B^beta norm as s shrinks.
      const double freq = 1.0 / s;
      const double amp = std::min(1.0, std::pow(freq, -spec.beta));
      other = [&base, freq, amp](double x) {
        return base(x) *
               (1.0 + amp * std::sin(2.0 * std::numbers::pi * freq * x));
      };
    }
    const DiscreteMeasure ma = gridded_density(base, -0.5, 2.0, spec.grid);
    const DiscreteMeasure mb = gridded_density(other, -0.5, 2.0, spec.grid);
    const CoefficientField fa = analyze_measure(ma, fam, max_level);
    const CoefficientField fb = analyze_measure(mb, fam, max_level);
    FamilyRow row;
    row.index = s;
    row.gamma = gamma;
    row.eta = alpha;
    row.d_gamma = ipm_dual(fa, fb, gamma);
    row.d_eta = ipm_dual(fa, fb, alpha);
    report.rows.push_back(row);
  }

  if (report.rows.size() < 3)
    throw std::invalid_argument("check_classical: need at least 3 separations");
  bool positive = true;
  for (const auto& row : report.rows)
    positive = positive && row.d_gamma > 0.0 && row.d_eta > 0.0;
  if (positive) report.fit = fit_exponent(report.rows);
  return report;
}

}  // namespace wavipm
