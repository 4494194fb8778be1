#include "wavipm/circle_potential.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "wavipm/bump.hpp"
#include "wavipm/numeric.hpp"

namespace wavipm {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

}  // namespace

void PotentialSpec::validate() const {
  if (eta < 1 || n < 1 || beta < 0.0 || bump_order < 1)
    throw std::invalid_argument("potential spec: need eta >= 1, n >= 1, beta >= 0");
}

double potential_h1(double t, const PotentialSpec& spec) {
  spec.validate();
  if (t < 0.0 || t >= 1.0)
    throw std::domain_error("potential_h1: t outside [0,1)");
  const double k = std::floor(2.0 * spec.n * t);
  const double sign = (static_cast<int64_t>(k) % 2 == 0) ? 1.0 : -1.0;
  const double local = 2.0 * spec.n * t - k;
  return sign * std::pow(spec.n, -(spec.eta - 1.0)) *
         bump_lambda(local, spec.bump_order);
}

double cost_integral(const PotentialSpec& spec, int quad_nodes) {
  spec.validate();
  if (quad_nodes < 32 * spec.n)
    throw std::invalid_argument("cost_integral: need at least 32 n nodes");
  CompensatedSum acc;
  for (int i = 0; i < quad_nodes; ++i) {
    const double t = static_cast<double>(i) / quad_nodes;
    acc.add(potential_h1(t, spec) * std::sin(kTwoPi * spec.n * t));
  }
  const double integral = acc.value() / quad_nodes;
  return std::pow(spec.n, -(spec.beta + 1.0)) * integral;
}

double sobolev_sup(int n, int eta) {
  if (n < 1 || eta < 1)
    throw std::invalid_argument("sobolev_sup: need n >= 1, eta >= 1");
  return std::pow(n, -(eta - 1.0)) / std::sqrt(2.0);
}

ExampleReport example_report(double beta, int eta,
                             const std::vector<int>& n_list, int quad_nodes,
                             int max_level) {
  if (n_list.size() < 3)
    throw std::invalid_argument("example_report: need at least 3 frequencies");
  for (size_t i = 1; i < n_list.size(); ++i)
    if (n_list[i] <= n_list[i - 1])
      throw std::invalid_argument("example_report: n_list must be ascending");

  const int order = eta + 3;
  const WaveletFamily fam = WaveletFamily::build(order, 12);

  ExampleReport report;
  report.rows.resize(n_list.size());

#pragma omp parallel for schedule(dynamic)
  for (int64_t i = 0; i < static_cast<int64_t>(n_list.size()); ++i) {
    const int n = n_list[i];
    PotentialSpec spec{eta, n, beta, eta};
    const DiscreteMeasure mu =
        quadrature_measure(make_perturbed_circle(beta, n), quad_nodes);
    const DiscreteMeasure nu = project_to_circle(mu);

    // h(x) = H1(g*^-1(T(x))) <Theta(T(x)), x - T(x)>, Theta the outward
    // unit normal of the circle, so the bracket is ||x|| - 1.
    const auto h = [&spec](std::span<const double> x) {
      double t = std::atan2(x[1], x[0]) / kTwoPi;
      if (t < 0.0) t += 1.0;
      if (t >= 1.0) t -= 1.0;
      return potential_h1(t, spec) * (std::hypot(x[0], x[1]) - 1.0);
    };

    const CoefficientField fa = analyze_measure_serial(mu, fam, max_level);
    const CoefficientField fb = analyze_measure_serial(nu, fam, max_level);

    ExampleRow row;
    row.n = n;
    row.displacement = displacement_cost(mu);
    row.pairing = potential_pairing(mu, nu, h);
    row.cost = cost_integral(spec, std::max(quad_nodes, 32 * n));
    row.d_one = ipm_dual(fa, fb, 1.0);
    row.d_eta = ipm_dual(fa, fb, static_cast<double>(eta));
    row.d_half = ipm_dual(fa, fb, 0.5);
    row.ratio = row.pairing / row.cost;
    report.rows[i] = row;
  }

  std::vector<double> logn;
  for (int n : n_list) logn.push_back(std::log(static_cast<double>(n)));
  auto slope = [&logn, &report](double ExampleRow::*member) {
    std::vector<double> y;
    for (const auto& row : report.rows) y.push_back(std::log(row.*member));
    return least_squares(logn, y).slope;
  };
  report.slope_displacement = slope(&ExampleRow::displacement);
  report.slope_pairing = slope(&ExampleRow::pairing);
  report.slope_cost = slope(&ExampleRow::cost);
  report.slope_d_one = slope(&ExampleRow::d_one);
  report.slope_d_eta = slope(&ExampleRow::d_eta);
  report.slope_d_half = slope(&ExampleRow::d_half);
  return report;
}

}  // namespace wavipm
