#include "wavipm/measure.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <stdexcept>

#include "wavipm/numeric.hpp"

namespace wavipm {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double radius(const ParametricCurve& c, double t) {
  if (c.kind == ParametricCurve::Kind::circle_radius) return 1.0 + c.eps;
  const double amp = std::pow(kTwoPi * c.n, -(c.beta + 1.0));
  return 1.0 + amp * std::sin(kTwoPi * c.n * t);
}

double radius_derivative(const ParametricCurve& c, double t) {
  if (c.kind == ParametricCurve::Kind::circle_radius) return 0.0;
  const double amp = std::pow(kTwoPi * c.n, -(c.beta + 1.0));
  return amp * kTwoPi * c.n * std::cos(kTwoPi * c.n * t);
}

}  // namespace

void DiscreteMeasure::bounding_box(std::span<double> lo,
                                   std::span<double> hi) const {
  for (int d = 0; d < dim; ++d) {
    lo[d] = std::numeric_limits<double>::infinity();
    hi[d] = -std::numeric_limits<double>::infinity();
  }
  for (size_t i = 0; i < size(); ++i)
    for (int d = 0; d < dim; ++d) {
      lo[d] = std::min(lo[d], points[i * dim + d]);
      hi[d] = std::max(hi[d], points[i * dim + d]);
    }
}

std::string DiscreteMeasure::to_csv() const {
  std::string out;
  for (int d = 0; d < dim; ++d) out += "x" + std::to_string(d + 1) + ",";
  out += "weight\n";
  for (size_t i = 0; i < size(); ++i) {
    for (int d = 0; d < dim; ++d) {
      out += format_double(points[i * dim + d]);
      out += ',';
    }
    out += format_double(weights[i]);
    out += '\n';
  }
  return out;
}

std::array<double, 2> ParametricCurve::at(double t) const {
  const double r = radius(*this, t);
  return {r * std::cos(kTwoPi * t), r * std::sin(kTwoPi * t)};
}

std::array<double, 2> ParametricCurve::velocity(double t) const {
  const double r = radius(*this, t);
  const double dr = radius_derivative(*this, t);
  const double c = std::cos(kTwoPi * t), s = std::sin(kTwoPi * t);
  return {dr * c - r * kTwoPi * s, dr * s + r * kTwoPi * c};
}

double ParametricCurve::speed(double t) const {
  const auto v = velocity(t);
  return std::hypot(v[0], v[1]);
}

ParametricCurve make_perturbed_circle(double beta, int n) {
  if (beta < 0.0 || n < 1)
    throw std::invalid_argument("perturbed circle needs beta >= 0 and n >= 1");
  ParametricCurve c;
  c.kind = ParametricCurve::Kind::perturbed_circle;
  c.beta = beta;
  c.n = n;
  return c;
}

ParametricCurve make_circle(double eps) {
  if (eps <= -1.0) throw std::invalid_argument("radius offset must be > -1");
  ParametricCurve c;
  c.kind = ParametricCurve::Kind::circle_radius;
  c.eps = eps;
  return c;
}

DiscreteMeasure quadrature_measure(const ParametricCurve& curve, int m) {
  const int oscillations =
      curve.kind == ParametricCurve::Kind::perturbed_circle ? curve.n : 1;
  if (m < 8 * oscillations)
    throw std::invalid_argument(
        "quadrature_measure: need at least 8 nodes per oscillation");

  DiscreteMeasure out;
  out.kind = DiscreteMeasure::Kind::quadrature;
  out.points.reserve(2 * m);
  out.weights.reserve(m);
  CompensatedSum total;
  for (int i = 0; i < m; ++i) {
    const double t = static_cast<double>(i) / m;
    const auto x = curve.at(t);
    out.points.push_back(x[0]);
    out.points.push_back(x[1]);
    const double w = curve.speed(t);
    out.weights.push_back(w);
    total.add(w);
  }
  const double norm = total.value();
  for (double& w : out.weights) w /= norm;
  return out;
}

DiscreteMeasure sample_iid(const ParametricCurve& curve, int n_samples,
                           uint64_t seed) {
  if (n_samples < 1)
    throw std::invalid_argument("sample_iid: need at least one sample");

  // Arc-length CDF on a dense table; piecewise-linear inverse.
  constexpr int kTableSize = 1 << 14;
  std::vector<double> cdf(kTableSize + 1, 0.0);
  CompensatedSum acc;
  for (int i = 0; i < kTableSize; ++i) {
    acc.add(curve.speed((i + 0.5) / kTableSize) / kTableSize);
    cdf[i + 1] = acc.value();
  }
  const double total = cdf[kTableSize];

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  DiscreteMeasure out;
  out.kind = DiscreteMeasure::Kind::empirical;
  out.points.reserve(2 * n_samples);
  out.weights.assign(n_samples, 1.0 / n_samples);
  for (int i = 0; i < n_samples; ++i) {
    const double u = unif(rng) * total;
    const auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
    const size_t hi = std::min<size_t>(it - cdf.begin(), kTableSize);
    const size_t lo = hi - 1;
    const double span = cdf[hi] - cdf[lo];
    const double frac = span > 0.0 ? (u - cdf[lo]) / span : 0.0;
    const double t = (static_cast<double>(lo) + frac) / kTableSize;
    const auto x = curve.at(t);
    out.points.push_back(x[0]);
    out.points.push_back(x[1]);
  }
  return out;
}

DiscreteMeasure project_to_circle(const DiscreteMeasure& m) {
  DiscreteMeasure out = m;
  for (size_t i = 0; i < m.size(); ++i) {
    double norm_sq = 0.0;
    for (int d = 0; d < m.dim; ++d) {
      const double x = m.points[i * m.dim + d];
      norm_sq += x * x;
    }
    const double norm = std::sqrt(norm_sq);
    if (norm < 1e-12)
      throw std::domain_error("project_to_circle: atom at the origin");
    for (int d = 0; d < m.dim; ++d) out.points[i * m.dim + d] /= norm;
  }
  return out;
}

double displacement_cost(const DiscreteMeasure& m) {
  CompensatedSum cost;
  for (size_t i = 0; i < m.size(); ++i) {
    double norm_sq = 0.0;
    for (int d = 0; d < m.dim; ++d) {
      const double x = m.points[i * m.dim + d];
      norm_sq += x * x;
    }
    const double norm = std::sqrt(norm_sq);
    if (norm < 1e-12)
      throw std::domain_error("displacement_cost: atom at the origin");
    cost.add(m.weights[i] * std::abs(norm - 1.0));
  }
  return cost.value();
}

double circular_w1(const DiscreteMeasure& a, const DiscreteMeasure& b) {
  CompensatedSum mass_a, mass_b;
  for (double w : a.weights) mass_a.add(w);
  for (double w : b.weights) mass_b.add(w);
  if (std::abs(mass_a.value() - mass_b.value()) > 1e-8)
    throw std::invalid_argument("circular_w1: total mass mismatch");

  // Angle coordinate in [0,1); signed measure a - b as sorted jump list.
  struct Jump {
    double angle;
    double mass;
  };
  std::vector<Jump> jumps;
  jumps.reserve(a.size() + b.size());
  auto push = [&jumps](const DiscreteMeasure& m, double sign) {
    for (size_t i = 0; i < m.size(); ++i) {
      const double x = m.points[i * m.dim];
      const double y = m.points[i * m.dim + 1];
      if (std::hypot(x, y) < 1e-12)
        throw std::domain_error("circular_w1: atom at the origin");
      double angle = std::atan2(y, x) / kTwoPi;
      if (angle < 0.0) angle += 1.0;
      jumps.push_back({angle, sign * m.weights[i]});
    }
  };
  push(a, 1.0);
  push(b, -1.0);
  std::sort(jumps.begin(), jumps.end(),
            [](const Jump& u, const Jump& v) { return u.angle < v.angle; });

  // W1 on the circle: min_s int |F(t) - s| dt with F the CDF of a - b;
  // the optimal shift s is the length-weighted median of F.
  struct Piece {
    double cdf;
    double len;
  };
  std::vector<Piece> pieces;
  pieces.reserve(jumps.size() + 1);
  double cdf = 0.0;
  for (size_t i = 0; i < jumps.size(); ++i) {
    cdf += jumps[i].mass;
    const double next =
        (i + 1 < jumps.size()) ? jumps[i + 1].angle : 1.0 + jumps[0].angle;
    const double len = next - jumps[i].angle;
    if (len > 0.0) pieces.push_back({cdf, len});
  }
  std::sort(pieces.begin(), pieces.end(),
            [](const Piece& u, const Piece& v) { return u.cdf < v.cdf; });
  double covered = 0.0;
  double shift = pieces.empty() ? 0.0 : pieces.back().cdf;
  for (const Piece& p : pieces) {
    covered += p.len;
    if (covered >= 0.5) {
      shift = p.cdf;
      break;
    }
  }
  CompensatedSum cost;
  for (const Piece& p : pieces) cost.add(p.len * std::abs(p.cdf - shift));
  return kTwoPi * cost.value();
}

double hausdorff_distance(std::span<const double> a, std::span<const double> b,
                          int dim) {
  if (a.empty() || b.empty() || dim < 1)
    throw std::invalid_argument("hausdorff_distance: empty point cloud");
  const size_t na = a.size() / dim, nb = b.size() / dim;
  auto directed = [dim](std::span<const double> from, std::span<const double> to,
                        size_t nf, size_t nt) {
    double worst = 0.0;
    for (size_t i = 0; i < nf; ++i) {
      double best = std::numeric_limits<double>::infinity();
      for (size_t k = 0; k < nt; ++k) {
        double d2 = 0.0;
        for (int d = 0; d < dim; ++d) {
          const double diff = from[i * dim + d] - to[k * dim + d];
          d2 += diff * diff;
        }
        best = std::min(best, d2);
      }
      worst = std::max(worst, best);
    }
    return std::sqrt(worst);
  };
  return std::max(directed(a, b, na, nb), directed(b, a, nb, na));
}

}  // namespace wavipm
