#include "wavipm/coefficients.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "wavipm/numeric.hpp"

namespace wavipm {
namespace {

// One atom's contribution to one index, before group reduction.
struct Contribution {
  int32_t l;
  std::array<int32_t, 3> w;
  uint32_t atom;
  double value;

  bool operator<(const Contribution& other) const {
    if (l != other.l) return l < other.l;
    if (w != other.w) return w < other.w;
    return atom < other.atom;
  }
};

// Per-level coefficient gather. Every atom emits a fixed-size block of
// contributions, so the pair list layout is independent of scheduling; the
// final per-index reduction runs in ascending atom order.
void analyze_level(const DiscreteMeasure& m, const WaveletFamily& fam, int j,
                   bool parallel, CoefficientField& out) {
  const int p = m.dim;
  const int taps = 2 * fam.order();
  const int per_axis = taps - 1;
  const int32_t scaling_block = 1 << p;
  const int32_t lmax = (j == 0) ? scaling_block : scaling_block - 1;

  int tuples = 1;
  for (int d = 0; d < p; ++d) tuples *= per_axis;
  const size_t per_atom = static_cast<size_t>(lmax) * tuples;
  const double scale = std::exp2(j);
  const double norm = std::exp2(0.5 * j * p);

  std::vector<Contribution> pairs(per_atom * m.size());

#pragma omp parallel for schedule(static) if (parallel)
  for (int64_t i = 0; i < static_cast<int64_t>(m.size()); ++i) {
    const auto x = m.atom(i);
    // Tabulate both 1-D factors for every covering translation per axis.
    std::array<int32_t, 3> first{};
    std::array<std::array<double, 2 * 16>, 3> factor{};
    for (int d = 0; d < p; ++d) {
      const double u = scale * x[d];
      first[d] = static_cast<int32_t>(std::floor(u)) - (taps - 2);
      for (int k = 0; k < per_axis; ++k) {
        const double arg = u - (first[d] + k);
        factor[d][2 * k] = fam.scaling(arg);
        factor[d][2 * k + 1] = fam.wavelet(arg);
      }
    }
    size_t slot = i * per_atom;
    for (int32_t l = 1; l <= lmax; ++l) {
      std::array<int32_t, 3> offset{};
      for (int t = 0; t < tuples; ++t) {
        double prod = 1.0;
        bool dead = false;
        for (int d = 0; d < p; ++d) {
          const int type = (l == scaling_block) ? 0 : ((l >> d) & 1);
          const double f = factor[d][2 * offset[d] + type];
          if (f == 0.0) {
            dead = true;
            break;
          }
          prod *= f;
        }
        double value = 0.0;
        if (!dead) {
          if (l != scaling_block) prod *= norm;
          value = prod * m.weights[i];
        }
        std::array<int32_t, 3> w{};
        for (int d = 0; d < p; ++d) w[d] = first[d] + offset[d];
        pairs[slot++] = Contribution{l, w, static_cast<uint32_t>(i), value};
        for (int d = p - 1; d >= 0; --d) {
          if (++offset[d] < per_axis) break;
          offset[d] = 0;
        }
      }
    }
  }

  std::sort(pairs.begin(), pairs.end());

  std::vector<size_t> group_start;
  for (size_t k = 0; k < pairs.size(); ++k)
    if (k == 0 || pairs[k].l != pairs[k - 1].l || pairs[k].w != pairs[k - 1].w)
      group_start.push_back(k);
  group_start.push_back(pairs.size());

  const int64_t groups = static_cast<int64_t>(group_start.size()) - 1;
  std::vector<double> reduced(groups);
#pragma omp parallel for schedule(static) if (parallel)
  for (int64_t g = 0; g < groups; ++g) {
    CompensatedSum acc;
    for (size_t k = group_start[g]; k < group_start[g + 1]; ++k)
      acc.add(pairs[k].value);
    reduced[g] = acc.value();
  }
  for (int64_t g = 0; g < groups; ++g) {
    const Contribution& head = pairs[group_start[g]];
    out.set(TensorIndex{j, head.l, head.w}, reduced[g]);
  }
}

CoefficientField analyze_impl(const DiscreteMeasure& m,
                              const WaveletFamily& fam, int max_level,
                              bool parallel) {
  if (max_level < 0) throw std::invalid_argument("max_level must be >= 0");
  if (m.size() == 0) throw std::invalid_argument("empty measure");
  CoefficientField field(m.dim, max_level);
  std::array<double, 3> lo{}, hi{};
  m.bounding_box(std::span(lo.data(), m.dim), std::span(hi.data(), m.dim));
  for (int d = 0; d < m.dim; ++d) {
    field.box_lo[d] = lo[d];
    field.box_hi[d] = hi[d];
  }
  for (int j = 0; j <= max_level; ++j) analyze_level(m, fam, j, parallel, field);
  return field;
}

double level_weight(int j, int l, int p, double gamma, double c) {
  if (j == 0 && l == (1 << p)) return 1.0;
  return std::exp2(j * (-gamma + 0.5 * p - p)) * std::pow(1.0 + j, -c);
}

// Merged traversal of two sorted coefficient maps; visitor sees the signed
// difference a - b at every index present in either field.
template <typename Visitor>
void for_each_difference(const CoefficientField& a, const CoefficientField& b,
                         Visitor&& visit) {
  auto ia = a.entries().begin(), ea = a.entries().end();
  auto ib = b.entries().begin(), eb = b.entries().end();
  while (ia != ea || ib != eb) {
    if (ib == eb || (ia != ea && ia->first < ib->first)) {
      visit(ia->first, ia->second);
      ++ia;
    } else if (ia == ea || ib->first < ia->first) {
      visit(ib->first, -ib->second);
      ++ib;
    } else {
      visit(ia->first, ia->second - ib->second);
      ++ia;
      ++ib;
    }
  }
}

}  // namespace

void CoefficientField::set(const TensorIndex& idx, double value) {
  if (!valid_index(idx, dim_) || idx.j > max_level_)
    throw std::invalid_argument("coefficient index out of range");
  if (std::abs(value) < kPruneThreshold) {
    entries_.erase(idx);
    return;
  }
  entries_[idx] = value;
}

double CoefficientField::at(const TensorIndex& idx) const {
  const auto it = entries_.find(idx);
  return it == entries_.end() ? 0.0 : it->second;
}

std::string CoefficientField::to_csv() const {
  std::string out = "j,l";
  for (int d = 0; d < dim_; ++d) out += ",w" + std::to_string(d + 1);
  out += ",value\n";
  for (const auto& [idx, value] : entries_) {
    out += std::to_string(idx.j) + "," + std::to_string(idx.l);
    for (int d = 0; d < dim_; ++d) out += "," + std::to_string(idx.w[d]);
    out += "," + format_double(value) + "\n";
  }
  return out;
}

CoefficientField analyze_measure(const DiscreteMeasure& m,
                                 const WaveletFamily& fam, int max_level) {
  return analyze_impl(m, fam, max_level, true);
}

CoefficientField analyze_measure_serial(const DiscreteMeasure& m,
                                        const WaveletFamily& fam,
                                        int max_level) {
  return analyze_impl(m, fam, max_level, false);
}

CoefficientField gamma_op(const CoefficientField& f, double gamma, double c) {
  CoefficientField out(f.dim(), f.max_level());
  out.box_lo = f.box_lo;
  out.box_hi = f.box_hi;
  for (const auto& [idx, value] : f.entries()) {
    const double factor = std::exp2(idx.j * gamma) * std::pow(1.0 + idx.j, c);
    out.set(idx, factor * value);
  }
  return out;
}

double besov_norm(const CoefficientField& f, const BesovParams& params) {
  if (params.q1 < 1.0 || params.q2 < 1.0)
    throw std::invalid_argument("besov_norm: q exponents must be >= 1");
  const int p = f.dim();
  const int32_t scaling_block = 1 << p;
  const bool inf1 = std::isinf(params.q1);
  const bool inf2 = std::isinf(params.q2);

  // Per-(j,l) inner l^q1 aggregate, fed into the outer l^q2 sequence with
  // the 2^{j(s+p/2-p/q1)} (1+j)^b weight on wavelet blocks.
  double outer_sum = 0.0, outer_max = 0.0;
  auto it = f.entries().begin();
  while (it != f.entries().end()) {
    const int j = it->first.j;
    const int l = it->first.l;
    double inner_sum = 0.0, inner_max = 0.0;
    while (it != f.entries().end() && it->first.j == j && it->first.l == l) {
      const double a = std::abs(it->second);
      if (!inf1) inner_sum += std::pow(a, params.q1);
      inner_max = std::max(inner_max, a);
      ++it;
    }
    const double block = inf1 ? inner_max : std::pow(inner_sum, 1.0 / params.q1);
    double v = block;
    if (!(j == 0 && l == scaling_block)) {
      const double exponent = params.s + 0.5 * p - (inf1 ? 0.0 : p / params.q1);
      v *= std::exp2(j * exponent) * std::pow(1.0 + j, params.b);
    }
    outer_sum += inf2 ? 0.0 : std::pow(v, params.q2);
    outer_max = std::max(outer_max, v);
  }
  return inf2 ? outer_max : std::pow(outer_sum, 1.0 / params.q2);
}

double ipm_dual(const CoefficientField& a, const CoefficientField& b,
                double gamma) {
  if (a.dim() != b.dim() || a.max_level() != b.max_level())
    throw std::invalid_argument("ipm_dual: incompatible fields");
  CompensatedSum acc;
  for_each_difference(a, b, [&](const TensorIndex& idx, double diff) {
    acc.add(level_weight(idx.j, idx.l, a.dim(), gamma, 0.0) * std::abs(diff));
  });
  return acc.value();
}

double ipm_log_weighted(const CoefficientField& a, const CoefficientField& b,
                        double gamma, double c, int level_cut) {
  if (a.dim() != b.dim() || a.max_level() != b.max_level())
    throw std::invalid_argument("ipm_log_weighted: incompatible fields");
  if (level_cut > a.max_level())
    throw std::invalid_argument("ipm_log_weighted: cut above max level");
  CompensatedSum acc;
  for_each_difference(a, b, [&](const TensorIndex& idx, double diff) {
    if (idx.j > level_cut) return;
    acc.add(level_weight(idx.j, idx.l, a.dim(), gamma, c) * std::abs(diff));
  });
  return acc.value();
}

double potential_pairing(
    const DiscreteMeasure& m1, const DiscreteMeasure& m2,
    const std::function<double(std::span<const double>)>& h) {
  CompensatedSum lhs, rhs;
  for (size_t i = 0; i < m1.size(); ++i) lhs.add(m1.weights[i] * h(m1.atom(i)));
  for (size_t i = 0; i < m2.size(); ++i) rhs.add(m2.weights[i] * h(m2.atom(i)));
  return lhs.value() - rhs.value();
}

}  // namespace wavipm
