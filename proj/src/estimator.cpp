#include "wavipm/estimator.hpp"

#include <cmath>
#include <stdexcept>

namespace wavipm {
namespace {

uint64_t stream_seed(uint64_t seed, uint64_t n, uint64_t rep) {
  // splitmix64 over a fixed packing of (seed, n, rep).
  uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (n * 1000003ULL + rep + 1ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace

ModelFamily make_model_family(std::vector<ParametricCurve> curves, int nodes,
                              double gamma_loss) {
  if (curves.empty())
    throw std::invalid_argument("model family: empty candidate grid");
  ModelFamily family;
  family.gamma_loss = gamma_loss;
  family.curves = std::move(curves);
  family.measures.reserve(family.curves.size());
  for (const auto& curve : family.curves)
    family.measures.push_back(quadrature_measure(curve, nodes));
  return family;
}

EstimatorResult minimum_ipm_estimate(const DiscreteMeasure& sample,
                                     const ModelFamily& family,
                                     const WaveletFamily& fam, int max_level) {
  if (family.size() == 0)
    throw std::invalid_argument("minimum_ipm_estimate: empty family");
  if (sample.size() == 0)
    throw std::invalid_argument("minimum_ipm_estimate: empty sample");

  const CoefficientField sample_field =
      analyze_measure(sample, fam, max_level);

  EstimatorResult result;
  result.scores.resize(family.size());
#pragma omp parallel for schedule(dynamic)
  for (int64_t i = 0; i < static_cast<int64_t>(family.size()); ++i) {
    const CoefficientField candidate =
        analyze_measure_serial(family.measures[i], fam, max_level);
    result.scores[i] = ipm_dual(candidate, sample_field, family.gamma_loss);
  }

  result.chosen = 0;
  for (size_t i = 1; i < family.size(); ++i)
    if (result.scores[i] < result.scores[result.chosen]) result.chosen = i;
  result.ipm = result.scores[result.chosen];
  return result;
}

RateResult rate_experiment(const ParametricCurve& truth,
                           const ModelFamily& family, const WaveletFamily& fam,
                           const std::vector<int>& n_list, int reps,
                           uint64_t seed, double gamma_eval, int max_level) {
  if (n_list.empty()) throw std::invalid_argument("rate_experiment: empty n list");
  for (size_t i = 1; i < n_list.size(); ++i)
    if (n_list[i] <= n_list[i - 1])
      throw std::invalid_argument("rate_experiment: n_list must be ascending");
  if (reps < 3) throw std::invalid_argument("rate_experiment: need reps >= 3");

  const DiscreteMeasure truth_measure =
      quadrature_measure(truth, static_cast<int>(family.measures[0].size()));
  const CoefficientField truth_field =
      analyze_measure(truth_measure, fam, max_level);

  std::vector<CoefficientField> candidate_fields;
  candidate_fields.reserve(family.size());
  for (const auto& m : family.measures)
    candidate_fields.push_back(analyze_measure(m, fam, max_level));

  RateResult result;
  result.details.resize(n_list.size() * reps);

  const int64_t total = static_cast<int64_t>(n_list.size()) * reps;
#pragma omp parallel for schedule(dynamic)
  for (int64_t k = 0; k < total; ++k) {
    const int ni = static_cast<int>(k / reps);
    const int rep = static_cast<int>(k % reps);
    const int n = n_list[ni];
    const DiscreteMeasure sample =
        sample_iid(truth, n, stream_seed(seed, n, rep));
    const CoefficientField sample_field =
        analyze_measure_serial(sample, fam, max_level);

    size_t chosen = 0;
    double best = 0;
    std::vector<double> scores(family.size());
    for (size_t i = 0; i < family.size(); ++i) {
      scores[i] = ipm_dual(candidate_fields[i], sample_field, family.gamma_loss);
      if (i == 0 || scores[i] < best) {
        best = scores[i];
        chosen = i;
      }
    }
    RateDetail detail;
    detail.n = n;
    detail.rep = rep;
    detail.chosen = chosen;
    detail.ipm_loss = best;
    detail.ipm_eval = ipm_dual(candidate_fields[chosen], truth_field, gamma_eval);
    result.details[k] = detail;
  }

  for (size_t ni = 0; ni < n_list.size(); ++ni) {
    double mean = 0;
    for (int rep = 0; rep < reps; ++rep)
      mean += result.details[ni * reps + rep].ipm_eval;
    mean /= reps;
    double var = 0;
    for (int rep = 0; rep < reps; ++rep) {
      const double d = result.details[ni * reps + rep].ipm_eval - mean;
      var += d * d;
    }
    result.rows.push_back(
        {n_list[ni], mean, std::sqrt(var / std::max(1, reps - 1))});
  }
  return result;
}

}  // namespace wavipm
