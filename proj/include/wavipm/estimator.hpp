#pragma once

#include <cstdint>
#include <vector>

#include "wavipm/coefficients.hpp"

namespace wavipm {

/// Finite parametric candidate grid for the minimum-IPM estimator; each
/// candidate curve is paired with its quadrature measure at a common node
/// count.
struct ModelFamily {
  std::vector<ParametricCurve> curves;
  std::vector<DiscreteMeasure> measures;
  double gamma_loss = 0.5;

  size_t size() const { return curves.size(); }
};

ModelFamily make_model_family(std::vector<ParametricCurve> curves, int nodes,
                              double gamma_loss);

struct EstimatorResult {
  size_t chosen = 0;
  double ipm = 0;
  std::vector<double> scores;
};

/// argmin over the grid of the dual-norm surrogate to the sample; ties go
/// to the smallest index. Candidate scoring runs in parallel.
EstimatorResult minimum_ipm_estimate(const DiscreteMeasure& sample,
                                     const ModelFamily& family,
                                     const WaveletFamily& fam, int max_level);

struct RateDetail {
  int n = 0;
  int rep = 0;
  size_t chosen = 0;
  double ipm_loss = 0;
  double ipm_eval = 0;
};

struct RateRow {
  int n = 0;
  double mean_error = 0;
  double sd = 0;
};

struct RateResult {
  std::vector<RateDetail> details;
  std::vector<RateRow> rows;
};

/// Convergence experiment: for each sample size, reps i.i.d. samples of the
/// truth (RNG stream derived from (seed, n, rep), so results do not depend
/// on scheduling), estimator error measured as the surrogate distance at
/// gamma_eval between the chosen candidate and the truth's quadrature
/// measure.
RateResult rate_experiment(const ParametricCurve& truth,
                           const ModelFamily& family, const WaveletFamily& fam,
                           const std::vector<int>& n_list, int reps,
                           uint64_t seed, double gamma_eval, int max_level);

}  // namespace wavipm
