#pragma once

#include <string>
#include <vector>

#include "zigzag/sampler.hpp"
#include "zigzag/skeleton.hpp"

namespace zigzag {

/// Per-dimension effective sample sizes.  `method` records which estimator
/// produced the numbers: "continuous-discretized" for trajectories run
/// through a time grid, "batch-means-discrete" for discrete chains.
/// Dimensions with zero sample variance report ESS = n and are flagged.
struct EssReport {
  Vector per_dimension;
  double minimum = 0.0;
  std::string method;
  std::vector<bool> zero_variance;
};

/// Time average (1/T) int x_i(t) dt over (burn_in_time, total_time],
/// computed exactly per linear segment.
double trajectory_mean(const Skeleton& skel, int coord, double burn_in_time);

/// Time average of x_i(t)^2, exact per segment; with trajectory_mean this
/// gives trajectory variances.
double trajectory_second_moment(const Skeleton& skel, int coord,
                                double burn_in_time);

/// Batch-means ESS of a trajectory discretized to `grid_n` points past the
/// burn-in: floor(sqrt n) batches, ESS = n * Var(sample) / (batch_size *
/// Var(batch means)), clipped to n.
EssReport ess_continuous(const Skeleton& skel, int grid_n, double burn_in_time);

/// Batch-means ESS of the rows of a discrete chain after dropping
/// `burn_in_iters` rows.
EssReport ess_discrete(const Matrix& chain, long burn_in_iters);

struct TmaxTuneRow {
  double t_max = 0.0;
  double median = 0.0;
  double lower_quartile = 0.0;
  double upper_quartile = 0.0;
  std::vector<double> totals;  // per replicate: gradient evals per 1000 switches
};

struct TmaxTuneResult {
  std::vector<TmaxTuneRow> rows;
  double selected = 0.0;  // candidate with the smallest median cost
};

/// Pilot-run tuning of the optimization horizon: for each candidate, run
/// `replicates` short chains of `pilot_K` switches and record the total
/// gradient evaluations normalized to 1000 switches; pick the candidate
/// with the smallest median.  Replicates run in parallel when enabled;
/// results are independent of scheduling.
TmaxTuneResult tune_tmax(const TargetSpec& target,
                         const std::vector<double>& candidates, long pilot_K,
                         int replicates, std::uint64_t seed,
                         const Vector& x0, const Vector& v0,
                         bool parallel = true);

}  // namespace zigzag
