#pragma once

#include <optional>
#include <span>

#include "zigzag/optimize.hpp"
#include "zigzag/rng.hpp"
#include "zigzag/sampler.hpp"

namespace zigzag {

/// Generalized Pareto tail fitted to rate maxima by peaks-over-threshold
/// maximum likelihood (threshold = median of the sampled maxima, shape
/// constrained to (-0.5, 1)).
struct GpdFit {
  double xi = 0.0;
  double sigma = 1.0;
  double threshold = 0.0;
  long n_exceedances = 0;
  bool degenerate_tail = false;  // all sampled maxima equal
  bool fit_failed = false;       // too few exceedances or no MLE; fallback used
};

GpdFit fit_gpd_maxima(const std::vector<double>& maxima);

/// Return level: the (1 - 1/J)-quantile of the fitted exceedance law in the
/// conditional form Q = u + (sigma/xi) (((1/J)/zeta)^{-xi} - 1) with
/// zeta = n_exceedances / q; the xi -> 0 limit is u + sigma log(zeta J).
double gpd_return_level(const GpdFit& fit, long q, long J);

struct SubsampleConfig {
  long h = 20;     // observations averaged into each rate estimate
  long q = 1000;   // rate maxima sampled for bound estimation
  double r = 2.0;  // robustness inflation of the predicted population bound
  double t_max = 0.1;
  std::optional<long> K;
  std::optional<std::uint64_t> term_budget;  // per-observation gradient terms
  std::uint64_t seed = 0;
  std::uint64_t stream = 0;
  BrentConfig brent = BrentConfig::for_horizon(0.1);
  bool parallel_bounds = true;

  static SubsampleConfig with_horizon(double t_max) {
    SubsampleConfig cfg;
    cfg.t_max = t_max;
    cfg.brent = BrentConfig::for_horizon(t_max);
    return cfg;
  }
};

/// Subsample-averaged gradient estimate (1/h) sum_{j in S} E^j(x); equals
/// the full gradient when S covers all observations.
Vector subset_gradient_estimate(const FactoredPotential& fp,
                                std::span<const long> subset,
                                std::span<const double> x,
                                std::uint64_t* term_evals = nullptr);

/// Estimated switching rate of dimension i at elapsed time t from `st`,
/// using the index set `subset`: max{v_i (1/h) sum_{j in S} E_i^j(x+vt), 0}.
double sub_rate(const FactoredPotential& fp, std::span<const long> subset,
                const State& st, int i, double t,
                std::uint64_t* term_evals = nullptr);

struct DimensionBound {
  double c_hat = 0.0;
  GpdFit fit;
};

struct BoundsEstimate {
  std::vector<DimensionBound> dims;
  std::uint64_t term_evals = 0;
};

/// Dimension-wise constant bounds over [0, t_max] from the current state:
/// draws q index sets, maximizes each set's rates (one shared, memoized
/// trajectory evaluation serves all dimensions of a set), fits a tail per
/// dimension, and predicts the population bound as r times the return
/// level, floored at the observed sample maximum.  Set maximizations run on
/// a parallel worker pool; every set derives its own RNG sub-stream, so the
/// result is identical no matter how the work is scheduled.
BoundsEstimate estimate_bounds(const FactoredPotential& fp, const State& st,
                               const SubsampleConfig& cfg, const Rng& bounds_rng);

struct SubsampleAuditRow {
  long horizon = 0;
  int dim = 0;
  double c_hat = 0.0;
  double xi = 0.0;
  double sigma = 0.0;
  double threshold = 0.0;
  std::uint64_t violations = 0;  // acceptance tests above the bound, this horizon
};

struct SubsampleRun {
  Skeleton skeleton;
  std::vector<SubsampleAuditRow> audit;
  std::uint64_t acceptance_tests = 0;
};

/// Super-efficient zig-zag: homogeneous proposals against the estimated
/// dimension bounds, acceptance via a fresh uniformly drawn index set, and
/// bound re-estimation after every switch or horizon jump.  An observed
/// rate above its bound counts as a violation, is accepted outright, and
/// the re-estimation that follows the switch draws a fresh sample of rates.
///
/// The chain stream consumes, per proposal: one exponential, one uniform
/// for the proposing dimension (when d > 1), the index-set draw (nothing
/// when h = J), and one uniform for the acceptance test.  Bound estimation
/// consumes only derived sub-streams keyed by the optimization epoch, so
/// with h = J and d = 1 the chain's own draws line up with sample_auto's.
SubsampleRun sample_subsampled(const FactoredPotential& fp, Vector x0,
                               Vector v0, const SubsampleConfig& cfg);

void write_bounds_audit_csv(const std::string& path,
                            const std::vector<SubsampleAuditRow>& rows);

}  // namespace zigzag
