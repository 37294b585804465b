#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "zigzag/linalg.hpp"
#include "zigzag/potential.hpp"

namespace zigzag {

/// A named benchmark or applied distribution.  `ref_mean` / `ref_cov` are
/// present only where they are analytic (Gaussian-family targets and the
/// quartic), for use by moment-recovery checks.
struct TargetSpec {
  std::string name;
  int dim = 0;
  Potential potential;
  std::optional<Vector> ref_mean;
  std::optional<Matrix> ref_cov;
};

struct DugongDataset {
  Vector ages;     // years, nonnegative
  Vector lengths;  // meters
};

struct SurvivalDataset {
  Vector times;             // strictly positive, days
  std::vector<int> events;  // 1 = death observed, 0 = censored
  Matrix covariates;        // J x g
};

struct SurvivalParams {
  double log_alpha = 0.0;  // Weibull shape on log scale
  Vector beta;             // intercept followed by one slope per covariate
};

/// U(x) = (x-mu)' Sigma^{-1} (x-mu) / 2.
TargetSpec make_gaussian(const Vector& mean, const Matrix& covariance);

/// U(x) = -log sum_m w_m N(x; mu_m, Sigma_m), stabilized by log-sum-exp.
TargetSpec make_gaussian_mixture(const std::vector<double>& weights,
                                 const std::vector<Vector>& means,
                                 const std::vector<Matrix>& covariances);

/// Standard multivariate Student-t: U(x) = ((dof+d)/2) log(1 + x'x/dof).
TargetSpec make_student_t(double dof, int dim);

/// Light-tailed product target: U(x) = sum_i x_i^4 / 4.
TargetSpec make_quartic(int dim);

/// Nonlinear growth regression Y_j = alpha - beta * gamma^{z_j} + eps.
/// Parameters sampled as x = (log alpha, log beta, logit gamma, log sigma);
/// flat priors on the original domains (log-Jacobians included) except for a
/// Beta(7, 7/3) prior on gamma.
TargetSpec make_dugong(const DugongDataset& data);

/// Weibull survival regression with log-linked scale and censoring; flat
/// priors on x = (log alpha, beta_0, ..., beta_g).
TargetSpec make_weibull_survival(const SurvivalDataset& data);

/// Same model in per-observation form for subsampled sampling.
FactoredPotential make_weibull_survival_factored(const SurvivalDataset& data);

/// Gaussian location model U(x) = sum_j (x - y_j)^2 / 2 (unit noise, flat
/// prior); the reference target for subsampling checks.  Posterior is
/// N(mean(y), 1/J).
TargetSpec make_gaussian_location(const Vector& y);
FactoredPotential make_gaussian_location_factored(const Vector& y);

/// Synthetic survival data: standardized age (uniform over [30, 90] before
/// standardization), Bernoulli(0.4) stage indicator, Weibull event times by
/// inverse CDF, administrative censoring at `censor_time`.  Deterministic
/// under `seed`.
SurvivalDataset simulate_survival(long J, const SurvivalParams& truth,
                                  double censor_time, std::uint64_t seed);

// CSV round-trips.  Headers: "age,length" and "time,event,z1,...,zg".
DugongDataset read_dugong_csv(const std::string& path);
void write_dugong_csv(const std::string& path, const DugongDataset& data);
SurvivalDataset read_survival_csv(const std::string& path);
void write_survival_csv(const std::string& path, const SurvivalDataset& data);

}  // namespace zigzag
