#pragma once

#include <functional>
#include <vector>

namespace zigzag {

/// Regularized upper incomplete gamma Q(a, x).
double gamma_q(double a, double x);

/// Survival function of the chi-square distribution with k degrees of
/// freedom (used by goodness-of-fit checks in tests).
double chi_square_sf(double x, int k);

/// One-sample Kolmogorov-Smirnov statistic against a CDF.
double ks_statistic(std::vector<double> samples,
                    const std::function<double(double)>& cdf);

/// Asymptotic KS p-value for statistic d with effective sample size n.
double ks_pvalue(double d, double n_effective);

/// Two-sample KS test p-value.
double ks_two_sample_pvalue(std::vector<double> a, std::vector<double> b);

double median(std::vector<double> values);
double quantile(std::vector<double> values, double p);

}  // namespace zigzag
