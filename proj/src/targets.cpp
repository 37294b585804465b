#include "zigzag/targets.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <sstream>

#include "zigzag/rng.hpp"

namespace zigzag {

namespace {

constexpr double kLog2Pi = 1.8378770664093453;

template <class T>
T quadratic_form(const Matrix& a, std::span<const T> x, const Vector& mean) {
  // x' A x with x centered at `mean`; A symmetric.
  const int n = a.rows;
  T out{};
  for (int i = 0; i < n; ++i) {
    T xi = x[static_cast<size_t>(i)] - mean[static_cast<size_t>(i)];
    T row{};
    for (int j = 0; j < n; ++j) {
      row += (x[static_cast<size_t>(j)] - mean[static_cast<size_t>(j)]) * a.at(i, j);
    }
    out += xi * row;
  }
  return out;
}

struct MixtureComponent {
  double log_weight;
  Vector mean;
  Matrix precision;
  double log_norm;  // log w - (d/2) log 2pi - (1/2) log det Sigma
};

}  // namespace

TargetSpec make_gaussian(const Vector& mean, const Matrix& covariance) {
  if (static_cast<int>(mean.size()) != covariance.rows) {
    throw InvalidCovariance("mean and covariance dimensions disagree");
  }
  const Matrix precision = invert_spd(covariance);
  const int d = covariance.rows;
  TargetSpec spec;
  spec.name = "gaussian";
  spec.dim = d;
  spec.ref_mean = mean;
  spec.ref_cov = covariance;
  spec.potential = make_potential(d, [precision, mean](auto x) {
    return quadratic_form(precision, x, mean) * 0.5;
  });
  return spec;
}

TargetSpec make_gaussian_mixture(const std::vector<double>& weights,
                                 const std::vector<Vector>& means,
                                 const std::vector<Matrix>& covariances) {
  if (weights.empty() || weights.size() != means.size() ||
      weights.size() != covariances.size()) {
    throw InvalidMixture("component lists must be non-empty and equal length");
  }
  double wsum = 0.0;
  for (double w : weights) {
    if (!(w > 0.0)) throw InvalidMixture("weights must be positive");
    wsum += w;
  }
  if (std::abs(wsum - 1.0) > 1e-9) throw InvalidMixture("weights must sum to 1");

  const int d = static_cast<int>(means.front().size());
  std::vector<MixtureComponent> comps;
  comps.reserve(weights.size());
  for (size_t m = 0; m < weights.size(); ++m) {
    MixtureComponent c;
    c.log_weight = std::log(weights[m]);
    c.mean = means[m];
    c.precision = invert_spd(covariances[m]);
    c.log_norm = c.log_weight - 0.5 * d * kLog2Pi - 0.5 * log_det_spd(covariances[m]);
    comps.push_back(std::move(c));
  }

  TargetSpec spec;
  spec.name = "gaussian-mixture";
  spec.dim = d;
  // Moments of the mixture: mean = sum w mu; cov = sum w (Sigma + mu mu') - m m'.
  Vector mixture_mean(static_cast<size_t>(d), 0.0);
  for (size_t m = 0; m < weights.size(); ++m) {
    for (int i = 0; i < d; ++i) {
      mixture_mean[static_cast<size_t>(i)] += weights[m] * means[m][static_cast<size_t>(i)];
    }
  }
  Matrix mixture_cov(d, d);
  for (size_t m = 0; m < weights.size(); ++m) {
    for (int i = 0; i < d; ++i) {
      for (int j = 0; j < d; ++j) {
        mixture_cov.at(i, j) +=
            weights[m] * (covariances[m].at(i, j) +
                          means[m][static_cast<size_t>(i)] * means[m][static_cast<size_t>(j)]);
      }
    }
  }
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) {
      mixture_cov.at(i, j) -=
          mixture_mean[static_cast<size_t>(i)] * mixture_mean[static_cast<size_t>(j)];
    }
  }
  spec.ref_mean = mixture_mean;
  spec.ref_cov = mixture_cov;

  spec.potential = make_potential(d, [comps](auto x) {
    using Scalar = std::remove_cvref_t<decltype(x[0])>;
    using std::exp;
    using std::log;
    // log-sum-exp over component log densities.
    boost::container::small_vector<Scalar, 4> logs;
    logs.reserve(comps.size());
    Scalar peak = Scalar(comps.front().log_norm) -
                  quadratic_form(comps.front().precision, x, comps.front().mean) * 0.5;
    logs.push_back(peak);
    for (size_t m = 1; m < comps.size(); ++m) {
      logs.push_back(Scalar(comps[m].log_norm) -
                     quadratic_form(comps[m].precision, x, comps[m].mean) * 0.5);
      if (peak < logs.back()) peak = logs.back();
    }
    Scalar acc{};
    for (const auto& l : logs) acc += exp(l - peak);
    return -(peak + log(acc));
  });
  return spec;
}

TargetSpec make_student_t(double dof, int dim) {
  if (!(dof > 0.0)) throw Error("student-t needs dof > 0");
  TargetSpec spec;
  spec.name = "student-t";
  spec.dim = dim;
  if (dof > 1.0) spec.ref_mean = Vector(static_cast<size_t>(dim), 0.0);
  if (dof > 2.0) {
    Matrix cov = Matrix::identity(dim);
    for (int i = 0; i < dim; ++i) cov.at(i, i) = dof / (dof - 2.0);
    spec.ref_cov = cov;
  }
  const double scale = 0.5 * (dof + dim);
  spec.potential = make_potential(dim, [dof, scale](auto x) {
    using Scalar = std::remove_cvref_t<decltype(x[0])>;
    Scalar r2{};
    for (const auto& xi : x) r2 += xi * xi;
    using std::log;
    return log(r2 / dof + 1.0) * scale;
  });
  return spec;
}

TargetSpec make_quartic(int dim) {
  if (dim < 1) throw Error("quartic target needs dim >= 1");
  TargetSpec spec;
  spec.name = "quartic";
  spec.dim = dim;
  spec.ref_mean = Vector(static_cast<size_t>(dim), 0.0);
  // Var = 2 Gamma(3/4) / Gamma(1/4) per coordinate.
  const double var = 2.0 * std::tgamma(0.75) / std::tgamma(0.25);
  Matrix cov = Matrix::identity(dim);
  for (int i = 0; i < dim; ++i) cov.at(i, i) = var;
  spec.ref_cov = cov;
  spec.potential = make_potential(dim, [](auto x) {
    using Scalar = std::remove_cvref_t<decltype(x[0])>;
    Scalar u{};
    for (const auto& xi : x) {
      Scalar x2 = xi * xi;
      u += x2 * x2 * 0.25;
    }
    return u;
  });
  return spec;
}

TargetSpec make_dugong(const DugongDataset& data) {
  if (data.ages.empty() || data.ages.size() != data.lengths.size()) {
    throw EmptyDataset("dugong dataset is empty or ragged");
  }
  const Vector z = data.ages;
  const Vector y = data.lengths;
  TargetSpec spec;
  spec.name = "dugong";
  spec.dim = 4;
  spec.potential = make_potential(4, [z, y](auto x) {
    using Scalar = std::remove_cvref_t<decltype(x[0])>;
    using std::exp;
    using std::log;
    const Scalar alpha = exp(x[0]);
    const Scalar beta = exp(x[1]);
    const Scalar gamma = logistic(x[2]);
    const Scalar sigma = exp(x[3]);
    const Scalar log_gamma = log(gamma);
    const Scalar inv_two_var = 0.5 / (sigma * sigma);
    Scalar u{};
    for (size_t j = 0; j < z.size(); ++j) {
      // residual Y_j - alpha + beta * gamma^{z_j}
      Scalar fitted = alpha - beta * exp(log_gamma * z[j]);
      Scalar r = y[j] - fitted;
      u += r * r * inv_two_var;
    }
    u += (x[3] + 0.5 * kLog2Pi) * static_cast<double>(z.size());
    // Beta(7, 7/3) prior on gamma (kernel only).
    u -= log_gamma * 6.0 + log(1.0 - gamma) * (7.0 / 3.0 - 1.0);
    // Change-of-variables Jacobians: exp for alpha/beta/sigma, logistic for gamma.
    u -= x[0] + x[1] + x[3];
    u -= log_gamma + log(1.0 - gamma);
    return u;
  });
  return spec;
}

namespace {

// -log of the Weibull contribution of one observation:
//   death:    -log f(t; mu, a) with f = (a/mu)(t/mu)^{a-1} exp(-(t/mu)^a)
//   censored: -log S(t; mu, a) = (t/mu)^a
// with log mu = beta_0 + sum_g beta_g z^g and a = exp(x_0).
template <class Scalar>
Scalar weibull_term(double log_t, int event, const double* covs, int g,
                    std::span<const Scalar> x) {
  using std::exp;
  Scalar log_mu = x[1];
  for (int k = 0; k < g; ++k) log_mu += x[static_cast<size_t>(2 + k)] * covs[k];
  const Scalar a = exp(x[0]);
  const Scalar w = a * (log_t - log_mu);  // log (t/mu)^a
  Scalar u = exp(w);
  if (event == 1) {
    u -= x[0] - log_mu + (a - 1.0) * (log_t - log_mu);
  }
  return u;
}

void validate_survival(const SurvivalDataset& data) {
  const size_t J = data.times.size();
  if (J == 0) throw EmptyDataset("survival dataset is empty");
  if (data.events.size() != J ||
      (data.covariates.rows != static_cast<int>(J))) {
    throw EmptyDataset("survival dataset is ragged");
  }
  for (size_t j = 0; j < J; ++j) {
    if (!(data.times[j] > 0.0)) {
      throw InvalidSurvivalTime("survival times must be strictly positive");
    }
    if (data.events[j] != 0 && data.events[j] != 1) {
      throw EmptyDataset("event indicators must be 0/1");
    }
  }
}

struct SurvivalTables {
  std::vector<double> log_times;
  std::vector<int> events;
  Matrix covs;
  int g;
};

SurvivalTables survival_tables(const SurvivalDataset& data) {
  validate_survival(data);
  SurvivalTables t;
  t.log_times.reserve(data.times.size());
  for (double ti : data.times) t.log_times.push_back(std::log(ti));
  t.events = data.events;
  t.covs = data.covariates;
  t.g = data.covariates.cols;
  return t;
}

}  // namespace

TargetSpec make_weibull_survival(const SurvivalDataset& data) {
  auto tables = survival_tables(data);
  const int dim = tables.g + 2;
  TargetSpec spec;
  spec.name = "weibull-survival";
  spec.dim = dim;
  spec.potential = make_potential(dim, [tables](auto x) {
    using Scalar = std::remove_cvref_t<decltype(x[0])>;
    Scalar u{};
    for (size_t j = 0; j < tables.log_times.size(); ++j) {
      u += weibull_term<Scalar>(tables.log_times[j], tables.events[j],
                                &tables.covs.a[j * static_cast<size_t>(tables.g)],
                                tables.g, x);
    }
    return u;
  });
  return spec;
}

FactoredPotential make_weibull_survival_factored(const SurvivalDataset& data) {
  auto tables = survival_tables(data);
  const int dim = tables.g + 2;
  const long J = static_cast<long>(tables.log_times.size());
  return make_factored_potential(dim, J, [tables](long j, auto x) {
    using Scalar = std::remove_cvref_t<decltype(x[0])>;
    return weibull_term<Scalar>(
        tables.log_times[static_cast<size_t>(j)],
        tables.events[static_cast<size_t>(j)],
        &tables.covs.a[static_cast<size_t>(j) * static_cast<size_t>(tables.g)],
        tables.g, x);
  });
}

TargetSpec make_gaussian_location(const Vector& y) {
  if (y.empty()) throw EmptyDataset("gaussian location model needs data");
  TargetSpec spec;
  spec.name = "gaussian-location";
  spec.dim = 1;
  double mean = 0.0;
  for (double v : y) mean += v;
  mean /= static_cast<double>(y.size());
  spec.ref_mean = Vector{mean};
  Matrix cov(1, 1);
  cov.at(0, 0) = 1.0 / static_cast<double>(y.size());
  spec.ref_cov = cov;
  spec.potential = make_potential(1, [y](auto x) {
    using Scalar = std::remove_cvref_t<decltype(x[0])>;
    Scalar u{};
    for (double v : y) {
      Scalar r = x[0] - v;
      u += r * r * 0.5;
    }
    return u;
  });
  return spec;
}

FactoredPotential make_gaussian_location_factored(const Vector& y) {
  if (y.empty()) throw EmptyDataset("gaussian location model needs data");
  return make_factored_potential(
      1, static_cast<long>(y.size()), [y](long j, auto x) {
        using Scalar = std::remove_cvref_t<decltype(x[0])>;
        Scalar r = x[0] - y[static_cast<size_t>(j)];
        return r * r * 0.5;
      });
}

SurvivalDataset simulate_survival(long J, const SurvivalParams& truth,
                                  double censor_time, std::uint64_t seed) {
  if (J < 1) throw EmptyDataset("simulate_survival needs J >= 1");
  const int g = static_cast<int>(truth.beta.size()) - 1;
  if (g != 2) throw Error("simulate_survival draws exactly two covariates (age, stage)");
  SurvivalDataset data;
  data.times.resize(static_cast<size_t>(J));
  data.events.resize(static_cast<size_t>(J));
  data.covariates = Matrix(static_cast<int>(J), g);
  Rng rng(seed, 0);
  const double alpha = std::exp(truth.log_alpha);
  // Age is standardized with the constants of its sampling distribution
  // (uniform over [30, 90]: mean 60, sd 60/sqrt(12)).
  const double age_sd = 60.0 / std::sqrt(12.0);
  for (long j = 0; j < J; ++j) {
    double age = 30.0 + 60.0 * rng.uniform();
    double z1 = (age - 60.0) / age_sd;
    double z2 = rng.uniform() < 0.4 ? 1.0 : 0.0;
    double log_mu = truth.beta[0] + truth.beta[1] * z1 + truth.beta[2] * z2;
    // Inverse-CDF draw: T = mu * (-log U)^{1/alpha}.
    double t = std::exp(log_mu) * std::pow(-std::log(rng.uniform()), 1.0 / alpha);
    data.covariates.at(static_cast<int>(j), 0) = z1;
    data.covariates.at(static_cast<int>(j), 1) = z2;
    if (t <= censor_time) {
      data.times[static_cast<size_t>(j)] = std::max(t, 1e-12);
      data.events[static_cast<size_t>(j)] = 1;
    } else {
      data.times[static_cast<size_t>(j)] = std::max(censor_time, 1e-12);
      data.events[static_cast<size_t>(j)] = 0;
    }
  }
  return data;
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string field;
  while (std::getline(ss, field, ',')) out.push_back(field);
  return out;
}

void format_double(std::string& buf, double v) {
  char tmp[32];
  std::snprintf(tmp, sizeof(tmp), "%.17g", v);
  buf += tmp;
}

}  // namespace

DugongDataset read_dugong_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw EmptyDataset("cannot open dugong CSV: " + path);
  std::string line;
  std::getline(in, line);  // header
  DugongDataset data;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    auto fields = split_csv_line(line);
    if (fields.size() != 2) throw EmptyDataset("bad dugong CSV row: " + line);
    data.ages.push_back(std::stod(fields[0]));
    data.lengths.push_back(std::stod(fields[1]));
  }
  if (data.ages.empty()) throw EmptyDataset("dugong CSV has no rows: " + path);
  return data;
}

void write_dugong_csv(const std::string& path, const DugongDataset& data) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write dugong CSV: " + path);
  std::string buf = "age,length\n";
  for (size_t j = 0; j < data.ages.size(); ++j) {
    format_double(buf, data.ages[j]);
    buf += ',';
    format_double(buf, data.lengths[j]);
    buf += '\n';
  }
  out << buf;
}

SurvivalDataset read_survival_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw EmptyDataset("cannot open survival CSV: " + path);
  std::string line;
  if (!std::getline(in, line)) throw EmptyDataset("empty survival CSV: " + path);
  const int g = static_cast<int>(split_csv_line(line).size()) - 2;
  if (g < 0) throw EmptyDataset("bad survival CSV header: " + line);
  std::vector<double> times;
  std::vector<int> events;
  std::vector<double> covs;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    auto fields = split_csv_line(line);
    if (static_cast<int>(fields.size()) != g + 2) {
      throw EmptyDataset("bad survival CSV row: " + line);
    }
    times.push_back(std::stod(fields[0]));
    events.push_back(std::stoi(fields[1]));
    for (int k = 0; k < g; ++k) covs.push_back(std::stod(fields[static_cast<size_t>(2 + k)]));
  }
  SurvivalDataset data;
  data.times = std::move(times);
  data.events = std::move(events);
  data.covariates = Matrix(static_cast<int>(data.times.size()), g);
  data.covariates.a = std::move(covs);
  validate_survival(data);
  return data;
}

void write_survival_csv(const std::string& path, const SurvivalDataset& data) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write survival CSV: " + path);
  std::string buf = "time,event";
  for (int k = 0; k < data.covariates.cols; ++k) {
    buf += ",z" + std::to_string(k + 1);
  }
  buf += '\n';
  for (size_t j = 0; j < data.times.size(); ++j) {
    format_double(buf, data.times[j]);
    buf += ',';
    buf += std::to_string(data.events[j]);
    for (int k = 0; k < data.covariates.cols; ++k) {
      buf += ',';
      format_double(buf, data.covariates.at(static_cast<int>(j), k));
    }
    buf += '\n';
  }
  out << buf;
}

}  // namespace zigzag
