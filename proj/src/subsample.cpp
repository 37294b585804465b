#include "zigzag/subsample.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "zigzag/errors.hpp"
#include "zigzag/parallel.hpp"
#include "zigzag/stats.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace zigzag {

namespace {

// Profile log-likelihood of the GPD over theta = xi / sigma.  For a given
// theta the shape MLE is xi(theta) = mean log(1 + theta y), and the profile
// value is -n log(xi/theta) - n (xi + 1); the theta -> 0 limit is the
// exponential fit.
struct GpdProfile {
  const std::vector<double>& y;
  double mean_y;

  double xi(double theta) const {
    if (theta == 0.0) return 0.0;
    double s = 0.0;
    for (double v : y) s += std::log1p(theta * v);
    return s / static_cast<double>(y.size());
  }

  double sigma(double theta) const {
    if (std::abs(theta) < 1e-12) return mean_y;
    return xi(theta) / theta;
  }

  double loglik(double theta) const {
    const double n = static_cast<double>(y.size());
    if (std::abs(theta) < 1e-12) return -n * std::log(mean_y) - n;
    const double x = xi(theta);
    const double s = x / theta;
    if (!(s > 0.0)) return -std::numeric_limits<double>::infinity();
    return -n * std::log(s) - n * (x + 1.0);
  }
};

}  // namespace

GpdFit fit_gpd_maxima(const std::vector<double>& maxima) {
  GpdFit fit;
  if (maxima.empty()) {
    fit.fit_failed = true;
    return fit;
  }
  const double lo = *std::min_element(maxima.begin(), maxima.end());
  const double hi = *std::max_element(maxima.begin(), maxima.end());
  if (lo == hi) {
    fit.degenerate_tail = true;
    fit.threshold = hi;
    return fit;
  }
  fit.threshold = median(maxima);
  std::vector<double> y;
  for (double m : maxima) {
    if (m > fit.threshold) y.push_back(m - fit.threshold);
  }
  fit.n_exceedances = static_cast<long>(y.size());
  if (fit.n_exceedances < 10) {
    fit.fit_failed = true;
    return fit;
  }
  double y_max = *std::max_element(y.begin(), y.end());
  double mean_y = 0.0;
  for (double v : y) mean_y += v;
  mean_y /= static_cast<double>(y.size());
  GpdProfile profile{y, mean_y};

  // Restrict theta so xi stays inside (-0.5, 1): xi(theta) is increasing in
  // theta, so the admissible range is found by bisection from the support
  // constraint theta > -1/max(y).
  auto theta_for_xi = [&](double target) {
    double a = -1.0 / y_max * (1.0 - 1e-9);
    double b = 1e4 / mean_y;
    if (profile.xi(a) > target) return a;
    if (profile.xi(b) < target) return b;
    for (int it = 0; it < 200; ++it) {
      double mid = 0.5 * (a + b);
      (profile.xi(mid) < target ? a : b) = mid;
    }
    return 0.5 * (a + b);
  };
  const double theta_lo = theta_for_xi(-0.5 + 1e-6);
  const double theta_hi = theta_for_xi(1.0 - 1e-6);
  if (!(theta_hi > theta_lo)) {
    fit.fit_failed = true;
    return fit;
  }
  BrentConfig cfg;
  cfg.tolerance = 1e-10 * (theta_hi - theta_lo);
  cfg.max_iters = 200;
  BrentResult best =
      brent_max([&](double t) { return profile.loglik(t); }, theta_lo, theta_hi, cfg);
  if (!std::isfinite(best.max)) {
    fit.fit_failed = true;
    return fit;
  }
  fit.xi = profile.xi(best.argmax);
  fit.sigma = profile.sigma(best.argmax);
  if (!(fit.sigma > 0.0) || !std::isfinite(fit.sigma) || !std::isfinite(fit.xi)) {
    fit.fit_failed = true;
    return fit;
  }
  return fit;
}

double gpd_return_level(const GpdFit& fit, long q, long J) {
  const double zeta = static_cast<double>(fit.n_exceedances) / static_cast<double>(q);
  const double ratio = (1.0 / static_cast<double>(J)) / zeta;
  if (std::abs(fit.xi) < 1e-8) {
    return fit.threshold - fit.sigma * std::log(ratio);
  }
  return fit.threshold + fit.sigma / fit.xi * (std::pow(ratio, -fit.xi) - 1.0);
}

Vector subset_gradient_estimate(const FactoredPotential& fp,
                                std::span<const long> subset,
                                std::span<const double> x,
                                std::uint64_t* term_evals) {
  const size_t d = x.size();
  std::vector<Dual> xs;
  xs.reserve(d);
  for (size_t i = 0; i < d; ++i) xs.push_back(Dual::seeded(x[i], d, i));
  Vector estimate(d, 0.0);
  for (long j : subset) {
    const Dual u = fp.term_dual(j, xs);
    if (!std::isfinite(u.value())) {
      throw NonFiniteGradient(std::vector<double>(x.begin(), x.end()));
    }
    for (size_t i = 0; i < d; ++i) estimate[i] += u.tangent(i);
  }
  const double scale =
      static_cast<double>(fp.num_terms) / static_cast<double>(subset.size());
  for (size_t i = 0; i < d; ++i) {
    estimate[i] *= scale;
    if (!std::isfinite(estimate[i])) {
      throw NonFiniteGradient(std::vector<double>(x.begin(), x.end()));
    }
  }
  if (term_evals != nullptr) *term_evals += subset.size();
  return estimate;
}

double sub_rate(const FactoredPotential& fp, std::span<const long> subset,
                const State& st, int i, double t, std::uint64_t* term_evals) {
  const size_t d = st.position.size();
  Vector x(d);
  for (size_t k = 0; k < d; ++k) x[k] = st.position[k] + st.velocity[k] * t;
  const Vector estimate = subset_gradient_estimate(fp, subset, x, term_evals);
  return std::max(st.velocity[static_cast<size_t>(i)] * estimate[static_cast<size_t>(i)], 0.0);
}

namespace {

// Memoized straight-line evaluation of one index set's gradient estimate.
// All d per-dimension maximizations of a set probe the same handful of
// deterministic abscissae, so each unique time costs h gradient terms once.
struct SubsetTrajectory {
  const FactoredPotential* fp;
  const State* st;
  std::span<const long> subset;
  std::vector<std::pair<double, Vector>> cache;
  std::uint64_t term_evals = 0;

  const Vector& estimate_at(double t) {
    for (const auto& e : cache) {
      if (e.first == t) return e.second;
    }
    const size_t d = st->position.size();
    Vector x(d);
    for (size_t k = 0; k < d; ++k) x[k] = st->position[k] + st->velocity[k] * t;
    cache.emplace_back(t, subset_gradient_estimate(*fp, subset, x, &term_evals));
    return cache.back().second;
  }

  double rate(int i, double t) {
    const Vector& e = estimate_at(t);
    return std::max(st->velocity[static_cast<size_t>(i)] * e[static_cast<size_t>(i)], 0.0);
  }
};

DimensionBound bound_from_maxima(const std::vector<double>& maxima, long q,
                                 long J, double r) {
  DimensionBound out;
  out.fit = fit_gpd_maxima(maxima);
  const double sample_max = *std::max_element(maxima.begin(), maxima.end());
  if (out.fit.degenerate_tail) {
    out.c_hat = r * sample_max * (1.0 + 1e-6);
  } else if (out.fit.fit_failed) {
    out.c_hat = r * sample_max * 1.5;
  } else {
    out.c_hat = r * std::max(gpd_return_level(out.fit, q, J), sample_max);
  }
  return out;
}

}  // namespace

BoundsEstimate estimate_bounds(const FactoredPotential& fp, const State& st,
                               const SubsampleConfig& cfg, const Rng& bounds_rng) {
  const int d = fp.dim;
  const long q = cfg.q;
  if (q < 1) throw Error("bound estimation needs q >= 1");
  if (cfg.h < 1 || cfg.h > fp.num_terms) {
    throw Error("subsample size must satisfy 1 <= h <= J");
  }
  std::vector<double> maxima(static_cast<size_t>(q) * static_cast<size_t>(d));
  std::vector<std::uint64_t> set_terms(static_cast<size_t>(q), 0);

  ExceptionCollector errors;
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic) if (cfg.parallel_bounds && q > 1)
#endif
  for (long l = 0; l < q; ++l) {
    errors.run([&, l] {
      Rng set_rng = bounds_rng.derive(static_cast<std::uint64_t>(l));
      const std::vector<long> subset =
          sample_without_replacement(fp.num_terms, cfg.h, set_rng);
      SubsetTrajectory traj{&fp, &st, subset, {}, 0};
      for (int i = 0; i < d; ++i) {
        const BoundEstimate est = local_bound(
            [&traj, i](double t) { return traj.rate(i, t); }, cfg.t_max, cfg.brent);
        maxima[static_cast<size_t>(l) * static_cast<size_t>(d) + static_cast<size_t>(i)] =
            est.bound;
      }
      set_terms[static_cast<size_t>(l)] = traj.term_evals;
    });
  }
  errors.rethrow();

  BoundsEstimate out;
  out.dims.reserve(static_cast<size_t>(d));
  std::vector<double> column(static_cast<size_t>(q));
  for (int i = 0; i < d; ++i) {
    for (long l = 0; l < q; ++l) {
      column[static_cast<size_t>(l)] =
          maxima[static_cast<size_t>(l) * static_cast<size_t>(d) + static_cast<size_t>(i)];
    }
    out.dims.push_back(bound_from_maxima(column, q, fp.num_terms, cfg.r));
  }
  for (std::uint64_t t : set_terms) out.term_evals += t;
  return out;
}

SubsampleRun sample_subsampled(const FactoredPotential& fp, Vector x0,
                               Vector v0, const SubsampleConfig& cfg) {
  if (!cfg.K && !cfg.term_budget) {
    throw Error("subsampled run needs K or a term budget");
  }
  if (!(cfg.t_max > 0.0)) throw Error("t_max must be positive");
  const int d = fp.dim;
  SubsampleRun run;
  Skeleton& skel = run.skeleton;
  skel.initial = State{0.0, std::move(x0), std::move(v0)};
  validate_state(skel.initial);
  State cur = skel.initial;
  Rng chain(cfg.seed, cfg.stream);
  const Rng master(cfg.seed, cfg.stream);
  long k = 0;
  long epoch_index = 0;

  auto finished = [&]() {
    if (cfg.K && k >= *cfg.K) return true;
    if (cfg.term_budget && skel.counters.term_evals >= *cfg.term_budget) return true;
    return false;
  };

  while (!finished()) {
    // Fresh sample of rates for this epoch; the derived stream leaves the
    // chain's own sequence untouched.
    const Rng bounds_rng =
        master.derive(0xB0BAULL << 32 | static_cast<std::uint64_t>(epoch_index));
    const BoundsEstimate bounds = estimate_bounds(fp, cur, cfg, bounds_rng);
    skel.counters.term_evals += bounds.term_evals;
    EpochCounters epoch;
    Vector c_hats(static_cast<size_t>(d));
    double c_total = 0.0;
    for (int i = 0; i < d; ++i) {
      c_hats[static_cast<size_t>(i)] = bounds.dims[static_cast<size_t>(i)].c_hat;
      c_total += c_hats[static_cast<size_t>(i)];
    }
    std::vector<std::uint64_t> violations(static_cast<size_t>(d), 0);

    double tau_opt = 0.0;
    while (!finished()) {
      const double delta = chain.exponential(c_total);
      if (tau_opt + delta > cfg.t_max) {
        cur.time += cfg.t_max - tau_opt;
        for (size_t i = 0; i < cur.position.size(); ++i) {
          cur.position[i] += cur.velocity[i] * (cfg.t_max - tau_opt);
        }
        break;
      }
      cur.time += delta;
      for (size_t i = 0; i < cur.position.size(); ++i) {
        cur.position[i] += cur.velocity[i] * delta;
      }
      tau_opt += delta;

      // First arrival among d homogeneous processes: joint draw of the time
      // (already made) and the proposing dimension.
      const int i0 = d == 1 ? 0 : choose_dimension(c_hats, chain.uniform());
      const std::vector<long> subset =
          sample_without_replacement(fp.num_terms, cfg.h, chain);
      const double rate =
          sub_rate(fp, subset, cur, i0, 0.0, &skel.counters.term_evals);
      epoch.tpp_evals += 1;
      skel.counters.tpp_evals += 1;
      ++run.acceptance_tests;

      bool accept;
      if (rate > c_hats[static_cast<size_t>(i0)]) {
        ++violations[static_cast<size_t>(i0)];
        ++skel.bound_violations;
        accept = true;
      } else {
        accept = chain.uniform() < rate / c_hats[static_cast<size_t>(i0)];
      }
      if (accept) {
        cur.velocity = flip(std::move(cur.velocity), i0);
        skel.points.push_back(SkeletonPoint{cur.time, cur.position, cur.velocity});
        ++k;
        break;
      }
    }

    skel.audit.push_back(epoch);
    for (int i = 0; i < d; ++i) {
      SubsampleAuditRow row;
      row.horizon = epoch_index;
      row.dim = i;
      row.c_hat = c_hats[static_cast<size_t>(i)];
      row.xi = bounds.dims[static_cast<size_t>(i)].fit.xi;
      row.sigma = bounds.dims[static_cast<size_t>(i)].fit.sigma;
      row.threshold = bounds.dims[static_cast<size_t>(i)].fit.threshold;
      row.violations = violations[static_cast<size_t>(i)];
      run.audit.push_back(row);
    }
    ++epoch_index;
  }

  skel.terminal = SkeletonPoint{cur.time, cur.position, cur.velocity};
  skel.total_time = cur.time;
  return run;
}

void write_bounds_audit_csv(const std::string& path,
                            const std::vector<SubsampleAuditRow>& rows) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write bounds audit CSV: " + path);
  std::string buf = "horizon,dim,c_hat,xi,sigma,threshold,violations\n";
  for (const auto& r : rows) {
    buf += std::to_string(r.horizon);
    buf += ',';
    buf += std::to_string(r.dim + 1);
    buf += ',';
    buf += format_double17(r.c_hat);
    buf += ',';
    buf += format_double17(r.xi);
    buf += ',';
    buf += format_double17(r.sigma);
    buf += ',';
    buf += format_double17(r.threshold);
    buf += ',';
    buf += std::to_string(r.violations);
    buf += '\n';
  }
  out << buf;
}

}  // namespace zigzag
