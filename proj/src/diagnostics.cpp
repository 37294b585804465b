#include "zigzag/diagnostics.hpp"

#include <algorithm>
#include <cmath>

#include "zigzag/errors.hpp"
#include "zigzag/parallel.hpp"
#include "zigzag/stats.hpp"

namespace zigzag {

namespace {

struct Segment {
  double t0, t1;
  double x0, x1;  // coordinate values at the segment ends
};

// Coordinate trace as a list of linear segments clipped to (burn_in, T].
std::vector<Segment> segments(const Skeleton& skel, int coord,
                              double burn_in_time) {
  if (!(burn_in_time < skel.total_time)) {
    throw EmptyTrajectory("burn-in consumes the whole trajectory");
  }
  std::vector<double> times;
  std::vector<double> xs;
  std::vector<double> vs;
  times.push_back(skel.initial.time);
  xs.push_back(skel.initial.position[static_cast<size_t>(coord)]);
  vs.push_back(skel.initial.velocity[static_cast<size_t>(coord)]);
  for (const auto& p : skel.points) {
    times.push_back(p.t);
    xs.push_back(p.x[static_cast<size_t>(coord)]);
    vs.push_back(p.v[static_cast<size_t>(coord)]);
  }
  times.push_back(skel.terminal.t);
  xs.push_back(skel.terminal.x[static_cast<size_t>(coord)]);
  vs.push_back(skel.terminal.v[static_cast<size_t>(coord)]);

  std::vector<Segment> out;
  for (size_t i = 0; i + 1 < times.size(); ++i) {
    double t0 = times[i], t1 = times[i + 1];
    if (t1 <= burn_in_time || t1 <= t0) continue;
    double x0 = xs[i];
    if (t0 < burn_in_time) {
      x0 += vs[i] * (burn_in_time - t0);
      t0 = burn_in_time;
    }
    out.push_back(Segment{t0, t1, x0, xs[i] + vs[i] * (t1 - times[i])});
  }
  if (out.empty()) throw EmptyTrajectory("trajectory has no time span");
  return out;
}

// Batch-means ESS of one scalar series.
double series_ess(const double* x, long n, bool* zero_variance) {
  const long batches = std::max<long>(2, static_cast<long>(std::floor(std::sqrt(static_cast<double>(n)))));
  const long batch_size = n / batches;
  const long used = batches * batch_size;
  double mean = 0.0;
  for (long i = 0; i < used; ++i) mean += x[i];
  mean /= static_cast<double>(used);
  double var = 0.0;
  for (long i = 0; i < used; ++i) var += (x[i] - mean) * (x[i] - mean);
  var /= static_cast<double>(used - 1);
  if (var <= 0.0) {
    // Degenerate series: by convention a constant sequence reports full ESS.
    *zero_variance = true;
    return static_cast<double>(n);
  }
  *zero_variance = false;
  double bm_var = 0.0;
  for (long b = 0; b < batches; ++b) {
    double bm = 0.0;
    for (long i = b * batch_size; i < (b + 1) * batch_size; ++i) bm += x[i];
    bm /= static_cast<double>(batch_size);
    bm_var += (bm - mean) * (bm - mean);
  }
  bm_var /= static_cast<double>(batches - 1);
  if (bm_var <= 0.0) {
    *zero_variance = true;
    return static_cast<double>(n);
  }
  double ess = static_cast<double>(used) * var /
               (static_cast<double>(batch_size) * bm_var);
  return std::min(ess, static_cast<double>(n));
}

EssReport ess_of_matrix(const Matrix& m, const std::string& method) {
  EssReport report;
  report.method = method;
  report.per_dimension.resize(static_cast<size_t>(m.cols));
  report.zero_variance.resize(static_cast<size_t>(m.cols));
  std::vector<double> col(static_cast<size_t>(m.rows));
  double minimum = std::numeric_limits<double>::infinity();
  for (int c = 0; c < m.cols; ++c) {
    for (int r = 0; r < m.rows; ++r) col[static_cast<size_t>(r)] = m.at(r, c);
    bool zv = false;
    double ess = series_ess(col.data(), m.rows, &zv);
    report.per_dimension[static_cast<size_t>(c)] = ess;
    report.zero_variance[static_cast<size_t>(c)] = zv;
    minimum = std::min(minimum, ess);
  }
  report.minimum = minimum;
  return report;
}

}  // namespace

double trajectory_mean(const Skeleton& skel, int coord, double burn_in_time) {
  const auto segs = segments(skel, coord, burn_in_time);
  double integral = 0.0;
  double span = 0.0;
  for (const auto& s : segs) {
    const double dt = s.t1 - s.t0;
    integral += dt * 0.5 * (s.x0 + s.x1);
    span += dt;
  }
  return integral / span;
}

double trajectory_second_moment(const Skeleton& skel, int coord,
                                double burn_in_time) {
  const auto segs = segments(skel, coord, burn_in_time);
  double integral = 0.0;
  double span = 0.0;
  for (const auto& s : segs) {
    const double dt = s.t1 - s.t0;
    // int of (a + bt)^2 over the segment = dt (x0^2 + x0 x1 + x1^2) / 3
    integral += dt * (s.x0 * s.x0 + s.x0 * s.x1 + s.x1 * s.x1) / 3.0;
    span += dt;
  }
  return integral / span;
}

EssReport ess_continuous(const Skeleton& skel, int grid_n, double burn_in_time) {
  if (grid_n < 100) throw Error("ess_continuous needs a grid of at least 100 points");
  if (!(burn_in_time < skel.total_time)) {
    throw EmptyTrajectory("burn-in consumes the whole trajectory");
  }
  // Discretize the post-burn-in window.
  const double t0 = burn_in_time;
  const double t1 = skel.total_time;
  const int d = skel.dim();
  Matrix grid(grid_n, d);
  for (int r = 0; r < grid_n; ++r) {
    const double t = t0 + (t1 - t0) * static_cast<double>(r) / static_cast<double>(grid_n - 1);
    Vector x = interpolate(skel, std::min(t, t1));
    for (int c = 0; c < d; ++c) grid.at(r, c) = x[static_cast<size_t>(c)];
  }
  return ess_of_matrix(grid, "continuous-discretized");
}

EssReport ess_discrete(const Matrix& chain, long burn_in_iters) {
  if (chain.rows - burn_in_iters < 4) {
    throw Error("ess_discrete needs at least 4 post-burn-in rows");
  }
  Matrix tail(static_cast<int>(chain.rows - burn_in_iters), chain.cols);
  for (int r = 0; r < tail.rows; ++r) {
    for (int c = 0; c < tail.cols; ++c) {
      tail.at(r, c) = chain.at(r + static_cast<int>(burn_in_iters), c);
    }
  }
  return ess_of_matrix(tail, "batch-means-discrete");
}

TmaxTuneResult tune_tmax(const TargetSpec& target,
                         const std::vector<double>& candidates, long pilot_K,
                         int replicates, std::uint64_t seed,
                         const Vector& x0, const Vector& v0, bool parallel) {
  if (candidates.empty()) throw Error("tune_tmax needs at least one candidate");
  TmaxTuneResult result;
  result.rows.resize(candidates.size());
  const long n_runs = static_cast<long>(candidates.size()) * replicates;
  std::vector<double> totals(static_cast<size_t>(n_runs));
  ExceptionCollector errors;
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic) if (parallel)
#endif
  for (long run = 0; run < n_runs; ++run) {
    errors.run([&, run] {
      const size_t ci = static_cast<size_t>(run) / static_cast<size_t>(replicates);
      ZigZagConfig cfg = ZigZagConfig::with_horizon(candidates[ci]);
      cfg.K = pilot_K;
      cfg.seed = seed;
      cfg.stream = static_cast<std::uint64_t>(run) + 1;
      Skeleton skel = sample_auto(target, x0, v0, cfg);
      totals[static_cast<size_t>(run)] =
          static_cast<double>(skel.counters.total()) * 1000.0 /
          static_cast<double>(pilot_K);
    });
  }
  errors.rethrow();
  (void)parallel;
  double best = std::numeric_limits<double>::infinity();
  for (size_t ci = 0; ci < candidates.size(); ++ci) {
    TmaxTuneRow& row = result.rows[ci];
    row.t_max = candidates[ci];
    row.totals.assign(totals.begin() + static_cast<long>(ci) * replicates,
                      totals.begin() + static_cast<long>(ci + 1) * replicates);
    row.median = median(row.totals);
    row.lower_quartile = quantile(row.totals, 0.25);
    row.upper_quartile = quantile(row.totals, 0.75);
    if (row.median < best) {
      best = row.median;
      result.selected = row.t_max;
    }
  }
  return result;
}

}  // namespace zigzag
