#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "zigzag/linalg.hpp"
#include "zigzag/rates.hpp"

namespace zigzag {

/// A saved switching event: time, position, and the velocity in force
/// immediately after the switch.
struct SkeletonPoint {
  double t = 0.0;
  Vector x;
  Vector v;
};

/// Gradient-evaluation bookkeeping for a run.  `opt_evals` counts probes
/// spent finding rate bounds, `tpp_evals` the proposed times of the thinned
/// Poisson process.  `term_evals` counts per-observation gradient terms and
/// is only populated by subsampled runs.
struct BudgetCounters {
  std::uint64_t opt_evals = 0;
  std::uint64_t tpp_evals = 0;
  std::uint64_t term_evals = 0;

  std::uint64_t total() const { return opt_evals + tpp_evals; }
};

/// One row per bound-optimization epoch; summing the rows reproduces the
/// run totals exactly.
struct EpochCounters {
  std::uint64_t opt_evals = 0;
  std::uint64_t tpp_evals = 0;
};

/// Piecewise-linear trajectory record.  `points` holds accepted switches
/// only (times strictly increasing, consecutive velocities differing in
/// exactly one coordinate).  `terminal` marks where the run stopped: past
/// the last switch when a budget ran out mid-flight, or coincident with the
/// last switch when the run stopped by switch count.  The trajectory covers
/// [0, total_time] with total_time = terminal.t.
struct Skeleton {
  State initial;
  std::vector<SkeletonPoint> points;
  SkeletonPoint terminal;
  double total_time = 0.0;
  BudgetCounters counters;
  std::vector<EpochCounters> audit;
  std::uint64_t bound_violations = 0;

  int dim() const { return static_cast<int>(initial.position.size()); }
};

/// Position at any time in [0, total_time] by linear interpolation with the
/// segment's velocity.  Throws QueryOutOfRange outside that span.
Vector interpolate(const Skeleton& skel, double t);

/// Positions at n >= 2 equally spaced times spanning [0, total_time].
Matrix discretize(const Skeleton& skel, int n);

/// CSV with header t,x1..xd,v1..vd and 17-significant-digit floats.  Rows:
/// the initial state at t = 0, one row per switch, then the terminal state.
void write_skeleton_csv(const std::string& path, const Skeleton& skel);

std::string format_double17(double v);

}  // namespace zigzag
