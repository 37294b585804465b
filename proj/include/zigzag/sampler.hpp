#pragma once

#include <optional>

#include "zigzag/optimize.hpp"
#include "zigzag/skeleton.hpp"
#include "zigzag/targets.hpp"

namespace zigzag {

/// Configuration of a zig-zag run.  At least one of `K` (switches to
/// collect) and `budget` (gradient evaluations to spend) must be set; if
/// both are set the run stops at whichever is hit first.
struct ZigZagConfig {
  double t_max = 1.0;
  std::optional<long> K;
  std::optional<std::uint64_t> budget;
  std::uint64_t seed = 0;
  std::uint64_t stream = 0;  // chain index; each chain owns one RNG stream
  BrentConfig brent = BrentConfig::for_horizon(1.0);
  Vector refresh;  // optional constant excess switching rate per dimension

  static ZigZagConfig with_horizon(double t_max) {
    ZigZagConfig cfg;
    cfg.t_max = t_max;
    cfg.brent = BrentConfig::for_horizon(t_max);
    return cfg;
  }
};

Vector default_x0(int dim);  // origin
Vector default_v0(int dim);  // all +1

/// Zig-zag sampler with thinning against locally optimized rate bounds.
///
/// Per optimization epoch: a constant bound for the global rate over
/// [0, t_max] from the current state; then exponential proposal increments
/// against that bound.  Each proposal advances time and position; a
/// proposal is accepted with probability rate/bound, flipping one velocity
/// coordinate chosen from the per-dimension rates and recording a skeleton
/// point.  If the accumulated increments leave the horizon first, the state
/// jumps deterministically to the horizon instead.  Either way the bound is
/// re-optimized from the new state.
///
/// An evaluated rate above the bound is recorded as a bound violation and
/// the proposal is accepted outright (the acceptance probability is clipped
/// at one), after which re-optimization from the post-switch state restores
/// a usable bound.
///
/// Randomness comes from the chain's counter-based stream in a fixed order:
/// one exponential per proposal, one uniform per acceptance test, and (in
/// more than one dimension) one uniform per switch for the choice of the
/// flipped coordinate.  Runs are reproducible from (seed, stream).
Skeleton sample_auto(const TargetSpec& target, Vector x0, Vector v0,
                     const ZigZagConfig& cfg);

/// Canonical variant for targets where the caller supplies a global rate
/// bound valid along every trajectory.  Stops after K switches.  Observing
/// a rate above the promised bound throws GlobalBoundViolated.
Skeleton sample_canonical(const TargetSpec& target, Vector x0, Vector v0,
                          double global_bound, long K, std::uint64_t seed,
                          std::uint64_t stream = 0);

}  // namespace zigzag
