#include "zigzag/sampler.hpp"

#include <cmath>

#include "zigzag/rng.hpp"

namespace zigzag {

Vector default_x0(int dim) { return Vector(static_cast<size_t>(dim), 0.0); }
Vector default_v0(int dim) { return Vector(static_cast<size_t>(dim), 1.0); }

namespace {

void advance(State& s, double dt) {
  s.time += dt;
  for (size_t i = 0; i < s.position.size(); ++i) {
    s.position[i] += s.velocity[i] * dt;
  }
}

Skeleton make_empty_skeleton(Vector x0, Vector v0) {
  Skeleton skel;
  skel.initial = State{0.0, std::move(x0), std::move(v0)};
  validate_state(skel.initial);
  return skel;
}

void finalize(Skeleton& skel, const State& cur) {
  skel.terminal = SkeletonPoint{cur.time, cur.position, cur.velocity};
  skel.total_time = cur.time;
}

}  // namespace

Skeleton sample_auto(const TargetSpec& target, Vector x0, Vector v0,
                     const ZigZagConfig& cfg) {
  if (!cfg.K && !cfg.budget) throw Error("zig-zag run needs K or a budget");
  if (!(cfg.t_max > 0.0)) throw Error("t_max must be positive");
  Skeleton skel = make_empty_skeleton(std::move(x0), std::move(v0));
  const int d = skel.dim();
  State cur = skel.initial;
  Rng rng(cfg.seed, cfg.stream);
  long k = 0;

  auto finished = [&]() {
    if (cfg.K && k >= *cfg.K) return true;
    if (cfg.budget && skel.counters.total() >= *cfg.budget) return true;
    return false;
  };

  while (!finished()) {
    EpochCounters epoch;
    std::uint64_t opt_count = 0;
    RateContext bound_ctx{cur, &target.potential, cfg.refresh, &opt_count};
    const BoundEstimate bound = local_bound(bound_ctx, cfg.t_max, cfg.brent);
    epoch.opt_evals = opt_count;
    skel.counters.opt_evals += opt_count;

    double tau_opt = 0.0;
    while (!finished()) {
      const double delta = rng.exponential(bound.bound);
      if (tau_opt + delta > cfg.t_max) {
        // Horizon exhausted: deterministic jump, velocity retained.
        advance(cur, cfg.t_max - tau_opt);
        break;
      }
      advance(cur, delta);
      tau_opt += delta;

      std::uint64_t tpp_count = 0;
      RateContext ctx{cur, &target.potential, cfg.refresh, &tpp_count};
      const GlobalRate rate = global_rate(ctx, 0.0);
      epoch.tpp_evals += tpp_count;
      skel.counters.tpp_evals += tpp_count;

      bool accept;
      if (rate.total > bound.bound) {
        // The local bound failed; accept outright, count the event, and let
        // the post-switch re-optimization recover.
        ++skel.bound_violations;
        accept = true;
      } else {
        accept = rng.uniform() < rate.total / bound.bound;
      }
      if (accept) {
        const int m = d == 1 ? 0 : choose_dimension(rate.per_dim, rng.uniform());
        cur.velocity = flip(std::move(cur.velocity), m);
        skel.points.push_back(SkeletonPoint{cur.time, cur.position, cur.velocity});
        ++k;
        break;
      }
    }
    skel.audit.push_back(epoch);
  }

  finalize(skel, cur);
  return skel;
}

Skeleton sample_canonical(const TargetSpec& target, Vector x0, Vector v0,
                          double global_bound, long K, std::uint64_t seed,
                          std::uint64_t stream) {
  if (!(global_bound > 0.0)) throw Error("global bound must be positive");
  Skeleton skel = make_empty_skeleton(std::move(x0), std::move(v0));
  const int d = skel.dim();
  State cur = skel.initial;
  Rng rng(seed, stream);
  EpochCounters epoch;
  long k = 0;

  while (k < K) {
    const double tau = rng.exponential(global_bound);
    advance(cur, tau);
    std::uint64_t tpp_count = 0;
    RateContext ctx{cur, &target.potential, {}, &tpp_count};
    const GlobalRate rate = global_rate(ctx, 0.0);
    epoch.tpp_evals += tpp_count;
    skel.counters.tpp_evals += tpp_count;
    if (rate.total > global_bound) {
      throw GlobalBoundViolated("rate exceeded the caller-supplied global bound");
    }
    if (rng.uniform() < rate.total / global_bound) {
      const int m = d == 1 ? 0 : choose_dimension(rate.per_dim, rng.uniform());
      cur.velocity = flip(std::move(cur.velocity), m);
      skel.points.push_back(SkeletonPoint{cur.time, cur.position, cur.velocity});
      ++k;
    }
  }
  skel.audit.push_back(epoch);

  finalize(skel, cur);
  return skel;
}

}  // namespace zigzag
